import { describe, expect, it } from "vitest";

import { parseSentence, tokenize } from "../src/parser.js";
import { emitResponse } from "../src/conllu.js";
import { Framer, handle } from "../src/protocol.js";
import { SMOKE_CORPUS } from "./smoke.js";

const noConstraints = () => new Map();

describe("tokenizer", () => {
  it("splits on whitespace and strips final punctuation", () => {
    expect(tokenize("Mary buys a car.")).toEqual([
      "Mary",
      "buys",
      "a",
      "car",
    ]);
  });
});

describe("parser", () => {
  it("parses a simple transitive sentence", () => {
    const [parse] = parseSentence("Mary buys a car", noConstraints(), 1);
    const rels = parse.tokens.map((t) => `${t.surface}:${t.head}:${t.deprel}`);
    expect(rels).toEqual([
      "Mary:2:nsubj",
      "buys:0:root",
      "a:4:det",
      "car:2:obj",
    ]);
  });

  it("parses every smoke sentence into a single-rooted tree", () => {
    for (const sentence of SMOKE_CORPUS) {
      const parses = parseSentence(sentence, noConstraints(), 3);
      expect(parses.length).toBeGreaterThan(0);
      for (const parse of parses) {
        const roots = parse.tokens.filter((t) => t.head === 0);
        expect(roots, sentence).toHaveLength(1);
        for (const t of parse.tokens) {
          if (t.head !== 0) {
            expect(t.head).toBeGreaterThanOrEqual(1);
            expect(t.head).toBeLessThanOrEqual(parse.tokens.length);
          }
        }
      }
    }
  });

  it("ranks alternates by non-increasing confidence", () => {
    for (const sentence of SMOKE_CORPUS) {
      const parses = parseSentence(sentence, noConstraints(), 4);
      for (let i = 1; i < parses.length; i++) {
        expect(parses[i].confidence).toBeLessThanOrEqual(
          parses[i - 1].confidence,
        );
      }
    }
  });

  it("tags the ambiguous protest sentence as an uncertain noun", () => {
    const [parse] = parseSentence(
      "A student protests against the government",
      noConstraints(),
      1,
    );
    const protests = parse.tokens[2];
    expect(protests.surface).toBe("protests");
    expect(protests.upos).toBe("NOUN");
    expect(protests.uposConf).toBeLessThan(0.9);
    expect(protests.uposAlts.map(([tag]) => tag)).toContain("VERB");
  });

  it("echoes tag constraints exactly", () => {
    const constraints = new Map([[3, { upos: "VERB", xpos: "VBZ" }]]);
    const parses = parseSentence(
      "A student protests against the government",
      constraints,
      3,
    );
    for (const parse of parses) {
      expect(parse.tokens[2].upos).toBe("VERB");
      expect(parse.tokens[2].xpos).toBe("VBZ");
    }
    // the constrained re-parse now has a verbal root with a subject
    expect(parses[0].tokens[2].deprel).toBe("root");
    expect(parses[0].tokens[1].deprel).toBe("nsubj");
  });

  it("analyzes passives with aux:pass and by-agent", () => {
    const [parse] = parseSentence("A car is bought by Mary", noConstraints(), 1);
    const by = Object.fromEntries(
      parse.tokens.map((t) => [t.surface, `${t.head}:${t.deprel}`]),
    );
    expect(by["car"]).toBe("4:nsubj:pass");
    expect(by["is"]).toBe("4:aux:pass");
    expect(by["Mary"]).toBe("4:obl");
  });
});

describe("wire format", () => {
  it("emits profile comments and MISC confidences", () => {
    const parses = parseSentence(
      "A student protests against the government",
      noConstraints(),
      2,
    );
    const out = emitResponse(7, "A student protests against the government",
                             parses);
    expect(out).toContain("# sent_id = 7");
    expect(out).toContain("# parse_rank = 1");
    expect(out).toContain("UposConf=0.732");
    expect(out).toContain("UposAlt=VERB:0.257");
    expect(out.trimEnd().endsWith("EOR")).toBe(true);
  });

  it("frames requests over lines", () => {
    const framer = new Framer();
    expect(framer.feed("Mary buys a car")).toBeNull();
    expect(framer.feed("TAGS 2=VERB/VBZ")).toBeNull();
    const request = framer.feed("K 2");
    expect(request).toMatchObject({ text: "Mary buys a car", k: 2 });
    if (request && !("error" in request)) {
      const response = handle(request);
      expect(response).toContain("# parse_rank = 1");
      expect(response.endsWith("EOR\n")).toBe(true);
    }
  });

  it("reports malformed requests as ERR", () => {
    const framer = new Framer();
    const bad = framer.feed("K 3");
    expect(bad).toMatchObject({ error: expect.stringContaining("K before") });
  });
});
