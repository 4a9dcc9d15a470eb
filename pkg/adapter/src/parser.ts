/**
 * Deterministic dependency parser for a small declarative English
 * fragment, with ranked alternates and tag-constraint support.
 *
 * The parser is lexicon-driven: tokens get ranked tag readings, then a
 * chunk-and-attach pass builds a single-rooted tree (subjects, objects,
 * prepositional attachment, coordination, auxiliaries/copulas, passive
 * voice).  Alternates beyond rank 1 are produced by constrained
 * re-decoding: the most uncertain token is re-tagged with its second
 * reading and the sentence is parsed again, which is where the ranked
 * k-best contract comes from (the profile, not the method, is the
 * contract).
 */

import { LexEntry, lookup } from "./lexicon.js";

export interface Token {
  id: number;
  surface: string;
  lemma: string;
  upos: string;
  xpos: string;
  uposConf: number;
  xposConf: number;
  uposAlts: Array<[string, number]>;
  xposAlts: Array<[string, number]>;
  ner: string;
  head: number;
  deprel: string;
}

export interface Parse {
  tokens: Token[];
  confidence: number;
}

export type Constraints = Map<number, { upos: string; xpos: string }>;

const NOMINAL = new Set(["NOUN", "PROPN", "PRON"]);
const NP_INNER = new Set(["DET", "ADJ", "NOUN", "PROPN", "PRON", "NUM"]);

export function tokenize(text: string): string[] {
  return text
    .trim()
    .replace(/[.?!]+$/, "")
    .split(/\s+/)
    .filter((w) => w.length > 0);
}

function tagToken(
  id: number,
  surface: string,
  constraints: Constraints,
): Token {
  const entry: LexEntry = lookup(surface);
  const forced = constraints.get(id);
  let reading = entry.readings[0];
  let uposConf = reading.confidence;
  let alts = entry.readings.slice(1);
  if (forced) {
    reading = { upos: forced.upos, xpos: forced.xpos, confidence: 1.0 };
    uposConf = 1.0;
    alts = [];
  }
  return {
    id,
    surface,
    lemma: entry.lemma,
    upos: reading.upos,
    xpos: reading.xpos,
    uposConf,
    xposConf: uposConf,
    uposAlts: alts.map((r) => [r.upos, r.confidence]),
    xposAlts: alts.map((r) => [r.xpos, r.confidence]),
    ner: entry.ner ?? "o",
    head: 0,
    deprel: "dep",
  };
}

interface Chunk {
  startId: number; // first token id of the chunk
  endId: number; // last token id of the chunk
  head: number; // token id of the chunk head (its last nominal)
}

function npChunks(tokens: Token[]): Chunk[] {
  const chunks: Chunk[] = [];
  let start = -1;
  for (let i = 0; i < tokens.length; i++) {
    const t = tokens[i];
    const inNP = NP_INNER.has(t.upos);
    if (inNP && start < 0) start = i;
    const next = tokens[i + 1];
    if (start >= 0 && (!next || !NP_INNER.has(next.upos) || !inNP)) {
      if (inNP) {
        let head = i;
        for (let j = i; j >= start; j--) {
          if (NOMINAL.has(tokens[j].upos) || tokens[j].upos === "ADJ") {
            head = j;
            break;
          }
        }
        chunks.push({
          startId: tokens[start].id,
          endId: tokens[i].id,
          head: tokens[head].id,
        });
        start = -1;
      } else {
        start = -1;
      }
    }
  }
  return chunks;
}

/** Past participles after a be/have/get auxiliary: prefer the VBN reading. */
function contextualize(tokens: Token[], constraints: Constraints): void {
  for (let i = 0; i < tokens.length; i++) {
    const t = tokens[i];
    if (constraints.has(t.id) || t.upos !== "VERB" || t.xpos === "VBN") {
      continue;
    }
    const vbnAt = t.xposAlts.findIndex(([tag]) => tag === "VBN");
    if (vbnAt < 0) continue;
    const prev = tokens
      .slice(0, i)
      .reverse()
      .find((p) => p.upos !== "ADV");
    if (
      prev &&
      prev.upos === "AUX" &&
      ["be", "have", "get"].includes(prev.lemma)
    ) {
      const [oldX, oldConf] = [t.xpos, t.xposConf];
      t.xpos = "VBN";
      t.xposConf = 0.9;
      t.xposAlts = [[oldX, Math.min(oldConf, 0.1)]];
    }
  }
}

/** Attach a tree over the tagged tokens; returns false on failure. */
function attach(tokens: Token[]): boolean {
  const chunks = npChunks(tokens);
  const verbs = tokens.filter((t) => t.upos === "VERB");
  const auxes = tokens.filter((t) => t.upos === "AUX");
  let rootId: number;
  let copular = false;

  if (verbs.length > 0) {
    rootId = verbs[0].id;
  } else if (auxes.length > 0) {
    // copular sentence: the predicate heads the first chunk after the
    // copula
    const cop = auxes[0];
    const after = chunks.find((c) => c.startId > cop.id);
    if (!after) return false;
    rootId = after.head;
    copular = true;
  } else {
    // verbless: the first chunk's head carries the sentence (this is
    // exactly the shape a mis-tagged verb produces)
    if (chunks.length === 0) return false;
    rootId = chunks[0].head;
    copular = true;
  }
  const root = tokens[rootId - 1];
  root.head = 0;
  root.deprel = "root";

  // NP-internal attachment
  for (const c of chunks) {
    for (let i = c.startId - 1; i <= c.endId - 1; i++) {
      const t = tokens[i];
      if (t.id === c.head) continue;
      t.head = c.head;
      if (t.upos === "DET") t.deprel = "det";
      else if (t.upos === "ADJ") t.deprel = "amod";
      else if (t.upos === "NUM") t.deprel = "nummod";
      else t.deprel = "compound";
    }
  }

  const passive =
    !copular &&
    root.xpos === "VBN" &&
    auxes.some((a) => a.id < rootId && (a.lemma === "be" || a.lemma === "get"));

  // auxiliaries and copulas
  for (const a of auxes) {
    a.head = rootId;
    if (copular) a.deprel = "cop";
    else if (passive && a.lemma === "be") a.deprel = "aux:pass";
    else a.deprel = "aux";
  }

  // subject: first chunk strictly before the root (and before any copula)
  const subject = chunks.find((c) => c.head < rootId);
  if (subject) {
    const s = tokens[subject.head - 1];
    s.head = rootId;
    s.deprel = passive ? "nsubj:pass" : "nsubj";
  }

  // prepositions and their objects
  const preps = tokens.filter((t) => t.upos === "ADP" || t.xpos === "TO");
  for (const p of preps) {
    const np = chunks.find((c) => c.startId > p.id);
    if (!np) return false;
    const headTok = tokens[np.head - 1];
    p.head = np.head;
    p.deprel = "case";
    // "of" modifies the preceding nominal; everything else goes to the root
    const before = [...chunks]
      .reverse()
      .find((c) => c.head < p.id && c.head !== subject?.head);
    if (p.lemma === "of" && before) {
      headTok.head = before.head;
      headTok.deprel = "nmod";
    } else if (copular && headTok.id !== rootId) {
      headTok.head = rootId;
      headTok.deprel = "nmod";
    } else if (headTok.id !== rootId) {
      headTok.head = rootId;
      headTok.deprel = "obl";
    }
  }

  // the direct object: first unattached chunk after the root
  if (!copular) {
    for (const c of chunks) {
      const t = tokens[c.head - 1];
      if (c.head > rootId && t.head === 0 && t.id !== rootId) {
        t.head = rootId;
        t.deprel = "obj";
        break;
      }
    }
  }

  // coordination: cc attaches forward, conjuncts attach backward
  const ccs = tokens.filter((t) => t.upos === "CC");
  for (const cc of ccs) {
    const rightVerb = verbs.find((v) => v.id > cc.id);
    const rightChunk = chunks.find((c) => c.startId > cc.id);
    if (rightVerb && rightVerb.id === cc.id + 1) {
      cc.head = rightVerb.id;
      cc.deprel = "cc";
      rightVerb.head = rootId;
      rightVerb.deprel = "conj";
      continue;
    }
    if (!rightChunk) return false;
    const conj = tokens[rightChunk.head - 1];
    if (conj.id === rootId) return false;
    cc.head = conj.id;
    cc.deprel = "cc";
    const leftChunk = [...chunks]
      .reverse()
      .find((c) => c.head < cc.id);
    if (!leftChunk) return false;
    conj.head = leftChunk.head;
    conj.deprel = "conj";
  }

  // leftovers hang off the root so every token has exactly one head
  for (const t of tokens) {
    if (t.id !== rootId && t.head === 0) {
      t.head = rootId;
      t.deprel = t.upos === "ADV" ? "advmod" : "dep";
    }
  }
  return !hasCycle(tokens);
}

function hasCycle(tokens: Token[]): boolean {
  for (const t of tokens) {
    const seen = new Set<number>();
    let cur = t.id;
    while (cur !== 0) {
      if (seen.has(cur)) return true;
      seen.add(cur);
      cur = tokens[cur - 1].head;
    }
  }
  return false;
}

function parseOnce(words: string[], constraints: Constraints): Parse | null {
  const tokens = words.map((w, i) => tagToken(i + 1, w, constraints));
  contextualize(tokens, constraints);
  if (!attach(tokens)) return null;
  const confidence =
    tokens.reduce((acc, t) => acc + t.uposConf, 0) / tokens.length;
  return { tokens, confidence: Math.round(confidence * 1000) / 1000 };
}

function signature(parse: Parse): string {
  return parse.tokens
    .map((t) => `${t.upos}/${t.xpos}/${t.head}/${t.deprel}`)
    .join(" ");
}

export function parseSentence(
  text: string,
  constraints: Constraints,
  k: number,
): Parse[] {
  const words = tokenize(text);
  if (words.length === 0) throw new Error("empty sentence");
  const first = parseOnce(words, constraints);
  if (!first) throw new Error(`cannot parse: ${text}`);
  const parses: Parse[] = [first];
  const seen = new Set([signature(first)]);

  // constrained re-decoding: flip the most uncertain token to its second
  // reading and parse again, repeatedly, until k parses exist
  const flippable = first.tokens
    .filter((t) => t.uposAlts.length > 0 && !constraints.has(t.id))
    .sort((a, b) => a.uposConf - b.uposConf);
  for (const t of flippable) {
    if (parses.length >= k) break;
    const alt = new Map(constraints);
    alt.set(t.id, { upos: t.uposAlts[0][0], xpos: t.xposAlts[0][0] });
    const variant = parseOnce(words, alt);
    if (!variant) continue;
    // the re-tagged token keeps its honest (second-reading) confidence
    const vt = variant.tokens[t.id - 1];
    vt.uposConf = t.uposAlts[0][1];
    vt.xposConf = t.xposAlts[0][1];
    vt.uposAlts = [[t.upos, t.uposConf]];
    vt.xposAlts = [[t.xpos, t.xposConf]];
    variant.confidence = Math.min(
      Math.round(first.confidence * 0.6 * 1000) / 1000,
      Math.round(
        (variant.tokens.reduce((acc, x) => acc + x.uposConf, 0) /
          variant.tokens.length) *
          1000,
      ) / 1000,
    );
    if (!seen.has(signature(variant))) {
      seen.add(signature(variant));
      parses.push(variant);
    }
  }
  parses.sort((a, b) => b.confidence - a.confidence);
  return parses.slice(0, k);
}
