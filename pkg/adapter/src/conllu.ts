/** k-best CoNLL-U profile emission. */

import { Parse, Token } from "./parser.js";

function misc(t: Token): string {
  const parts: string[] = [];
  if (t.uposConf < 1) parts.push(`UposConf=${t.uposConf}`);
  if (t.xposConf < 1) parts.push(`XposConf=${t.xposConf}`);
  if (t.uposAlts.length > 0) {
    parts.push(
      `UposAlt=${t.uposAlts.map(([tag, c]) => `${tag}:${c}`).join(",")}`,
    );
  }
  if (t.xposAlts.length > 0) {
    parts.push(
      `XposAlt=${t.xposAlts.map(([tag, c]) => `${tag}:${c}`).join(",")}`,
    );
  }
  if (t.ner !== "o") parts.push(`Ner=${t.ner}`);
  return parts.length > 0 ? parts.join("|") : "_";
}

export function emitBlock(
  sentId: number,
  text: string,
  parse: Parse,
  rank: number,
): string {
  const lines = [
    `# sent_id = ${sentId}`,
    `# text = ${text}`,
    `# parse_rank = ${rank}`,
    `# parse_confidence = ${parse.confidence}`,
  ];
  for (const t of parse.tokens) {
    lines.push(
      [
        t.id,
        t.surface,
        t.lemma,
        t.upos,
        t.xpos,
        "_",
        t.head,
        t.deprel,
        "_",
        misc(t),
      ].join("\t"),
    );
  }
  return lines.join("\n") + "\n";
}

export function emitResponse(
  sentId: number,
  text: string,
  parses: Parse[],
): string {
  return (
    parses.map((p, i) => emitBlock(sentId, text, p, i + 1)).join("\n") + "EOR\n"
  );
}
