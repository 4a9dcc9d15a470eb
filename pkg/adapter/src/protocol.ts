/**
 * Line protocol framing.
 *
 * A request is: one line of sentence text, zero or more
 * ``TAGS <tok_id>=<UPOS>/<XPOS>`` constraint lines, and a terminating
 * ``K <k>`` line.  The response is a k-best CoNLL-U stream followed by a
 * single ``EOR`` line; request-level failures produce ``ERR <message>``.
 */

import { Constraints, parseSentence } from "./parser.js";
import { emitResponse } from "./conllu.js";

export interface Request {
  text: string;
  constraints: Constraints;
  k: number;
}

const TAGS_RE = /^TAGS\s+(\d+)=([A-Z:$]+)\/([A-Z$.,]+)$/;
const K_RE = /^K\s+(\d+)$/;

/** Incremental request framer over incoming lines. */
export class Framer {
  private text: string | null = null;
  private constraints: Constraints = new Map();

  /** Feed one line; a completed request is returned on its K line. */
  feed(line: string): Request | { error: string } | null {
    const trimmed = line.trim();
    if (trimmed.length === 0) return null;
    const tags = TAGS_RE.exec(trimmed);
    if (tags) {
      if (this.text === null) {
        return { error: "TAGS before sentence text" };
      }
      this.constraints.set(Number(tags[1]), {
        upos: tags[2],
        xpos: tags[3],
      });
      return null;
    }
    const k = K_RE.exec(trimmed);
    if (k) {
      if (this.text === null) {
        return { error: "K before sentence text" };
      }
      const request: Request = {
        text: this.text,
        constraints: this.constraints,
        k: Math.max(1, Number(k[1])),
      };
      this.text = null;
      this.constraints = new Map();
      return request;
    }
    if (this.text !== null) {
      return { error: "unterminated request: expected TAGS or K" };
    }
    this.text = trimmed;
    return null;
  }
}

let sentenceCounter = 0;

export function handle(request: Request): string {
  sentenceCounter += 1;
  const parses = parseSentence(request.text, request.constraints, request.k);
  return emitResponse(sentenceCounter, request.text, parses);
}
