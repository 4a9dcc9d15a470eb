/**
 * Tagging lexicon of the bundled parser.
 *
 * Each entry gives the ranked tag readings of a surface form with
 * confidences.  Ambiguous entries (noun/verb pairs such as "protests")
 * carry a genuinely uncertain distribution so downstream confidence
 * thresholds have something to react to; closed-class words are certain.
 */

export interface TagReading {
  upos: string;
  xpos: string;
  confidence: number;
}

export interface LexEntry {
  lemma: string;
  readings: TagReading[]; // ranked, non-increasing confidence
  ner?: string;
}

const E = (
  lemma: string,
  readings: Array<[string, string, number]>,
  ner?: string,
): LexEntry => ({
  lemma,
  readings: readings.map(([upos, xpos, confidence]) => ({
    upos,
    xpos,
    confidence,
  })),
  ner,
});

export const LEXICON: Record<string, LexEntry> = {
  // determiners and closed classes
  a: E("a", [["DET", "DT", 1.0]]),
  an: E("an", [["DET", "DT", 1.0]]),
  the: E("the", [["DET", "DT", 1.0]]),
  and: E("and", [["CC", "CC", 1.0]]),
  or: E("or", [["CC", "CC", 1.0]]),
  to: E("to", [["ADP", "IN", 0.95], ["PART", "TO", 0.05]]),
  of: E("of", [["ADP", "IN", 1.0]]),
  by: E("by", [["ADP", "IN", 1.0]]),
  for: E("for", [["ADP", "IN", 1.0]]),
  from: E("from", [["ADP", "IN", 1.0]]),
  in: E("in", [["ADP", "IN", 1.0]]),
  against: E("against", [["ADP", "IN", 1.0]]),
  with: E("with", [["ADP", "IN", 1.0]]),
  not: E("not", [["PART", "RB", 1.0]]),

  // copulas and auxiliaries
  is: E("be", [["AUX", "VBZ", 0.99]]),
  are: E("be", [["AUX", "VBP", 0.99]]),
  was: E("be", [["AUX", "VBD", 0.99]]),
  were: E("be", [["AUX", "VBD", 0.99]]),
  been: E("be", [["AUX", "VBN", 0.99]]),
  has: E("have", [["AUX", "VBZ", 0.6], ["VERB", "VBZ", 0.4]]),
  have: E("have", [["AUX", "VB", 0.6], ["VERB", "VB", 0.4]]),
  does: E("do", [["AUX", "VBZ", 0.98]]),
  will: E("will", [["AUX", "MD", 0.98]]),

  // verbs
  buys: E("buy", [["VERB", "VBZ", 0.97]]),
  buy: E("buy", [["VERB", "VB", 0.95]]),
  bought: E("buy", [["VERB", "VBD", 0.9], ["VERB", "VBN", 0.1]]),
  sold: E("sell", [["VERB", "VBD", 0.88], ["VERB", "VBN", 0.12]]),
  sells: E("sell", [["VERB", "VBZ", 0.97]]),
  makes: E("make", [["VERB", "VBZ", 0.96]]),
  made: E("make", [["VERB", "VBD", 0.55], ["VERB", "VBN", 0.45]]),
  gives: E("give", [["VERB", "VBZ", 0.97]]),
  given: E("give", [["VERB", "VBN", 0.95]]),
  goes: E("go", [["VERB", "VBZ", 0.97]]),
  went: E("go", [["VERB", "VBD", 0.97]]),
  moved: E("move", [["VERB", "VBD", 0.85], ["VERB", "VBN", 0.15]]),
  travelled: E("travel", [["VERB", "VBD", 0.9], ["VERB", "VBN", 0.1]]),
  journeyed: E("journey", [["VERB", "VBD", 0.92]]),
  purchases: E("purchase", [["VERB", "VBZ", 0.55], ["NOUN", "NNS", 0.45]]),
  considers: E("consider", [["VERB", "VBZ", 0.97]]),
  administers: E("administer", [["VERB", "VBZ", 0.96]]),

  // the classic noun/verb confusion
  protests: E("protest", [
    ["NOUN", "NNS", 0.732],
    ["VERB", "VBZ", 0.257],
  ]),

  // nouns
  car: E("car", [["NOUN", "NN", 0.98]]),
  watch: E("watch", [["NOUN", "NN", 0.7], ["VERB", "VB", 0.3]]),
  book: E("book", [["NOUN", "NN", 0.8], ["VERB", "VB", 0.2]]),
  piano: E("piano", [["NOUN", "NN", 0.98]]),
  cake: E("cake", [["NOUN", "NN", 0.97]]),
  student: E("student", [["NOUN", "NN", 0.98]]),
  government: E("government", [["NOUN", "NN", 0.98]]),
  customer: E("customer", [["NOUN", "NN", 0.98]]),
  friend: E("friend", [["NOUN", "NN", 0.98]]),
  bedroom: E("bedroom", [["NOUN", "NN", 0.98]]),
  garden: E("garden", [["NOUN", "NN", 0.98]]),
  kitchen: E("kitchen", [["NOUN", "NN", 0.98]]),
  cinema: E("cinema", [["NOUN", "NN", 0.98]]),
  school: E("school", [["NOUN", "NN", 0.97]]),
  hallway: E("hallway", [["NOUN", "NN", 0.98]]),
  restaurant: E("restaurant", [["NOUN", "NN", 0.98]]),
  hospitalization: E("hospitalization", [["NOUN", "NN", 0.97]]),
  north: E("north", [["NOUN", "NN", 0.9], ["ADV", "RB", 0.1]]),
  south: E("south", [["NOUN", "NN", 0.9], ["ADV", "RB", 0.1]]),
  west: E("west", [["NOUN", "NN", 0.9], ["ADV", "RB", 0.1]]),
  east: E("east", [["NOUN", "NN", 0.9], ["ADV", "RB", 0.1]]),

  // adjectives
  rich: E("rich", [["ADJ", "JJ", 0.96]]),
  cheap: E("cheap", [["ADJ", "JJ", 0.96]]),
  clean: E("clean", [["ADJ", "JJ", 0.7], ["VERB", "VB", 0.3]]),
  delicious: E("delicious", [["ADJ", "JJ", 0.97]]),
};

export const NAMES = new Set([
  "mary", "john", "bob", "kate", "daniel", "sandra", "bill", "julie",
  "fred", "winston",
]);

export function lookup(surface: string): LexEntry {
  const lower = surface.toLowerCase();
  const entry = LEXICON[lower];
  if (entry) return entry;
  if (NAMES.has(lower) || /^[A-Z]/.test(surface)) {
    return {
      lemma: lower,
      readings: [{ upos: "PROPN", xpos: "NNP", confidence: 0.95 }],
      ner: NAMES.has(lower) ? "s_person" : "o",
    };
  }
  // unknown content word: assume a common noun, mildly uncertain
  return {
    lemma: lower,
    readings: [
      { upos: "NOUN", xpos: "NN", confidence: 0.85 },
      { upos: "VERB", xpos: "VB", confidence: 0.1 },
    ],
  };
}
