/** Stdio entry point: line-delimited requests in, CoNLL-U blocks out. */

import * as readline from "node:readline";
import { Framer, handle } from "./protocol.js";

const framer = new Framer();
const rl = readline.createInterface({ input: process.stdin });

rl.on("line", (line: string) => {
  const result = framer.feed(line);
  if (result === null) return;
  if ("error" in result) {
    process.stdout.write(`ERR ${result.error}\n`);
    return;
  }
  try {
    process.stdout.write(handle(result));
  } catch (exc) {
    const message = exc instanceof Error ? exc.message : String(exc);
    process.stdout.write(`ERR ${message}\n`);
  }
});
