#!/usr/bin/env node
/** report-plots render --kind <kind> --in <csv> --out <svg> */

import { readFileSync, writeFileSync } from "node:fs";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { CsvSchemaError, isPlotKind, SCHEMAS } from "./csv.js";
import { RENDERERS } from "./plots.js";

export function main(argv: string[]): number {
  const args = yargs(argv)
    .command("render", "render one figure from a simulation CSV")
    .option("kind", {
      type: "string",
      demandOption: true,
      choices: Object.keys(SCHEMAS),
      describe: "figure kind",
    })
    .option("in", { type: "string", demandOption: true, describe: "input CSV path" })
    .option("out", { type: "string", demandOption: true, describe: "output SVG path" })
    .strict()
    .exitProcess(false)
    .parseSync();

  const kind = args.kind as string;
  if (!isPlotKind(kind)) {
    console.error(`unknown kind ${kind}`);
    return 1;
  }
  let text: string;
  try {
    text = readFileSync(args.in as string, "utf8");
  } catch (err) {
    console.error(`cannot read ${args.in}: ${(err as Error).message}`);
    return 3;
  }
  let svg: string;
  try {
    svg = RENDERERS[kind](text);
  } catch (err) {
    if (err instanceof CsvSchemaError) {
      console.error(`bad input for kind ${kind}: ${err.message}`);
      return 1;
    }
    throw err;
  }
  try {
    writeFileSync(args.out as string, svg + "\n");
  } catch (err) {
    console.error(`cannot write ${args.out}: ${(err as Error).message}`);
    return 3;
  }
  console.error(`wrote ${args.out}`);
  return 0;
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (invokedDirectly) {
  process.exit(main(hideBin(process.argv)));
}
