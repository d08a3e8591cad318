#!/usr/bin/env node
/**
 * plot <csv> --x {n|T} --out <dir> [--slope S[,S...]]
 *
 * Reads an experiment-results CSV (pinned schema), writes one log-log SVG
 * panel per (scenario, algorithm) into the output directory plus a
 * fits.csv exponent table, and prints the table to stdout in the same
 * scenario,algorithm,exponent,r2,points format the harness's own fit
 * command uses, so the two can be diffed directly.
 */

import { mkdirSync, readFileSync, writeFileSync } from "node:fs";
import { join } from "node:path";
import { renderPanels } from "./plot.js";
import { EmptyGroupError, parseRecords, SchemaMismatchError } from "./schema.js";
import type { XAxis } from "./stats.js";

const USAGE =
  "usage: plot <csv> --x {n|T} --out <dir> [--slope S[,S...]]";

interface CliArgs {
  csv: string;
  xAxis: XAxis;
  out: string;
  slopes: number[];
}

export function parseArgs(argv: string[]): CliArgs {
  let csv: string | null = null;
  let xAxis: string | null = null;
  let out: string | null = null;
  const slopes: number[] = [];
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i] as string;
    if (arg === "--x" || arg === "--out" || arg === "--slope") {
      const val = argv[++i];
      if (val === undefined) {
        throw new Error(`${arg} needs a value\n${USAGE}`);
      }
      if (arg === "--x") {
        xAxis = val;
      } else if (arg === "--out") {
        out = val;
      } else {
        for (const tok of val.split(",")) {
          const s = Number(tok);
          if (!Number.isFinite(s)) {
            throw new Error(`bad slope ${JSON.stringify(tok)}\n${USAGE}`);
          }
          slopes.push(s);
        }
      }
    } else if (arg.startsWith("-")) {
      throw new Error(`unknown option ${arg}\n${USAGE}`);
    } else if (csv === null) {
      csv = arg;
    } else {
      throw new Error(`unexpected argument ${arg}\n${USAGE}`);
    }
  }
  if (csv === null || out === null || (xAxis !== "n" && xAxis !== "T")) {
    throw new Error(USAGE);
  }
  return { csv, xAxis, out, slopes };
}

export function main(argv: string[]): number {
  let args: CliArgs;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error((err as Error).message);
    return 2;
  }
  let text: string;
  try {
    text = readFileSync(args.csv, "utf8");
  } catch (err) {
    console.error(`cannot read ${args.csv}: ${(err as Error).message}`);
    return 2;
  }
  try {
    const records = parseRecords(text);
    const panels = renderPanels(records, {
      xAxis: args.xAxis,
      referenceSlopes: args.slopes,
    });
    mkdirSync(args.out, { recursive: true });
    const tableLines = ["scenario,algorithm,exponent,r2,points"];
    for (const panel of panels) {
      writeFileSync(join(args.out, panel.fileName), panel.svg);
      if (panel.fit) {
        tableLines.push(
          `${panel.scenario},${panel.algorithm},${panel.fit.exponent.toFixed(6)},${panel.fit.r2.toFixed(6)},${panel.fit.points.length}`,
        );
      }
      if (panel.warning) {
        console.log(`warning: ${panel.scenario}/${panel.algorithm}: ${panel.warning}`);
      }
    }
    const table = tableLines.join("\n") + "\n";
    writeFileSync(join(args.out, "fits.csv"), table);
    process.stdout.write(table);
    console.log(`wrote ${panels.length} panel(s) + fits.csv to ${args.out}`);
    return 0;
  } catch (err) {
    if (err instanceof SchemaMismatchError || err instanceof EmptyGroupError) {
      console.error(`${err.name}: ${err.message}`);
      return 1;
    }
    throw err;
  }
}

// run only when executed directly, not when imported by tests
if (import.meta.url === `file://${process.argv[1]}`) {
  process.exit(main(process.argv.slice(2)));
}
