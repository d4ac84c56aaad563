#!/usr/bin/env node
/**
 * paplot <kind> --in <csv> [--in <csv> ...] --out <svg>
 *               [--n <int> ...] [--gamma <float>] [--title <text>]
 *
 * Kinds: power | scaling | varS | dominance | estimator.
 * The scaling kind reads calibration-schema CSVs and needs one --n per file.
 *
 * Exit codes: 0 success, 2 usage, 3 schema mismatch, 4 missing input file.
 */

import { existsSync, readFileSync, writeFileSync } from "fs";

import { parseCsv, SchemaError, Table } from "./csv";
import { FigureKind, FigureOptions, KINDS } from "./figures";

const USAGE =
  "usage: paplot <power|scaling|varS|dominance|estimator> --in <csv> [--in <csv> ...] " +
  "--out <svg> [--n <int> ...] [--gamma <float>] [--title <text>]";

interface ParsedArgs {
  kind: FigureKind;
  inputs: string[];
  out: string;
  options: FigureOptions;
}

function parseArgs(argv: string[]): ParsedArgs {
  if (argv.length === 0) throw new UsageError("missing figure kind");
  const kind = argv[0] as FigureKind;
  if (!(kind in KINDS)) throw new UsageError(`unknown figure kind "${argv[0]}"`);
  const inputs: string[] = [];
  const ns: number[] = [];
  let out: string | undefined;
  let gamma: number | undefined;
  let title: string | undefined;
  for (let i = 1; i < argv.length; i += 2) {
    const flag = argv[i];
    const value = argv[i + 1];
    if (value === undefined) throw new UsageError(`flag ${flag} needs a value`);
    switch (flag) {
      case "--in":
        inputs.push(...value.split(",").filter((s) => s.length > 0));
        break;
      case "--out":
        out = value;
        break;
      case "--n":
        for (const part of value.split(",").filter((s) => s.length > 0)) {
          const n = Number(part);
          if (!Number.isFinite(n) || n <= 0) throw new UsageError(`bad --n value "${part}"`);
          ns.push(n);
        }
        break;
      case "--gamma":
        gamma = Number(value);
        if (!Number.isFinite(gamma)) throw new UsageError(`bad --gamma value "${value}"`);
        break;
      case "--title":
        title = value;
        break;
      default:
        throw new UsageError(`unknown flag ${flag}`);
    }
  }
  if (inputs.length === 0) throw new UsageError("at least one --in file is required");
  if (!out) throw new UsageError("--out is required");
  return { kind, inputs, out, options: { ns: ns.length ? ns : undefined, gamma, title } };
}

class UsageError extends Error {}

export function runCli(argv: string[]): number {
  let parsed: ParsedArgs;
  try {
    parsed = parseArgs(argv);
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    console.error(USAGE);
    return 2;
  }
  const { schema, render } = KINDS[parsed.kind];
  const tables: Table[] = [];
  for (const path of parsed.inputs) {
    if (!existsSync(path)) {
      console.error(`error: input file not found: ${path}`);
      return 4;
    }
    try {
      tables.push(parseCsv(readFileSync(path, "utf8"), [...schema], path));
    } catch (err) {
      if (err instanceof SchemaError) {
        console.error(`error: schema mismatch in column "${err.column}": ${err.message}`);
        return 3;
      }
      throw err;
    }
  }
  let svg: string;
  try {
    svg = render(tables, parsed.options);
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 2;
  }
  writeFileSync(parsed.out, svg);
  console.log(`wrote ${parsed.out} (${svg.length} bytes, ${tables.reduce((a, t) => a + t.rows.length, 0)} rows)`);
  return 0;
}

if (require.main === module) {
  process.exit(runCli(process.argv.slice(2)));
}
