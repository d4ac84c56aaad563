/**
 * CSV reading with exact-schema validation.
 *
 * The harness writes plain comma-separated files with a mandatory header
 * row and no quoting, so parsing is a straight split. A file whose header
 * deviates from the expected schema is rejected with the offending column
 * named.
 */

import { readFileSync } from "fs";

export class SchemaError extends Error {
  constructor(public readonly column: string, message: string) {
    super(message);
    this.name = "SchemaError";
  }
}

export interface Table {
  header: string[];
  /** Rows of numbers, parallel to the header. */
  rows: number[][];
}

export function parseCsv(text: string, schema: string[], source: string): Table {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new SchemaError(schema[0], `${source}: empty file (missing header row)`);
  }
  const header = lines[0].split(",");
  for (let i = 0; i < schema.length; i++) {
    if (header[i] !== schema[i]) {
      throw new SchemaError(
        schema[i],
        `${source}: expected column ${i + 1} to be "${schema[i]}", found "${header[i] ?? "<missing>"}"`,
      );
    }
  }
  if (header.length > schema.length) {
    throw new SchemaError(
      header[schema.length],
      `${source}: unexpected extra column "${header[schema.length]}"`,
    );
  }
  const rows: number[][] = [];
  for (let ln = 1; ln < lines.length; ln++) {
    const parts = lines[ln].split(",");
    if (parts.length !== schema.length) {
      throw new SchemaError(
        schema[Math.min(parts.length, schema.length - 1)],
        `${source}: row ${ln + 1} has ${parts.length} fields, expected ${schema.length}`,
      );
    }
    const row = parts.map((p, j) => {
      const v = Number(p);
      if (!Number.isFinite(v)) {
        throw new SchemaError(schema[j], `${source}: row ${ln + 1}, column "${schema[j]}": not a number: "${p}"`);
      }
      return v;
    });
    rows.push(row);
  }
  return { header, rows };
}

export function readTable(path: string, schema: string[]): Table {
  return parseCsv(readFileSync(path, "utf8"), schema, path);
}

export function column(table: Table, name: string): number[] {
  const idx = table.header.indexOf(name);
  return table.rows.map((r) => r[idx]);
}

export const SCHEMAS = {
  power: ["n", "m", "delta", "delta_prime", "gamma", "Delta", "alpha", "reps", "power", "ci_lo", "ci_hi"],
  calibration: ["tau_over_n", "mean", "sd", "reps"],
  varS: ["n", "N", "prefix_id", "var_S", "cont_reps"],
  dominance: ["k", "ccdf_component", "ccdf_tree", "bound", "se_component", "se_tree"],
  estimator: ["n", "tau", "tau_hat", "abs_err"],
} as const;
