/** CSV loading and schema validation for the simulation outputs. */

import Papa from "papaparse";

export class CsvSchemaError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "CsvSchemaError";
  }
}

export type Row = Record<string, number | string>;

/**
 * Parse CSV text and validate that every required column is present.
 * Numeric-looking fields are converted to numbers; everything else stays a
 * string.  Throws CsvSchemaError naming the missing columns (and listing the
 * columns that were found) so a mismatched file is diagnosable at a glance.
 */
export function parseCsv(text: string, requiredColumns: string[]): Row[] {
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    throw new CsvSchemaError(`malformed CSV: ${first.message} (row ${first.row})`);
  }
  const fields = parsed.meta.fields ?? [];
  const missing = requiredColumns.filter((c) => !fields.includes(c));
  if (missing.length > 0) {
    throw new CsvSchemaError(
      `missing column(s) ${missing.join(", ")}; file has: ${fields.join(", ")}`,
    );
  }
  if (parsed.data.length === 0) {
    throw new CsvSchemaError("CSV contains a header but no data rows");
  }
  return parsed.data.map((raw) => {
    const row: Row = {};
    for (const key of fields) {
      const value = raw[key];
      const num = Number(value);
      row[key] = value !== "" && Number.isFinite(num) ? num : value;
    }
    return row;
  });
}

/** Column contracts for each file the simulation package writes. */
export const SCHEMAS = {
  convergence: ["eps", "gamma", "sup_dist", "kappa_hat"],
  drift: ["t", "mass", "hamiltonian", "F", "G", "E", "H", "l2", "h1", "h2", "wdelta"],
  noise_fit: ["eps", "q", "s", "norm_name", "median", "p10", "p90", "fit_slope", "r2"],
  identity_residual: ["dt", "residual"],
} as const;

export type PlotKind = keyof typeof SCHEMAS;

export function isPlotKind(kind: string): kind is PlotKind {
  return Object.prototype.hasOwnProperty.call(SCHEMAS, kind);
}
