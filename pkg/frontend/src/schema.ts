/**
 * The pinned experiment-results CSV schema.
 *
 * One row per run. `iterations` for a censored run is the budget it was
 * stopped at, so medians computed over all rows keep heavy tails visible.
 */

export const CSV_HEADER =
  "scenario,algorithm,n,T,seed,iterations,censored,wall_ns,final_conflicts,final_max_color";

const COLUMNS = CSV_HEADER.split(",");

export interface RunRecord {
  scenario: string;
  algorithm: string;
  n: number;
  T: number;
  /** kept as a string: 64-bit seeds do not fit in a JS double */
  seed: string;
  iterations: number;
  censored: boolean;
  wallNs: number;
  finalConflicts: number;
  finalMaxColor: number;
}

/** The file does not conform to the pinned schema. */
export class SchemaMismatchError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaMismatchError";
  }
}

/** The file conforms to the schema but holds no runs to plot. */
export class EmptyGroupError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "EmptyGroupError";
  }
}

function parseIntField(raw: string, column: string, line: number): number {
  if (!/^-?\d+$/.test(raw)) {
    throw new SchemaMismatchError(
      `line ${line}: column ${column} must be an integer, got ${JSON.stringify(raw)}`,
    );
  }
  return Number(raw);
}

/**
 * Parse CSV text into run records.
 *
 * Throws SchemaMismatchError on a wrong header or malformed row, and
 * EmptyGroupError when the file carries no data rows at all (including a
 * completely empty file).
 */
export function parseRecords(text: string): RunRecord[] {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new EmptyGroupError("empty CSV: no header, no rows");
  }
  if (lines[0] !== CSV_HEADER) {
    throw new SchemaMismatchError(
      `header mismatch: expected ${JSON.stringify(CSV_HEADER)}, got ${JSON.stringify(lines[0])}`,
    );
  }
  const records: RunRecord[] = [];
  for (let i = 1; i < lines.length; i++) {
    const fields = (lines[i] as string).split(",");
    const lineNo = i + 1;
    if (fields.length !== COLUMNS.length) {
      throw new SchemaMismatchError(
        `line ${lineNo}: expected ${COLUMNS.length} fields, got ${fields.length}`,
      );
    }
    const [scenario, algorithm, n, T, seed, iterations, censored, wallNs, fc, fmc] =
      fields as [string, string, string, string, string, string, string, string, string, string];
    if (scenario === "" || algorithm === "") {
      throw new SchemaMismatchError(`line ${lineNo}: empty scenario or algorithm`);
    }
    if (!/^\d+$/.test(seed)) {
      throw new SchemaMismatchError(
        `line ${lineNo}: column seed must be a non-negative integer, got ${JSON.stringify(seed)}`,
      );
    }
    if (censored !== "0" && censored !== "1") {
      throw new SchemaMismatchError(
        `line ${lineNo}: column censored must be 0 or 1, got ${JSON.stringify(censored)}`,
      );
    }
    records.push({
      scenario,
      algorithm,
      n: parseIntField(n, "n", lineNo),
      T: parseIntField(T, "T", lineNo),
      seed,
      iterations: parseIntField(iterations, "iterations", lineNo),
      censored: censored === "1",
      wallNs: parseIntField(wallNs, "wall_ns", lineNo),
      finalConflicts: parseIntField(fc, "final_conflicts", lineNo),
      finalMaxColor: parseIntField(fmc, "final_max_color", lineNo),
    });
  }
  if (records.length === 0) {
    throw new EmptyGroupError("empty CSV: header only, no runs");
  }
  return records;
}
