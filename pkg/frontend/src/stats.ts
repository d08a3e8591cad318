/**
 * Group summaries and log-log scaling fits.
 *
 * This is a deliberate independent reimplementation of the experiment
 * harness's summary/fit pipeline, kept semantically identical so the two
 * tools can cross-check each other on the same CSV:
 *
 * - groups are keyed by (scenario, algorithm, n, T) and sorted by that
 *   tuple with ordinal string comparison;
 * - medians are computed over ALL runs in a group, censored runs included
 *   at their recorded (budget) iteration count; the even-count median is
 *   the mean of the two middle values;
 * - the exponent is the least-squares slope of log(median) vs log(x),
 *   with r² reported as 1 when the y-values are all identical.
 */

import type { RunRecord } from "./schema.js";

export type XAxis = "n" | "T";

export interface GroupSummary {
  scenario: string;
  algorithm: string;
  n: number;
  T: number;
  runs: number;
  censored: number;
  medianIterations: number;
  meanIterations: number;
}

export interface ScalingFit {
  points: Array<[number, number]>;
  exponent: number;
  r2: number;
}

/** Fit inputs that a log-log line cannot be driven through. */
export class DegenerateDataError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "DegenerateDataError";
  }
}

export function median(values: number[]): number {
  if (values.length === 0) {
    throw new DegenerateDataError("median of empty list");
  }
  const sorted = [...values].sort((a, b) => a - b);
  const mid = sorted.length >> 1;
  if (sorted.length % 2 === 1) {
    return sorted[mid] as number;
  }
  return ((sorted[mid - 1] as number) + (sorted[mid] as number)) / 2;
}

function ordinal(a: string, b: string): number {
  return a < b ? -1 : a > b ? 1 : 0;
}

export function summarize(records: RunRecord[]): GroupSummary[] {
  const groups = new Map<string, RunRecord[]>();
  for (const rec of records) {
    const key = JSON.stringify([rec.scenario, rec.algorithm, rec.n, rec.T]);
    const bucket = groups.get(key);
    if (bucket) {
      bucket.push(rec);
    } else {
      groups.set(key, [rec]);
    }
  }
  const out: GroupSummary[] = [];
  for (const recs of groups.values()) {
    const first = recs[0] as RunRecord;
    const iters = recs.map((r) => r.iterations);
    out.push({
      scenario: first.scenario,
      algorithm: first.algorithm,
      n: first.n,
      T: first.T,
      runs: recs.length,
      censored: recs.filter((r) => r.censored).length,
      medianIterations: median(iters),
      meanIterations: iters.reduce((a, b) => a + b, 0) / iters.length,
    });
  }
  out.sort(
    (a, b) =>
      ordinal(a.scenario, b.scenario) ||
      ordinal(a.algorithm, b.algorithm) ||
      a.n - b.n ||
      a.T - b.T,
  );
  return out;
}

export function fitExponent(points: Array<[number, number]>): ScalingFit {
  const pts: Array<[number, number]> = points.map(([x, y]) => [Number(x), Number(y)]);
  if (pts.length < 3) {
    throw new DegenerateDataError(`need >= 3 points, got ${pts.length}`);
  }
  if (pts.some(([x, y]) => x <= 0 || y <= 0)) {
    throw new DegenerateDataError("log-log fit needs positive values");
  }
  const xs = pts.map(([x]) => Math.log(x));
  const ys = pts.map(([, y]) => Math.log(y));
  const mx = xs.reduce((a, b) => a + b, 0) / xs.length;
  const my = ys.reduce((a, b) => a + b, 0) / ys.length;
  const sxx = xs.reduce((acc, x) => acc + (x - mx) ** 2, 0);
  if (sxx === 0) {
    throw new DegenerateDataError("all x values identical");
  }
  let sxy = 0;
  for (let i = 0; i < xs.length; i++) {
    sxy += ((xs[i] as number) - mx) * ((ys[i] as number) - my);
  }
  const slope = sxy / sxx;
  const intercept = my - slope * mx;
  let ssRes = 0;
  let ssTot = 0;
  for (let i = 0; i < xs.length; i++) {
    const y = ys[i] as number;
    ssRes += (y - (slope * (xs[i] as number) + intercept)) ** 2;
    ssTot += (y - my) ** 2;
  }
  const r2 = ssTot === 0 ? 1.0 : 1.0 - ssRes / ssTot;
  return { points: pts, exponent: slope, r2 };
}

/** One fit per (scenario, algorithm): median iterations against n or T. */
export function fitFromSummaries(
  summaries: GroupSummary[],
  xAxis: XAxis,
): Map<string, ScalingFit> {
  const grouped = new Map<string, GroupSummary[]>();
  for (const s of summaries) {
    const key = `${s.scenario},${s.algorithm}`;
    const bucket = grouped.get(key);
    if (bucket) {
      bucket.push(s);
    } else {
      grouped.set(key, [s]);
    }
  }
  const fits = new Map<string, ScalingFit>();
  for (const [key, rows] of [...grouped.entries()].sort((a, b) => ordinal(a[0], b[0]))) {
    const pts: Array<[number, number]> = rows.map((row) => [
      xAxis === "n" ? row.n : row.T,
      row.medianIterations,
    ]);
    fits.set(key, fitExponent(pts));
  }
  return fits;
}
