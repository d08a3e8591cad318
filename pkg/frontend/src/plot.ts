/**
 * Self-contained SVG log-log panels.
 *
 * One panel per (scenario, algorithm): group medians as points, the OLS
 * fit line with its exponent annotation, optional reference-slope guide
 * lines, and distinct open markers for groups containing censored runs.
 * A group whose runs are ALL censored gets a warning and no fit line, as
 * does data a log-log line cannot be driven through (fewer than three
 * groups, zero medians); the points are still drawn.
 */

import type { RunRecord } from "./schema.js";
import {
  DegenerateDataError,
  fitExponent,
  summarize,
  type GroupSummary,
  type ScalingFit,
  type XAxis,
} from "./stats.js";

export interface RenderOptions {
  xAxis: XAxis;
  /** guide slopes to overlay, e.g. [3] or [1] */
  referenceSlopes?: number[];
}

export interface Panel {
  scenario: string;
  algorithm: string;
  fileName: string;
  svg: string;
  fit: ScalingFit | null;
  warning: string | null;
}

const W = 640;
const H = 480;
const M = { left: 74, right: 24, top: 46, bottom: 62 };

function esc(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function fileSafe(s: string): string {
  return s.replace(/[^A-Za-z0-9_.-]/g, "_");
}

function fmtTick(v: number): string {
  if (v !== 0 && (Math.abs(v) >= 100000 || Math.abs(v) < 0.01)) {
    const e = Math.floor(Math.log10(Math.abs(v)));
    const mant = v / 10 ** e;
    const m = Math.abs(mant - 1) < 1e-9 ? "" : `${Number(mant.toFixed(2))}x`;
    return `${m}1e${e}`;
  }
  return `${Number(v.toFixed(4))}`;
}

interface PanelPoint {
  x: number;
  y: number;
  censored: number;
  runs: number;
}

function renderPanel(
  scenario: string,
  algorithm: string,
  rows: GroupSummary[],
  opts: RenderOptions,
): Panel {
  const xOf = (r: GroupSummary) => (opts.xAxis === "n" ? r.n : r.T);
  const points: PanelPoint[] = rows
    .map((r) => ({ x: xOf(r), y: r.medianIterations, censored: r.censored, runs: r.runs }))
    .sort((a, b) => a.x - b.x);

  const totalRuns = rows.reduce((a, r) => a + r.runs, 0);
  const totalCensored = rows.reduce((a, r) => a + r.censored, 0);
  const allCensored = totalRuns > 0 && totalCensored === totalRuns;

  let fit: ScalingFit | null = null;
  let warning: string | null = null;
  if (allCensored) {
    warning = `all ${totalRuns} runs censored at budget; no fit`;
  } else {
    try {
      fit = fitExponent(points.map((p) => [p.x, p.y]));
    } catch (err) {
      if (err instanceof DegenerateDataError) {
        warning = `no fit: ${err.message}`;
      } else {
        throw err;
      }
    }
  }

  // log-space ranges over drawable (positive) coordinates
  const posX = points.filter((p) => p.x > 0).map((p) => Math.log(p.x));
  const posY = points.filter((p) => p.y > 0).map((p) => Math.log(p.y));
  const floored = points.filter((p) => p.x <= 0 || p.y <= 0).length;
  const pad = (lo: number, hi: number): [number, number] =>
    lo === hi ? [lo - 0.5, hi + 0.5] : [lo - 0.06 * (hi - lo), hi + 0.06 * (hi - lo)];
  const [x0, x1] = pad(
    posX.length ? Math.min(...posX) : 0,
    posX.length ? Math.max(...posX) : Math.log(10),
  );
  const [y0, y1] = pad(
    posY.length ? Math.min(...posY) : 0,
    posY.length ? Math.max(...posY) : Math.log(10),
  );
  const px = (lx: number) => M.left + ((lx - x0) / (x1 - x0)) * (W - M.left - M.right);
  const py = (ly: number) => H - M.bottom - ((ly - y0) / (y1 - y0)) * (H - M.top - M.bottom);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${W}" height="${H}" viewBox="0 0 ${W} ${H}" font-family="sans-serif">`,
    `<rect width="${W}" height="${H}" fill="white"/>`,
    `<text x="${M.left}" y="22" font-size="15" font-weight="bold">${esc(scenario)} / ${esc(algorithm)}</text>`,
    `<text x="${M.left}" y="38" font-size="11" fill="#555">median iterations vs ${esc(opts.xAxis)} (log-log)</text>`,
  );

  // frame
  parts.push(
    `<rect x="${M.left}" y="${M.top}" width="${W - M.left - M.right}" height="${H - M.top - M.bottom}" fill="none" stroke="#999"/>`,
  );

  // x ticks at the distinct data values; y ticks at powers of 10 in range
  const xTicks = [...new Set(points.filter((p) => p.x > 0).map((p) => p.x))];
  for (const v of xTicks) {
    const gx = px(Math.log(v));
    parts.push(
      `<line x1="${gx.toFixed(1)}" y1="${M.top}" x2="${gx.toFixed(1)}" y2="${H - M.bottom}" stroke="#eee"/>`,
      `<text x="${gx.toFixed(1)}" y="${H - M.bottom + 16}" font-size="11" text-anchor="middle">${esc(fmtTick(v))}</text>`,
    );
  }
  const decades: number[] = [];
  for (
    let e = Math.ceil(y0 / Math.LN10 - 1e-9);
    e <= Math.floor(y1 / Math.LN10 + 1e-9);
    e++
  ) {
    decades.push(e);
  }
  const yTickVals = decades.length >= 2 ? decades.map((e) => 10 ** e) : [
    Math.exp(y0 + 0.15 * (y1 - y0)),
    Math.exp((y0 + y1) / 2),
    Math.exp(y1 - 0.15 * (y1 - y0)),
  ];
  for (const v of yTickVals) {
    const gy = py(Math.log(v));
    parts.push(
      `<line x1="${M.left}" y1="${gy.toFixed(1)}" x2="${W - M.right}" y2="${gy.toFixed(1)}" stroke="#eee"/>`,
      `<text x="${M.left - 6}" y="${(gy + 4).toFixed(1)}" font-size="11" text-anchor="end">${esc(fmtTick(v))}</text>`,
    );
  }
  parts.push(
    `<text x="${(M.left + W - M.right) / 2}" y="${H - 14}" font-size="12" text-anchor="middle">${esc(opts.xAxis)}</text>`,
    `<text x="18" y="${(M.top + H - M.bottom) / 2}" font-size="12" text-anchor="middle" transform="rotate(-90 18 ${(M.top + H - M.bottom) / 2})">median iterations</text>`,
  );

  // reference slope guides through the centroid of the drawable points
  const slopes = opts.referenceSlopes ?? [];
  if (slopes.length > 0 && posX.length > 0 && posY.length > 0) {
    const cx = posX.reduce((a, b) => a + b, 0) / posX.length;
    const cy = posY.reduce((a, b) => a + b, 0) / posY.length;
    for (const s of slopes) {
      const lyA = cy + s * (x0 - cx);
      const lyB = cy + s * (x1 - cx);
      parts.push(
        `<line class="reference-slope" x1="${px(x0).toFixed(1)}" y1="${py(lyA).toFixed(1)}" x2="${px(x1).toFixed(1)}" y2="${py(lyB).toFixed(1)}" stroke="#2a9d8f" stroke-dasharray="6 4"/>`,
        `<text x="${W - M.right - 4}" y="${(py(lyB) - 5).toFixed(1)}" font-size="10" fill="#2a9d8f" text-anchor="end">slope ${esc(String(s))} (reference)</text>`,
      );
    }
  }

  // OLS fit line across the panel
  if (fit) {
    const lxs = fit.points.map(([x]) => Math.log(x));
    const lys = fit.points.map(([, y]) => Math.log(y));
    const mx = lxs.reduce((a, b) => a + b, 0) / lxs.length;
    const my = lys.reduce((a, b) => a + b, 0) / lys.length;
    const intercept = my - fit.exponent * mx;
    const fy = (lx: number) => fit.exponent * lx + intercept;
    parts.push(
      `<line class="fit-line" x1="${px(x0).toFixed(1)}" y1="${py(fy(x0)).toFixed(1)}" x2="${px(x1).toFixed(1)}" y2="${py(fy(x1)).toFixed(1)}" stroke="#e76f51" stroke-width="1.6"/>`,
      `<text x="${M.left + 8}" y="${M.top + 18}" font-size="12" fill="#e76f51">fitted slope ${fit.exponent.toFixed(3)}, r&#178; = ${fit.r2.toFixed(4)}</text>`,
    );
  }
  if (warning) {
    parts.push(
      `<text class="panel-warning" x="${M.left + 8}" y="${M.top + (fit ? 36 : 18)}" font-size="12" fill="#b00020">&#9888; ${esc(warning)}</text>`,
    );
  }
  if (floored > 0) {
    parts.push(
      `<text x="${M.left + 8}" y="${M.top + 54}" font-size="11" fill="#b00020">${floored} group(s) with non-positive coordinates drawn at the panel floor</text>`,
    );
  }

  // median points: filled when fully uncensored, open when the group has
  // censored runs (fraction annotated beside the marker)
  for (const p of points) {
    const gx = p.x > 0 ? px(Math.log(p.x)) : M.left + 4;
    const gy = p.y > 0 ? py(Math.log(p.y)) : H - M.bottom - 4;
    if (p.censored > 0) {
      parts.push(
        `<circle class="median-point censored" cx="${gx.toFixed(1)}" cy="${gy.toFixed(1)}" r="4.5" fill="white" stroke="#264653" stroke-width="1.8"/>`,
        `<text x="${(gx + 7).toFixed(1)}" y="${(gy - 7).toFixed(1)}" font-size="9" fill="#b00020">${p.censored}/${p.runs} censored</text>`,
      );
    } else {
      parts.push(
        `<circle class="median-point" cx="${gx.toFixed(1)}" cy="${gy.toFixed(1)}" r="4" fill="#264653"/>`,
      );
    }
  }

  parts.push(
    `<text x="${M.left}" y="${H - 30}" font-size="10" fill="#555">&#9679; group median&#160;&#160;&#9675; group contains censored runs (entered at budget)</text>`,
    `</svg>`,
  );

  return {
    scenario,
    algorithm,
    fileName: `${fileSafe(scenario)}__${fileSafe(algorithm)}.svg`,
    svg: parts.join("\n"),
    fit,
    warning,
  };
}

/** Render one panel per (scenario, algorithm) present in the records. */
export function renderPanels(records: RunRecord[], opts: RenderOptions): Panel[] {
  const summaries = summarize(records);
  const byPair = new Map<string, GroupSummary[]>();
  for (const s of summaries) {
    const key = JSON.stringify([s.scenario, s.algorithm]);
    const bucket = byPair.get(key);
    if (bucket) {
      bucket.push(s);
    } else {
      byPair.set(key, [s]);
    }
  }
  const panels: Panel[] = [];
  for (const rows of byPair.values()) {
    const first = rows[0] as GroupSummary;
    panels.push(renderPanel(first.scenario, first.algorithm, rows, opts));
  }
  return panels;
}
