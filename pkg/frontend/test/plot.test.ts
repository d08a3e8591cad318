import { mkdtempSync, readdirSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { afterEach, describe, expect, it } from "vitest";
import { main, parseArgs } from "../src/cli.js";
import { renderPanels } from "../src/plot.js";
import { parseRecords, type RunRecord } from "../src/schema.js";

const FIXTURES = fileURLToPath(new URL("../fixtures", import.meta.url));
const cubicPath = join(FIXTURES, "path_join_medium.csv");
const censoredPath = join(FIXTURES, "censored_only.csv");

const tempDirs: string[] = [];
function tempDir(): string {
  const d = mkdtempSync(join(tmpdir(), "recolorlab-plots-"));
  tempDirs.push(d);
  return d;
}
afterEach(() => {
  while (tempDirs.length) {
    rmSync(tempDirs.pop()!, { recursive: true, force: true });
  }
});

describe("renderPanels", () => {
  it("draws points, fit line, and annotation for clean data", () => {
    const panels = renderPanels(parseRecords(readFileSync(cubicPath, "utf8")), {
      xAxis: "n",
    });
    expect(panels.map((p) => `${p.scenario}/${p.algorithm}`).sort()).toEqual([
      "path_join/ea",
      "path_join/rls",
    ]);
    for (const panel of panels) {
      expect(panel.fit).not.toBeNull();
      expect(panel.warning).toBeNull();
      expect(panel.svg.startsWith("<svg ")).toBe(true);
      expect(panel.svg.endsWith("</svg>")).toBe(true);
      expect(panel.svg).toContain('class="fit-line"');
      expect(panel.svg).toMatch(/fitted slope 3\.\d{3}/);
      expect(panel.svg.match(/class="median-point"/g)).toHaveLength(4);
      expect(panel.fileName).toMatch(/^path_join__(rls|ea)\.svg$/);
    }
  });

  it("overlays requested reference slopes", () => {
    const [panel] = renderPanels(parseRecords(readFileSync(cubicPath, "utf8")), {
      xAxis: "n",
      referenceSlopes: [3],
    });
    expect(panel!.svg).toContain('class="reference-slope"');
    expect(panel!.svg).toContain("slope 3 (reference)");
  });

  it("renders censored-only input with a warning and no fit line", () => {
    const panels = renderPanels(parseRecords(readFileSync(censoredPath, "utf8")), {
      xAxis: "n",
    });
    expect(panels).toHaveLength(1);
    const panel = panels[0]!;
    expect(panel.fit).toBeNull();
    expect(panel.warning).toMatch(/all 10 runs censored at budget; no fit/);
    expect(panel.svg).not.toContain('class="fit-line"');
    expect(panel.svg).toContain('class="panel-warning"');
    // the medians are still drawn, with the distinct censored marker
    expect(panel.svg.match(/class="median-point censored"/g)).toHaveLength(2);
    expect(panel.svg).toContain("5/5 censored");
  });

  it("marks partially censored groups but still fits", () => {
    const base = parseRecords(readFileSync(cubicPath, "utf8"));
    const records: RunRecord[] = base.map((r, i) =>
      i % 10 === 0 ? { ...r, censored: true } : r,
    );
    const panels = renderPanels(records, { xAxis: "n" });
    for (const panel of panels) {
      expect(panel.fit).not.toBeNull();
      expect(panel.svg).toContain('class="median-point censored"');
    }
  });

  it("skips the fit with a warning when a log-log line is impossible", () => {
    const rows = `scenario,algorithm,n,T,seed,iterations,censored,wall_ns,final_conflicts,final_max_color
demo,alg,16,1,1,0,0,0,0,2
demo,alg,32,1,2,0,0,0,0,2
demo,alg,64,1,3,0,0,0,0,2`;
    const [panel] = renderPanels(parseRecords(rows), { xAxis: "n" });
    expect(panel!.fit).toBeNull();
    expect(panel!.warning).toMatch(/no fit/);
    expect(panel!.svg).not.toContain('class="fit-line"');
  });

  it("escapes markup in scenario and algorithm names", () => {
    const rows = `scenario,algorithm,n,T,seed,iterations,censored,wall_ns,final_conflicts,final_max_color
a<b,x&y,16,1,1,5,0,0,0,2
a<b,x&y,32,1,2,9,0,0,0,2
a<b,x&y,64,1,3,20,0,0,0,2`;
    const [panel] = renderPanels(parseRecords(rows), { xAxis: "n" });
    expect(panel!.svg).toContain("a&lt;b");
    expect(panel!.svg).toContain("x&amp;y");
    expect(panel!.svg).not.toContain("a<b");
    expect(panel!.fileName).toBe("a_b__x_y.svg");
  });
});

describe("cli", () => {
  it("parses the pinned argument shape", () => {
    const args = parseArgs(["runs.csv", "--x", "n", "--out", "plots", "--slope", "3,1"]);
    expect(args).toEqual({ csv: "runs.csv", xAxis: "n", out: "plots", slopes: [3, 1] });
    expect(() => parseArgs(["runs.csv", "--x", "m", "--out", "plots"])).toThrow(/usage/);
    expect(() => parseArgs(["--x", "n", "--out", "plots"])).toThrow(/usage/);
  });

  it("writes one SVG per pair plus fits.csv and exits 0", () => {
    const out = tempDir();
    const code = main([cubicPath, "--x", "n", "--out", out, "--slope", "3"]);
    expect(code).toBe(0);
    const files = readdirSync(out).sort();
    expect(files).toEqual(["fits.csv", "path_join__ea.svg", "path_join__rls.svg"]);
    const table = readFileSync(join(out, "fits.csv"), "utf8").trim().split("\n");
    expect(table[0]).toBe("scenario,algorithm,exponent,r2,points");
    expect(table).toHaveLength(3);
    expect(table[1]).toMatch(/^path_join,ea,3\.\d{6},0\.\d{6},4$/);
  });

  it("succeeds on censored-only input with an empty fit table", () => {
    const out = tempDir();
    const code = main([censoredPath, "--x", "n", "--out", out]);
    expect(code).toBe(0);
    const files = readdirSync(out).sort();
    expect(files).toEqual(["fits.csv", "tree_root_edge__rls.svg"]);
    expect(readFileSync(join(out, "fits.csv"), "utf8").trim()).toBe(
      "scenario,algorithm,exponent,r2,points",
    );
  });

  it("exits 1 on empty input and on schema mismatches", () => {
    const out = tempDir();
    const empty = join(out, "empty.csv");
    writeFileSync(empty, "");
    expect(main([empty, "--x", "n", "--out", out])).toBe(1);
    const bad = join(out, "bad.csv");
    writeFileSync(bad, "not,the,schema\n1,2,3\n");
    expect(main([bad, "--x", "n", "--out", out])).toBe(1);
  });

  it("exits 2 on usage errors and unreadable files", () => {
    expect(main(["--x", "n"])).toBe(2);
    expect(main([join(tempDir(), "missing.csv"), "--x", "n", "--out", "o"])).toBe(2);
  });
});
