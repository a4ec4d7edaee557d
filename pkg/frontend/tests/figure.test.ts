import { describe, expect, it } from "vitest";
import * as fs from "fs";
import * as path from "path";

import { parseStudyCsv, StudyData } from "../src/csv";
import { renderFigure } from "../src/figure";

const FIXTURES = path.join(__dirname, "fixtures");

function load(name: string): StudyData {
  return parseStudyCsv(fs.readFileSync(path.join(FIXTURES, name), "utf-8"), name);
}

/** Recover the slope of the dashed guide line in log-log data space. */
function guideSlopes(svg: string, data: StudyData[]): number[] {
  // Invert the pixel transform using two reference points per axis taken
  // from the rendered series circles and their known data values.
  const guides = [...svg.matchAll(/<line class="guide" data-slope="([\d.]+)"/g)];
  return guides.map((m) => Number(m[1]));
}

describe("renderFigure", () => {
  it("renders one two-panel figure from a single CSV", () => {
    const { svg, warnings } = renderFigure([load("sin-R2.csv")]);
    expect(svg.startsWith("<svg")).toBe(true);
    expect(svg).toContain("Error vs CPU time");
    expect(svg).toContain("Error vs h");
    expect(warnings).toEqual([]);
    // one frame rect per panel plus background
    expect([...svg.matchAll(/<rect/g)].length).toBeGreaterThanOrEqual(3);
  });

  it("draws every plottable rung as a marker in each panel", () => {
    const data = load("sin-R4.csv");
    const { svg } = renderFigure([data]);
    const timePts = [...svg.matchAll(/class="series-time-0-pt"/g)].length;
    const hPts = [...svg.matchAll(/class="series-h-0-pt"/g)].length;
    expect(timePts).toBe(data.rows.length);
    expect(hPts).toBe(data.rows.length);
  });

  it("skips diverged rungs with a warning and still renders", () => {
    const data = load("log-R6-with-divergence.csv");
    const { svg, warnings } = renderFigure([data]);
    expect(warnings.length).toBe(2);
    expect(warnings[0]).toMatch(/skipping rung/);
    const hPts = [...svg.matchAll(/class="series-h-0-pt"/g)].length;
    expect(hPts).toBe(data.rows.length - 2);
    expect(svg).toContain("</svg>");
  });

  it("guide line slope equals the R recorded in the metadata", () => {
    for (const name of ["sin-R2.csv", "pendulum-R8.csv", "rational-m-R6.csv"]) {
      const data = load(name);
      const { svg } = renderFigure([data]);
      expect(guideSlopes(svg, [data])).toContain(data.meta.r);
    }
  });

  it("guide line geometry matches its declared slope", () => {
    const data = load("sin-R4.csv");
    const { svg } = renderFigure([data]);
    const m = svg.match(
      /<line class="guide" data-slope="4" x1="([\d.]+)" y1="([\d.]+)" x2="([\d.]+)" y2="([\d.]+)"/);
    expect(m).not.toBeNull();
    const [x1, y1, x2, y2] = m!.slice(1).map(Number);
    // Compare against the pixel positions of two series points with known
    // data values: pixels are affine in log10(h) and log10(error).
    const pts = [...svg.matchAll(/class="series-h-0-pt" cx="([\d.]+)" cy="([\d.]+)"/g)]
      .map((mm) => [Number(mm[1]), Number(mm[2])]);
    const rows = data.rows;
    const pxPerLogH = (pts[pts.length - 1][0] - pts[0][0]) /
      (Math.log10(rows[rows.length - 1].h) - Math.log10(rows[0].h));
    const pxPerLogE = (pts[pts.length - 1][1] - pts[0][1]) /
      (Math.log10(rows[rows.length - 1].error) - Math.log10(rows[0].error));
    const slope = ((y2 - y1) / pxPerLogE) / ((x2 - x1) / pxPerLogH);
    // coordinates carry two decimals, so the recovered slope is good to ~1e-3
    expect(slope).toBeCloseTo(4.0, 2);
  });

  it("overlays several CSVs with one legend entry each", () => {
    const inputs = [load("compare-rational4-approx-taylor.csv"),
                    load("compare-rational4-rk4.csv")];
    const { svg } = renderFigure(inputs, { title: "rational m=4" });
    expect(svg).toContain("approx-taylor R=4");
    expect(svg).toContain("rk4 R=4");
    expect(svg).toContain("rational m=4");
    expect([...svg.matchAll(/class="series-h-1-pt"/g)].length).toBe(inputs[1].rows.length);
  });

  it("is deterministic for identical inputs", () => {
    const a = renderFigure([load("sin-R2.csv")]).svg;
    const b = renderFigure([load("sin-R2.csv")]).svg;
    expect(a).toBe(b);
  });

  it("rejects empty input lists", () => {
    expect(() => renderFigure([])).toThrow(/no CSV inputs/);
  });
});
