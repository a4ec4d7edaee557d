// Publication-style two-panel convergence figure as a standalone SVG:
// left panel error vs wall time, right panel error vs step size, both on
// log-log axes, with a reference guide line of slope R on the right panel.

import { StudyData, StudyRow } from "./csv";

export interface FigureOptions {
  title?: string;
  width?: number;
  height?: number;
}

export interface RenderResult {
  svg: string;
  warnings: string[];
}

const PALETTE = ["#1f6fb4", "#d13b3b", "#2c8a4b", "#8a5cb4", "#b87b1f", "#3b8f8f"];

interface Panel {
  x0: number;
  y0: number;
  w: number;
  h: number;
}

interface LogScale {
  min: number; // log10 of the axis minimum
  max: number;
}

function logScale(values: number[]): LogScale {
  const logs = values.map(Math.log10).filter(Number.isFinite);
  let lo = logs.length ? Math.min(...logs) : 0;
  let hi = logs.length ? Math.max(...logs) : 1;
  if (hi - lo < 1e-9) {
    lo -= 0.5;
    hi += 0.5;
  }
  const pad = 0.05 * (hi - lo);
  return { min: lo - pad, max: hi + pad };
}

function xPx(p: Panel, s: LogScale, value: number): number {
  return p.x0 + ((Math.log10(value) - s.min) / (s.max - s.min)) * p.w;
}

function yPx(p: Panel, s: LogScale, value: number): number {
  return p.y0 + p.h - ((Math.log10(value) - s.min) / (s.max - s.min)) * p.h;
}

function decadeTicks(s: LogScale): number[] {
  const out: number[] = [];
  const step = Math.max(1, Math.ceil((s.max - s.min) / 8));
  for (let e = Math.ceil(s.min); e <= Math.floor(s.max); e += step) out.push(e);
  return out;
}

function panelFrame(p: Panel, label: string, xName: string): string {
  return [
    `<rect x="${p.x0}" y="${p.y0}" width="${p.w}" height="${p.h}" fill="none" stroke="#333"/>`,
    `<text x="${p.x0 + p.w / 2}" y="${p.y0 - 8}" text-anchor="middle" font-size="13" fill="#111">${label}</text>`,
    `<text x="${p.x0 + p.w / 2}" y="${p.y0 + p.h + 32}" text-anchor="middle" font-size="12" fill="#111">${xName}</text>`,
    `<text x="${p.x0 - 46}" y="${p.y0 + p.h / 2}" text-anchor="middle" font-size="12" fill="#111" transform="rotate(-90 ${p.x0 - 46} ${p.y0 + p.h / 2})">error</text>`,
  ].join("\n");
}

function axisTicks(p: Panel, xs: LogScale, ys: LogScale): string {
  const parts: string[] = [];
  for (const e of decadeTicks(xs)) {
    const px = xPx(p, xs, 10 ** e).toFixed(2);
    parts.push(`<line x1="${px}" y1="${p.y0}" x2="${px}" y2="${p.y0 + p.h}" stroke="#eee"/>`);
    parts.push(`<line x1="${px}" y1="${p.y0 + p.h}" x2="${px}" y2="${p.y0 + p.h + 5}" stroke="#333"/>`);
    parts.push(`<text x="${px}" y="${p.y0 + p.h + 18}" text-anchor="middle" font-size="10" fill="#333">1e${e}</text>`);
  }
  for (const e of decadeTicks(ys)) {
    const py = yPx(p, ys, 10 ** e).toFixed(2);
    parts.push(`<line x1="${p.x0}" y1="${py}" x2="${p.x0 + p.w}" y2="${py}" stroke="#eee"/>`);
    parts.push(`<line x1="${p.x0 - 5}" y1="${py}" x2="${p.x0}" y2="${py}" stroke="#333"/>`);
    parts.push(`<text x="${p.x0 - 8}" y="${(Number(py) + 3).toFixed(2)}" text-anchor="end" font-size="10" fill="#333">1e${e}</text>`);
  }
  return parts.join("\n");
}

function seriesMarks(p: Panel, xs: LogScale, ys: LogScale, pts: Array<[number, number]>,
                     color: string, cls: string): string {
  const px = pts.map(([x, y]) => [xPx(p, xs, x), yPx(p, ys, y)]);
  const line = px.map(([x, y]) => `${x.toFixed(2)},${y.toFixed(2)}`).join(" ");
  const dots = px
    .map(([x, y]) => `<circle class="${cls}-pt" cx="${x.toFixed(2)}" cy="${y.toFixed(2)}" r="3" fill="${color}"/>`)
    .join("\n");
  return `<polyline class="${cls}" points="${line}" fill="none" stroke="${color}" stroke-width="1.5"/>\n${dots}`;
}

/** Dashed guide of slope `r` in log-log space, anchored under the series. */
function guideLine(p: Panel, xs: LogScale, ys: LogScale, r: number,
                   anchorH: number, anchorErr: number): string {
  const hLo = 10 ** (xs.min + 0.08 * (xs.max - xs.min));
  const hHi = 10 ** (xs.max - 0.08 * (xs.max - xs.min));
  const errAt = (h: number) => anchorErr * (h / anchorH) ** r;
  const x1 = xPx(p, xs, hLo).toFixed(2);
  const x2 = xPx(p, xs, hHi).toFixed(2);
  const y1 = yPx(p, ys, errAt(hLo)).toFixed(2);
  const y2 = yPx(p, ys, errAt(hHi)).toFixed(2);
  return [
    `<line class="guide" data-slope="${r}" x1="${x1}" y1="${y1}" x2="${x2}" y2="${y2}" stroke="#888" stroke-dasharray="6 4"/>`,
    `<text x="${x2}" y="${(Number(y2) - 6).toFixed(2)}" text-anchor="end" font-size="10" fill="#888">slope ${r}</text>`,
  ].join("\n");
}

function plottable(data: StudyData, warnings: string[]): StudyRow[] {
  const keep: StudyRow[] = [];
  for (const row of data.rows) {
    if (Number.isFinite(row.error) && row.error > 0 &&
        Number.isFinite(row.h) && row.h > 0 && row.timeNs > 0) {
      keep.push(row);
    } else {
      warnings.push(`${data.name}: skipping rung h=${row.h} (diverged or non-plottable)`);
    }
  }
  return keep;
}

export function renderFigure(inputs: StudyData[], opts: FigureOptions = {}): RenderResult {
  if (inputs.length === 0) throw new Error("no CSV inputs to render");
  const warnings: string[] = [];
  const width = opts.width ?? 980;
  const height = opts.height ?? 430;
  const left: Panel = { x0: 70, y0: 50, w: width / 2 - 110, h: height - 130 };
  const right: Panel = { x0: width / 2 + 70, y0: 50, w: width / 2 - 110, h: height - 130 };

  const rowsPerInput = inputs.map((d) => plottable(d, warnings));
  const usable = rowsPerInput.flat();
  if (usable.length === 0) throw new Error("every rung of every input was unplottable");

  const ys = logScale(usable.map((r) => r.error));
  const xTime = logScale(usable.map((r) => r.timeNs / 1e9));
  const xH = logScale(usable.map((r) => r.h));

  const parts: string[] = [];
  parts.push(`<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`);
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  const title = opts.title ?? `${inputs[0].meta.problem}: convergence`;
  parts.push(`<text x="${width / 2}" y="24" text-anchor="middle" font-size="15" fill="#000">${title}</text>`);

  parts.push(panelFrame(left, "Error vs CPU time", "time [s]"));
  parts.push(axisTicks(left, xTime, ys));
  parts.push(panelFrame(right, "Error vs h", "h"));
  parts.push(axisTicks(right, xH, ys));

  inputs.forEach((data, i) => {
    const color = PALETTE[i % PALETTE.length];
    const rows = rowsPerInput[i];
    if (rows.length) {
      parts.push(seriesMarks(left, xTime, ys,
        rows.map((r) => [r.timeNs / 1e9, r.error]), color, `series-time-${i}`));
      parts.push(seriesMarks(right, xH, ys,
        rows.map((r) => [r.h, r.error]), color, `series-h-${i}`));
    }
    const lx = left.x0 + 10;
    const ly = left.y0 + 16 + 16 * i;
    parts.push(`<rect x="${lx}" y="${ly - 9}" width="10" height="10" fill="${color}"/>`);
    parts.push(`<text x="${lx + 16}" y="${ly}" font-size="11" fill="#111">${data.meta.method} R=${data.meta.r}</text>`);
  });

  for (const r of [...new Set(inputs.map((d) => d.meta.r))]) {
    const idx = inputs.findIndex((d) => d.meta.r === r);
    const rows = rowsPerInput[idx];
    if (rows.length) {
      const anchor = rows[Math.floor(rows.length / 2)];
      parts.push(guideLine(right, xH, ys, r, anchor.h, anchor.error * 0.5));
    }
  }

  parts.push("</svg>");
  return { svg: parts.join("\n"), warnings };
}
