// Reader for the study CSVs written by the solver harness:
// '#'-prefixed metadata lines (problem, method, R, seed, slope), then a
// `h,error,evals,time_ns` header and one data row per ladder rung.

export interface StudyMeta {
  problem: string;
  method: string;
  r: number;
  seed: number;
  slope: number; // NaN when the study could not fit a slope
}

export interface StudyRow {
  h: number;
  error: number; // NaN marks a diverged rung
  evals: number;
  timeNs: number;
}

export interface StudyData {
  name: string;
  meta: StudyMeta;
  rows: StudyRow[];
}

export const HEADER = "h,error,evals,time_ns";

function fail(name: string, lineNo: number, message: string): never {
  throw new Error(`${name}:${lineNo}: ${message}`);
}

function parseNumber(name: string, lineNo: number, field: string, text: string): number {
  const trimmed = text.trim();
  if (trimmed === "nan" || trimmed === "-nan") return NaN;
  const value = Number(trimmed);
  if (trimmed === "" || Number.isNaN(value)) {
    fail(name, lineNo, `cannot parse ${field} from '${text}'`);
  }
  return value;
}

export function parseStudyCsv(text: string, name = "<csv>"): StudyData {
  const meta: Record<string, string> = {};
  const rows: StudyRow[] = [];
  let sawHeader = false;
  const lines = text.split(/\r?\n/);
  lines.forEach((line, idx) => {
    const lineNo = idx + 1;
    if (line.trim() === "") return;
    if (line.startsWith("#")) {
      if (sawHeader) fail(name, lineNo, "metadata after the column header");
      const body = line.slice(1).trim();
      const eq = body.indexOf("=");
      if (eq < 0) fail(name, lineNo, `metadata line without '=': '${line}'`);
      meta[body.slice(0, eq).trim()] = body.slice(eq + 1).trim();
      return;
    }
    if (!sawHeader) {
      if (line.trim() !== HEADER) fail(name, lineNo, `expected header '${HEADER}', got '${line}'`);
      sawHeader = true;
      return;
    }
    const parts = line.split(",");
    if (parts.length !== 4) fail(name, lineNo, `expected 4 columns, got ${parts.length}`);
    rows.push({
      h: parseNumber(name, lineNo, "h", parts[0]),
      error: parseNumber(name, lineNo, "error", parts[1]),
      evals: parseNumber(name, lineNo, "evals", parts[2]),
      timeNs: parseNumber(name, lineNo, "time_ns", parts[3]),
    });
  });
  if (!sawHeader) fail(name, lines.length, `missing column header '${HEADER}'`);
  for (const key of ["problem", "method", "R"]) {
    if (!(key in meta)) fail(name, 1, `missing '# ${key}=' metadata line`);
  }
  return {
    name,
    meta: {
      problem: meta.problem,
      method: meta.method,
      r: parseNumber(name, 1, "R", meta.R),
      seed: meta.seed !== undefined ? parseNumber(name, 1, "seed", meta.seed) : 0,
      slope: meta.slope !== undefined ? parseNumber(name, 1, "slope", meta.slope) : NaN,
    },
    rows,
  };
}
