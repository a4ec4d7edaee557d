// Render study CSVs into two-panel log-log SVG figures.
//
//   node dist/cli.js a.csv b.csv --out figure.svg [--title "..."]
//   node dist/cli.js *.csv --separate --out-dir figures/
//
// Default mode overlays every input as one series per CSV in a single
// figure; --separate renders one figure per input.  Exit code 0 on
// success, 1 on bad usage or a malformed CSV (reported per file with the
// offending line).

import * as fs from "fs";
import * as path from "path";

import { parseStudyCsv, StudyData } from "./csv";
import { renderFigure } from "./figure";

interface Args {
  inputs: string[];
  out?: string;
  outDir?: string;
  title?: string;
  separate: boolean;
}

function parseArgs(argv: string[]): Args {
  const args: Args = { inputs: [], separate: false };
  for (let i = 0; i < argv.length; i++) {
    const a = argv[i];
    if (a === "--out") args.out = argv[++i];
    else if (a === "--out-dir") args.outDir = argv[++i];
    else if (a === "--title") args.title = argv[++i];
    else if (a === "--separate") args.separate = true;
    else if (a.startsWith("--")) throw new Error(`unknown flag '${a}'`);
    else args.inputs.push(a);
  }
  if (args.inputs.length === 0) throw new Error("no input CSVs given");
  if (args.separate && !args.outDir) throw new Error("--separate needs --out-dir");
  if (!args.separate && !args.out) throw new Error("--out is required (or use --separate --out-dir)");
  return args;
}

function loadInputs(paths: string[]): StudyData[] {
  const out: StudyData[] = [];
  const errors: string[] = [];
  for (const p of paths) {
    try {
      out.push(parseStudyCsv(fs.readFileSync(p, "utf-8"), p));
    } catch (e) {
      errors.push(String(e instanceof Error ? e.message : e));
    }
  }
  if (errors.length) throw new Error(errors.join("\n"));
  return out;
}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (e) {
    console.error(`usage error: ${e instanceof Error ? e.message : e}`);
    return 1;
  }
  try {
    const inputs = loadInputs(args.inputs);
    if (args.separate) {
      fs.mkdirSync(args.outDir!, { recursive: true });
      for (const data of inputs) {
        const { svg, warnings } = renderFigure([data], { title: args.title });
        warnings.forEach((w) => console.warn(`warning: ${w}`));
        const name = path.basename(data.name).replace(/\.csv$/, "") + ".svg";
        const target = path.join(args.outDir!, name);
        fs.writeFileSync(target, svg, "utf-8");
        console.log(`wrote ${target}`);
      }
    } else {
      const { svg, warnings } = renderFigure(inputs, { title: args.title });
      warnings.forEach((w) => console.warn(`warning: ${w}`));
      fs.writeFileSync(args.out!, svg, "utf-8");
      console.log(`wrote ${args.out}`);
    }
    return 0;
  } catch (e) {
    console.error(String(e instanceof Error ? e.message : e));
    return 1;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
