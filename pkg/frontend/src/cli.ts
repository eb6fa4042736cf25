#!/usr/bin/env node
/**
 * render - turn a sweep CSV into an SVG figure.
 *
 *   render --csv fig2.csv --spec spec.json --out fig2.svg
 *   render --csv fig2.csv --x gamma --y fidelity,purity --x-scale log \
 *          --style fidelity=solid --style purity=dotted --out fig2.svg
 *
 * Exit codes: 0 success, 1 bad arguments or unreadable inputs, 2 empty or
 * malformed data.
 */

import { writeFileSync } from "fs";
import { pathToFileURL } from "url";
import { readCsv } from "./csv.js";
import { loadSpecFile, validateSpec, PlotSpec } from "./spec.js";
import { renderSvg } from "./svg.js";

interface CliArgs {
  csv?: string;
  spec?: string;
  out?: string;
  x?: string;
  y?: string;
  xScale?: string;
  styles: Record<string, string>;
}

export function parseArgs(argv: string[]): CliArgs {
  const args: CliArgs = { styles: {} };
  for (let i = 0; i < argv.length; i++) {
    const flag = argv[i];
    const next = () => {
      const v = argv[++i];
      if (v === undefined) throw new Error(`flag ${flag} needs a value`);
      return v;
    };
    switch (flag) {
      case "--csv":
        args.csv = next();
        break;
      case "--spec":
        args.spec = next();
        break;
      case "--out":
        args.out = next();
        break;
      case "--x":
        args.x = next();
        break;
      case "--y":
        args.y = next();
        break;
      case "--x-scale":
        args.xScale = next();
        break;
      case "--style": {
        const pair = next();
        const eq = pair.indexOf("=");
        if (eq <= 0) throw new Error(`--style expects series=style, got "${pair}"`);
        args.styles[pair.slice(0, eq)] = pair.slice(eq + 1);
        break;
      }
      default:
        throw new Error(`unknown flag ${flag}`);
    }
  }
  return args;
}

export function specFromArgs(args: CliArgs): PlotSpec {
  if (args.spec) {
    const spec = loadSpecFile(args.spec);
    // the CLI-level flags override the file where given
    return validateSpec({
      ...spec,
      input_csv: args.csv ?? spec.input_csv,
      output_image: args.out ?? spec.output_image,
    });
  }
  if (!args.csv || !args.out) {
    throw new Error("either --spec or both --csv and --out are required");
  }
  return validateSpec({
    input_csv: args.csv,
    x_column: args.x ?? "gamma",
    y_columns: (args.y ?? "fidelity,purity").split(",").map((s) => s.trim()),
    x_scale: args.xScale ?? "log",
    styles: args.styles,
    output_image: args.out,
  });
}

export function main(argv: string[]): number {
  let spec: PlotSpec;
  try {
    spec = specFromArgs(parseArgs(argv));
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
  try {
    const table = readCsv(spec.input_csv);
    if (table.rows.length === 0) {
      console.error("error: CSV contains no data rows");
      return 2;
    }
    const svg = renderSvg(table, spec, (msg) => console.error(`warning: ${msg}`));
    writeFileSync(spec.output_image, svg, "utf-8");
    console.log(
      `wrote ${spec.output_image} (${spec.y_columns.length} series, ${table.rows.length} rows)`
    );
    return 0;
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 2;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url === pathToFileURL(process.argv[1]).href;
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
