import { readFileSync } from "fs";

export type LineStyle = "solid" | "dotted" | "dashed";

export interface PlotSpec {
  input_csv: string;
  x_column: string;
  y_columns: string[];
  x_scale: "linear" | "log";
  /** per-series line style, keyed by column name */
  styles: Record<string, LineStyle>;
  output_image: string;
}

const LINE_STYLES: LineStyle[] = ["solid", "dotted", "dashed"];

export function validateSpec(raw: unknown): PlotSpec {
  if (typeof raw !== "object" || raw === null) {
    throw new Error("plot spec must be a JSON object");
  }
  const obj = raw as Record<string, unknown>;
  const str = (key: string): string => {
    const v = obj[key];
    if (typeof v !== "string" || v === "") throw new Error(`spec field "${key}" must be a non-empty string`);
    return v;
  };
  const input_csv = str("input_csv");
  const x_column = str("x_column");
  const output_image = str("output_image");

  const yRaw = obj["y_columns"];
  if (!Array.isArray(yRaw) || yRaw.length === 0 || !yRaw.every((v) => typeof v === "string")) {
    throw new Error('spec field "y_columns" must be a non-empty array of column names');
  }
  const y_columns = yRaw as string[];

  const x_scale = obj["x_scale"] ?? "linear";
  if (x_scale !== "linear" && x_scale !== "log") {
    throw new Error('spec field "x_scale" must be "linear" or "log"');
  }

  const stylesRaw = (obj["styles"] ?? {}) as Record<string, unknown>;
  if (typeof stylesRaw !== "object" || Array.isArray(stylesRaw)) {
    throw new Error('spec field "styles" must be an object mapping series to line styles');
  }
  const styles: Record<string, LineStyle> = {};
  for (const [key, value] of Object.entries(stylesRaw)) {
    if (!LINE_STYLES.includes(value as LineStyle)) {
      throw new Error(`unknown line style "${value}" for series "${key}"`);
    }
    styles[key] = value as LineStyle;
  }
  // default styling: first series solid, second dotted, then dashed
  y_columns.forEach((name, i) => {
    if (!(name in styles)) styles[name] = LINE_STYLES[Math.min(i, 2)];
  });

  return { input_csv, x_column, y_columns, x_scale, styles, output_image };
}

export function loadSpecFile(path: string): PlotSpec {
  let parsed: unknown;
  try {
    parsed = JSON.parse(readFileSync(path, "utf-8"));
  } catch (err) {
    throw new Error(`cannot read plot spec ${path}: ${(err as Error).message}`);
  }
  return validateSpec(parsed);
}
