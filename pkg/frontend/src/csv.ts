import { readFileSync } from "fs";

export interface CsvTable {
  /** '#'-prefixed key=value metadata lines from the header block */
  metadata: Record<string, string>;
  columns: string[];
  /** raw cells, one array per data row */
  rows: string[][];
}

/** Parse a sweep CSV: '#'-prefixed metadata block, a header row, data rows. */
export function parseCsv(text: string): CsvTable {
  const metadata: Record<string, string> = {};
  let columns: string[] | null = null;
  const rows: string[][] = [];

  for (const rawLine of text.split(/\r?\n/)) {
    const line = rawLine.trim();
    if (line === "") continue;
    if (line.startsWith("#")) {
      const body = line.slice(1).trim();
      const eq = body.indexOf("=");
      if (eq > 0) metadata[body.slice(0, eq)] = body.slice(eq + 1);
      continue;
    }
    const cells = line.split(",");
    if (columns === null) {
      columns = cells.map((c) => c.trim());
      continue;
    }
    if (cells.length !== columns.length) {
      throw new Error(
        `malformed CSV: row has ${cells.length} cells, header has ${columns.length}`
      );
    }
    rows.push(cells);
  }

  if (columns === null) throw new Error("malformed CSV: no header row found");
  return { metadata, columns, rows };
}

export function readCsv(path: string): CsvTable {
  return parseCsv(readFileSync(path, "utf-8"));
}

/** Extract one column as numbers; the column must exist and parse cleanly. */
export function numericColumn(table: CsvTable, name: string): number[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new Error(
      `column "${name}" not found in CSV header (have: ${table.columns.join(", ")})`
    );
  }
  return table.rows.map((row, i) => {
    const value = Number(row[idx]);
    if (!Number.isFinite(value)) {
      throw new Error(`column "${name}" has a non-numeric value in row ${i + 1}: "${row[idx]}"`);
    }
    return value;
  });
}
