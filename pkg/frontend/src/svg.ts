import { CsvTable, numericColumn } from "./csv.js";
import { linearScale, logScale, Scale } from "./scale.js";
import { LineStyle, PlotSpec } from "./spec.js";

const WIDTH = 640;
const HEIGHT = 420;
const MARGIN = { top: 24, right: 24, bottom: 52, left: 64 };

const DASH: Record<LineStyle, string> = {
  solid: "none",
  dotted: "2,4",
  dashed: "8,6",
};

const COLORS = ["#1a1a1a", "#2166ac", "#b2182b", "#4d9221"];

export interface Series {
  name: string;
  x: number[];
  y: number[];
  style: LineStyle;
}

/** Assemble the plotted series from the CSV per the plot spec; on a log
 * axis, rows with non-positive x are dropped (and reported). */
export function extractSeries(
  table: CsvTable,
  spec: PlotSpec,
  warn: (msg: string) => void = () => {}
): Series[] {
  const xAll = numericColumn(table, spec.x_column);
  return spec.y_columns.map((name) => {
    const yAll = numericColumn(table, name);
    let x = xAll;
    let y = yAll;
    if (spec.x_scale === "log") {
      const keep = xAll.map((v) => v > 0);
      const dropped = keep.filter((k) => !k).length;
      if (dropped > 0) {
        warn(`dropping ${dropped} row(s) with non-positive ${spec.x_column} from the log axis`);
      }
      x = xAll.filter((_, i) => keep[i]);
      y = yAll.filter((_, i) => keep[i]);
    }
    if (x.length === 0) {
      throw new Error(`series "${name}" is empty after axis filtering`);
    }
    return { name, x, y, style: spec.styles[name] };
  });
}

function pathFor(series: Series, xs: Scale, ys: Scale): string {
  return series.x
    .map((xv, i) => {
      const cmd = i === 0 ? "M" : "L";
      return `${cmd}${xs.toPixel(xv).toFixed(2)},${ys.toPixel(series.y[i]).toFixed(2)}`;
    })
    .join(" ");
}

export function renderSvg(table: CsvTable, spec: PlotSpec, warn?: (msg: string) => void): string {
  const series = extractSeries(table, spec, warn);
  const xValues = series.flatMap((s) => s.x);
  const yValues = series.flatMap((s) => s.y);

  const xRange: [number, number] = [MARGIN.left, WIDTH - MARGIN.right];
  const yRange: [number, number] = [HEIGHT - MARGIN.bottom, MARGIN.top];
  const xs = spec.x_scale === "log" ? logScale(xValues, xRange) : linearScale(xValues, xRange);
  const ys = linearScale(yValues, yRange);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif" font-size="12">`
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);

  // frame
  const x0 = MARGIN.left;
  const x1 = WIDTH - MARGIN.right;
  const y0 = HEIGHT - MARGIN.bottom;
  const y1 = MARGIN.top;
  parts.push(
    `<rect x="${x0}" y="${y1}" width="${x1 - x0}" height="${y0 - y1}" fill="none" stroke="#333" stroke-width="1"/>`
  );

  // ticks and grid
  for (const tick of xs.ticks) {
    const px = xs.toPixel(tick.value).toFixed(2);
    parts.push(`<line x1="${px}" y1="${y0}" x2="${px}" y2="${y0 + 5}" stroke="#333"/>`);
    parts.push(`<line x1="${px}" y1="${y0}" x2="${px}" y2="${y1}" stroke="#ddd" stroke-width="0.5"/>`);
    parts.push(`<text x="${px}" y="${y0 + 18}" text-anchor="middle">${tick.label}</text>`);
  }
  for (const tick of ys.ticks) {
    const py = ys.toPixel(tick.value).toFixed(2);
    parts.push(`<line x1="${x0 - 5}" y1="${py}" x2="${x0}" y2="${py}" stroke="#333"/>`);
    parts.push(`<line x1="${x0}" y1="${py}" x2="${x1}" y2="${py}" stroke="#ddd" stroke-width="0.5"/>`);
    parts.push(`<text x="${x0 - 8}" y="${py}" text-anchor="end" dominant-baseline="middle">${tick.label}</text>`);
  }

  // axis labels
  parts.push(
    `<text x="${(x0 + x1) / 2}" y="${HEIGHT - 12}" text-anchor="middle">${spec.x_column}</text>`
  );
  parts.push(
    `<text x="16" y="${(y0 + y1) / 2}" text-anchor="middle" ` +
      `transform="rotate(-90 16 ${(y0 + y1) / 2})">${spec.y_columns.join(", ")}</text>`
  );

  // series (markers too, so single-point series stay visible)
  series.forEach((s, i) => {
    const color = COLORS[i % COLORS.length];
    if (s.x.length > 1) {
      parts.push(
        `<path d="${pathFor(s, xs, ys)}" fill="none" stroke="${color}" stroke-width="1.6" ` +
          `stroke-dasharray="${DASH[s.style]}"/>`
      );
    }
    for (let k = 0; k < s.x.length; k++) {
      parts.push(
        `<circle cx="${xs.toPixel(s.x[k]).toFixed(2)}" cy="${ys.toPixel(s.y[k]).toFixed(2)}" ` +
          `r="2.2" fill="${color}"/>`
      );
    }
  });

  // legend
  series.forEach((s, i) => {
    const color = COLORS[i % COLORS.length];
    const ly = y1 + 16 + 18 * i;
    parts.push(
      `<line x1="${x0 + 12}" y1="${ly}" x2="${x0 + 44}" y2="${ly}" stroke="${color}" ` +
        `stroke-width="1.6" stroke-dasharray="${DASH[s.style]}"/>`
    );
    parts.push(`<text x="${x0 + 50}" y="${ly + 4}">${s.name} (${s.style})</text>`);
  });

  parts.push("</svg>");
  return parts.join("\n");
}
