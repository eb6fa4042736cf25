export interface Scale {
  /** map a data value to a pixel coordinate */
  toPixel(value: number): number;
  ticks: { value: number; label: string }[];
  domain: [number, number];
}

function formatTick(value: number): string {
  if (value === 0) return "0";
  const exp = Math.floor(Math.log10(Math.abs(value)));
  if (exp < -3 || exp > 3) {
    const mantissa = value / 10 ** exp;
    return Math.abs(mantissa - 1) < 1e-9 ? `1e${exp}` : `${mantissa.toPrecision(3)}e${exp}`;
  }
  return String(Number(value.toPrecision(6)));
}

export function linearScale(values: number[], pixelRange: [number, number], tickCount = 6): Scale {
  let lo = Math.min(...values);
  let hi = Math.max(...values);
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  const span = hi - lo;
  const step = niceStep(span / Math.max(tickCount - 1, 1));
  const tickLo = Math.ceil(lo / step) * step;
  const ticks = [];
  for (let v = tickLo; v <= hi + 1e-12 * span; v += step) {
    ticks.push({ value: v, label: formatTick(v) });
  }
  const [p0, p1] = pixelRange;
  return {
    toPixel: (v) => p0 + ((v - lo) / (hi - lo)) * (p1 - p0),
    ticks,
    domain: [lo, hi],
  };
}

function niceStep(rough: number): number {
  const mag = 10 ** Math.floor(Math.log10(rough));
  const normalized = rough / mag;
  const nice = normalized <= 1 ? 1 : normalized <= 2 ? 2 : normalized <= 5 ? 5 : 10;
  return nice * mag;
}

export function logScale(values: number[], pixelRange: [number, number]): Scale {
  const positive = values.filter((v) => v > 0);
  if (positive.length === 0) {
    throw new Error("log scale needs at least one positive value");
  }
  let lo = Math.min(...positive);
  let hi = Math.max(...positive);
  if (lo === hi) {
    lo /= 10;
    hi *= 10;
  }
  const eLo = Math.floor(Math.log10(lo));
  const eHi = Math.ceil(Math.log10(hi));
  const ticks = [];
  for (let e = eLo; e <= eHi; e++) {
    const v = 10 ** e;
    if (v >= lo / (1 + 1e-12) && v <= hi * (1 + 1e-12)) {
      ticks.push({ value: v, label: `1e${e}` });
    }
  }
  const [p0, p1] = pixelRange;
  const logLo = Math.log10(lo);
  const logHi = Math.log10(hi);
  return {
    toPixel: (v) => p0 + ((Math.log10(v) - logLo) / (logHi - logLo)) * (p1 - p0),
    ticks,
    domain: [lo, hi],
  };
}
