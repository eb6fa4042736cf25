import { describe, expect, it } from "vitest";
import { linearScale, logScale } from "../src/scale.js";

describe("linearScale", () => {
  it("maps the domain endpoints onto the pixel range", () => {
    const s = linearScale([0, 10], [100, 500]);
    expect(s.toPixel(0)).toBeCloseTo(100);
    expect(s.toPixel(10)).toBeCloseTo(500);
    expect(s.toPixel(5)).toBeCloseTo(300);
  });

  it("produces ticks inside the domain", () => {
    const s = linearScale([0.1, 0.9], [0, 1]);
    expect(s.ticks.length).toBeGreaterThan(2);
    for (const t of s.ticks) {
      expect(t.value).toBeGreaterThanOrEqual(0.1 - 1e-12);
      expect(t.value).toBeLessThanOrEqual(0.9 + 1e-12);
    }
  });

  it("widens a degenerate domain instead of dividing by zero", () => {
    const s = linearScale([2, 2], [0, 100]);
    expect(Number.isFinite(s.toPixel(2))).toBe(true);
  });
});

describe("logScale", () => {
  it("is linear in the exponent", () => {
    const s = logScale([1e-4, 1e-1], [0, 300]);
    expect(s.toPixel(1e-4)).toBeCloseTo(0);
    expect(s.toPixel(1e-1)).toBeCloseTo(300);
    expect(s.toPixel(1e-3)).toBeCloseTo(100);
    expect(s.toPixel(1e-2)).toBeCloseTo(200);
  });

  it("places decade ticks with exponent labels", () => {
    const s = logScale([1e-4, 1e-1], [0, 300]);
    expect(s.ticks.map((t) => t.label)).toEqual(["1e-4", "1e-3", "1e-2", "1e-1"]);
  });

  it("rejects an all-non-positive domain", () => {
    expect(() => logScale([0, -1], [0, 1])).toThrow(/positive/);
  });
});
