import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

import { linearFit, loglogFit, median } from "../src/fit.js";
import { numericColumn, readVersionedCsv } from "../src/schema.js";

const fixture = (name: string) => fileURLToPath(new URL(`./fixtures/${name}`, import.meta.url));

describe("linearFit", () => {
  it("recovers an exact line with r2 = 1", () => {
    const fit = linearFit([1, 2, 3, 4], [3, 5, 7, 9]);
    expect(fit.slope).toBeCloseTo(2, 12);
    expect(fit.intercept).toBeCloseTo(1, 12);
    expect(fit.r2).toBe(1);
  });

  it("keeps r2 inside [0, 1] on noisy data", () => {
    const fit = linearFit([1, 2, 3, 4, 5], [2.1, 3.9, 6.2, 7.8, 10.3]);
    expect(fit.r2).toBeGreaterThan(0.99);
    expect(fit.r2).toBeLessThanOrEqual(1);
  });

  it("needs three points and two distinct x values", () => {
    expect(() => linearFit([1, 2], [1, 2])).toThrow(/at least 3/);
    expect(() => linearFit([2, 2, 2], [1, 2, 3])).toThrow(/distinct/);
  });
});

describe("loglogFit", () => {
  it("recovers a power law", () => {
    const xs = [64, 256, 1024, 4096];
    const ys = xs.map((x) => 3 / Math.sqrt(x));
    const fit = loglogFit(xs, ys);
    expect(fit.slope).toBeCloseTo(-0.5, 12);
    expect(fit.intercept).toBeCloseTo(Math.log(3), 12);
    expect(fit.r2).toBe(1);
  });

  it("rejects non-positive values", () => {
    expect(() => loglogFit([1, 2, 0], [1, 2, 3])).toThrow(/positive/);
    expect(() => loglogFit([1, 2, 3], [1, -2, 3])).toThrow(/positive/);
  });
});

describe("median", () => {
  it("matches the even-count average convention", () => {
    expect(median([5, 1, 3])).toBe(3);
    expect(median([4, 1, 3, 2])).toBe(2.5);
    expect(() => median([])).toThrow();
  });
});

describe("cross-check against the experiment runner", () => {
  it("reproduces the runner's rate fit on the same CSV", () => {
    const expected = JSON.parse(readFileSync(fixture("fixtures.json"), "utf8")) as {
      clt_rate: { slope: number; intercept: number; r2: number };
    };
    const csv = readVersionedCsv(fixture("clt_rate.csv"));
    const fit = loglogFit(numericColumn(csv, "n", "clt_rate.csv"), numericColumn(csv, "distance", "clt_rate.csv"));
    expect(Math.abs(fit.slope - expected.clt_rate.slope)).toBeLessThan(1e-9);
    expect(Math.abs(fit.intercept - expected.clt_rate.intercept)).toBeLessThan(1e-9);
    expect(Math.abs(fit.r2 - expected.clt_rate.r2)).toBeLessThan(1e-9);
  });
});
