/** Least-squares fits mirroring the experiment runner's rate fitting. */

export interface LineFit {
  slope: number;
  intercept: number;
  r2: number;
}

/** Plain least squares of y on x with the runner's r2 conventions. */
export function linearFit(xs: number[], ys: number[]): LineFit {
  if (xs.length !== ys.length || xs.length < 3) {
    throw new Error(`need at least 3 paired points, got ${xs.length}`);
  }
  const n = xs.length;
  const mx = xs.reduce((a, b) => a + b, 0) / n;
  const my = ys.reduce((a, b) => a + b, 0) / n;
  let sxx = 0;
  let sxy = 0;
  for (let i = 0; i < n; i++) {
    const dx = (xs[i] as number) - mx;
    sxx += dx * dx;
    sxy += dx * ((ys[i] as number) - my);
  }
  if (sxx === 0) {
    throw new Error("need at least 2 distinct x values");
  }
  const slope = sxy / sxx;
  const intercept = my - slope * mx;
  let ssRes = 0;
  let ssTot = 0;
  for (let i = 0; i < n; i++) {
    const resid = (ys[i] as number) - (slope * (xs[i] as number) + intercept);
    ssRes += resid * resid;
    const dy = (ys[i] as number) - my;
    ssTot += dy * dy;
  }
  const r2 = ssTot === 0 ? 1 : 1 - ssRes / ssTot;
  return { slope, intercept, r2: Math.min(1, Math.max(0, r2)) };
}

/** Power-law fit on (log x, log y); x and y must be strictly positive. */
export function loglogFit(xs: number[], ys: number[]): LineFit {
  if (xs.some((v) => v <= 0) || ys.some((v) => v <= 0)) {
    throw new Error("log-log fit needs strictly positive x and y");
  }
  return linearFit(xs.map(Math.log), ys.map(Math.log));
}

/** Median with the usual even-count average, matching numpy. */
export function median(values: number[]): number {
  if (values.length === 0) {
    throw new Error("median of nothing");
  }
  const sorted = [...values].sort((a, b) => a - b);
  const mid = sorted.length >> 1;
  return sorted.length % 2 === 1
    ? (sorted[mid] as number)
    : ((sorted[mid - 1] as number) + (sorted[mid] as number)) / 2;
}
