import { mkdirSync, writeFileSync } from "node:fs";
import { dirname } from "node:path";

import { linearFit, loglogFit, median } from "./fit.js";
import {
  EmptyData,
  SchemaMismatch,
  numericColumn,
  readVersionedCsv,
  type VersionedCsv,
} from "./schema.js";
import {
  HEIGHT,
  MARGIN,
  WIDTH,
  circle,
  close,
  frame,
  line,
  linearTicks,
  log10Ticks,
  polyline,
  text,
  type Frame,
} from "./svg.js";

export const PLOT_KINDS = ["rate_loglog", "asip_ratio", "decay", "tail_bound"] as const;
export type PlotKind = (typeof PLOT_KINDS)[number];

/** CSV kind each figure consumes, as written by the experiment runner. */
const EXPECTED_CSV: Record<PlotKind, string> = {
  rate_loglog: "clt_rate",
  asip_ratio: "asip_summary",
  decay: "decay",
  tail_bound: "tail_bound",
};

export interface PlotSpec {
  kind: PlotKind;
  input: string;
  output: string;
  theoryExponent?: number;
}

const LOG10E = Math.LOG10E;

function annotate(f: Frame, lines: string[]): void {
  lines.forEach((content, i) => {
    f.body.push(text(WIDTH - MARGIN.right - 8, MARGIN.top + 16 + 14 * i, content, "end"));
  });
}

function loadFor(spec: PlotSpec): VersionedCsv {
  if (!PLOT_KINDS.includes(spec.kind)) {
    throw new SchemaMismatch(`unknown plot kind "${spec.kind}"; have ${PLOT_KINDS.join(", ")}`);
  }
  const csv = readVersionedCsv(spec.input);
  const expected = EXPECTED_CSV[spec.kind];
  if (csv.kind !== expected) {
    throw new SchemaMismatch(
      `${spec.input}: is a "${csv.kind}" CSV; the ${spec.kind} figure needs "${expected}"`
    );
  }
  return csv;
}

function renderRateLoglog(spec: PlotSpec, csv: VersionedCsv): string {
  const ns = numericColumn(csv, "n", spec.input);
  const ds = numericColumn(csv, "distance", spec.input);
  if (ds.some((v) => v <= 0) || ns.some((v) => v <= 0)) {
    throw new SchemaMismatch(`${spec.input}: rate figure needs positive n and distance`);
  }
  const lx = ns.map(Math.log10);
  const ly = ds.map(Math.log10);
  const fit = loglogFit(ns, ds);
  const f = frame(
    "W1 distance to the Gaussian limit",
    [Math.min(...lx) - 0.15, Math.max(...lx) + 0.15],
    [Math.min(...ly) - 0.2, Math.max(...ly) + 0.2],
    "n (log10)",
    "W1 (log10)",
    log10Ticks(Math.min(...lx), Math.max(...lx)),
    log10Ticks(Math.min(...ly) - 0.2, Math.max(...ly) + 0.2)
  );
  // fitted power law, converted from natural-log fit to log10 axes
  const yAt = (l: number) => fit.slope * l + fit.intercept * LOG10E;
  f.body.push(
    polyline(
      [
        [f.x(lx[0] as number), f.y(yAt(lx[0] as number))],
        [f.x(lx[lx.length - 1] as number), f.y(yAt(lx[lx.length - 1] as number))],
      ],
      'stroke="#c0392b" stroke-width="1.5"'
    )
  );
  if (spec.theoryExponent !== undefined) {
    const th = spec.theoryExponent;
    const anchor = (ly[0] as number) + 0.18;
    const guide = (l: number) => anchor + th * (l - (lx[0] as number));
    f.body.push(
      polyline(
        [
          [f.x(lx[0] as number), f.y(guide(lx[0] as number))],
          [f.x(lx[lx.length - 1] as number), f.y(guide(lx[lx.length - 1] as number))],
        ],
        'stroke="#2c3e50" stroke-width="1" stroke-dasharray="6 4"'
      )
    );
    annotate(f, [`slope ${fit.slope.toFixed(3)}`, `r2 ${fit.r2.toFixed(3)}`, `theory n^${th.toFixed(2)}`]);
  } else {
    annotate(f, [`slope ${fit.slope.toFixed(3)}`, `r2 ${fit.r2.toFixed(3)}`]);
  }
  lx.forEach((l, i) => {
    f.body.push(circle(f.x(l), f.y(ly[i] as number), 3, 'fill="#2980b9"'));
  });
  return close(f);
}

function renderAsipRatio(spec: PlotSpec, csv: VersionedCsv): string {
  const ns = numericColumn(csv, "n", spec.input);
  const r1 = numericColumn(csv, "ratio_item1", spec.input);
  const r2 = numericColumn(csv, "ratio_item2", spec.input);
  const byN = new Map<number, { a: number[]; b: number[] }>();
  ns.forEach((n, i) => {
    const slot = byN.get(n) ?? { a: [], b: [] };
    slot.a.push(r1[i] as number);
    slot.b.push(r2[i] as number);
    byN.set(n, slot);
  });
  const grid = [...byN.keys()].sort((a, b) => a - b);
  const med1 = grid.map((n) => median((byN.get(n) as { a: number[] }).a));
  const med2 = grid.map((n) => median((byN.get(n) as { b: number[] }).b));
  const lx = grid.map(Math.log10);
  const ally = [...med1, ...med2];
  const f = frame(
    "Coupling deviation ratios (medians)",
    [Math.min(...lx) - 0.15, Math.max(...lx) + 0.15],
    [0, Math.max(...ally) * 1.15],
    "n (log10)",
    "sup deviation / rate",
    log10Ticks(Math.min(...lx), Math.max(...lx)),
    linearTicks(0, Math.max(...ally) * 1.15)
  );
  f.body.push(polyline(lx.map((l, i) => [f.x(l), f.y(med1[i] as number)]), 'stroke="#8e44ad" stroke-width="1.5" stroke-dasharray="5 3"'));
  f.body.push(polyline(lx.map((l, i) => [f.x(l), f.y(med2[i] as number)]), 'stroke="#2980b9" stroke-width="1.5"'));
  lx.forEach((l, i) => {
    f.body.push(circle(f.x(l), f.y(med1[i] as number), 3, 'fill="#8e44ad"'));
    f.body.push(circle(f.x(l), f.y(med2[i] as number), 3, 'fill="#2980b9"'));
  });
  const notes: string[] = [];
  if (grid.length >= 3) {
    notes.push(`slope ${loglogFit(grid, med2).slope.toFixed(3)}`);
  }
  if (spec.theoryExponent !== undefined) {
    const th = spec.theoryExponent;
    const guide = (i: number) => (med2[0] as number) * Math.pow((grid[i] as number) / (grid[0] as number), th);
    f.body.push(
      polyline(lx.map((l, i) => [f.x(l), f.y(guide(i))]), 'stroke="#2c3e50" stroke-width="1" stroke-dasharray="6 4"')
    );
    notes.push(`theory n^${th.toFixed(2)}`);
  }
  notes.push("solid: item-2 rate, dashed: item-1 rate");
  annotate(f, notes);
  return close(f);
}

function renderDecay(spec: PlotSpec, csv: VersionedCsv): string {
  const ks = numericColumn(csv, "k", spec.input);
  const est = numericColumn(csv, "estimate", spec.input);
  const err = numericColumn(csv, "stderr", spec.input);
  const lo = Math.min(...est.map((v, i) => v - (err[i] as number)));
  const hi = Math.max(...est.map((v, i) => v + (err[i] as number)));
  const pad = 0.05 * (hi - lo || 1);
  const f = frame(
    "Pair separation under the walk",
    [Math.min(...ks), Math.max(...ks)],
    [lo - pad, hi + pad],
    "steps k",
    "median log distance",
    linearTicks(Math.min(...ks), Math.max(...ks)),
    linearTicks(lo - pad, hi + pad)
  );
  f.body.push(polyline(ks.map((k, i) => [f.x(k), f.y(est[i] as number)]), 'stroke="#27ae60" stroke-width="1.5"'));
  ks.forEach((k, i) => {
    const e = est[i] as number;
    const s = err[i] as number;
    f.body.push(line(f.x(k), f.y(e - s), f.x(k), f.y(e + s), 'stroke="#27ae60" stroke-width="1"'));
  });
  const notes: string[] = [];
  if (ks.length >= 3) {
    // per-step decay rate; the y axis is already logarithmic in distance
    notes.push(`slope ${linearFit(ks, est).slope.toFixed(3)}`);
  }
  if (spec.theoryExponent !== undefined) {
    const th = spec.theoryExponent;
    const guide = (k: number) => (est[0] as number) + th * (k - (ks[0] as number));
    f.body.push(
      polyline(ks.map((k) => [f.x(k), f.y(guide(k))]), 'stroke="#2c3e50" stroke-width="1" stroke-dasharray="6 4"')
    );
    notes.push(`theory ${th.toFixed(2)} per step`);
  }
  annotate(f, notes);
  return close(f);
}

function renderTailBound(spec: PlotSpec, csv: VersionedCsv): string {
  const xs = numericColumn(csv, "x", spec.input);
  const emp = numericColumn(csv, "empirical", spec.input);
  const hiBand = numericColumn(csv, "wilson_hi", spec.input);
  const first = numericColumn(csv, "bound_first_term", spec.input);
  const second = numericColumn(csv, "bound_second_term", spec.input);
  const total = first.map((v, i) => v + (second[i] as number));
  const positives = [...emp, ...hiBand, ...total, ...first, ...second].filter((v) => v > 0);
  if (positives.length === 0) {
    throw new SchemaMismatch(`${spec.input}: all tail values are zero`);
  }
  const floor = Math.min(...positives) / 3;
  const logOf = (v: number) => Math.log10(Math.max(v, floor));
  const ys = [...emp, ...hiBand, ...total].map(logOf);
  const f = frame(
    "Maximal tail vs two-term bound",
    [Math.min(...xs) * 0.95, Math.max(...xs) * 1.05],
    [Math.min(...ys) - 0.3, Math.max(...ys) + 0.3],
    "threshold x",
    "probability (log10)",
    linearTicks(Math.min(...xs), Math.max(...xs)),
    log10Ticks(Math.min(...ys) - 0.3, Math.max(...ys) + 0.3)
  );
  f.body.push(polyline(xs.map((x, i) => [f.x(x), f.y(logOf(total[i] as number))]), 'stroke="#c0392b" stroke-width="1.5"'));
  f.body.push(polyline(xs.map((x, i) => [f.x(x), f.y(logOf(first[i] as number))]), 'stroke="#c0392b" stroke-width="1" stroke-dasharray="6 4"'));
  if (second.some((v) => v > 0)) {
    f.body.push(polyline(xs.map((x, i) => [f.x(x), f.y(logOf(second[i] as number))]), 'stroke="#c0392b" stroke-width="1" stroke-dasharray="2 3"'));
  }
  xs.forEach((x, i) => {
    const e = emp[i] as number;
    const w = hiBand[i] as number;
    f.body.push(line(f.x(x), f.y(logOf(e)), f.x(x), f.y(logOf(w)), 'stroke="#2980b9" stroke-width="1"'));
    f.body.push(line(f.x(x) - 4, f.y(logOf(w)), f.x(x) + 4, f.y(logOf(w)), 'stroke="#2980b9" stroke-width="1"'));
    f.body.push(
      circle(f.x(x), f.y(logOf(e)), 3, e > 0 ? 'fill="#2980b9"' : 'fill="white" stroke="#2980b9"')
    );
  });
  annotate(f, ["solid: bound total", "dashed: gaussian term", "points: empirical + wilson"]);
  return close(f);
}

/** Render one figure to spec.output and return the SVG text. */
export function render(spec: PlotSpec): string {
  const csv = loadFor(spec);
  let svg: string;
  if (spec.kind === "rate_loglog") svg = renderRateLoglog(spec, csv);
  else if (spec.kind === "asip_ratio") svg = renderAsipRatio(spec, csv);
  else if (spec.kind === "decay") svg = renderDecay(spec, csv);
  else svg = renderTailBound(spec, csv);
  mkdirSync(dirname(spec.output), { recursive: true });
  writeFileSync(spec.output, svg);
  return svg;
}

export { EmptyData, SchemaMismatch };
export { HEIGHT, WIDTH };
