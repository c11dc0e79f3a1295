/** Tiny deterministic SVG builder: pure string assembly, no timestamps. */

export const WIDTH = 640;
export const HEIGHT = 440;
export const MARGIN = { left: 64, right: 20, top: 34, bottom: 48 };

export interface Scale {
  (v: number): number;
  domain: [number, number];
}

/** Affine map from a data domain onto a pixel range. */
export function scale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 === 0 ? 1 : d1 - d0;
  const f = ((v: number) => r0 + ((v - d0) / span) * (r1 - r0)) as Scale;
  f.domain = domain;
  return f;
}

export function extent(values: number[], pad = 0.05): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  const span = hi - lo || Math.abs(hi) || 1;
  return [lo - pad * span, hi + pad * span];
}

function fmtCoord(v: number): string {
  return v.toFixed(2);
}

export function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function line(x1: number, y1: number, x2: number, y2: number, style: string): string {
  return `<line x1="${fmtCoord(x1)}" y1="${fmtCoord(y1)}" x2="${fmtCoord(x2)}" y2="${fmtCoord(y2)}" ${style}/>`;
}

export function polyline(points: Array<[number, number]>, style: string): string {
  const path = points.map(([x, y]) => `${fmtCoord(x)},${fmtCoord(y)}`).join(" ");
  return `<polyline points="${path}" fill="none" ${style}/>`;
}

export function circle(x: number, y: number, r: number, style: string): string {
  return `<circle cx="${fmtCoord(x)}" cy="${fmtCoord(y)}" r="${r}" ${style}/>`;
}

export function text(
  x: number,
  y: number,
  content: string,
  anchor: "start" | "middle" | "end" = "start",
  extra = ""
): string {
  return (
    `<text x="${fmtCoord(x)}" y="${fmtCoord(y)}" text-anchor="${anchor}" ` +
    `font-family="monospace" font-size="12"${extra ? " " + extra : ""}>${esc(content)}</text>`
  );
}

/** Tick positions and labels for a log10 axis between two decades. */
export function log10Ticks(lo: number, hi: number): Array<{ value: number; label: string }> {
  const ticks: Array<{ value: number; label: string }> = [];
  for (let e = Math.ceil(lo - 1e-9); e <= Math.floor(hi + 1e-9); e++) {
    ticks.push({ value: e, label: `1e${e}` });
  }
  if (ticks.length < 2) {
    ticks.length = 0;
    ticks.push({ value: lo, label: lo.toFixed(2) }, { value: hi, label: hi.toFixed(2) });
  }
  return ticks;
}

/** Evenly spaced linear ticks with short labels. */
export function linearTicks(lo: number, hi: number, count = 5): Array<{ value: number; label: string }> {
  const ticks: Array<{ value: number; label: string }> = [];
  for (let i = 0; i < count; i++) {
    const v = lo + ((hi - lo) * i) / (count - 1);
    ticks.push({ value: v, label: Math.abs(v) >= 1000 ? v.toExponential(1) : v.toPrecision(3) });
  }
  return ticks;
}

export interface Frame {
  x: Scale;
  y: Scale;
  body: string[];
}

/** Open a figure frame: background, axes box, title, axis labels, ticks. */
export function frame(
  title: string,
  xDomain: [number, number],
  yDomain: [number, number],
  xLabel: string,
  yLabel: string,
  xTicks: Array<{ value: number; label: string }>,
  yTicks: Array<{ value: number; label: string }>
): Frame {
  const x = scale(xDomain, [MARGIN.left, WIDTH - MARGIN.right]);
  const y = scale(yDomain, [HEIGHT - MARGIN.bottom, MARGIN.top]);
  const body: string[] = [];
  body.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  body.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${WIDTH - MARGIN.left - MARGIN.right}" ` +
      `height="${HEIGHT - MARGIN.top - MARGIN.bottom}" fill="none" stroke="#444" stroke-width="1"/>`
  );
  body.push(text(WIDTH / 2, MARGIN.top - 12, title, "middle"));
  body.push(text(WIDTH / 2, HEIGHT - 10, xLabel, "middle"));
  body.push(
    `<text x="16" y="${HEIGHT / 2}" text-anchor="middle" font-family="monospace" ` +
      `font-size="12" transform="rotate(-90 16 ${HEIGHT / 2})">${esc(yLabel)}</text>`
  );
  for (const t of xTicks) {
    const px = x(t.value);
    body.push(line(px, HEIGHT - MARGIN.bottom, px, HEIGHT - MARGIN.bottom + 5, 'stroke="#444"'));
    body.push(text(px, HEIGHT - MARGIN.bottom + 18, t.label, "middle"));
  }
  for (const t of yTicks) {
    const py = y(t.value);
    body.push(line(MARGIN.left - 5, py, MARGIN.left, py, 'stroke="#444"'));
    body.push(text(MARGIN.left - 8, py + 4, t.label, "end"));
  }
  return { x, y, body };
}

export function close(f: Frame): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
    `viewBox="0 0 ${WIDTH} ${HEIGHT}">\n` +
    f.body.join("\n") +
    "\n</svg>\n"
  );
}
