#!/usr/bin/env node
import { realpathSync } from "node:fs";
import { pathToFileURL } from "node:url";
import { parseArgs } from "node:util";

import { PLOT_KINDS, render, type PlotKind, type PlotSpec } from "./render.js";
import { EmptyData, SchemaMismatch } from "./schema.js";

const USAGE = `usage: plot <kind> --in <csv> --out <svg> [--theory-exponent <v>]

kinds: ${PLOT_KINDS.join(", ")}`;

/** Join "--theory-exponent -0.5" so parseArgs does not read the value as a flag. */
function foldNegativeValues(argv: string[]): string[] {
  const out: string[] = [];
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i] as string;
    const next = argv[i + 1];
    if (arg === "--theory-exponent" && next !== undefined && /^-\d/.test(next)) {
      out.push(`${arg}=${next}`);
      i++;
    } else {
      out.push(arg);
    }
  }
  return out;
}

/** Parse argv and render one figure. Returns a process exit code. */
export function run(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs({
      args: foldNegativeValues(argv),
      allowPositionals: true,
      options: {
        in: { type: "string" },
        out: { type: "string" },
        "theory-exponent": { type: "string" },
        help: { type: "boolean", short: "h" },
      },
    });
  } catch (err) {
    process.stderr.write(`${(err as Error).message}\n${USAGE}\n`);
    return 2;
  }
  if (parsed.values.help) {
    process.stdout.write(`${USAGE}\n`);
    return 0;
  }
  const kind = parsed.positionals[0];
  if (parsed.positionals.length !== 1 || !PLOT_KINDS.includes(kind as PlotKind)) {
    process.stderr.write(`expected one plot kind\n${USAGE}\n`);
    return 2;
  }
  const input = parsed.values.in;
  const output = parsed.values.out;
  if (input === undefined || output === undefined) {
    process.stderr.write(`--in and --out are required\n${USAGE}\n`);
    return 2;
  }
  const spec: PlotSpec = { kind: kind as PlotKind, input, output };
  const theory = parsed.values["theory-exponent"];
  if (theory !== undefined) {
    const v = Number(theory);
    if (!Number.isFinite(v)) {
      process.stderr.write(`--theory-exponent must be a finite number, got "${theory}"\n`);
      return 2;
    }
    spec.theoryExponent = v;
  }
  try {
    render(spec);
  } catch (err) {
    if (err instanceof SchemaMismatch || err instanceof EmptyData) {
      process.stderr.write(`${(err as Error).message}\n`);
      return 2;
    }
    process.stderr.write(`${(err as Error).message}\n`);
    return 3;
  }
  process.stdout.write(`wrote ${output}\n`);
  return 0;
}

const invoked = process.argv[1];
if (invoked !== undefined && pathToFileURL(realpathSync(invoked)).href === import.meta.url) {
  process.exit(run(process.argv.slice(2)));
}
