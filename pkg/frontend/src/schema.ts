import { readFileSync } from "node:fs";

/** The CSV magic the experiment runner writes as its first line. */
export const CSV_MAGIC = "# groupwalk-csv v1";

export class SchemaMismatch extends Error {}
export class EmptyData extends Error {}

export interface VersionedCsv {
  kind: string;
  columns: string[];
  rows: Array<Record<string, string>>;
}

/** Parse one of our versioned CSVs; anything off-schema is a SchemaMismatch. */
export function readVersionedCsv(path: string): VersionedCsv {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch (e) {
    throw new SchemaMismatch(`${path}: ${(e as Error).message}`);
  }
  const lines = text.split("\n");
  const first = lines[0] ?? "";
  if (!first.startsWith(`${CSV_MAGIC} kind=`)) {
    throw new SchemaMismatch(`${path}: missing "${CSV_MAGIC} kind=..." header line`);
  }
  const kind = first.slice(first.indexOf("kind=") + 5).trim();
  const headerLine = lines[1];
  if (headerLine === undefined || headerLine === "") {
    throw new SchemaMismatch(`${path}: missing column header row`);
  }
  const columns = headerLine.split(",");
  const rows: Array<Record<string, string>> = [];
  for (let i = 2; i < lines.length; i++) {
    const line = lines[i];
    if (line === undefined || line === "") continue;
    const parts = line.split(",");
    if (parts.length !== columns.length) {
      throw new SchemaMismatch(
        `${path}: row ${i + 1} has ${parts.length} fields, header has ${columns.length}`
      );
    }
    const row: Record<string, string> = {};
    columns.forEach((c, j) => {
      row[c] = parts[j] as string;
    });
    rows.push(row);
  }
  if (rows.length === 0) {
    throw new EmptyData(`${path}: no data rows`);
  }
  return { kind, columns, rows };
}

/** Pull a numeric column, rejecting anything that does not parse finite. */
export function numericColumn(csv: VersionedCsv, name: string, path: string): number[] {
  if (!csv.columns.includes(name)) {
    throw new SchemaMismatch(`${path}: missing column "${name}" (have ${csv.columns.join(", ")})`);
  }
  return csv.rows.map((row, i) => {
    const v = Number(row[name]);
    if (!Number.isFinite(v)) {
      throw new SchemaMismatch(`${path}: row ${i + 1} column "${name}" is not a finite number`);
    }
    return v;
  });
}
