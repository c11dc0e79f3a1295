export { linearFit, loglogFit, median, type LineFit } from "./fit.js";
export { PLOT_KINDS, render, type PlotKind, type PlotSpec } from "./render.js";
export {
  CSV_MAGIC,
  EmptyData,
  SchemaMismatch,
  numericColumn,
  readVersionedCsv,
  type VersionedCsv,
} from "./schema.js";
export { run } from "./cli.js";
