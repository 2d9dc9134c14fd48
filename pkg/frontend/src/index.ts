export { renderCloud, type CloudPlotOptions } from "./cloud.js";
export { FormatError } from "./csv.js";
export {
  loadCloud,
  loadCloudCsv,
  loadCloudPly,
  loadGridMap,
  loadMetricRows,
  loadScene,
  type CloudPoint,
  type GridMap,
  type MetricRow,
} from "./formats.js";
export { renderHeatmap, type HeatmapOptions } from "./heatmap.js";
export { isMonotoneDecreasing, renderSweep, type SweepPlotOptions } from "./sweep.js";
export { KINDS, main, parseJob, runJob, UsageError, type PlotJob, type PlotKind } from "./cli.js";
