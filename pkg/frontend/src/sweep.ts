/**
 * Deviation-vs-SNR curves from sweep.csv or metrics.csv rows: one solid
 * curve per algorithm, optional dashed component curves.
 */

import { FormatError } from "./csv.js";
import type { MetricRow } from "./formats.js";
import { linearScale, niceTicks, tickLabel } from "./scale.js";
import { circle, fmt, line, svgDocument, tag, text } from "./svg.js";

export interface SweepPlotOptions {
  width?: number;
  height?: number;
  title?: string;
  /** metric column drawn as the solid curve (default overall_deviation) */
  metric?: string;
  /** also draw spatial/kinematic component curves, dashed */
  components?: boolean;
}

const PALETTE = ["#1f6fb4", "#d0482b", "#3a8c5c", "#8b5ca8", "#b8860b"];
const COMPONENTS = ["spatial_deviation", "kinematic_deviation"];
const MARGIN = { left: 60, right: 24, top: 48, bottom: 48 };

interface Curve {
  algorithm: string;
  color: string;
  /** SNR-sorted (snr, value) points */
  points: Array<[number, number]>;
  /** points dropped because the metric column was absent or not finite */
  dropped: number;
}

function curveFor(rows: MetricRow[], algorithm: string, metric: string, color: string): Curve {
  const mine = rows.filter((r) => r.algorithm === algorithm);
  const points = mine
    .filter((r) => Number.isFinite(r.values[metric]))
    .map((r): [number, number] => [r.snrDb, r.values[metric]])
    .sort((a, b) => a[0] - b[0]);
  return { algorithm, color, points, dropped: mine.length - points.length };
}

function polyline(points: Array<[number, number]>, sx: (v: number) => number, sy: (v: number) => number, attrs: Record<string, string | number>): string {
  const coords = points.map(([x, y]) => `${fmt(sx(x))},${fmt(sy(y))}`).join(" ");
  return tag("polyline", { points: coords, fill: "none", ...attrs });
}

/** True when the curve strictly falls as SNR rises (needs 2+ points). */
export function isMonotoneDecreasing(points: Array<[number, number]>): boolean {
  if (points.length < 2) return false;
  for (let i = 1; i < points.length; i++) {
    if (!(points[i][1] < points[i - 1][1])) return false;
  }
  return true;
}

export function renderSweep(rows: MetricRow[], opts: SweepPlotOptions = {}): string {
  if (rows.length === 0) {
    throw new FormatError("no sweep rows to plot");
  }
  const width = opts.width ?? 640;
  const height = opts.height ?? 420;
  const metric = opts.metric ?? "overall_deviation";
  if (!rows.some((r) => Number.isFinite(r.values[metric]))) {
    throw new FormatError(`no ${metric} column in the sweep rows`);
  }

  const algorithms = [...new Set(rows.map((r) => r.algorithm))];
  const curves = algorithms.map((a, i) => curveFor(rows, a, metric, PALETTE[i % PALETTE.length]));
  const snrs = [...new Set(rows.map((r) => r.snrDb))].sort((a, b) => a - b);

  const allValues = curves.flatMap((c) => c.points.map((p) => p[1]));
  const yTop = Math.max(1, ...allValues) * 1.05;
  const sx = linearScale(
    [snrs[0], snrs.length > 1 ? snrs[snrs.length - 1] : snrs[0] + 1],
    [MARGIN.left, width - MARGIN.right],
  );
  const sy = linearScale([0, yTop], [height - MARGIN.bottom, MARGIN.top]);

  const body: string[] = [];
  for (const tick of niceTicks(0, yTop, 5)) {
    body.push(line(MARGIN.left, sy(tick), width - MARGIN.right, sy(tick), { stroke: "#e4e4e4", "stroke-width": 0.7 }));
    body.push(text(MARGIN.left - 7, sy(tick) + 3, tickLabel(tick), { "font-size": 9, "text-anchor": "end", fill: "#444" }));
  }
  for (const tick of snrs) {
    body.push(line(sx(tick), height - MARGIN.bottom, sx(tick), height - MARGIN.bottom + 4, { stroke: "#333", "stroke-width": 0.7 }));
    body.push(text(sx(tick), height - MARGIN.bottom + 15, tickLabel(tick), { "font-size": 9, "text-anchor": "middle", fill: "#444" }));
  }
  body.push(line(MARGIN.left, height - MARGIN.bottom, width - MARGIN.right, height - MARGIN.bottom, { stroke: "#333", "stroke-width": 0.8 }));
  body.push(line(MARGIN.left, MARGIN.top, MARGIN.left, height - MARGIN.bottom, { stroke: "#333", "stroke-width": 0.8 }));
  body.push(text((MARGIN.left + width - MARGIN.right) / 2, height - 10, "SNR (dB)", { "font-size": 11, "text-anchor": "middle", fill: "#333" }));
  body.push(
    text(14, (MARGIN.top + height - MARGIN.bottom) / 2, metric.replace(/_/g, " "), {
      "font-size": 11,
      "text-anchor": "middle",
      fill: "#333",
      transform: `rotate(-90 14 ${fmt((MARGIN.top + height - MARGIN.bottom) / 2)})`,
    }),
  );

  let legendY = 16;
  for (const curve of curves) {
    if (curve.points.length > 1) {
      body.push(polyline(curve.points, sx, sy, { stroke: curve.color, "stroke-width": 1.8, class: "curve" }));
    }
    for (const [x, y] of curve.points) {
      body.push(circle(sx(x), sy(y), 3, { fill: curve.color, class: "curve-point" }));
    }
    if (opts.components) {
      for (const [k, component] of COMPONENTS.entries()) {
        const extra = curveFor(rows, curve.algorithm, component, curve.color);
        if (extra.points.length > 1) {
          body.push(
            polyline(extra.points, sx, sy, {
              stroke: curve.color,
              "stroke-width": 1,
              "stroke-dasharray": k === 0 ? "5 3" : "2 3",
              opacity: 0.7,
            }),
          );
        }
      }
    }

    const notes: string[] = [];
    if (curve.points.length < snrs.length || curve.dropped > 0) {
      notes.push(`${curve.points.length}/${snrs.length} points`);
    }
    if (isMonotoneDecreasing(curve.points)) {
      notes.push("monotone");
    }
    const label = notes.length > 0 ? `${curve.algorithm} (${notes.join(", ")})` : curve.algorithm;
    legendY += 14;
    body.push(line(MARGIN.left + 8, legendY - 3, MARGIN.left + 28, legendY - 3, { stroke: curve.color, "stroke-width": 1.8 }));
    body.push(text(MARGIN.left + 33, legendY, label, { "font-size": 10, fill: "#333", class: "legend" }));
  }

  if (opts.title) {
    body.push(text(width / 2, 18, opts.title, { "font-size": 13, "text-anchor": "middle", fill: "#111" }));
  }
  return svgDocument(width, height, body);
}
