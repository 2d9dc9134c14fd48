/**
 * Point-cloud scatter: an oblique 3D projection of (x, y, z) with marker
 * color keyed to radial velocity, plus an optional ground-truth overlay.
 */

import { colorbar, divergingColor, rampScale } from "./color.js";
import type { CloudPoint } from "./formats.js";
import { linearScale, niceTicks, tickLabel } from "./scale.js";
import { circle, line, svgDocument, text } from "./svg.js";

export interface CloudPlotOptions {
  width?: number;
  height?: number;
  title?: string;
  /** true scene points, drawn as hollow rings under the estimates */
  truth?: CloudPoint[];
}

// cabinet projection: depth (away from the viewer) shifts up-right at
// 30 degrees with half foreshortening
const DEPTH_ANGLE = Math.PI / 6;
const DEPTH_SCALE = 0.45;
const MARGIN = { left: 56, right: 96, top: 44, bottom: 44 };

interface Bounds {
  x: [number, number];
  y: [number, number];
  z: [number, number];
}

function bounds(points: CloudPoint[]): Bounds {
  if (points.length === 0) {
    return { x: [0, 10], y: [0, 10], z: [0, 5] };
  }
  const pad = (lo: number, hi: number): [number, number] => {
    const margin = Math.max(1, (hi - lo) * 0.05);
    return [lo - margin, hi + margin];
  };
  const of = (pick: (p: CloudPoint) => number): [number, number] =>
    pad(Math.min(...points.map(pick)), Math.max(...points.map(pick)));
  const zs = points.map((p) => p.z);
  return { x: of((p) => p.x), y: of((p) => p.y), z: [Math.min(0, ...zs), Math.max(...zs) + 1] };
}

export function renderCloud(points: CloudPoint[], opts: CloudPlotOptions = {}): string {
  const width = opts.width ?? 640;
  const height = opts.height ?? 480;
  const truth = opts.truth ?? [];
  const everything = [...points, ...truth];
  const box = bounds(everything);

  // depth measured from the near face of the bounding box; the viewer sits
  // at large y (where the base station is), so small y is far away
  const depth = (y: number) => (box.y[1] - y) * DEPTH_SCALE;
  const projX = (x: number, y: number) => x + depth(y) * Math.cos(DEPTH_ANGLE);
  const projZ = (z: number, y: number) => z + depth(y) * Math.sin(DEPTH_ANGLE);

  const corners: Array<[number, number]> = [];
  for (const x of box.x) {
    for (const y of box.y) {
      corners.push([projX(x, y), projZ(box.z[0], y)]);
      corners.push([projX(x, y), projZ(box.z[1], y)]);
    }
  }
  const px: [number, number] = [
    Math.min(...corners.map((c) => c[0])),
    Math.max(...corners.map((c) => c[0])),
  ];
  const pz: [number, number] = [
    Math.min(...corners.map((c) => c[1])),
    Math.max(...corners.map((c) => c[1])),
  ];
  const sx = linearScale(px, [MARGIN.left, width - MARGIN.right]);
  const sy = linearScale(pz, [height - MARGIN.bottom, MARGIN.top]);
  const toScreen = (p: { x: number; y: number; z: number }): [number, number] => [
    sx(projX(p.x, p.y)),
    sy(projZ(p.z, p.y)),
  ];

  const body: string[] = [];

  // ground grid at z = 0 with axis ticks on the near and left edges
  const gridAttrs = { stroke: "#d8d8d8", "stroke-width": 0.7 };
  for (const xt of niceTicks(box.x[0], box.x[1], 6)) {
    const [x1, y1] = toScreen({ x: xt, y: box.y[0], z: 0 });
    const [x2, y2] = toScreen({ x: xt, y: box.y[1], z: 0 });
    body.push(line(x1, y1, x2, y2, gridAttrs));
    body.push(
      text(x2, y2 + 14, tickLabel(xt), { "font-size": 9, "text-anchor": "middle", fill: "#555" }),
    );
  }
  for (const yt of niceTicks(box.y[0], box.y[1], 6)) {
    const [x1, y1] = toScreen({ x: box.x[0], y: yt, z: 0 });
    const [x2, y2] = toScreen({ x: box.x[1], y: yt, z: 0 });
    body.push(line(x1, y1, x2, y2, gridAttrs));
    body.push(
      text(x1 - 5, y1 + 3, tickLabel(yt), { "font-size": 9, "text-anchor": "end", fill: "#555" }),
    );
  }
  // vertical axis at the near-left corner
  const [vx1, vy1] = toScreen({ x: box.x[0], y: box.y[1], z: box.z[0] });
  const [vx2, vy2] = toScreen({ x: box.x[0], y: box.y[1], z: box.z[1] });
  body.push(line(vx1, vy1, vx2, vy2, { stroke: "#999", "stroke-width": 0.8 }));
  for (const zt of niceTicks(box.z[0], box.z[1], 4)) {
    const [tx, ty] = toScreen({ x: box.x[0], y: box.y[1], z: zt });
    body.push(line(tx - 3, ty, tx, ty, { stroke: "#999", "stroke-width": 0.8 }));
    body.push(text(tx - 6, ty + 3, tickLabel(zt), { "font-size": 9, "text-anchor": "end", fill: "#555" }));
  }
  body.push(text(width / 2, height - 8, "x (m)", { "font-size": 11, "text-anchor": "middle", fill: "#333" }));
  body.push(text(MARGIN.left - 36, MARGIN.top + 2, "z (m)", { "font-size": 11, fill: "#333" }));
  {
    const [lx, ly] = toScreen({ x: box.x[0], y: (box.y[0] + box.y[1]) / 2, z: 0 });
    body.push(text(lx - 34, ly, "y (m)", { "font-size": 11, fill: "#333" }));
  }

  // velocity color scale, symmetric around zero
  const vmax = Math.max(1, ...everything.map((p) => Math.abs(p.v)));
  const vscale = rampScale(-vmax, vmax);

  const far = (list: CloudPoint[]) => [...list].sort((a, b) => a.y - b.y);
  for (const p of far(truth)) {
    const [cx, cy] = toScreen(p);
    body.push(circle(cx, cy, 5.5, { fill: "none", stroke: "#444", "stroke-width": 1.2 }));
  }
  for (const p of far(points)) {
    const [cx, cy] = toScreen(p);
    const near = 1 - depth(p.y) / Math.max(1e-9, depth(box.y[0]));
    body.push(
      circle(cx, cy, 3 + 1.5 * Math.max(0, Math.min(1, near)), {
        fill: divergingColor(vscale(p.v)),
        stroke: "#222",
        "stroke-width": 0.5,
      }),
    );
  }

  if (points.length === 0) {
    const note = truth.length > 0 ? "no points detected" : "no points";
    body.push(
      text(width / 2, height / 2, note, {
        "font-size": 15,
        "text-anchor": "middle",
        fill: "#888",
        "font-style": "italic",
      }),
    );
  }

  body.push(
    ...colorbar(
      width - MARGIN.right + 34,
      MARGIN.top + 20,
      12,
      height - MARGIN.top - MARGIN.bottom - 40,
      linearScale([-vmax, vmax], [0, 1]),
      divergingColor,
      "v (m/s)",
    ),
  );

  if (truth.length > 0) {
    body.push(circle(MARGIN.left + 8, MARGIN.top - 10, 4, { fill: divergingColor(0.5), stroke: "#222", "stroke-width": 0.5 }));
    body.push(text(MARGIN.left + 16, MARGIN.top - 6, "estimate", { "font-size": 10, fill: "#333" }));
    body.push(circle(MARGIN.left + 88, MARGIN.top - 10, 4, { fill: "none", stroke: "#444", "stroke-width": 1.2 }));
    body.push(text(MARGIN.left + 96, MARGIN.top - 6, "truth", { "font-size": 10, fill: "#333" }));
  }

  const title = opts.title ?? `point cloud (${points.length} points)`;
  body.push(text(width / 2, 20, title, { "font-size": 13, "text-anchor": "middle", fill: "#111" }));
  return svgDocument(width, height, body);
}
