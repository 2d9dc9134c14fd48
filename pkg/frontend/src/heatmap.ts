/**
 * dB heatmaps for the map-shaped artifacts (range-Doppler, CFAR threshold,
 * MUSIC pseudo-spectrum), with an optional threshold-exceedance overlay.
 */

import { colorbar, magnitudeColor } from "./color.js";
import { FormatError } from "./csv.js";
import type { GridMap } from "./formats.js";
import { linearScale, niceTicks, tickLabel } from "./scale.js";
import { line, rect, svgDocument, text } from "./svg.js";

export interface HeatmapOptions {
  width?: number;
  height?: number;
  title?: string;
  xLabel?: string;
  yLabel?: string;
  /** dB floor relative to the map maximum (default -40) */
  floorDb?: number;
  /** same-shape threshold map; cells whose value exceeds it get outlined */
  threshold?: GridMap;
  /** maps larger than this per axis are mean-pooled down for display */
  maxCellsPerAxis?: number;
}

const MARGIN = { left: 64, right: 96, top: 44, bottom: 48 };

function pooled(values: number[][], factorR: number, factorC: number): number[][] {
  const rows = Math.ceil(values.length / factorR);
  const cols = Math.ceil(values[0].length / factorC);
  const out: number[][] = [];
  for (let i = 0; i < rows; i++) {
    const row: number[] = [];
    for (let j = 0; j < cols; j++) {
      let total = 0;
      let n = 0;
      for (let r = i * factorR; r < Math.min(values.length, (i + 1) * factorR); r++) {
        for (let c = j * factorC; c < Math.min(values[0].length, (j + 1) * factorC); c++) {
          total += values[r][c];
          n += 1;
        }
      }
      row.push(total / n);
    }
    out.push(row);
  }
  return out;
}

function pooledAny(mask: boolean[][], factorR: number, factorC: number): boolean[][] {
  const rows = Math.ceil(mask.length / factorR);
  const cols = Math.ceil(mask[0].length / factorC);
  const out: boolean[][] = [];
  for (let i = 0; i < rows; i++) {
    const row: boolean[] = [];
    for (let j = 0; j < cols; j++) {
      let any = false;
      for (let r = i * factorR; r < Math.min(mask.length, (i + 1) * factorR) && !any; r++) {
        for (let c = j * factorC; c < Math.min(mask[0].length, (j + 1) * factorC) && !any; c++) {
          any = mask[r][c];
        }
      }
      row.push(any);
    }
    out.push(row);
  }
  return out;
}

/** Cell-centred axis scale: value -> pixel, assuming uniform spacing. */
function axisScale(axis: number[], range: [number, number]) {
  const step = axis.length > 1 ? (axis[axis.length - 1] - axis[0]) / (axis.length - 1) : 1;
  return linearScale([axis[0] - step / 2, axis[axis.length - 1] + step / 2], range);
}

export function renderHeatmap(map: GridMap, opts: HeatmapOptions = {}): string {
  const width = opts.width ?? 640;
  const height = opts.height ?? 480;
  const floorDb = opts.floorDb ?? -40;
  const cap = opts.maxCellsPerAxis ?? 160;

  const nRows = map.values.length;
  const nCols = map.values[0]?.length ?? 0;
  if (nRows === 0 || nCols === 0) {
    throw new FormatError("empty map");
  }

  // exceedance mask before pooling, so no detection is averaged away
  let mask: boolean[][] | undefined;
  let exceedCount = 0;
  if (opts.threshold) {
    const thr = opts.threshold.values;
    if (thr.length !== nRows || thr[0].length !== nCols) {
      throw new FormatError(
        `threshold map is ${thr.length}x${thr[0]?.length ?? 0}, expected ${nRows}x${nCols}`,
      );
    }
    mask = map.values.map((row, i) => row.map((v, j) => v > thr[i][j]));
    exceedCount = mask.flat().filter(Boolean).length;
  }

  const factorR = Math.max(1, Math.ceil(nRows / cap));
  const factorC = Math.max(1, Math.ceil(nCols / cap));
  const shown = factorR > 1 || factorC > 1 ? pooled(map.values, factorR, factorC) : map.values;
  const shownMask = mask && (factorR > 1 || factorC > 1) ? pooledAny(mask, factorR, factorC) : mask;

  const peak = Math.max(...shown.map((row) => Math.max(...row)));
  const toDb = (v: number) => {
    if (peak <= 0) return floorDb; // all-zero map renders flat at the floor
    const db = 20 * Math.log10(Math.max(v, peak * 1e-12) / peak);
    return Math.max(floorDb, Math.min(0, db));
  };

  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;
  const sx = linearScale([0, shown[0].length], [MARGIN.left, MARGIN.left + plotW]);
  // row 0 at the bottom so the row axis increases upward
  const sy = linearScale([0, shown.length], [MARGIN.top + plotH, MARGIN.top]);

  const body: string[] = [];
  const dbSpan = -floorDb;
  for (let i = 0; i < shown.length; i++) {
    for (let j = 0; j < shown[0].length; j++) {
      const t = (toDb(shown[i][j]) - floorDb) / dbSpan;
      const x = sx(j);
      const y = sy(i + 1);
      body.push(
        rect(x, y, sx(j + 1) - x + 0.3, sy(i) - y + 0.3, { fill: magnitudeColor(t) }),
      );
    }
  }
  if (shownMask) {
    for (let i = 0; i < shownMask.length; i++) {
      for (let j = 0; j < shownMask[0].length; j++) {
        if (shownMask[i][j]) {
          body.push(
            rect(sx(j), sy(i + 1), sx(j + 1) - sx(j), sy(i) - sy(i + 1), {
              fill: "none",
              stroke: "#ff3333",
              "stroke-width": 1.2,
            }),
          );
        }
      }
    }
    body.push(
      text(width - MARGIN.right, MARGIN.top - 8, `${exceedCount} cells above threshold`, {
        "font-size": 10,
        "text-anchor": "end",
        fill: "#b22222",
      }),
    );
  }

  body.push(
    rect(MARGIN.left, MARGIN.top, plotW, plotH, { fill: "none", stroke: "#333", "stroke-width": 0.8 }),
  );

  // axis ticks carry the artifact's physical units
  const colPix = axisScale(map.colAxis, [MARGIN.left, MARGIN.left + plotW]);
  const rowPix = axisScale(map.rowAxis, [MARGIN.top + plotH, MARGIN.top]);
  for (const tick of niceTicks(map.colAxis[0], map.colAxis[nCols - 1], 7)) {
    const x = colPix(tick);
    body.push(line(x, MARGIN.top + plotH, x, MARGIN.top + plotH + 4, { stroke: "#333", "stroke-width": 0.7 }));
    body.push(
      text(x, MARGIN.top + plotH + 15, tickLabel(tick), { "font-size": 9, "text-anchor": "middle", fill: "#444" }),
    );
  }
  for (const tick of niceTicks(map.rowAxis[0], map.rowAxis[nRows - 1], 7)) {
    const y = rowPix(tick);
    body.push(line(MARGIN.left - 4, y, MARGIN.left, y, { stroke: "#333", "stroke-width": 0.7 }));
    body.push(
      text(MARGIN.left - 7, y + 3, tickLabel(tick), { "font-size": 9, "text-anchor": "end", fill: "#444" }),
    );
  }
  body.push(
    text(MARGIN.left + plotW / 2, height - 12, opts.xLabel ?? map.colAxisName, {
      "font-size": 11,
      "text-anchor": "middle",
      fill: "#333",
    }),
  );
  body.push(
    verticalLabel(16, MARGIN.top + plotH / 2, opts.yLabel ?? "row"),
  );

  body.push(
    ...colorbar(
      width - MARGIN.right + 34,
      MARGIN.top + 20,
      12,
      plotH - 40,
      linearScale([floorDb, 0], [0, 1]),
      magnitudeColor,
      "dB",
    ),
  );

  if (opts.title) {
    body.push(text(width / 2, 20, opts.title, { "font-size": 13, "text-anchor": "middle", fill: "#111" }));
  }
  return svgDocument(width, height, body);
}

function verticalLabel(x: number, y: number, label: string): string {
  return text(x, y, label, {
    "font-size": 11,
    "text-anchor": "middle",
    fill: "#333",
    transform: `rotate(-90 ${x} ${y})`,
  });
}
