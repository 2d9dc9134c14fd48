import { linearScale, niceTicks, tickLabel, type Scale } from "./scale.js";
import { line, rect, text } from "./svg.js";

type Rgb = [number, number, number];

// viridis anchors, sampled every 1/8 of the ramp
const VIRIDIS: Rgb[] = [
  [68, 1, 84],
  [70, 50, 127],
  [54, 92, 141],
  [39, 127, 142],
  [31, 161, 135],
  [74, 194, 109],
  [159, 218, 58],
  [253, 231, 37],
];

// blue -> white -> red, for signed velocities
const DIVERGING: Rgb[] = [
  [59, 76, 192],
  [144, 178, 254],
  [247, 247, 247],
  [245, 156, 125],
  [180, 4, 38],
];

function ramp(anchors: Rgb[], t: number): string {
  const clamped = Math.min(1, Math.max(0, t));
  const pos = clamped * (anchors.length - 1);
  const i = Math.min(anchors.length - 2, Math.floor(pos));
  const frac = pos - i;
  const channel = (c: number) => Math.round(anchors[i][c] + frac * (anchors[i + 1][c] - anchors[i][c]));
  return `rgb(${channel(0)},${channel(1)},${channel(2)})`;
}

/** Sequential colormap for magnitudes; t in [0, 1]. */
export function magnitudeColor(t: number): string {
  return ramp(VIRIDIS, t);
}

/** Diverging colormap for signed values; t in [0, 1] with 0.5 at zero. */
export function divergingColor(t: number): string {
  return ramp(DIVERGING, t);
}

/**
 * Vertical colorbar with ticks. `scale` maps data values to [0, 1] ramp
 * positions; low values sit at the bottom.
 */
export function colorbar(
  x: number,
  y: number,
  width: number,
  height: number,
  scale: Scale,
  color: (t: number) => string,
  label: string,
): string[] {
  const parts: string[] = [];
  const steps = 48;
  for (let i = 0; i < steps; i++) {
    const t = (i + 0.5) / steps;
    parts.push(
      rect(x, y + height - ((i + 1) * height) / steps, width, height / steps + 0.5, {
        fill: color(t),
      }),
    );
  }
  parts.push(rect(x, y, width, height, { fill: "none", stroke: "#333", "stroke-width": 0.5 }));
  const [lo, hi] = scale.domain;
  for (const tick of niceTicks(lo, hi, 5)) {
    const ty = y + height - scale(tick) * height;
    parts.push(line(x + width, ty, x + width + 3, ty, { stroke: "#333", "stroke-width": 0.5 }));
    parts.push(
      text(x + width + 5, ty + 3, tickLabel(tick), { "font-size": 9, fill: "#333" }),
    );
  }
  parts.push(
    text(x + width / 2, y - 6, label, { "font-size": 10, "text-anchor": "middle", fill: "#333" }),
  );
  return parts;
}

/** Scale mapping [lo, hi] to ramp position [0, 1]. */
export function rampScale(lo: number, hi: number): Scale {
  return linearScale([lo, hi], [0, 1]);
}
