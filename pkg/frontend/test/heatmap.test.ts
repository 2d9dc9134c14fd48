import { describe, expect, it } from "vitest";
import { FormatError } from "../src/csv.js";
import type { GridMap } from "../src/formats.js";
import { renderHeatmap } from "../src/heatmap.js";

function grid(values: number[][]): GridMap {
  return {
    colAxisName: "velocity_ms",
    colAxis: values[0].map((_, j) => j * 2.0),
    rowAxis: values.map((_, i) => i * 0.5),
    values,
  };
}

const cellFills = (svg: string) =>
  [...svg.matchAll(/<rect [^>]*fill="(rgb\([^)]*\))"/g)].map((m) => m[1]);

describe("renderHeatmap", () => {
  it("renders a constant map as a flat image", () => {
    const svg = renderHeatmap(grid([[3, 3], [3, 3]]));
    // 4 map cells all the same color (the colorbar adds other fills)
    const fills = cellFills(svg).slice(0, 4);
    expect(new Set(fills).size).toBe(1);
  });

  it("an all-zero map stays at the floor instead of dividing by zero", () => {
    const svg = renderHeatmap(grid([[0, 0], [0, 0]]));
    expect(svg).toContain("<svg");
  });

  it("gives a dominant cell the top of the ramp", () => {
    const values = Array.from({ length: 8 }, () => Array.from({ length: 8 }, () => 0.01));
    values[5][2] = 100;
    const svg = renderHeatmap(grid(values));
    const fills = cellFills(svg).slice(0, 64);
    const counts = new Map<string, number>();
    for (const f of fills) counts.set(f, (counts.get(f) ?? 0) + 1);
    // exactly one cell stands apart from the uniform floor
    const solo = [...counts.entries()].filter(([, n]) => n === 1);
    expect(solo).toHaveLength(1);
    expect(counts.get(solo[0][0])).toBe(1);
  });

  it("outlines threshold exceedances and counts them", () => {
    const values = grid([
      [1, 1, 1],
      [1, 50, 1],
    ]);
    const threshold = grid([
      [10, 10, 10],
      [10, 10, 10],
    ]);
    const svg = renderHeatmap(values, { threshold });
    expect(svg).toContain("1 cells above threshold");
    expect((svg.match(/stroke="#ff3333"/g) ?? []).length).toBe(1);
  });

  it("rejects a threshold with a different shape", () => {
    expect(() =>
      renderHeatmap(grid([[1, 2]]), { threshold: grid([[1, 2], [3, 4]]) }),
    ).toThrow(FormatError);
  });

  it("pools oversized maps but keeps exceedances visible", () => {
    const n = 300;
    const values = Array.from({ length: n }, () => Array.from({ length: n }, () => 1));
    const threshold = Array.from({ length: n }, () => Array.from({ length: n }, () => 5));
    values[200][100] = 1000; // one hot cell deep inside a pooled block
    const svg = renderHeatmap(grid(values), {
      threshold: grid(threshold),
      maxCellsPerAxis: 100,
    });
    const fills = cellFills(svg);
    // pooled to 100x100 cells (plus the colorbar strips)
    expect(fills.length).toBeLessThanOrEqual(100 * 100 + 60);
    expect(svg).toContain("1 cells above threshold");
    expect(svg).toContain('stroke="#ff3333"');
  });

  it("labels axes with the supplied names", () => {
    const svg = renderHeatmap(grid([[1, 2], [3, 4]]), {
      xLabel: "velocity (m/s)",
      yLabel: "range (m)",
      title: "demo map",
    });
    expect(svg).toContain("velocity (m/s)");
    expect(svg).toContain("range (m)");
    expect(svg).toContain("demo map");
  });
});
