import { describe, expect, it } from "vitest";
import { FormatError } from "../src/csv.js";
import type { MetricRow } from "../src/formats.js";
import { isMonotoneDecreasing, renderSweep } from "../src/sweep.js";

function row(algorithm: string, snrDb: number, overall: number, extra: Record<string, number> = {}): MetricRow {
  return { algorithm, snrDb, values: { snr_db: snrDb, overall_deviation: overall, ...extra } };
}

const sixRows = [
  row("music", -20, 1.0),
  row("music", -5, 0.5),
  row("music", 10, 0.2),
  row("fft4d", -20, 1.0),
  row("fft4d", -5, 0.6),
  row("fft4d", 10, 0.35),
];

const curveCount = (svg: string) => (svg.match(/class="curve"/g) ?? []).length;

describe("renderSweep", () => {
  it("draws one curve per algorithm", () => {
    const svg = renderSweep(sixRows);
    expect(curveCount(svg)).toBe(2);
    expect(svg).toContain("music");
    expect(svg).toContain("fft4d");
    expect(svg).toContain("SNR (dB)");
  });

  it("annotates monotone curves in the legend", () => {
    const svg = renderSweep(sixRows);
    expect(svg).toContain("music (monotone)");
    expect(svg).toContain("fft4d (monotone)");
    const bumpy = [...sixRows.slice(0, 2), row("music", 10, 0.7), ...sixRows.slice(3)];
    expect(renderSweep(bumpy)).not.toContain("music (monotone)");
  });

  it("skips missing points and says so in the legend", () => {
    const svg = renderSweep(sixRows.slice(1)); // music lost its -20 dB row
    expect(svg).toContain("music (2/3 points");
    expect(curveCount(svg)).toBe(2);
  });

  it("renders single-point input as markers without a curve", () => {
    const svg = renderSweep([row("music", 10, 0.2), row("fft4d", 10, 0.3)]);
    expect(curveCount(svg)).toBe(0);
    expect((svg.match(/class="curve-point"/g) ?? []).length).toBe(2);
  });

  it("adds dashed component curves on request", () => {
    const withComponents = sixRows.map((r) =>
      row(r.algorithm, r.snrDb, r.values["overall_deviation"], {
        spatial_deviation: r.values["overall_deviation"] * 0.8,
        kinematic_deviation: r.values["overall_deviation"] * 0.4,
      }),
    );
    const svg = renderSweep(withComponents, { components: true });
    expect((svg.match(/stroke-dasharray/g) ?? []).length).toBe(4);
  });

  it("rejects empty input and missing metric columns", () => {
    expect(() => renderSweep([])).toThrow(FormatError);
    const noMetric = [{ algorithm: "music", snrDb: 10, values: { snr_db: 10 } }];
    expect(() => renderSweep(noMetric)).toThrow(/overall_deviation/);
  });
});

describe("isMonotoneDecreasing", () => {
  it("needs at least two strictly falling points", () => {
    expect(isMonotoneDecreasing([])).toBe(false);
    expect(isMonotoneDecreasing([[0, 1]])).toBe(false);
    expect(isMonotoneDecreasing([[0, 1], [10, 0.5]])).toBe(true);
    expect(isMonotoneDecreasing([[0, 1], [10, 1]])).toBe(false);
  });
});
