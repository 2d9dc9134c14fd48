/**
 * Batch plot runner: `isac4d-plot <kind> <input> [options]` renders one
 * simulator artifact to an SVG file. Exit code 2 marks a usage problem
 * (unknown kind, missing file, malformed artifact).
 */

import { existsSync, readFileSync, writeFileSync } from "node:fs";
import { basename } from "node:path";
import { parseArgs } from "node:util";
import { renderCloud } from "./cloud.js";
import { FormatError } from "./csv.js";
import { loadCloud, loadGridMap, loadMetricRows, loadScene } from "./formats.js";
import { renderHeatmap } from "./heatmap.js";
import { renderSweep } from "./sweep.js";

export const KINDS = ["cloud", "rdm", "spectrum", "sweep"] as const;
export type PlotKind = (typeof KINDS)[number];

export interface PlotJob {
  kind: PlotKind;
  input: string;
  output: string;
  truth?: string;
  threshold?: string;
  title?: string;
  width?: number;
  height?: number;
  components?: boolean;
}

const USAGE = `usage: isac4d-plot <kind> <input> [options]

kinds:
  cloud     point-cloud CSV/PLY, or a scene CSV (x,y,z,v[,gain] rows)
  rdm       range-Doppler map CSV
  spectrum  pseudo-spectrum CSV
  sweep     sweep.csv or metrics.csv deviation table

options:
  -o, --out FILE     output SVG path (default: <input>.svg)
  --truth CSV        cloud: overlay the true scene as hollow rings
  --threshold CSV    rdm: outline cells exceeding this threshold map
  --components       sweep: include dashed component curves
  --title TEXT       plot title
  --width N          SVG width in px
  --height N         SVG height in px
`;

/** Render one artifact; the SVG text is returned and written to job.output. */
export function runJob(job: PlotJob): string {
  let svg: string;
  if (job.kind === "cloud") {
    const isScene = !job.input.toLowerCase().endsWith(".ply") && firstLineIsComment(job.input);
    const points = isScene ? loadScene(job.input) : loadCloud(job.input);
    const truth = job.truth ? loadScene(job.truth) : undefined;
    svg = renderCloud(points, {
      truth,
      title: job.title ?? basename(job.input),
      width: job.width,
      height: job.height,
    });
  } else if (job.kind === "rdm") {
    svg = renderHeatmap(loadGridMap(job.input), {
      threshold: job.threshold ? loadGridMap(job.threshold) : undefined,
      title: job.title ?? basename(job.input),
      xLabel: "velocity (m/s)",
      yLabel: "range (m)",
      width: job.width,
      height: job.height,
    });
  } else if (job.kind === "spectrum") {
    svg = renderHeatmap(loadGridMap(job.input), {
      title: job.title ?? basename(job.input),
      xLabel: "phi (deg)",
      yLabel: "theta (deg)",
      width: job.width,
      height: job.height,
    });
  } else {
    svg = renderSweep(loadMetricRows(job.input), {
      title: job.title ?? basename(job.input),
      components: job.components,
      width: job.width,
      height: job.height,
    });
  }
  writeFileSync(job.output, svg);
  return svg;
}

function firstLineIsComment(path: string): boolean {
  // scene files start with a "# x,y,z,v,gain" comment; clouds have a header
  return readFileSync(path, "utf8").trimStart().startsWith("#");
}

/** Parse argv (without node/script) into a job, or throw UsageError. */
export class UsageError extends Error {}

class HelpRequested extends Error {}

export function parseJob(argv: string[]): PlotJob {
  const { values, positionals } = parseArgs({
    args: argv,
    allowPositionals: true,
    options: {
      out: { type: "string", short: "o" },
      truth: { type: "string" },
      threshold: { type: "string" },
      components: { type: "boolean" },
      title: { type: "string" },
      width: { type: "string" },
      height: { type: "string" },
      help: { type: "boolean", short: "h" },
    },
  });
  if (values.help) {
    throw new HelpRequested();
  }
  if (positionals.length !== 2) {
    throw new UsageError(`expected <kind> <input>, got ${positionals.length} arguments\n\n${USAGE}`);
  }
  const [kind, input] = positionals;
  if (!KINDS.includes(kind as PlotKind)) {
    throw new UsageError(`unknown plot kind ${JSON.stringify(kind)}; expected one of ${KINDS.join(", ")}`);
  }
  for (const path of [input, values.truth, values.threshold]) {
    if (path !== undefined && !existsSync(path)) {
      throw new UsageError(`no such file: ${path}`);
    }
  }
  const dimension = (name: string, raw?: string) => {
    if (raw === undefined) return undefined;
    const n = Number(raw);
    if (!Number.isInteger(n) || n < 100) {
      throw new UsageError(`--${name} must be an integer >= 100`);
    }
    return n;
  };
  return {
    kind: kind as PlotKind,
    input,
    output: values.out ?? defaultOutput(input),
    truth: values.truth,
    threshold: values.threshold,
    title: values.title,
    width: dimension("width", values.width),
    height: dimension("height", values.height),
    components: values.components,
  };
}

function defaultOutput(input: string): string {
  return input.replace(/\.(csv|ply)$/i, "") + ".svg";
}

/** CLI entry point; returns the process exit code. */
export function main(argv: string[]): number {
  let job: PlotJob;
  try {
    job = parseJob(argv);
  } catch (err) {
    if (err instanceof HelpRequested) {
      console.log(USAGE);
      return 0;
    }
    if (err instanceof UsageError) {
      console.error(err.message);
      return 2;
    }
    throw err;
  }
  try {
    runJob(job);
  } catch (err) {
    if (err instanceof FormatError || (err as NodeJS.ErrnoException).code === "ENOENT") {
      console.error(`error: ${(err as Error).message}`);
      return 2;
    }
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
  console.log(`wrote ${job.output}`);
  return 0;
}
