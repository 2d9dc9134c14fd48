import { readFileSync } from "node:fs";

/** A simulator artifact does not match its documented layout. */
export class FormatError extends Error {}

export interface Table {
  header: string[];
  rows: string[][];
}

/**
 * Parse artifact CSV text: one header line, comma-separated cells, no
 * quoting (the simulator never quotes). Blank lines are skipped.
 */
export function parseCsv(text: string): Table {
  const lines = text
    .split("\n")
    .map((l) => (l.endsWith("\r") ? l.slice(0, -1) : l))
    .filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new FormatError("empty CSV");
  }
  const [first, ...rest] = lines;
  return {
    header: first.split(",").map((c) => c.trim()),
    rows: rest.map((l) => l.split(",").map((c) => c.trim())),
  };
}

export function readCsv(path: string): Table {
  try {
    return parseCsv(readFileSync(path, "utf8"));
  } catch (err) {
    if (err instanceof FormatError) {
      throw new FormatError(`${path}: ${err.message}`);
    }
    throw err;
  }
}

/** Parse a numeric cell, naming its location in the error. */
export function toNumber(cell: string, where: string): number {
  const value = Number(cell);
  if (cell === "" || !Number.isFinite(value)) {
    throw new FormatError(`${where}: expected a number, got ${JSON.stringify(cell)}`);
  }
  return value;
}
