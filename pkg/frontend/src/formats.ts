/**
 * Loaders for the simulator's documented artifact files.
 *
 * Everything here is a read-only consumer of the CSV/PLY formats the
 * pipeline CLI writes; nothing mutates or rewrites an artifact.
 */

import { readFileSync } from "node:fs";
import { FormatError, parseCsv, readCsv, toNumber } from "./csv.js";

export interface CloudPoint {
  x: number;
  y: number;
  z: number;
  v: number;
}

/** An axis-labelled 2D map (range-Doppler map, threshold map, pseudo-spectrum). */
export interface GridMap {
  /** name of the column axis, from the header's first cell (e.g. velocity_ms) */
  colAxisName: string;
  /** column axis values, one per data column */
  colAxis: number[];
  /** row axis values, from each row's first cell */
  rowAxis: number[];
  /** values[i][j] belongs to (rowAxis[i], colAxis[j]) */
  values: number[][];
}

/** One row of a metrics.csv or sweep.csv table. */
export interface MetricRow {
  algorithm: string;
  snrDb: number;
  /** every other numeric column, keyed by header name */
  values: Record<string, number>;
}

const CLOUD_HEADER = ["x", "y", "z", "v"];

/** Load a point cloud CSV (header x,y,z,v). */
export function loadCloudCsv(path: string): CloudPoint[] {
  const table = readCsv(path);
  if (table.header.join(",") !== CLOUD_HEADER.join(",")) {
    throw new FormatError(`${path}: expected header x,y,z,v, got ${table.header.join(",")}`);
  }
  return table.rows.map((row, i) => {
    if (row.length !== 4) {
      throw new FormatError(`${path}:${i + 2}: expected 4 columns, got ${row.length}`);
    }
    const [x, y, z, v] = row.map((c) => toNumber(c, `${path}:${i + 2}`));
    return { x, y, z, v };
  });
}

/**
 * Load a point cloud from an ASCII PLY file. Only the simulator's layout
 * is supported: float properties including x, y, z and velocity (or v),
 * in any order.
 */
export function loadCloudPly(path: string): CloudPoint[] {
  const lines = readFileSync(path, "utf8").split("\n");
  if (lines[0]?.trim() !== "ply") {
    throw new FormatError(`${path}: not a PLY file`);
  }
  let vertexCount = -1;
  const properties: string[] = [];
  let body = -1;
  for (let i = 1; i < lines.length; i++) {
    const words = lines[i].trim().split(/\s+/);
    if (words[0] === "format") {
      if (words[1] !== "ascii") {
        throw new FormatError(`${path}: only ascii PLY is supported`);
      }
    } else if (words[0] === "element") {
      if (words[1] !== "vertex") {
        throw new FormatError(`${path}: unexpected element ${words[1]}`);
      }
      vertexCount = toNumber(words[2], `${path}: vertex count`);
    } else if (words[0] === "property") {
      properties.push(words[2]);
    } else if (words[0] === "end_header") {
      body = i + 1;
      break;
    }
  }
  if (body < 0 || vertexCount < 0) {
    throw new FormatError(`${path}: truncated PLY header`);
  }
  const idx = (name: string, alias?: string) => {
    const j = properties.indexOf(name);
    if (j >= 0) return j;
    const k = alias ? properties.indexOf(alias) : -1;
    if (k >= 0) return k;
    throw new FormatError(`${path}: PLY is missing property ${name}`);
  };
  const ix = idx("x");
  const iy = idx("y");
  const iz = idx("z");
  const iv = idx("velocity", "v");
  const points: CloudPoint[] = [];
  for (let n = 0; n < vertexCount; n++) {
    const line = lines[body + n];
    if (line === undefined || line.trim() === "") {
      throw new FormatError(`${path}: expected ${vertexCount} vertices, found ${n}`);
    }
    const cells = line.trim().split(/\s+/);
    points.push({
      x: toNumber(cells[ix], `${path} vertex ${n}`),
      y: toNumber(cells[iy], `${path} vertex ${n}`),
      z: toNumber(cells[iz], `${path} vertex ${n}`),
      v: toNumber(cells[iv], `${path} vertex ${n}`),
    });
  }
  return points;
}

/** Load a cloud from CSV or PLY, keyed on the file extension. */
export function loadCloud(path: string): CloudPoint[] {
  return path.toLowerCase().endsWith(".ply") ? loadCloudPly(path) : loadCloudCsv(path);
}

/**
 * Load a scene CSV: `#`-prefixed comment lines, then x,y,z,velocity rows
 * with an optional fifth gain column (ignored here; plots only need
 * position and velocity).
 */
export function loadScene(path: string): CloudPoint[] {
  const lines = readFileSync(path, "utf8")
    .split("\n")
    .map((l) => l.trim())
    .filter((l) => l.length > 0 && !l.startsWith("#"));
  return lines.map((line, i) => {
    const cells = line.split(",");
    if (cells.length !== 4 && cells.length !== 5) {
      throw new FormatError(`${path}:${i + 1}: expected 4 or 5 columns, got ${cells.length}`);
    }
    const [x, y, z, v] = cells.slice(0, 4).map((c) => toNumber(c, `${path}:${i + 1}`));
    return { x, y, z, v };
  });
}

/**
 * Load an axis-labelled map CSV. The header is `<axis name>,<col values>`
 * and every data row is `<row value>,<cells>`; range-Doppler maps,
 * threshold maps and pseudo-spectra all share this layout.
 */
export function loadGridMap(path: string): GridMap {
  const table = readCsv(path);
  if (table.header.length < 2 || table.rows.length === 0) {
    throw new FormatError(`${path}: map needs at least one column and one row`);
  }
  const colAxis = table.header.slice(1).map((c, j) => toNumber(c, `${path}: header column ${j + 2}`));
  const rowAxis: number[] = [];
  const values = table.rows.map((row, i) => {
    if (row.length !== table.header.length) {
      throw new FormatError(
        `${path}:${i + 2}: expected ${table.header.length} columns, got ${row.length}`,
      );
    }
    rowAxis.push(toNumber(row[0], `${path}:${i + 2}`));
    return row.slice(1).map((c) => toNumber(c, `${path}:${i + 2}`));
  });
  return { colAxisName: table.header[0], colAxis, rowAxis, values };
}

/**
 * Load metrics.csv or sweep.csv rows. Both carry `algorithm` and `snr_db`
 * columns plus a set of numeric metric columns.
 */
export function loadMetricRows(path: string): MetricRow[] {
  const table = readCsv(path);
  const algCol = table.header.indexOf("algorithm");
  const snrCol = table.header.indexOf("snr_db");
  if (algCol < 0 || snrCol < 0) {
    throw new FormatError(`${path}: expected algorithm and snr_db columns`);
  }
  return table.rows.map((row, i) => {
    if (row.length !== table.header.length) {
      throw new FormatError(
        `${path}:${i + 2}: expected ${table.header.length} columns, got ${row.length}`,
      );
    }
    const values: Record<string, number> = {};
    table.header.forEach((name, j) => {
      if (j !== algCol) {
        values[name] = toNumber(row[j], `${path}:${i + 2} (${name})`);
      }
    });
    return { algorithm: row[algCol], snrDb: values["snr_db"], values };
  });
}
