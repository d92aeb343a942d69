/**
 * Trajectory file format shared with the analysis pipeline.
 *
 * `# key=value` header lines (dt, width, height, mode, schema, optional
 * seed) followed by `n,t,x,y,vx,vy,event` rows, event in {0,1}.  Floats
 * are written with JavaScript's shortest round-trip notation, which the
 * pipeline's parser reads back to the identical double.
 */

import { Bounds } from "./session.js";

export const SCHEMA_VERSION = 1;

export interface TrajectoryRow {
  n: number;
  x: number;
  y: number;
  vx: number;
  vy: number;
  event: boolean;
}

export interface Trajectory {
  dtSeconds: number;
  bounds: Bounds;
  mode: string;
  seed: number | null;
  rows: TrajectoryRow[];
}

export function serializeTrajectory(traj: Trajectory): string {
  const lines = [
    `# dt=${traj.dtSeconds}`,
    `# width=${formatHeaderNumber(traj.bounds.width)}`,
    `# height=${formatHeaderNumber(traj.bounds.height)}`,
    `# mode=${traj.mode}`,
    `# schema=${SCHEMA_VERSION}`,
  ];
  if (traj.seed !== null) {
    lines.push(`# seed=${traj.seed}`);
  }
  for (const row of traj.rows) {
    const t = row.n * traj.dtSeconds;
    lines.push(
      `${row.n},${t},${row.x},${row.y},${row.vx},${row.vy},${row.event ? 1 : 0}`,
    );
  }
  return lines.join("\n") + "\n";
}

/** Integral header values still read naturally as floats downstream. */
function formatHeaderNumber(v: number): string {
  return Number.isInteger(v) ? `${v}.0` : `${v}`;
}

export function parseTrajectory(text: string): Trajectory {
  const header: Record<string, string> = {};
  const rows: TrajectoryRow[] = [];
  let lineNo = 0;
  for (const raw of text.split("\n")) {
    lineNo += 1;
    const line = raw.trim();
    if (line === "") {
      continue;
    }
    if (line.startsWith("#")) {
      const body = line.slice(1).trim();
      const eq = body.indexOf("=");
      if (eq < 0) {
        throw new Error(`line ${lineNo}: header must be '# key=value'`);
      }
      header[body.slice(0, eq).trim()] = body.slice(eq + 1).trim();
      continue;
    }
    const parts = line.split(",");
    if (parts.length !== 7) {
      throw new Error(
        `line ${lineNo}: expected 7 comma-separated fields, got ${parts.length}`,
      );
    }
    const [n, t, x, y, vx, vy] = parts.slice(0, 6).map(Number);
    if ([n, t, x, y, vx, vy].some((v) => !Number.isFinite(v))) {
      throw new Error(`line ${lineNo}: unparsable numeric field`);
    }
    if (parts[6] !== "0" && parts[6] !== "1") {
      throw new Error(`line ${lineNo}: event flag must be 0 or 1`);
    }
    rows.push({ n, x, y, vx, vy, event: parts[6] === "1" });
  }
  for (const key of ["dt", "width", "height", "mode", "schema"]) {
    if (!(key in header)) {
      throw new Error(`missing required header key '${key}'`);
    }
  }
  const dt = Number(header["dt"]);
  if (!(dt > 0)) {
    throw new Error("dt must be positive");
  }
  if (Number(header["schema"]) !== SCHEMA_VERSION) {
    throw new Error(`unsupported schema version ${header["schema"]}`);
  }
  if (rows.length === 0) {
    throw new Error("no data rows");
  }
  rows.forEach((row, i) => {
    if (row.n !== i) {
      throw new Error(`row ${i}: step indices must increase by 1 from 0`);
    }
  });
  return {
    dtSeconds: dt,
    bounds: { width: Number(header["width"]), height: Number(header["height"]) },
    mode: header["mode"],
    seed: "seed" in header ? Number(header["seed"]) : null,
    rows,
  };
}
