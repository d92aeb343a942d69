import { mkdirSync, writeFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

import { DT_SECONDS, GameSession } from "../src/session.js";
import { parseTrajectory, serializeTrajectory } from "../src/trajfile.js";

const HERE = dirname(fileURLToPath(import.meta.url));
const FIXTURE = join(HERE, "..", "fixtures", "sample_recording.csv");

/**
 * Scripted headless session covering all four cell patterns plus an
 * unrecognized one; regenerates the checked-in recording consumed by
 * the analysis pipeline's cross-component acceptance test.
 */
function scriptedRecording(): string {
  const session = new GameSession();
  const script: ["L" | "R", number][] = [
    ["R", 50], ["R", 350],        // right
    ["L", 900], ["L", 1180],      // left (faster)
    ["L", 1700], ["R", 1712],     // chord...
    ["L", 2000], ["R", 2010],     // ...chord -> down
    ["L", 2600], ["R", 2890],     // up
    ["R", 3400], ["L", 3700],     // unrecognized, dropped
    ["R", 4200], ["R", 4490],     // right again
    ["L", 5100], ["R", 5115],     // chord...
    ["L", 5400], ["R", 5395 + 20] // ...chord -> down
  ];
  for (const [button, ts] of script) {
    session.press(button, ts);
  }
  session.advance(40 * DT_SECONDS * 1000 + 1);
  return serializeTrajectory(session.recording());
}

describe("cross-component fixture", () => {
  it("writes a deterministic recording that parses cleanly", () => {
    const text = scriptedRecording();
    expect(scriptedRecording()).toBe(text);

    const traj = parseTrajectory(text);
    expect(traj.mode).toBe("human");
    expect(traj.rows.length).toBeGreaterThanOrEqual(40);
    expect(traj.rows[0].event).toBe(true);
    for (let n = 0; n + 1 < traj.rows.length; n++) {
      const a = traj.rows[n];
      const b = traj.rows[n + 1];
      expect(Math.abs(a.x + a.vx * traj.dtSeconds - b.x)).toBeLessThan(1e-9);
      expect(Math.abs(a.y + a.vy * traj.dtSeconds - b.y)).toBeLessThan(1e-9);
    }
    const events = traj.rows.filter((r) => r.event).length;
    expect(events).toBeGreaterThanOrEqual(5);

    mkdirSync(dirname(FIXTURE), { recursive: true });
    writeFileSync(FIXTURE, text);
  });
});
