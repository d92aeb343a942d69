/**
 * Browser wiring: keyboard input, canvas rendering, reference loading,
 * and recording export.  All game logic lives in session.ts; this file
 * only translates DOM events into session calls and draws the result.
 */

import { DISPLAY, GameSession } from "./session.js";
import { defaultSettings, DetectorSettings } from "./taps.js";
import { parseTrajectory, serializeTrajectory, Trajectory } from "./trajfile.js";

interface KeyBindings {
  left: string;
  right: string;
}

const bindings: KeyBindings = { left: "KeyF", right: "KeyJ" };
let settings: DetectorSettings = defaultSettings();
let reference: Trajectory | null = null;
let session = new GameSession(reference, settings);
let sessionStart: number | null = null;
let hintText = "";
let hintUntil = 0;

const canvas = document.getElementById("game") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const hud = document.getElementById("hud")!;
const exportButton = document.getElementById("export") as HTMLButtonElement;
const resetButton = document.getElementById("reset") as HTMLButtonElement;
const refInput = document.getElementById("reference") as HTMLInputElement;
const tripletsInput = document.getElementById("triplets") as HTMLInputElement;
const chordInput = document.getElementById("chord-tolerance") as HTMLInputElement;
const timeoutInput = document.getElementById("cell-timeout") as HTMLInputElement;
const keyLeftInput = document.getElementById("key-left") as HTMLInputElement;
const keyRightInput = document.getElementById("key-right") as HTMLInputElement;

function sessionNow(timestamp: number): number {
  if (sessionStart === null) {
    sessionStart = timestamp;
  }
  return timestamp - sessionStart;
}

function resetSession(): void {
  settings = {
    ...defaultSettings(),
    triplets: tripletsInput.checked,
    chordToleranceMs: Number(chordInput.value) || 40,
    cellTimeoutMs: Number(timeoutInput.value) || 1500,
  };
  session = new GameSession(reference, settings);
  sessionStart = null;
  hintText = "";
}

window.addEventListener("keydown", (ev) => {
  if (ev.repeat) {
    return;
  }
  const now = sessionNow(performance.now());
  if (ev.code === bindings.left) {
    session.press("L", now);
    ev.preventDefault();
  } else if (ev.code === bindings.right) {
    session.press("R", now);
    ev.preventDefault();
  }
});

refInput.addEventListener("change", async () => {
  const file = refInput.files?.[0];
  if (!file) {
    return;
  }
  try {
    reference = parseTrajectory(await file.text());
    resetSession();
  } catch (err) {
    hintText = `reference rejected: ${err}`;
    hintUntil = Number.POSITIVE_INFINITY;
  }
});

for (const input of [tripletsInput, chordInput, timeoutInput]) {
  input.addEventListener("change", resetSession);
}
keyLeftInput.addEventListener("change", () => {
  bindings.left = keyLeftInput.value || "KeyF";
});
keyRightInput.addEventListener("change", () => {
  bindings.right = keyRightInput.value || "KeyJ";
});
resetButton.addEventListener("click", resetSession);

exportButton.addEventListener("click", () => {
  if (session.recordedSamples < 1) {
    return;
  }
  const text = serializeTrajectory(session.recording());
  const blob = new Blob([text], { type: "text/csv" });
  const link = document.createElement("a");
  link.href = URL.createObjectURL(blob);
  link.download = "recording.csv";
  link.click();
  URL.revokeObjectURL(link.href);
});

function referenceAt(sampleIndex: number): { x: number; y: number } | null {
  if (reference === null) {
    return null;
  }
  const row =
    reference.rows[Math.min(sampleIndex, reference.rows.length - 1)];
  return { x: row.x, y: row.y };
}

function frame(timestamp: number): void {
  const now = sessionNow(timestamp);
  session.advance(now);
  for (const hint of session.drainHints()) {
    hintText =
      hint.kind === "unrecognized"
        ? "unrecognized tap pattern — see the legend"
        : "cell timed out — tap the second beat sooner";
    hintUntil = now + 2500;
  }

  const sx = canvas.width / DISPLAY.width;
  const sy = canvas.height / DISPLAY.height;
  ctx.fillStyle = "#10141a";
  ctx.fillRect(0, 0, canvas.width, canvas.height);

  const target = referenceAt(session.recordedSamples - 1);
  if (target !== null) {
    ctx.beginPath();
    ctx.arc(target.x * sx, target.y * sy, 12, 0, 2 * Math.PI);
    ctx.strokeStyle = "#e4b363";
    ctx.lineWidth = 3;
    ctx.stroke();
  }

  const p = session.pointer;
  ctx.beginPath();
  ctx.arc(p.x * sx, p.y * sy, 7, 0, 2 * Math.PI);
  ctx.fillStyle = "#6fc3df";
  ctx.fill();

  const score = session.score();
  const cells = session.resolvedCells;
  const lastCell = cells.length > 0 ? cells[cells.length - 1] : null;
  hud.textContent = [
    `samples: ${session.recordedSamples}`,
    `cells: ${cells.length}`,
    lastCell
      ? `last: ${lastCell.pattern} @ ${lastCell.speed.toFixed(1)} px/s`
      : "last: —",
    score !== null ? `score (MSE): ${score.toFixed(1)}` : "score: load a reference",
    now < hintUntil ? hintText : "",
  ].join("   ");

  exportButton.disabled = session.recordedSamples < 1;
  requestAnimationFrame(frame);
}

requestAnimationFrame(frame);
