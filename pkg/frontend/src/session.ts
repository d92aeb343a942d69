/**
 * Headless game session: pointer kinematics, reference tracking score,
 * and the recording buffer sampled on the dt grid.
 *
 * All state changes are driven by explicit session timestamps (taps and
 * advance calls in time order), never by wall-clock reads, so a session
 * replayed from the same tap log reproduces the identical recording.
 */

import {
  CellDetector,
  DetectorEvent,
  DetectorSettings,
  RhythmicCell,
  TapEvent,
  defaultSettings,
} from "./taps.js";
import { Trajectory } from "./trajfile.js";

export interface Bounds {
  width: number;
  height: number;
}

export const DISPLAY: Bounds = { width: 1920, height: 1080 };
export const DT_SECONDS = 0.283;

export interface RecordedSample {
  /** Pointer position at time n*dt. */
  x: number;
  y: number;
  /** True when at least one cell completed since the previous sample. */
  event: boolean;
}

export interface SessionState {
  x: number;
  y: number;
  vx: number;
  vy: number;
}

export class GameSession {
  readonly detector: CellDetector;
  readonly settings: DetectorSettings;
  readonly bounds: Bounds;
  readonly dtSeconds: number;
  reference: Trajectory | null;

  private state: SessionState;
  private nowMs = 0;
  private nextSampleIndex = 0;
  private cellSinceLastSample = false;
  private samples: RecordedSample[] = [];
  private cells: RhythmicCell[] = [];
  private hints: DetectorEvent[] = [];
  private squaredErrorSum = 0;
  private scoredSamples = 0;

  constructor(
    reference: Trajectory | null = null,
    settings: DetectorSettings = defaultSettings(),
    bounds: Bounds = DISPLAY,
    dtSeconds: number = DT_SECONDS,
    start?: { x: number; y: number },
  ) {
    this.reference = reference;
    this.settings = settings;
    this.bounds = bounds;
    this.dtSeconds = dtSeconds;
    this.detector = new CellDetector(settings);
    const origin = start ??
      (reference !== null
        ? { x: reference.rows[0].x, y: reference.rows[0].y }
        : { x: bounds.width / 2, y: bounds.height / 2 });
    this.state = { x: origin.x, y: origin.y, vx: 0, vy: 0 };
    // the first control is always chosen at the first instant
    this.takeSample(true);
  }

  get pointer(): SessionState {
    return { ...this.state };
  }

  get recordedSamples(): number {
    return this.samples.length;
  }

  get resolvedCells(): readonly RhythmicCell[] {
    return this.cells;
  }

  /** Mean squared tracking error over the samples recorded so far. */
  score(): number | null {
    if (this.scoredSamples === 0) {
      return null;
    }
    return this.squaredErrorSum / this.scoredSamples;
  }

  /** Unconsumed unrecognized/abandoned-cell notices for the HUD. */
  drainHints(): DetectorEvent[] {
    const out = this.hints;
    this.hints = [];
    return out;
  }

  tap(event: TapEvent): void {
    this.advance(event.timestampMs);
    this.applyDetectorEvents(this.detector.tap(event));
  }

  press(button: "L" | "R", timestampMs: number): void {
    this.tap({ button, timestampMs });
  }

  /**
   * Move session time forward: resolve pending taps, integrate the
   * pointer, and record samples crossed on the way.
   */
  advance(toMs: number): void {
    if (toMs < this.nowMs) {
      throw new Error(
        `session time must not go backwards (${toMs} < ${this.nowMs})`,
      );
    }
    this.applyDetectorEvents(this.detector.advance(toMs));
    let next = this.nextSampleMs();
    while (next <= toMs) {
      this.integrateTo(next);
      this.takeSample(this.cellSinceLastSample);
      this.cellSinceLastSample = false;
      next = this.nextSampleMs();
    }
    this.integrateTo(toMs);
  }

  private nextSampleMs(): number {
    return this.nextSampleIndex * this.dtSeconds * 1000;
  }

  private integrateTo(toMs: number): void {
    const dt = (toMs - this.nowMs) / 1000;
    if (dt > 0) {
      this.state.x = clamp(this.state.x + this.state.vx * dt, 0, this.bounds.width);
      this.state.y = clamp(this.state.y + this.state.vy * dt, 0, this.bounds.height);
    }
    this.nowMs = toMs;
  }

  private takeSample(event: boolean): void {
    this.samples.push({ x: this.state.x, y: this.state.y, event });
    if (this.reference !== null) {
      const row = this.reference.rows[
        Math.min(this.samples.length - 1, this.reference.rows.length - 1)
      ];
      const dx = this.state.x - row.x;
      const dy = this.state.y - row.y;
      this.squaredErrorSum += dx * dx + dy * dy;
      this.scoredSamples += 1;
    }
    this.nextSampleIndex += 1;
  }

  private applyDetectorEvents(events: DetectorEvent[]): void {
    for (const ev of events) {
      if (ev.kind !== "cell") {
        this.hints.push(ev);
        continue;
      }
      const cell = ev.cell;
      // the new velocity takes effect at the cell's final onset; if the
      // chord-ambiguity window already carried session time past it,
      // correct the position as if the change had happened on time
      if (cell.finalOnsetMs >= this.nowMs) {
        this.integrateTo(cell.finalOnsetMs);
      }
      const lagS = Math.max(0, this.nowMs - cell.finalOnsetMs) / 1000;
      const capped = this.capComponent(cell.axis, cell.sign * cell.speed);
      if (cell.axis === "x") {
        this.state.x = clamp(
          this.state.x + (capped - this.state.vx) * lagS, 0, this.bounds.width,
        );
        this.state.vx = capped;
      } else {
        this.state.y = clamp(
          this.state.y + (capped - this.state.vy) * lagS, 0, this.bounds.height,
        );
        this.state.vy = capped;
      }
      this.cells.push(cell);
      this.cellSinceLastSample = true;
    }
  }

  /**
   * Cap a commanded component at the one-interval velocity box of the
   * current position, so one sampling interval can never carry the
   * pointer past a display edge.
   */
  private capComponent(axis: "x" | "y", value: number): number {
    const pos = axis === "x" ? this.state.x : this.state.y;
    const limit = axis === "x" ? this.bounds.width : this.bounds.height;
    const lo = (0 - pos) / this.dtSeconds;
    const hi = (limit - pos) / this.dtSeconds;
    return clamp(value, lo, hi);
  }

  /**
   * Recording rows: positions at the dt grid with the implied per-step
   * velocity, so the exported trajectory is self-consistent by
   * construction (state(n+1) = state(n) + control(n)*dt exactly).
   */
  recording(): Trajectory {
    const rows = this.samples.map((s, n) => ({
      n,
      x: s.x,
      y: s.y,
      vx: 0,
      vy: 0,
      event: s.event,
    }));
    for (let n = 0; n + 1 < rows.length; n++) {
      rows[n].vx = (rows[n + 1].x - rows[n].x) / this.dtSeconds;
      rows[n].vy = (rows[n + 1].y - rows[n].y) / this.dtSeconds;
    }
    if (rows.length > 1) {
      // final sample keeps the live velocity (its transition is beyond
      // the recorded horizon)
      rows[rows.length - 1].vx = this.state.vx;
      rows[rows.length - 1].vy = this.state.vy;
    }
    return {
      dtSeconds: this.dtSeconds,
      bounds: this.bounds,
      mode: "human",
      seed: null,
      rows,
    };
  }
}

function clamp(v: number, lo: number, hi: number): number {
  return Math.min(Math.max(v, lo), hi);
}
