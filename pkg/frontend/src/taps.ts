/**
 * Tap-stream classification: raw button taps become rhythmic cells that
 * each select one velocity component, its sign, and its magnitude.
 *
 * Duplet encoding (two onsets per cell):
 *   L L        -> move left  (vx negative)
 *   R R        -> move right (vx positive)
 *   chord chord-> move down  (vy positive; a chord is L and R within the
 *                 chord tolerance, onset time = its first tap)
 *   L then R   -> move up    (vy negative)
 * Anything else (R then L included) is unrecognized and dropped.
 *
 * The inter-onset interval (IoI) between the two cell onsets sets the
 * magnitude: speed = scale / (IoI in seconds), so faster tapping moves
 * the pointer faster.
 */

export type Button = "L" | "R";

export interface TapEvent {
  button: Button;
  /** Milliseconds on a monotonic session clock. */
  timestampMs: number;
}

export type OnsetKind = "L" | "R" | "C";

export interface Onset {
  kind: OnsetKind;
  timestampMs: number;
}

export type CellPattern = "LL" | "RR" | "ChordChord" | "LthenR";

export interface RhythmicCell {
  pattern: CellPattern;
  /** Time between the cell's onsets, ms. */
  ioiMs: number;
  axis: "x" | "y";
  sign: 1 | -1;
  /** Magnitude of the controlled component, px/s. */
  speed: number;
  /** The final onset's time: when the new velocity takes effect. */
  finalOnsetMs: number;
  /** When the cell became unambiguous (>= finalOnsetMs; a plain final
   *  tap stays a chord candidate until the tolerance has elapsed). */
  resolvedAtMs: number;
}

export const DEFAULT_CHORD_TOLERANCE_MS = 40;
export const DEFAULT_CELL_TIMEOUT_MS = 1500;
/** Calibrated so a 300 ms IoI yields 63.75 px/s, the human mean speed. */
export const DEFAULT_SPEED_SCALE = 19.125;

export function ioiToSpeed(ioiMs: number, scale: number = DEFAULT_SPEED_SCALE): number {
  if (!(ioiMs > 0)) {
    throw new Error(`IoI must be positive, got ${ioiMs}`);
  }
  return scale / (ioiMs / 1000);
}

const DUPLET_PATTERNS: Record<string, CellPattern> = {
  LL: "LL",
  RR: "RR",
  CC: "ChordChord",
  LR: "LthenR",
};

function directionOf(pattern: CellPattern): { axis: "x" | "y"; sign: 1 | -1 } {
  switch (pattern) {
    case "LL":
      return { axis: "x", sign: -1 };
    case "RR":
      return { axis: "x", sign: 1 };
    case "ChordChord":
      return { axis: "y", sign: 1 }; // y grows downward
    case "LthenR":
      return { axis: "y", sign: -1 };
  }
}

function resolveCell(
  onsets: Onset[],
  resolvedAtMs: number,
  scale: number,
  triplets: boolean,
): RhythmicCell | null {
  const kinds = onsets.map((o) => o.kind).join("");
  let pattern: CellPattern | undefined;
  if (!triplets) {
    pattern = DUPLET_PATTERNS[kinds];
  } else {
    // triplet aliases of the same four directions
    pattern = ({ LLL: "LL", RRR: "RR", CCC: "ChordChord", LLR: "LthenR" } as
      Record<string, CellPattern>)[kinds];
  }
  if (pattern === undefined) {
    return null;
  }
  const first = onsets[0].timestampMs;
  const last = onsets[onsets.length - 1].timestampMs;
  const ioiMs = (last - first) / (onsets.length - 1); // mean IoI; exact for duplets
  if (!(ioiMs > 0)) {
    return null; // coincident onsets carry no rate information
  }
  const { axis, sign } = directionOf(pattern);
  return {
    pattern,
    ioiMs,
    axis,
    sign,
    speed: ioiToSpeed(ioiMs, scale),
    finalOnsetMs: last,
    resolvedAtMs,
  };
}

export interface DetectorSettings {
  chordToleranceMs: number;
  cellTimeoutMs: number;
  speedScale: number;
  triplets: boolean;
}

export function defaultSettings(): DetectorSettings {
  return {
    chordToleranceMs: DEFAULT_CHORD_TOLERANCE_MS,
    cellTimeoutMs: DEFAULT_CELL_TIMEOUT_MS,
    speedScale: DEFAULT_SPEED_SCALE,
    triplets: false,
  };
}

export type DetectorEvent =
  | { kind: "cell"; cell: RhythmicCell }
  | { kind: "unrecognized"; atMs: number }
  | { kind: "abandoned"; atMs: number };

/**
 * Streaming duplet/triplet detector.
 *
 * A tap may be the start of a chord, so its onset kind is only final
 * once the chord tolerance has elapsed or the partner button arrives;
 * feed taps in timestamp order and call advance() regularly (and at the
 * end of a replay) so pending taps and stale cells resolve.
 */
export class CellDetector {
  private pending: TapEvent | null = null;
  private onsets: Onset[] = [];
  private events: DetectorEvent[] = [];

  constructor(readonly settings: DetectorSettings) {}

  /** Resolve everything resolvable up to the given session time. */
  advance(nowMs: number): DetectorEvent[] {
    if (
      this.pending !== null &&
      nowMs - this.pending.timestampMs > this.settings.chordToleranceMs
    ) {
      const plain = this.pending;
      this.pending = null;
      this.pushOnset(
        { kind: plain.button, timestampMs: plain.timestampMs },
        plain.timestampMs + this.settings.chordToleranceMs,
      );
    }
    if (
      this.onsets.length > 0 &&
      nowMs - this.onsets[this.onsets.length - 1].timestampMs >
        this.settings.cellTimeoutMs
    ) {
      this.events.push({
        kind: "abandoned",
        atMs:
          this.onsets[this.onsets.length - 1].timestampMs +
          this.settings.cellTimeoutMs,
      });
      this.onsets = [];
    }
    return this.drain();
  }

  tap(event: TapEvent): DetectorEvent[] {
    const resolved = this.advance(event.timestampMs);
    if (this.pending === null) {
      this.pending = event;
      return resolved.concat(this.drain());
    }
    const pending = this.pending;
    if (
      event.button !== pending.button &&
      event.timestampMs - pending.timestampMs <= this.settings.chordToleranceMs
    ) {
      this.pending = null;
      this.pushOnset(
        { kind: "C", timestampMs: pending.timestampMs },
        event.timestampMs,
      );
    } else {
      // same button again (or partner too late): the pending tap is a
      // plain onset and the new tap starts its own resolution window
      this.pending = event;
      this.pushOnset(
        { kind: pending.button, timestampMs: pending.timestampMs },
        event.timestampMs,
      );
    }
    return resolved.concat(this.drain());
  }

  private pushOnset(onset: Onset, resolvedAtMs: number): void {
    this.onsets.push(onset);
    const needed = this.settings.triplets ? 3 : 2;
    if (this.onsets.length < needed) {
      return;
    }
    const cell = resolveCell(
      this.onsets,
      resolvedAtMs,
      this.settings.speedScale,
      this.settings.triplets,
    );
    this.onsets = [];
    if (cell === null) {
      this.events.push({ kind: "unrecognized", atMs: resolvedAtMs });
    } else {
      this.events.push({ kind: "cell", cell });
    }
  }

  private drain(): DetectorEvent[] {
    const out = this.events;
    this.events = [];
    return out;
  }
}

/**
 * Classify a complete tap log in one go; the pure batch form of the
 * detector used by tests and replays.
 */
export function classifyTapLog(
  taps: TapEvent[],
  settings: DetectorSettings = defaultSettings(),
): RhythmicCell[] {
  const detector = new CellDetector(settings);
  const cells: RhythmicCell[] = [];
  let last = 0;
  for (const tap of taps) {
    if (tap.timestampMs < last) {
      throw new Error("tap log must be ordered by timestamp");
    }
    last = tap.timestampMs;
    for (const ev of detector.tap(tap)) {
      if (ev.kind === "cell") {
        cells.push(ev.cell);
      }
    }
  }
  for (const ev of detector.advance(last + 1e7)) {
    if (ev.kind === "cell") {
      cells.push(ev.cell);
    }
  }
  return cells;
}
