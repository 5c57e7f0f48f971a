// Five flicker panels, luminance-modulated sinusoidally at their coded
// frequencies, all phase-locked to one shared animation clock.  A panel whose
// frequency the display cannot carry (above refresh/2) degrades to a text
// label instead of flickering.

import { CommandName, COMMANDS } from "./protocol.js";

export type FlickerConfig = Record<CommandName, number>;

export const DEFAULT_FLICKER: FlickerConfig = {
  up: 8.0,
  down: 9.0,
  left: 10.0,
  right: 11.0,
  select: 12.0,
};

/** Sinusoidal luminance in [0, 1] at absolute clock time tMs. */
export function luminanceAt(freqHz: number, tMs: number): number {
  return 0.5 + 0.5 * Math.sin(2 * Math.PI * freqHz * (tMs / 1000));
}

export interface ClockSample {
  tMs: number;
  luminance: Record<CommandName, number>;
}

export class StimulusPanels {
  readonly config: FlickerConfig;
  readonly displayRefreshHz: number;
  readonly log: ClockSample[] = [];
  private brightnessCap: number;

  constructor(config: FlickerConfig, displayRefreshHz: number, brightnessCap = 1.0) {
    this.config = config;
    this.displayRefreshHz = displayRefreshHz;
    this.brightnessCap = brightnessCap;
  }

  /** Nyquist guard: this panel cannot flicker on this display. */
  degraded(command: CommandName): boolean {
    return this.config[command] > this.displayRefreshHz / 2;
  }

  /** Sample every panel from the shared clock; degraded panels hold steady. */
  sample(tMs: number): Record<CommandName, number> {
    const out = {} as Record<CommandName, number>;
    for (const command of COMMANDS) {
      out[command] = this.degraded(command)
        ? 1.0
        : luminanceAt(this.config[command], tMs) * this.brightnessCap;
    }
    return out;
  }

  /** Advance the animation clock by one frame and record it. */
  tick(tMs: number): Record<CommandName, number> {
    const luminance = this.sample(tMs);
    this.log.push({ tMs, luminance });
    return luminance;
  }

  setBrightnessCap(cap: number): void {
    this.brightnessCap = Math.min(Math.max(cap, 0), 1);
  }
}

/** Mean flicker frequency from the clock log: rising mid-level crossings per second. */
export function measureMeanFrequency(log: ClockSample[], command: CommandName): number {
  if (log.length < 2) return 0;
  const mid = midLevel(log, command);
  let crossings = 0;
  for (let i = 1; i < log.length; i++) {
    const prev = log[i - 1].luminance[command];
    const cur = log[i].luminance[command];
    if (prev < mid && cur >= mid) crossings++;
  }
  const spanS = (log[log.length - 1].tMs - log[0].tMs) / 1000;
  return spanS > 0 ? crossings / spanS : 0;
}

function midLevel(log: ClockSample[], command: CommandName): number {
  let lo = Infinity;
  let hi = -Infinity;
  for (const sample of log) {
    const v = sample.luminance[command];
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  return (lo + hi) / 2;
}

/**
 * Worst relative phase drift between two panels across the log, in display
 * frames.  Panels sharing one clock reconstruct exactly, so drift is zero up
 * to floating point.
 */
export function relativePhaseDriftFrames(
  log: ClockSample[],
  a: CommandName,
  b: CommandName,
  config: FlickerConfig,
  displayRefreshHz: number,
): number {
  let worstMs = 0;
  for (const sample of log) {
    const driftA = phaseErrorMs(sample.luminance[a], config[a], sample.tMs);
    const driftB = phaseErrorMs(sample.luminance[b], config[b], sample.tMs);
    worstMs = Math.max(worstMs, Math.abs(driftA - driftB));
  }
  return worstMs / (1000 / displayRefreshHz);
}

function phaseErrorMs(observed: number, freqHz: number, tMs: number): number {
  const expected = luminanceAt(freqHz, tMs);
  // invert the sine locally: d(luminance)/dt = pi*f*cos(...) / 1000 per ms
  const slope = Math.PI * freqHz * Math.cos(2 * Math.PI * freqHz * (tMs / 1000)) / 1000;
  if (Math.abs(slope) < 1e-9) return 0;
  return (observed - expected) / slope;
}
