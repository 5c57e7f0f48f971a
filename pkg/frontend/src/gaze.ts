// Gaze simulation: hovering/holding a stimulus panel stands in for looking
// at it.  While held, a gaze frame goes out once per decode window so the
// server can synthesize and decode EEG; releasing sends a single "none".

import { CommandName, GazeFrame } from "./protocol.js";

export class GazeController {
  private held: CommandName | null = null;
  private nextEmitMs = 0;

  constructor(
    private readonly send: (frame: GazeFrame) => void,
    readonly periodMs: number = 2000,
  ) {}

  get current(): CommandName | null {
    return this.held;
  }

  hold(target: CommandName, nowMs: number): void {
    if (this.held === target) return;
    this.held = target;
    this.send({ type: "gaze", target });
    this.nextEmitMs = nowMs + this.periodMs;
  }

  release(): void {
    if (this.held === null) return;
    this.held = null;
    this.send({ type: "gaze", target: "none" });
  }

  /** Drive from the animation clock; re-emits the held target each period. */
  tick(nowMs: number): void {
    if (this.held === null || nowMs < this.nextEmitMs) return;
    this.send({ type: "gaze", target: this.held });
    this.nextEmitMs += this.periodMs;
  }
}
