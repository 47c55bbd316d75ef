/**
 * Replays a solved problem trace step by step with play/pause.
 *
 * The chart values come from the service's /solve output, never from local
 * computation, so a replay shows exactly what the recognizer reported.
 */

import type { LatLngPair, TraceStep } from "./api.js";

type Scheduler = {
  set: (fn: () => void, ms: number) => number;
  clear: (id: number) => void;
};

const defaultScheduler: Scheduler = {
  set: (fn, ms) => setTimeout(fn, ms) as unknown as number,
  clear: (id) => clearTimeout(id),
};

export class ReplayController {
  private index = -1;
  private timer: number | null = null;

  constructor(
    private readonly observations: LatLngPair[],
    private readonly steps: TraceStep[],
    private readonly onStep: (step: TraceStep, observations: LatLngPair[]) => void,
    private readonly intervalMs = 800,
    private readonly scheduler: Scheduler = defaultScheduler,
  ) {}

  get position(): number {
    return this.index + 1;
  }

  get length(): number {
    return this.steps.length;
  }

  get playing(): boolean {
    return this.timer !== null;
  }

  get finished(): boolean {
    return this.index >= this.steps.length - 1;
  }

  /** Advance one step; returns false once the trace is exhausted. */
  stepForward(): boolean {
    if (this.finished) return false;
    this.index += 1;
    const step = this.steps[this.index]!;
    this.onStep(step, this.observations);
    return true;
  }

  play(): void {
    if (this.playing) return;
    const tick = () => {
      if (!this.stepForward()) {
        this.pause();
        return;
      }
      if (this.timer !== null) this.timer = this.scheduler.set(tick, this.intervalMs);
    };
    this.timer = this.scheduler.set(tick, this.intervalMs);
  }

  pause(): void {
    if (this.timer !== null) {
      this.scheduler.clear(this.timer);
      this.timer = null;
    }
  }

  restart(): void {
    this.pause();
    this.index = -1;
  }
}
