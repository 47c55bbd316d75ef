/**
 * Session state holder for one browser tab.
 *
 * The posterior shown anywhere in the UI is always the latest service
 * payload, kept verbatim; the store never derives probabilities itself.
 */

import type { LatLngPair, ObservationResult, SessionInfo, TraceStep } from "./api.js";

export type Mode = "init" | "intention" | "observe";

export interface Distribution {
  posterior: Record<string, number>;
  epsilon: Record<string, number>;
  argmax: string[];
}

export class SessionStore {
  mode: Mode = "init";
  initPoint: LatLngPair | null = null;
  intentions: { label: string; point: LatLngPair; nodeId: string }[] = [];
  sessionId: string | null = null;
  idealRoutes: Record<string, LatLngPair[]> = {};
  trail: LatLngPair[] = [];
  step = 0;
  latest: Distribution | null = null;

  hasSession(): boolean {
    return this.sessionId !== null;
  }

  canCreateSession(): boolean {
    return !this.hasSession() && this.initPoint !== null && this.intentions.length >= 2;
  }

  setInit(point: LatLngPair): void {
    if (this.hasSession()) throw new Error("session already started");
    this.initPoint = point;
  }

  /** Registers an intention; duplicate snapped nodes are rejected. */
  addIntention(label: string, point: LatLngPair, nodeId: string): void {
    if (this.hasSession()) throw new Error("session already started");
    if (this.intentions.some((i) => i.nodeId === nodeId)) {
      throw new Error(`intention already placed at node ${nodeId}`);
    }
    this.intentions.push({ label, point, nodeId });
  }

  beginSession(info: SessionInfo): void {
    this.sessionId = info.session_id;
    this.idealRoutes = info.ideal_routes;
    this.trail = [];
    this.step = 0;
    this.latest = {
      posterior: info.posterior,
      epsilon: info.epsilon,
      argmax: info.argmax,
    };
  }

  applyObservation(point: LatLngPair, result: ObservationResult): void {
    this.trail.push(point);
    this.step = result.step;
    this.latest = {
      posterior: result.posterior,
      epsilon: result.epsilon,
      argmax: result.argmax,
    };
  }

  applyTraceStep(observations: LatLngPair[], step: TraceStep): void {
    this.trail = observations.slice(0, step.step);
    this.step = step.step;
    this.latest = {
      posterior: step.posterior,
      epsilon: step.epsilon,
      argmax: step.argmax,
    };
  }

  reset(): void {
    this.mode = "init";
    this.initPoint = null;
    this.intentions = [];
    this.sessionId = null;
    this.idealRoutes = {};
    this.trail = [];
    this.step = 0;
    this.latest = null;
  }
}
