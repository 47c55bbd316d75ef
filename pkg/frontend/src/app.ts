/**
 * Application controller: wires the map, the posterior chart and the
 * service client together.
 *
 * Scenario flow: pick a network, place one start point and two or more
 * candidate destinations (clicks snap to the nearest road node), start the
 * session, then click observations along the roads; every chart update
 * comes from a service response. Problem files can be uploaded and
 * replayed step by step instead.
 */

import {
  ApiError,
  type LatLngPair,
  type NetworkInfo,
  type ProblemDocument,
  ServiceClient,
} from "./api.js";
import { renderBars } from "./bars.js";
import { nearestNode } from "./geo.js";
import { MapLayer } from "./map.js";
import { ReplayController } from "./replay.js";
import { type Mode, SessionStore } from "./store.js";

export interface AppElements {
  svg: SVGSVGElement;
  bars: HTMLElement;
  status: HTMLElement;
  stepCounter: HTMLElement;
  retry: HTMLButtonElement;
}

export class App {
  readonly store = new SessionStore();
  readonly map: MapLayer;
  network: NetworkInfo | null = null;
  replay: ReplayController | null = null;
  private pendingObservation: LatLngPair | null = null;
  private requestInFlight = false;

  constructor(
    private readonly client: ServiceClient,
    private readonly els: AppElements,
  ) {
    this.map = new MapLayer(els.svg);
    this.els.retry.hidden = true;
    this.els.retry.addEventListener("click", () => {
      void this.retryObservation();
    });
  }

  async start(networkName?: string): Promise<void> {
    const networks = await this.client.listNetworks();
    if (networks.length === 0) {
      this.setStatus("service has no networks loaded", true);
      return;
    }
    this.network = networkName
      ? (networks.find((n) => n.name === networkName) ?? networks[0]!)
      : networks[0]!;
    this.map.renderNetwork(this.network);
    this.setStatus(
      `network ${this.network.name}: place the start point, then at least two destinations`,
    );
    this.renderAll();
  }

  setMode(mode: Mode): void {
    this.store.mode = mode;
  }

  setStatus(message: string, isError = false): void {
    this.els.status.textContent = message;
    this.els.status.className = isError ? "status error" : "status";
  }

  /** Snaps a clicked coordinate to the nearest road node of the network. */
  snap(point: LatLngPair): { nodeId: string; point: LatLngPair } {
    if (!this.network) throw new Error("no network loaded");
    const nodeId = nearestNode(this.network.nodes, point);
    return { nodeId, point: this.network.nodes[nodeId]! };
  }

  async handleMapClick(point: LatLngPair): Promise<void> {
    try {
      if (this.store.mode === "init") {
        const snapped = this.snap(point);
        this.store.setInit(snapped.point);
        this.setStatus(`start point at node ${snapped.nodeId}`);
      } else if (this.store.mode === "intention") {
        const snapped = this.snap(point);
        const label = `destination ${String.fromCharCode(65 + this.store.intentions.length)}`;
        this.store.addIntention(label, snapped.point, snapped.nodeId);
        this.setStatus(`${label} at node ${snapped.nodeId}`);
      } else {
        await this.emitObservation(point);
        return;
      }
    } catch (err) {
      this.setStatus(String(err instanceof Error ? err.message : err), true);
    }
    this.renderAll();
  }

  async createSession(): Promise<void> {
    if (!this.store.canCreateSession()) {
      this.setStatus("need a start point and at least two destinations", true);
      return;
    }
    try {
      const info = await this.client.createSession({
        network: this.network?.name,
        init: this.store.initPoint!,
        intentions: this.store.intentions.map((i) => i.point),
      });
      // Service labels coordinate intentions canonically; repaint ours to match.
      this.store.intentions.forEach((intention, index) => {
        intention.label = info.intentions[index] ?? intention.label;
      });
      this.store.beginSession(info);
      this.store.mode = "observe";
      this.setStatus("session live: click along a road to emit observations");
    } catch (err) {
      this.setStatus(err instanceof ApiError ? err.message : String(err), true);
    }
    this.renderAll();
  }

  /**
   * Sends one observation. On transport failure the click is kept and a
   * retry button appears; the chart is only touched by a successful reply.
   */
  async emitObservation(point: LatLngPair): Promise<void> {
    if (!this.store.sessionId) {
      this.setStatus("start the session before emitting observations", true);
      return;
    }
    if (this.requestInFlight) return;
    this.requestInFlight = true;
    try {
      const result = await this.client.observe(this.store.sessionId, point);
      this.store.applyObservation(point, result);
      this.pendingObservation = null;
      this.els.retry.hidden = true;
      this.setStatus(`step ${result.step}: leading ${result.argmax.join(", ")}`);
    } catch (err) {
      if (err instanceof ApiError && err.status === 0) {
        this.pendingObservation = point;
        this.els.retry.hidden = false;
        this.setStatus("observation not delivered; press retry", true);
      } else {
        this.setStatus(err instanceof ApiError ? err.message : String(err), true);
      }
    } finally {
      this.requestInFlight = false;
    }
    this.renderAll();
  }

  async retryObservation(): Promise<void> {
    if (this.pendingObservation) {
      const point = this.pendingObservation;
      this.pendingObservation = null;
      this.els.retry.hidden = true;
      await this.emitObservation(point);
    }
  }

  /** Solves an uploaded problem server-side and prepares an animated replay. */
  async loadProblemReplay(problem: ProblemDocument, intervalMs = 800): Promise<void> {
    try {
      const traces = await this.client.solve([problem], this.network?.name);
      const trace = traces[0];
      if (!trace) {
        this.setStatus("service returned no trace", true);
        return;
      }
      this.store.reset();
      this.replay = new ReplayController(
        problem.observations,
        trace.steps,
        (step, observations) => {
          this.store.applyTraceStep(observations, step);
          this.setStatus(`replay step ${step.step} of ${trace.steps.length}`);
          this.renderAll();
        },
        intervalMs,
      );
      this.setStatus(`replay ready: ${trace.steps.length} steps`);
    } catch (err) {
      this.setStatus(err instanceof ApiError ? err.message : String(err), true);
    }
    this.renderAll();
  }

  renderAll(): void {
    this.map.renderScenario(this.store.initPoint, this.store.intentions);
    this.map.renderIdealRoutes(this.store.idealRoutes, this.store.latest?.argmax ?? []);
    this.map.renderTrail(this.store.trail);
    if (this.store.latest) {
      renderBars(this.els.bars, this.store.latest.posterior, this.store.latest.argmax);
    } else {
      this.els.bars.innerHTML = "";
    }
    this.els.stepCounter.textContent = String(this.store.step);
  }
}
