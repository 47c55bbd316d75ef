// @vitest-environment jsdom
//
// Scripted end-to-end scenario against a real local service instance:
// place a start point and two destinations, emit three observations along
// one destination's unique route segment, and check after every step that
// the rendered bars equal the service's payload exactly and that the
// probed destination's bar is maximal.

import { type ChildProcess, spawn } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ServiceClient } from "../src/api.js";
import { App, type AppElements } from "../src/app.js";
import { readBars } from "../src/bars.js";

const PORT = 8977;
const BASE = `http://127.0.0.1:${PORT}`;

let serviceProc: ChildProcess | null = null;
let workDir = "";
let fetchCalls: string[] = [];

function run(args: string[]): Promise<void> {
  return new Promise((resolve, reject) => {
    const proc = spawn("python3", ["-m", "routemirror.cli", ...args], { stdio: "ignore" });
    proc.on("exit", (code) => (code === 0 ? resolve() : reject(new Error(`exit ${code}`))));
    proc.on("error", reject);
  });
}

async function waitForService(): Promise<void> {
  for (let attempt = 0; attempt < 100; attempt++) {
    try {
      const response = await fetch(`${BASE}/networks`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 200));
  }
  throw new Error("service did not come up");
}

function buildElements(): AppElements {
  const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg") as SVGSVGElement;
  const bars = document.createElement("div");
  const status = document.createElement("div");
  const stepCounter = document.createElement("span");
  const retry = document.createElement("button");
  document.body.append(svg, bars, status, stepCounter, retry);
  return { svg, bars, status, stepCounter, retry };
}

beforeAll(async () => {
  workDir = mkdtempSync(join(tmpdir(), "routemirror-ui-"));
  const networkPath = join(workDir, "net.json");
  await run([
    "genmap",
    "--rows", "5", "--cols", "5",
    "--grid-spacing", "100",
    "--origin", "0,0",
    "--seed", "0",
    "--out", networkPath,
  ]);
  serviceProc = spawn(
    "python3",
    ["-m", "routemirror.cli", "serve", "--network", networkPath, "--bind", `127.0.0.1:${PORT}`],
    { stdio: "ignore" },
  );
  await waitForService();
}, 60_000);

afterAll(() => {
  serviceProc?.kill();
  if (workDir) rmSync(workDir, { recursive: true, force: true });
});

describe("scripted live scenario", () => {
  it("bars mirror the service payloads and the probed candidate leads", async () => {
    const countingFetch = (input: string, init?: RequestInit) => {
      fetchCalls.push(`${init?.method ?? "GET"} ${input}`);
      return fetch(input, init);
    };
    const client = new ServiceClient(BASE, countingFetch);
    const els = buildElements();
    const app = new App(client, els);
    await app.start();
    expect(app.network).not.toBeNull();
    const nodes = app.network!.nodes;

    // Scenario: start at the southwest corner; destinations at the east and
    // north ends of the grid's edge rows. The eastward row is unique to the
    // east destination's ideal route.
    app.setMode("init");
    await app.handleMapClick(nodes["n000-000"]!);
    app.setMode("intention");
    await app.handleMapClick(nodes["n000-004"]!); // east destination
    await app.handleMapClick(nodes["n004-000"]!); // north destination
    await app.createSession();
    expect(app.store.sessionId).not.toBeNull();
    const eastLabel = app.store.intentions[0]!.label;

    // Uniform start: two bars of 0.5 each.
    const initial = readBars(els.bars);
    expect(initial).toHaveLength(2);
    expect(initial[0]!.value).toBeCloseTo(0.5, 12);

    app.setMode("observe");
    const probes = ["n000-001", "n000-002", "n000-003"] as const;
    for (let step = 0; step < probes.length; step++) {
      const before = fetchCalls.length;
      await app.handleMapClick(nodes[probes[step]!]!);

      // one request round trip per click
      const requests = fetchCalls.slice(before);
      expect(requests).toHaveLength(1);
      expect(requests[0]).toContain("POST");
      expect(requests[0]).toContain("/observations");

      // rendered bars equal the service's view of the session, value for value
      const serverState = await client.getSession(app.store.sessionId!);
      expect(serverState.observation_count).toBe(step + 1);
      const rendered = readBars(els.bars);
      expect(rendered).toHaveLength(2);
      for (const bar of rendered) {
        expect(bar.value).toBe(serverState.posterior[bar.label]!);
      }
      expect(els.stepCounter.textContent).toBe(String(step + 1));

      // the east destination's bar is maximal from the first unique-segment click
      expect(rendered[0]!.label).toBe(eastLabel);
      expect(rendered[0]!.argmax).toBe(true);
      expect(serverState.argmax).toContain(eastLabel);
      expect(rendered[0]!.value).toBeGreaterThan(rendered[1]!.value);
    }

    // trail and counters track the three steps
    expect(app.store.trail).toHaveLength(3);
    expect(app.store.step).toBe(3);
  }, 60_000);

  it("duplicate destination clicks are rejected inline", async () => {
    const client = new ServiceClient(BASE);
    const els = buildElements();
    const app = new App(client, els);
    await app.start();
    const nodes = app.network!.nodes;
    app.setMode("intention");
    await app.handleMapClick(nodes["n000-004"]!);
    await app.handleMapClick(nodes["n000-004"]!);
    expect(app.store.intentions).toHaveLength(1);
    expect(els.status.className).toContain("error");
  });

  it("off-network clicks snap to the nearest node", async () => {
    const client = new ServiceClient(BASE);
    const els = buildElements();
    const app = new App(client, els);
    await app.start();
    const nodes = app.network!.nodes;
    app.setMode("intention");
    const target = nodes["n002-002"]!;
    await app.handleMapClick([target[0] + 0.0001, target[1] + 0.0001]);
    expect(app.store.intentions[0]!.point).toEqual(target);
  });

  it("problem replay matches the solve trace step by step", async () => {
    const client = new ServiceClient(BASE);
    const els = buildElements();
    const app = new App(client, els);
    await app.start();
    const nodes = app.network!.nodes;
    const problem = {
      problem_id: "replay-1",
      init: nodes["n000-000"]!,
      intent_location: nodes["n000-004"]!,
      intentions: [nodes["n000-004"]!, nodes["n004-000"]!],
      observations: [nodes["n000-001"]!, nodes["n000-002"]!, nodes["n000-003"]!],
    };
    const expected = (await client.solve([problem]))[0]!;
    await app.loadProblemReplay(problem);
    expect(app.replay).not.toBeNull();
    for (const want of expected.steps) {
      expect(app.replay!.stepForward()).toBe(true);
      const rendered = readBars(els.bars);
      for (const bar of rendered) {
        expect(bar.value).toBe(want.posterior[bar.label]!);
      }
      expect(app.store.trail).toHaveLength(want.step);
    }
    expect(app.replay!.stepForward()).toBe(false);
  }, 60_000);
});
