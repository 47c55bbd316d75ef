// @vitest-environment jsdom
import { describe, expect, it } from "vitest";

import { readBars, renderBars } from "../src/bars.js";

describe("renderBars", () => {
  it("renders one row per candidate, sorted by probability", () => {
    const root = document.createElement("div");
    renderBars(root, { low: 0.2, high: 0.5, mid: 0.3 }, ["high"]);
    const rows = readBars(root);
    expect(rows.map((r) => r.label)).toEqual(["high", "mid", "low"]);
  });

  it("carries the exact payload values in data attributes", () => {
    const root = document.createElement("div");
    const posterior = { a: 0.6666666666666666, b: 0.3333333333333333 };
    renderBars(root, posterior, ["a"]);
    const rows = readBars(root);
    expect(rows[0]).toEqual({ label: "a", value: 0.6666666666666666, argmax: true });
    expect(rows[1]).toEqual({ label: "b", value: 0.3333333333333333, argmax: false });
  });

  it("marks every argmax candidate", () => {
    const root = document.createElement("div");
    renderBars(root, { a: 0.5, b: 0.5 }, ["a", "b"]);
    expect(readBars(root).every((r) => r.argmax)).toBe(true);
  });

  it("sets bar widths from the probabilities", () => {
    const root = document.createElement("div");
    renderBars(root, { a: 0.25 }, []);
    const fill = root.querySelector<HTMLElement>(".bar-fill");
    expect(parseFloat(fill?.style.width ?? "")).toBeCloseTo(25.0, 6);
  });

  it("replaces previous content on re-render", () => {
    const root = document.createElement("div");
    renderBars(root, { a: 1.0 }, ["a"]);
    renderBars(root, { b: 1.0 }, ["b"]);
    const rows = readBars(root);
    expect(rows).toHaveLength(1);
    expect(rows[0]?.label).toBe("b");
  });
});
