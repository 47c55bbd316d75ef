import { describe, expect, it } from "vitest";

import { haversineMeters, nearestNode } from "../src/geo.js";

describe("haversineMeters", () => {
  it("is zero for identical points", () => {
    expect(haversineMeters([51.5, -0.1], [51.5, -0.1])).toBe(0);
  });

  it("matches a known distance", () => {
    // Frozen from the backend's oracle-checked implementation.
    const d = haversineMeters([51.502179, -0.1746681], [51.511215, -0.0732266]);
    expect(d).toBeCloseTo(7092.337, 2);
  });

  it("is symmetric", () => {
    const a: [number, number] = [10.1, 20.2];
    const b: [number, number] = [-33.3, 150.0];
    expect(haversineMeters(a, b)).toBe(haversineMeters(b, a));
  });
});

describe("nearestNode", () => {
  const nodes: Record<string, [number, number]> = {
    b: [0, 0.001],
    a: [0, -0.001],
    c: [0.5, 0],
  };

  it("returns the exact node for its own position", () => {
    expect(nearestNode(nodes, [0.5, 0])).toBe("c");
  });

  it("breaks ties toward the smaller id", () => {
    expect(nearestNode(nodes, [0, 0])).toBe("a");
  });

  it("matches a linear scan", () => {
    const probe: [number, number] = [0.2, 0.0004];
    let best = "";
    let bestDist = Infinity;
    for (const id of Object.keys(nodes).sort()) {
      const d = haversineMeters(nodes[id]!, probe);
      if (d < bestDist) {
        best = id;
        bestDist = d;
      }
    }
    expect(nearestNode(nodes, probe)).toBe(best);
  });

  it("throws on an empty network", () => {
    expect(() => nearestNode({}, [0, 0])).toThrow();
  });
});
