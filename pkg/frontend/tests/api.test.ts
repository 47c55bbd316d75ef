import { describe, expect, it } from "vitest";

import { ApiError, ServiceClient } from "../src/api.js";

function fakeFetch(
  handler: (input: string, init?: RequestInit) => { status: number; body?: unknown },
) {
  const calls: { input: string; init?: RequestInit }[] = [];
  const fetchFn = async (input: string, init?: RequestInit): Promise<Response> => {
    calls.push({ input, init });
    const { status, body } = handler(input, init);
    return new Response(body === undefined ? null : JSON.stringify(body), {
      status,
      headers: { "Content-Type": "application/json" },
    });
  };
  return { fetchFn, calls };
}

describe("ServiceClient", () => {
  it("posts observations with the [lat, lng] wire shape", async () => {
    const { fetchFn, calls } = fakeFetch(() => ({
      status: 200,
      body: { step: 1, posterior: {}, epsilon: {}, argmax: [], observation_route_preview: {} },
    }));
    const client = new ServiceClient("http://svc", fetchFn);
    await client.observe("s1", [51.5, -0.1]);
    expect(calls[0]?.input).toBe("http://svc/sessions/s1/observations");
    expect(calls[0]?.init?.method).toBe("POST");
    expect(JSON.parse(String(calls[0]?.init?.body))).toEqual({ observation: [51.5, -0.1] });
  });

  it("strips trailing slashes from the base url", async () => {
    const { fetchFn, calls } = fakeFetch(() => ({ status: 200, body: [] }));
    const client = new ServiceClient("http://svc:8000///", fetchFn);
    await client.listNetworks();
    expect(calls[0]?.input).toBe("http://svc:8000/networks");
  });

  it("surfaces the service's error message", async () => {
    const { fetchFn } = fakeFetch(() => ({
      status: 400,
      body: { error: "unknown place 'Atlantis'" },
    }));
    const client = new ServiceClient("http://svc", fetchFn);
    await expect(client.createSession({ init: "Atlantis", intentions: ["a", "b"] })).rejects.toThrow(
      /Atlantis/,
    );
  });

  it("flags transport failures with status 0", async () => {
    const client = new ServiceClient("http://svc", async () => {
      throw new TypeError("network down");
    });
    try {
      await client.listNetworks();
      expect.unreachable();
    } catch (err) {
      expect(err).toBeInstanceOf(ApiError);
      expect((err as ApiError).status).toBe(0);
    }
  });

  it("treats 204 as empty success", async () => {
    const { fetchFn } = fakeFetch(() => ({ status: 204 }));
    const client = new ServiceClient("http://svc", fetchFn);
    await expect(client.deleteSession("s1")).resolves.toBeUndefined();
  });

  it("wraps problems for the solve endpoint", async () => {
    const { fetchFn, calls } = fakeFetch(() => ({ status: 200, body: [] }));
    const client = new ServiceClient("http://svc", fetchFn);
    const problem = {
      problem_id: "p",
      init: [0, 0] as [number, number],
      intent_location: "a",
      intentions: ["a", "b"],
      observations: [],
    };
    await client.solve([problem], "grid");
    const body = JSON.parse(String(calls[0]?.init?.body));
    expect(body.network).toBe("grid");
    expect(body.problems).toHaveLength(1);
  });
});
