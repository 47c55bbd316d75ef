/**
 * Typed client for the recognition service HTTP API.
 *
 * All coordinates travel as [lat, lng] pairs. The fetch implementation is
 * injectable so tests can mock the transport or point at a scratch server.
 */

export type LatLngPair = [number, number];

export interface NetworkInfo {
  name: string;
  node_count: number;
  edge_count: number;
  bounds: [LatLngPair, LatLngPair];
  nodes: Record<string, LatLngPair>;
  edges: [string, string][];
}

export interface SessionInfo {
  session_id: string;
  network: string;
  init: LatLngPair;
  intentions: string[];
  observation_count: number;
  observations: LatLngPair[];
  ideal_route_lengths_m: Record<string, number>;
  ideal_routes: Record<string, LatLngPair[]>;
  posterior: Record<string, number>;
  epsilon: Record<string, number>;
  argmax: string[];
  warnings: string[];
}

export interface ObservationResult {
  step: number;
  posterior: Record<string, number>;
  epsilon: Record<string, number>;
  argmax: string[];
  observation_route_preview: Record<string, number | null>;
}

export interface TraceStep {
  step: number;
  posterior: Record<string, number>;
  epsilon: Record<string, number>;
  argmax: string[];
}

export interface ProblemTrace {
  problem_id: string;
  steps: TraceStep[];
}

export interface ProblemDocument {
  problem_id: string;
  init: string | LatLngPair;
  intent_location: string | LatLngPair;
  intentions: (string | LatLngPair)[];
  observations: LatLngPair[];
}

export interface CreateSessionBody {
  network?: string;
  init: string | LatLngPair;
  intentions: (string | LatLngPair)[];
  priors?: number[];
  config?: { tau?: number; spacing?: number; radius?: number };
}

/** Error carrying the service's message so it can be shown inline. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ServiceClient {
  private readonly baseUrl: string;
  private readonly fetchFn: FetchLike;

  constructor(baseUrl: string, fetchFn?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(`${this.baseUrl}${path}`, {
        method,
        headers: body === undefined ? undefined : { "Content-Type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (err) {
      throw new ApiError(0, `service unreachable: ${String(err)}`);
    }
    if (response.status === 204) {
      return undefined as T;
    }
    const text = await response.text();
    let payload: unknown = undefined;
    if (text) {
      try {
        payload = JSON.parse(text);
      } catch {
        payload = undefined;
      }
    }
    if (!response.ok) {
      const detail =
        payload && typeof payload === "object" && "error" in payload
          ? String((payload as { error: unknown }).error)
          : `HTTP ${response.status}`;
      throw new ApiError(response.status, detail);
    }
    return payload as T;
  }

  listNetworks(): Promise<NetworkInfo[]> {
    return this.request("GET", "/networks");
  }

  createSession(body: CreateSessionBody): Promise<SessionInfo> {
    return this.request("POST", "/sessions", body);
  }

  observe(sessionId: string, observation: LatLngPair): Promise<ObservationResult> {
    return this.request("POST", `/sessions/${sessionId}/observations`, { observation });
  }

  getSession(sessionId: string): Promise<SessionInfo> {
    return this.request("GET", `/sessions/${sessionId}`);
  }

  deleteSession(sessionId: string): Promise<void> {
    return this.request("DELETE", `/sessions/${sessionId}`);
  }

  solve(problems: ProblemDocument[], network?: string): Promise<ProblemTrace[]> {
    return this.request("POST", "/solve", { network, problems });
  }
}
