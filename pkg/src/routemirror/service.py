"""HTTP facade over recognition sessions and batch solving.

Endpoints: POST /sessions, POST /sessions/{id}/observations,
GET /sessions/{id}, DELETE /sessions/{id}, GET /networks, POST /solve.
All payloads are JSON; coordinates travel as [lat, lng] pairs. Sessions are
in-memory with idle eviction; replaying observations over HTTP produces the
same numbers as the library, since both share one code path.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field as dataclass_field
from typing import Callable

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response

from .errors import (
    DuplicateIntentionError,
    RouteMirrorError,
    UnknownPlaceError,
    UnreachableIntentionError,
)
from .geo import GeoConfig, LatLng
from .planner import GraphPlanner, RoutePlanner
from .recognizer import (
    Candidate,
    Session,
    create_session,
    place_label,
    problems_from_json,
    solve_problem,
    trace_rows,
    Environment,
)
from .roadnet import Gazetteer, RoadNetwork, resolve_place

DEFAULT_SESSION_TTL_S = 1800.0


class ApiError(Exception):
    """Carries an HTTP status code and message out of a handler."""

    def __init__(self, status_code: int, message: str):
        self.status_code = status_code
        self.message = message
        super().__init__(message)


@dataclass
class SessionHandle:
    session_id: str
    network_name: str
    created_at: float
    last_access: float
    session: Session
    lock: threading.Lock = dataclass_field(default_factory=threading.Lock)


@dataclass
class ServiceState:
    """Shared immutable fixtures plus the mutable session table."""

    networks: dict[str, RoadNetwork]
    gazetteer: Gazetteer | None = None
    geo: GeoConfig = dataclass_field(default_factory=GeoConfig)
    planner_factory: Callable[[RoadNetwork], RoutePlanner] = GraphPlanner
    session_ttl_s: float = DEFAULT_SESSION_TTL_S
    clock: Callable[[], float] = time.monotonic
    sessions: dict[str, SessionHandle] = dataclass_field(default_factory=dict)
    table_lock: threading.Lock = dataclass_field(default_factory=threading.Lock)
    _planners: dict[str, RoutePlanner] = dataclass_field(default_factory=dict)

    def planner_for(self, network_name: str) -> RoutePlanner:
        # One planner per network so route caches are shared across sessions.
        planner = self._planners.get(network_name)
        if planner is None:
            planner = self.planner_factory(self.networks[network_name])
            self._planners[network_name] = planner
        return planner

    def evict_idle(self) -> None:
        now = self.clock()
        with self.table_lock:
            stale = [
                sid
                for sid, handle in self.sessions.items()
                if now - handle.last_access > self.session_ttl_s
            ]
            for sid in stale:
                del self.sessions[sid]

    def get_handle(self, session_id: str) -> SessionHandle:
        self.evict_idle()
        with self.table_lock:
            handle = self.sessions.get(session_id)
            if handle is None:
                raise ApiError(404, f"unknown session {session_id!r}")
            handle.last_access = self.clock()
            return handle


def _parse_latlng(value: object, what: str) -> LatLng:
    if not (isinstance(value, (list, tuple)) and len(value) == 2):
        raise ApiError(400, f"{what} must be a [lat, lng] pair, got {value!r}")
    try:
        return LatLng(float(value[0]), float(value[1]))
    except (TypeError, ValueError) as exc:
        raise ApiError(400, f"{what}: {exc}")


def _parse_place(state: ServiceState, value: object, what: str) -> tuple[str, LatLng]:
    if isinstance(value, str):
        try:
            return value, resolve_place(state.gazetteer, value)
        except UnknownPlaceError as exc:
            raise ApiError(400, str(exc))
    point = _parse_latlng(value, what)
    return place_label(point), point


def _geo_with_overrides(base: GeoConfig, overrides: object) -> GeoConfig:
    if overrides is None:
        return base
    if not isinstance(overrides, dict):
        raise ApiError(400, "config must be an object")
    mapping = {"tau": "similarity_threshold_m", "spacing": "resample_spacing_m", "radius": "sphere_radius_m"}
    kwargs = {
        "sphere_radius_m": base.sphere_radius_m,
        "similarity_threshold_m": base.similarity_threshold_m,
        "resample_spacing_m": base.resample_spacing_m,
    }
    for key, value in overrides.items():
        if key not in mapping:
            raise ApiError(400, f"unknown config key {key!r} (expected tau, spacing or radius)")
        try:
            kwargs[mapping[key]] = float(value)
        except (TypeError, ValueError):
            raise ApiError(400, f"config {key!r} must be a number")
    try:
        return GeoConfig(**kwargs)
    except ValueError as exc:
        raise ApiError(400, str(exc))


def _session_payload(handle: SessionHandle) -> dict:
    session = handle.session
    latest = session.latest()
    return {
        "session_id": handle.session_id,
        "network": handle.network_name,
        "init": session.init.as_pair(),
        "intentions": session.labels,
        "observation_count": len(session.observations),
        "observations": [o.as_pair() for o in session.observations],
        "ideal_route_lengths_m": {
            label: route.total_length_m for label, route in session.ideal_routes.items()
        },
        "ideal_routes": {
            label: [p.as_pair() for p in route.points]
            for label, route in session.ideal_routes.items()
        },
        "posterior": dict(latest.posterior) if latest else dict(session.priors),
        "epsilon": dict(latest.epsilon) if latest else {},
        "argmax": list(latest.argmax) if latest else [],
        "warnings": list(session.warnings),
    }


def _network_payload(name: str, network: RoadNetwork) -> dict:
    lats = [p.lat for p in network.nodes.values()]
    lngs = [p.lng for p in network.nodes.values()]
    return {
        "name": name,
        "node_count": network.node_count,
        "edge_count": network.edge_count,
        "bounds": [[min(lats), min(lngs)], [max(lats), max(lngs)]],
        "nodes": {node_id: p.as_pair() for node_id, p in sorted(network.nodes.items())},
        "edges": [[e.from_id, e.to_id] for e in network.edges],
    }


def create_app(state: ServiceState) -> FastAPI:
    app = FastAPI(title="routemirror", docs_url=None, redoc_url=None)
    # Browser clients (the bundled frontend) are served from elsewhere.
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.exception_handler(ApiError)
    async def handle_api_error(_request: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status_code, content={"error": exc.message})

    @app.exception_handler(RouteMirrorError)
    async def handle_domain_error(_request: Request, exc: RouteMirrorError):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    async def read_json(request: Request) -> object:
        try:
            return await request.json()
        except Exception:
            raise ApiError(400, "request body must be JSON")

    def pick_network(body: dict) -> str:
        name = body.get("network")
        if name is None:
            if len(state.networks) == 1:
                return next(iter(state.networks))
            raise ApiError(400, f"specify one of the loaded networks: {sorted(state.networks)}")
        if name not in state.networks:
            raise ApiError(400, f"unknown network {name!r} (loaded: {sorted(state.networks)})")
        return str(name)

    @app.get("/networks")
    def list_networks():
        return [_network_payload(name, net) for name, net in sorted(state.networks.items())]

    @app.post("/sessions", status_code=201)
    async def post_session(request: Request):
        state.evict_idle()
        body = await read_json(request)
        if not isinstance(body, dict):
            raise ApiError(400, "session body must be an object")
        network_name = pick_network(body)
        network = state.networks[network_name]
        if "init" not in body or "intentions" not in body:
            raise ApiError(400, "session body needs 'init' and 'intentions'")
        _, init = _parse_place(state, body["init"], "init")
        raw_intentions = body["intentions"]
        if not isinstance(raw_intentions, list) or len(raw_intentions) < 2:
            raise ApiError(400, "intentions must be a list of at least 2 places")
        candidates = [
            Candidate(*_parse_place(state, item, f"intentions[{i}]"))
            for i, item in enumerate(raw_intentions)
        ]
        geo = _geo_with_overrides(state.geo, body.get("config"))
        priors = body.get("priors")
        try:
            session = create_session(
                network, state.planner_for(network_name), geo, init, candidates, priors
            )
        except UnreachableIntentionError as exc:
            raise ApiError(422, str(exc))
        except (DuplicateIntentionError, ValueError) as exc:
            raise ApiError(400, str(exc))
        handle = SessionHandle(
            session_id=uuid.uuid4().hex,
            network_name=network_name,
            created_at=state.clock(),
            last_access=state.clock(),
            session=session,
        )
        with state.table_lock:
            state.sessions[handle.session_id] = handle
        return _session_payload(handle)

    @app.post("/sessions/{session_id}/observations")
    async def post_observation(session_id: str, request: Request):
        handle = state.get_handle(session_id)
        body = await read_json(request)
        if isinstance(body, dict):
            if "observation" not in body:
                raise ApiError(400, "body needs an 'observation' [lat, lng] pair")
            raw = body["observation"]
        else:
            raw = body
        observation = _parse_latlng(raw, "observation")
        with handle.lock:
            distribution = handle.session.observe(observation)
            previews = {
                label: (route.total_length_m if route is not None else None)
                for label, route in handle.session.last_observation_routes.items()
            }
        return {
            "step": distribution.observation_count,
            "posterior": dict(distribution.posterior),
            "epsilon": dict(distribution.epsilon),
            "argmax": list(distribution.argmax),
            "observation_route_preview": previews,
        }

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        handle = state.get_handle(session_id)
        with handle.lock:
            return _session_payload(handle)

    @app.delete("/sessions/{session_id}", status_code=204)
    def delete_session(session_id: str):
        state.evict_idle()
        with state.table_lock:
            if session_id not in state.sessions:
                raise ApiError(404, f"unknown session {session_id!r}")
            del state.sessions[session_id]
        return Response(status_code=204)

    @app.post("/solve")
    async def solve_batch(request: Request):
        body = await read_json(request)
        problems_data = body.get("problems") if isinstance(body, dict) else body
        network_name = pick_network(body if isinstance(body, dict) else {})
        try:
            problems = problems_from_json(problems_data)
        except RouteMirrorError as exc:
            raise ApiError(400, str(exc))
        env = Environment(
            network=state.networks[network_name],
            planner=state.planner_for(network_name),
            geo=state.geo,
            gazetteer=state.gazetteer,
        )
        traces = []
        for problem in problems:
            try:
                distributions = solve_problem(problem, env)
            except RouteMirrorError as exc:
                raise ApiError(422, f"problem {problem.problem_id!r}: {exc}")
            traces.append({"problem_id": problem.problem_id, "steps": trace_rows(distributions)})
        return traces

    return app
