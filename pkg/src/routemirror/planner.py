"""Route planning: optimal graph routes, waypoint routing, and alternative planner backends.

The graph planner runs A* with a great-circle heuristic (admissible because
every edge is at least as long as the chord between its endpoints, a
load-time invariant). Among equal-cost shortest paths it returns the one
with the lexicographically smallest node-id sequence, which makes every
route deterministic.
"""

from __future__ import annotations

import heapq
import math
import random
import re
from dataclasses import dataclass
from typing import Callable, Protocol, Sequence

from .errors import (
    MalformedResponseError,
    NoRouteError,
    TextRouteParseError,
    TransportError,
)
from .geo import LatLng, haversine_distance, polyline_length
from .roadnet import RoadNetwork, nearest_node


@dataclass(frozen=True)
class Route:
    """An ordered polyline from an origin to a destination, tagged by its producer."""

    points: tuple[LatLng, ...]
    total_length_m: float
    planner_id: str

    def __post_init__(self):
        if len(self.points) == 0:
            raise ValueError("route must contain at least one point")


class RoutePlanner(Protocol):
    """Anything that can plan point-to-point and via-waypoint routes."""

    planner_id: str

    def plan(self, origin: LatLng, destination: LatLng) -> Route: ...

    def plan_via(
        self, origin: LatLng, waypoints: Sequence[LatLng], destination: LatLng
    ) -> Route: ...


@dataclass(frozen=True)
class RouteRequest:
    origin: LatLng
    destination: LatLng
    via: tuple[LatLng, ...] = ()


def plan_with(planner: RoutePlanner, request: RouteRequest) -> Route:
    """Dispatch a request to a planner; the route carries the planner's id."""
    if request.via:
        return planner.plan_via(request.origin, list(request.via), request.destination)
    return planner.plan(request.origin, request.destination)


def astar_cost(
    network: RoadNetwork,
    start: str,
    goal: str,
    costs: Sequence[float] | None = None,
    heuristic_scale: float = 1.0,
) -> float | None:
    """Minimum path cost from start to goal by A* with a great-circle-to-goal heuristic.

    Returns None when the goal is unreachable. `costs` overrides per-edge costs
    (indexed like network.edges); `heuristic_scale` must keep the heuristic
    admissible for those costs (<= min cost/chord ratio).
    """
    if costs is None:
        costs = network.edge_lengths()
    goal_pos = network.nodes[goal]

    def h(node_id: str) -> float:
        return heuristic_scale * haversine_distance(network.nodes[node_id], goal_pos)

    open_heap: list[tuple[float, float, str]] = [(h(start), 0.0, start)]
    best_g: dict[str, float] = {start: 0.0}
    closed: set[str] = set()
    while open_heap:
        _, g, node = heapq.heappop(open_heap)
        if node == goal:
            return g
        if node in closed:
            continue
        closed.add(node)
        for neighbor, edge_index in network.out_edges[node]:
            if neighbor in closed:
                continue
            ng = g + costs[edge_index]
            if ng < best_g.get(neighbor, math.inf):
                best_g[neighbor] = ng
                heapq.heappush(open_heap, (ng + h(neighbor), ng, neighbor))
    return None


def dijkstra_distances(
    network: RoadNetwork,
    root: str,
    costs: Sequence[float] | None = None,
    reverse: bool = False,
) -> dict[str, float]:
    """Reference Dijkstra: cost of the cheapest path from (or, reversed, to) the root."""
    if costs is None:
        costs = network.edge_lengths()
    adjacency = network.in_edges if reverse else network.out_edges
    dist: dict[str, float] = {root: 0.0}
    heap: list[tuple[float, str]] = [(0.0, root)]
    done: set[str] = set()
    while heap:
        d, node = heapq.heappop(heap)
        if node in done:
            continue
        done.add(node)
        for neighbor, edge_index in adjacency[node]:
            nd = costs[edge_index] + d
            if nd < dist.get(neighbor, math.inf):
                dist[neighbor] = nd
                heapq.heappush(heap, (nd, neighbor))
    return dist


def _lexicographic_walk(
    network: RoadNetwork,
    start: str,
    goal: str,
    costs: Sequence[float],
    dist_to_goal: dict[str, float],
) -> list[str]:
    """Walk the shortest-path DAG picking the smallest node id at every branch.

    dist_to_goal comes from a reverse Dijkstra rooted at the goal, so for every
    node on a shortest path there is a successor with bitwise-equal
    cost + remaining distance; ties between such successors are broken by id.
    """
    path = [start]
    node = start
    while node != goal:
        remaining = dist_to_goal[node]
        successor: str | None = None
        for neighbor, edge_index in network.out_edges[node]:
            tail = dist_to_goal.get(neighbor)
            if tail is None:
                continue
            if costs[edge_index] + tail == remaining and (successor is None or neighbor < successor):
                successor = neighbor
        if successor is None:
            raise AssertionError(f"shortest-path walk stuck at node {node!r}")
        path.append(successor)
        node = successor
    return path


class GraphPlanner:
    """Optimal-route planner over a loaded road network."""

    planner_id = "internal"

    def __init__(self, network: RoadNetwork):
        self.network = network
        self._costs = self._edge_costs()
        self._heuristic_scale = 1.0
        self._snap_cache: dict[tuple[float, float], str] = {}
        self._dist_cache: dict[str, dict[str, float]] = {}
        self._path_cache: dict[tuple[str, str], tuple[str, ...]] = {}

    def _edge_costs(self) -> list[float]:
        return self.network.edge_lengths()

    def snap(self, point: LatLng) -> str:
        key = (point.lat, point.lng)
        node_id = self._snap_cache.get(key)
        if node_id is None:
            node_id = nearest_node(self.network, point)
            self._snap_cache[key] = node_id
        return node_id

    def _node_path(self, start: str, goal: str, leg: str | None = None) -> tuple[str, ...]:
        if start == goal:
            return (start,)
        cached = self._path_cache.get((start, goal))
        if cached is not None:
            return cached
        cost = astar_cost(self.network, start, goal, self._costs, self._heuristic_scale)
        if cost is None:
            raise NoRouteError(start, goal, leg)
        dist_to_goal = self._dist_cache.get(goal)
        if dist_to_goal is None:
            dist_to_goal = dijkstra_distances(self.network, goal, self._costs, reverse=True)
            self._dist_cache[goal] = dist_to_goal
        path = tuple(_lexicographic_walk(self.network, start, goal, self._costs, dist_to_goal))
        self._path_cache[(start, goal)] = path
        return path

    def _route_from_nodes(self, node_ids: Sequence[str]) -> Route:
        points = tuple(self.network.nodes[node_id] for node_id in node_ids)
        return Route(points, polyline_length(points), self.planner_id)

    def plan(self, origin: LatLng, destination: LatLng) -> Route:
        return self._route_from_nodes(self._node_path(self.snap(origin), self.snap(destination)))

    def plan_via(
        self, origin: LatLng, waypoints: Sequence[LatLng], destination: LatLng
    ) -> Route:
        stops = [self.snap(origin)] + [self.snap(w) for w in waypoints] + [self.snap(destination)]
        node_ids: list[str] = [stops[0]]
        for i, (a, b) in enumerate(zip(stops, stops[1:])):
            leg = self._node_path(a, b, leg=f"{i}:{a}->{b}")
            node_ids.extend(leg[1:])
        return self._route_from_nodes(node_ids)


class PerturbedPlanner(GraphPlanner):
    """Graph planner with deterministically perturbed edge costs.

    Stands in for an alternative routing vendor: each edge cost is multiplied
    by a seeded factor drawn uniformly from [1-delta, 1+delta], so route
    choices diverge from the unperturbed planner while staying deterministic.
    Reported route lengths remain true geometric lengths.
    """

    planner_id = "perturbed"

    def __init__(self, network: RoadNetwork, delta: float = 0.2, seed: int = 0):
        if not 0.0 <= delta < 1.0:
            raise ValueError(f"delta must be in [0, 1), got {delta}")
        self.delta = delta
        self.seed = seed
        super().__init__(network)
        # Scale the heuristic down so it never overestimates perturbed costs.
        self._heuristic_scale = 1.0 - delta

    def _edge_costs(self) -> list[float]:
        rng = random.Random(self.seed)
        return [
            e.length_m * rng.uniform(1.0 - self.delta, 1.0 + self.delta)
            for e in self.network.edges
        ]


def _pairs_payload(points: Sequence[LatLng]) -> list[list[float]]:
    return [p.as_pair() for p in points]


class ExternalDirectionsClient:
    """Client for the minimal external directions protocol.

    Protocol: POST /route with
    ``{"origin": [lat,lng], "destination": [lat,lng], "via": [[lat,lng],...]}``
    answered by ``{"points": [[lat,lng],...], "length_m": number}``.

    A transport callable (payload dict -> response dict) can be injected for
    fixtures and tests; otherwise requests go over HTTP to base_url.
    """

    planner_id = "external"

    def __init__(
        self,
        transport: Callable[[dict], dict] | None = None,
        base_url: str | None = None,
        timeout_s: float = 10.0,
    ):
        if (transport is None) == (base_url is None):
            raise ValueError("provide exactly one of transport or base_url")
        self._transport = transport
        self._base_url = base_url.rstrip("/") if base_url else None
        self._timeout_s = timeout_s

    def _send(self, payload: dict) -> dict:
        if self._transport is not None:
            try:
                return self._transport(payload)
            except Exception as exc:
                raise TransportError(f"directions transport failed: {exc}") from exc
        import httpx

        try:
            response = httpx.post(
                f"{self._base_url}/route", json=payload, timeout=self._timeout_s
            )
        except Exception as exc:
            raise TransportError(f"directions request failed: {exc}") from exc
        if response.status_code != 200:
            raise TransportError(f"directions service answered HTTP {response.status_code}")
        try:
            return response.json()
        except ValueError as exc:
            raise MalformedResponseError(f"directions reply is not JSON: {exc}") from exc

    def _route_from_reply(self, reply: object) -> Route:
        if not isinstance(reply, dict):
            raise MalformedResponseError(f"directions reply must be an object, got {type(reply).__name__}")
        raw_points = reply.get("points")
        raw_length = reply.get("length_m")
        if not isinstance(raw_points, list) or len(raw_points) == 0:
            raise MalformedResponseError("directions reply needs a nonempty 'points' array")
        if not isinstance(raw_length, (int, float)) or isinstance(raw_length, bool):
            raise MalformedResponseError("directions reply needs a numeric 'length_m'")
        points = []
        for pair in raw_points:
            if not (isinstance(pair, list) and len(pair) == 2):
                raise MalformedResponseError(f"malformed point {pair!r} in directions reply")
            try:
                points.append(LatLng(float(pair[0]), float(pair[1])))
            except (TypeError, ValueError) as exc:
                raise MalformedResponseError(f"malformed point {pair!r}: {exc}") from exc
        return Route(tuple(points), float(raw_length), self.planner_id)

    def plan(self, origin: LatLng, destination: LatLng) -> Route:
        return self.plan_via(origin, [], destination)

    def plan_via(
        self, origin: LatLng, waypoints: Sequence[LatLng], destination: LatLng
    ) -> Route:
        payload = {
            "origin": origin.as_pair(),
            "destination": destination.as_pair(),
            "via": _pairs_payload(waypoints),
        }
        return self._route_from_reply(self._send(payload))


_NUMBER = r"[+-]?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?"
_COORD_PAIR = re.compile(rf"[(\[]\s*({_NUMBER})\s*,\s*({_NUMBER})\s*[)\]]")


def parse_textual_route(text: str) -> Route:
    """Extract a route from free text containing "(lat, lng)" or "[lat, lng]" pairs.

    Pairs are taken in order of appearance; the route length is the great-circle
    polyline length. Raises TextRouteParseError when no pair parses.
    """
    points: list[LatLng] = []
    for match in _COORD_PAIR.finditer(text):
        points.append(LatLng(float(match.group(1)), float(match.group(2))))
    if not points:
        first_line = next((line for line in text.splitlines() if line.strip()), "")
        raise TextRouteParseError(
            f"no coordinate pairs found; first line was {first_line!r}"
        )
    pts = tuple(points)
    return Route(pts, polyline_length(pts), "text")


def format_textual_route(route: Route) -> str:
    """One "(lat, lng)" pair per line; parse_textual_route round-trips this exactly."""
    return "\n".join(f"({p.lat!r}, {p.lng!r})" for p in route.points)


def format_directions_prompt(
    origin: LatLng, waypoints: Sequence[LatLng], destination: LatLng
) -> str:
    parts = [
        "Give driving directions as a list of (latitude, longitude) waypoints, one per line.",
        f"Start: ({origin.lat}, {origin.lng})",
    ]
    for i, w in enumerate(waypoints, start=1):
        parts.append(f"Pass through point {i}: ({w.lat}, {w.lng})")
    parts.append(f"Destination: ({destination.lat}, {destination.lng})")
    return "\n".join(parts)


class TextRoutePlanner:
    """Planner that asks for directions as text and parses the reply.

    The transport (prompt string -> reply string) is injected; no live calls.
    """

    planner_id = "text"

    def __init__(self, transport: Callable[[str], str]):
        self._transport = transport

    def plan(self, origin: LatLng, destination: LatLng) -> Route:
        return self.plan_via(origin, [], destination)

    def plan_via(
        self, origin: LatLng, waypoints: Sequence[LatLng], destination: LatLng
    ) -> Route:
        prompt = format_directions_prompt(origin, waypoints, destination)
        try:
            reply = self._transport(prompt)
        except Exception as exc:
            raise TransportError(f"text-directions transport failed: {exc}") from exc
        return parse_textual_route(reply)
