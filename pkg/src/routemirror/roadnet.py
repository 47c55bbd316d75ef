"""Road-network model: JSON loading, synthetic grid generation, snapping, place lookup.

Network file schema::

    {"name": str,
     "nodes": [{"id": str, "lat": num, "lng": num}, ...],
     "edges": [{"from": str, "to": str, "length_m": num, "oneway": bool?}, ...]}

Gazetteer file schema: ``{"Place Name": [lat, lng], ...}``.
"""

from __future__ import annotations

import difflib
import json
import math
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from .errors import GraphValidationError, UnknownPlaceError
from .geo import MEAN_EARTH_RADIUS_M, LatLng, haversine_distance

# Loaded edges may be exactly as long as the great-circle chord; allow this
# much relative slack before flagging a too-short edge.
CHORD_SLACK = 1e-6


@dataclass(frozen=True)
class RoadEdge:
    from_id: str
    to_id: str
    length_m: float
    oneway: bool = False


@dataclass(frozen=True, eq=False)
class RoadNetwork:
    """Immutable geographic graph; edges are bidirectional unless flagged oneway."""

    nodes: dict[str, LatLng]
    edges: tuple[RoadEdge, ...]
    name: str = ""
    # Adjacency derived in __post_init__: node -> ((neighbor, edge_index), ...).
    out_edges: dict[str, tuple[tuple[str, int], ...]] = field(default_factory=dict, repr=False)
    in_edges: dict[str, tuple[tuple[str, int], ...]] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self.nodes:
            raise GraphValidationError("network has no nodes")
        out: dict[str, list[tuple[str, int]]] = {node_id: [] for node_id in self.nodes}
        inc: dict[str, list[tuple[str, int]]] = {node_id: [] for node_id in self.nodes}
        for i, edge in enumerate(self.edges):
            for endpoint in (edge.from_id, edge.to_id):
                if endpoint not in self.nodes:
                    raise GraphValidationError(
                        f"edge {edge.from_id!r}->{edge.to_id!r} references missing node {endpoint!r}"
                    )
            if edge.from_id == edge.to_id:
                raise GraphValidationError(f"self-loop edge at node {edge.from_id!r}")
            if not (math.isfinite(edge.length_m) and edge.length_m > 0):
                raise GraphValidationError(
                    f"edge {edge.from_id!r}->{edge.to_id!r} has nonpositive length {edge.length_m}"
                )
            chord = haversine_distance(self.nodes[edge.from_id], self.nodes[edge.to_id])
            if edge.length_m < chord * (1.0 - CHORD_SLACK):
                raise GraphValidationError(
                    f"edge {edge.from_id!r}->{edge.to_id!r} length {edge.length_m} m is shorter "
                    f"than the {chord:.3f} m great-circle chord between its endpoints"
                )
            out[edge.from_id].append((edge.to_id, i))
            inc[edge.to_id].append((edge.from_id, i))
            if not edge.oneway:
                out[edge.to_id].append((edge.from_id, i))
                inc[edge.from_id].append((edge.to_id, i))
        object.__setattr__(self, "out_edges", {k: tuple(v) for k, v in out.items()})
        object.__setattr__(self, "in_edges", {k: tuple(v) for k, v in inc.items()})

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def edge_lengths(self) -> list[float]:
        return [e.length_m for e in self.edges]

    def to_json_obj(self) -> dict:
        return {
            "name": self.name,
            "nodes": [
                {"id": node_id, "lat": p.lat, "lng": p.lng}
                for node_id, p in sorted(self.nodes.items())
            ],
            "edges": [
                {"from": e.from_id, "to": e.to_id, "length_m": e.length_m, "oneway": e.oneway}
                for e in self.edges
            ],
        }


def serialize_network(network: RoadNetwork) -> str:
    """Stable JSON encoding: identical networks serialize to identical bytes."""
    return json.dumps(network.to_json_obj(), sort_keys=True, separators=(",", ":"))


def save_network(network: RoadNetwork, path: str | Path) -> None:
    Path(path).write_text(serialize_network(network))


def network_from_json_obj(obj: object) -> RoadNetwork:
    if not isinstance(obj, dict):
        raise GraphValidationError(f"network document must be a JSON object, got {type(obj).__name__}")
    raw_nodes = obj.get("nodes")
    raw_edges = obj.get("edges")
    if not isinstance(raw_nodes, list) or not isinstance(raw_edges, list):
        raise GraphValidationError("network document needs 'nodes' and 'edges' arrays")
    nodes: dict[str, LatLng] = {}
    for item in raw_nodes:
        if not isinstance(item, dict) or not {"id", "lat", "lng"} <= item.keys():
            raise GraphValidationError(f"malformed node entry: {item!r}")
        node_id = str(item["id"])
        if node_id in nodes:
            raise GraphValidationError(f"duplicate node id {node_id!r}")
        try:
            nodes[node_id] = LatLng(float(item["lat"]), float(item["lng"]))
        except (TypeError, ValueError) as exc:
            raise GraphValidationError(f"node {node_id!r}: {exc}") from exc
    edges = []
    for item in raw_edges:
        if not isinstance(item, dict) or not {"from", "to", "length_m"} <= item.keys():
            raise GraphValidationError(f"malformed edge entry: {item!r}")
        try:
            length = float(item["length_m"])
        except (TypeError, ValueError) as exc:
            raise GraphValidationError(f"edge {item.get('from')!r}->{item.get('to')!r}: {exc}") from exc
        edges.append(
            RoadEdge(str(item["from"]), str(item["to"]), length, bool(item.get("oneway", False)))
        )
    return RoadNetwork(nodes=nodes, edges=tuple(edges), name=str(obj.get("name", "")))


def load_network(path: str | Path) -> RoadNetwork:
    """Load and validate a network file; diagnostics name the offending node or edge."""
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise GraphValidationError(f"cannot parse network file {path}: {exc}") from exc
    return network_from_json_obj(obj)


def _grid_node_id(row: int, col: int) -> str:
    return f"n{row:03d}-{col:03d}"


def _build_grid(
    rows: int,
    cols: int,
    spacing_m: float,
    origin: LatLng,
    jitter_fraction: float,
    drop_probability: float,
    seed: int,
) -> RoadNetwork:
    rng = random.Random(seed)
    lat_per_m = math.degrees(1.0 / MEAN_EARTH_RADIUS_M)
    lng_per_m = math.degrees(1.0 / (MEAN_EARTH_RADIUS_M * math.cos(math.radians(origin.lat))))
    nodes: dict[str, LatLng] = {}
    for r in range(rows):
        for c in range(cols):
            jr = rng.uniform(-1.0, 1.0) * jitter_fraction * spacing_m
            jc = rng.uniform(-1.0, 1.0) * jitter_fraction * spacing_m
            nodes[_grid_node_id(r, c)] = LatLng(
                origin.lat + (r * spacing_m + jr) * lat_per_m,
                origin.lng + (c * spacing_m + jc) * lng_per_m,
            )
    edges: list[RoadEdge] = []
    for r in range(rows):
        for c in range(cols):
            here = _grid_node_id(r, c)
            for neighbor in ((r, c + 1), (r + 1, c)):
                if neighbor[0] >= rows or neighbor[1] >= cols:
                    continue
                other = _grid_node_id(*neighbor)
                if rng.random() < drop_probability:
                    continue
                edges.append(
                    RoadEdge(here, other, haversine_distance(nodes[here], nodes[other]))
                )
    name = f"grid-{rows}x{cols}-sp{spacing_m:g}-seed{seed}"
    return RoadNetwork(nodes=nodes, edges=tuple(edges), name=name)


def _fully_connected(network: RoadNetwork) -> bool:
    start = next(iter(network.nodes))
    seen = {start}
    frontier = [start]
    while frontier:
        node = frontier.pop()
        for neighbor, _ in network.out_edges[node]:
            if neighbor not in seen:
                seen.add(neighbor)
                frontier.append(neighbor)
    return len(seen) == len(network.nodes)


def generate_grid_network(
    rows: int,
    cols: int,
    spacing_m: float,
    origin: LatLng,
    jitter_fraction: float = 0.0,
    drop_probability: float = 0.0,
    seed: int = 0,
    max_retries: int = 10_000,
) -> RoadNetwork:
    """Deterministic synthetic grid: rows x cols nodes, jittered, with random edge drops.

    If edge drops disconnect the grid, the seed is advanced (seed+1, seed+2, ...)
    until the network is fully connected; the seed actually used is recorded in
    the network name. Identical arguments always yield a bit-identical network.
    """
    if rows < 2 or cols < 2:
        raise ValueError(f"grid needs at least 2x2 nodes, got {rows}x{cols}")
    if not spacing_m > 0:
        raise ValueError(f"spacing must be strictly positive, got {spacing_m}")
    if not 0.0 <= jitter_fraction < 0.5:
        raise ValueError(f"jitter_fraction must be in [0, 0.5), got {jitter_fraction}")
    if not 0.0 <= drop_probability < 0.3:
        raise ValueError(f"drop_probability must be in [0, 0.3), got {drop_probability}")
    for attempt in range(max_retries):
        network = _build_grid(
            rows, cols, spacing_m, origin, jitter_fraction, drop_probability, seed + attempt
        )
        if _fully_connected(network):
            return network
    raise RuntimeError(f"no connected grid found in {max_retries} seed retries from {seed}")


def nearest_node(network: RoadNetwork, point: LatLng) -> str:
    """Node id with minimum great-circle distance to the point; ties go to the smallest id."""
    if not network.nodes:
        raise GraphValidationError("network has no nodes")
    best_id: str | None = None
    best_dist = math.inf
    for node_id in sorted(network.nodes):
        d = haversine_distance(network.nodes[node_id], point)
        if d < best_dist:
            best_id = node_id
            best_dist = d
    assert best_id is not None
    return best_id


def _fold_name(name: str) -> str:
    return " ".join(name.split()).casefold()


class Gazetteer:
    """Offline place-name lookup; names are unique after case-folding and trimming."""

    def __init__(self, entries: Mapping[str, LatLng] | Iterable[tuple[str, LatLng]]):
        items = entries.items() if isinstance(entries, Mapping) else entries
        self._entries: dict[str, tuple[str, LatLng]] = {}
        for name, point in items:
            key = _fold_name(name)
            if key in self._entries:
                raise ValueError(f"duplicate gazetteer name {name!r}")
            self._entries[key] = (name, point)

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, name: str) -> bool:
        return _fold_name(name) in self._entries

    def names(self) -> list[str]:
        return sorted(original for original, _ in self._entries.values())

    def lookup(self, name: str) -> LatLng:
        key = _fold_name(name)
        entry = self._entries.get(key)
        if entry is None:
            close = difflib.get_close_matches(key, list(self._entries), n=3, cutoff=0.4)
            raise UnknownPlaceError(name, [self._entries[k][0] for k in close])
        return entry[1]

    def to_json_obj(self) -> dict:
        return {original: [p.lat, p.lng] for original, p in sorted(self._entries.values())}


def load_gazetteer(path: str | Path) -> Gazetteer:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise GraphValidationError(f"cannot parse gazetteer file {path}: {exc}") from exc
    if not isinstance(obj, dict):
        raise GraphValidationError("gazetteer document must be a JSON object")
    entries = {}
    for name, pair in obj.items():
        if not (isinstance(pair, list) and len(pair) == 2):
            raise GraphValidationError(f"gazetteer entry {name!r} must map to a [lat, lng] pair")
        entries[str(name)] = LatLng(float(pair[0]), float(pair[1]))
    return Gazetteer(entries)


def save_gazetteer(gazetteer: Gazetteer, path: str | Path) -> None:
    Path(path).write_text(json.dumps(gazetteer.to_json_obj(), sort_keys=True, indent=1))


def resolve_place(gazetteer: Gazetteer | None, ref: str | LatLng) -> LatLng:
    """Coordinates pass through unchanged; names resolve via case-folded lookup."""
    if isinstance(ref, LatLng):
        return ref
    if gazetteer is None:
        raise UnknownPlaceError(ref)
    return gazetteer.lookup(ref)


def gazetteer_from_network(
    network: RoadNetwork, count: int, seed: int = 0, prefix: str = "place"
) -> Gazetteer:
    """Synthetic gazetteer of `count` named places sampled from the network's nodes."""
    if count > len(network.nodes):
        raise ValueError(f"cannot sample {count} places from {len(network.nodes)} nodes")
    rng = random.Random(seed)
    chosen = rng.sample(sorted(network.nodes), count)
    return Gazetteer(
        {f"{prefix}-{i:02d}": network.nodes[node_id] for i, node_id in enumerate(chosen)}
    )
