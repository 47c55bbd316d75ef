from __future__ import annotations

import math

import pytest

from routemirror import (
    Environment,
    Gazetteer,
    GeoConfig,
    GraphPlanner,
    LatLng,
    MEAN_EARTH_RADIUS_M,
    RoadEdge,
    RoadNetwork,
    generate_grid_network,
    haversine_distance,
)
from routemirror.fixtures import london_gazetteer, london_network, london_problems_path


def offset_latlng(origin: LatLng, north_m: float, east_m: float) -> LatLng:
    """Point displaced by metric offsets from an origin (small-offset approximation)."""
    lat = origin.lat + math.degrees(north_m / MEAN_EARTH_RADIUS_M)
    lng = origin.lng + math.degrees(
        east_m / (MEAN_EARTH_RADIUS_M * math.cos(math.radians(origin.lat)))
    )
    return LatLng(lat, lng)


def build_network(
    node_positions: dict[str, LatLng],
    edge_specs: list[tuple[str, str] | tuple[str, str, float]],
    name: str = "test",
) -> RoadNetwork:
    """Hand-built network; omitted edge lengths default to the great-circle chord."""
    edges = []
    for spec in edge_specs:
        a, b = spec[0], spec[1]
        length = spec[2] if len(spec) == 3 else haversine_distance(node_positions[a], node_positions[b])
        edges.append(RoadEdge(a, b, length))
    return RoadNetwork(nodes=node_positions, edges=tuple(edges), name=name)


def equator_grid(rows: int, cols: int, spacing_m: float = 100.0, uniform_cost: bool = True) -> RoadNetwork:
    """Exact grid at the equator; with uniform_cost every edge costs exactly spacing_m."""
    nodes = {}
    base = LatLng(0.0, 0.0)
    for r in range(rows):
        for c in range(cols):
            nodes[f"n{r:03d}-{c:03d}"] = offset_latlng(base, r * spacing_m, c * spacing_m)
    edges: list[tuple[str, str] | tuple[str, str, float]] = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                pair = (f"n{r:03d}-{c:03d}", f"n{r:03d}-{c + 1:03d}")
                edges.append((*pair, spacing_m) if uniform_cost else pair)
            if r + 1 < rows:
                pair = (f"n{r:03d}-{c:03d}", f"n{r + 1:03d}-{c:03d}")
                edges.append((*pair, spacing_m) if uniform_cost else pair)
    return build_network(nodes, edges, name=f"equator-{rows}x{cols}")


@pytest.fixture(scope="session")
def grid3() -> RoadNetwork:
    return equator_grid(3, 3)


@pytest.fixture(scope="session")
def grid5() -> RoadNetwork:
    return equator_grid(5, 5)


@pytest.fixture(scope="session")
def split_network() -> RoadNetwork:
    """Two disconnected 2-node components, for unreachable-destination tests."""
    base = LatLng(10.0, 20.0)
    nodes = {
        "a": base,
        "b": offset_latlng(base, 0.0, 100.0),
        "c": offset_latlng(base, 1000.0, 0.0),
        "d": offset_latlng(base, 1000.0, 100.0),
    }
    return build_network(nodes, [("a", "b"), ("c", "d")], name="split")


@pytest.fixture(scope="session")
def london_env() -> Environment:
    network = london_network()
    return Environment(
        network=network,
        planner=GraphPlanner(network),
        geo=GeoConfig(),
        gazetteer=london_gazetteer(),
    )


@pytest.fixture(scope="session")
def london_problem_file():
    return london_problems_path()


def benchmark_fixture() -> tuple[RoadNetwork, Gazetteer, tuple[LatLng, ...]]:
    """The pinned benchmark fixture: seeded 20x20 grid, 30 perimeter landmarks,
    5 interior initial locations."""
    network = generate_grid_network(
        rows=20,
        cols=20,
        spacing_m=100.0,
        origin=LatLng(51.5, -0.1),
        jitter_fraction=0.1,
        drop_probability=0.1,
        seed=7,
    )
    ring: list[tuple[int, int]] = []
    for c in range(20):
        ring.append((0, c))
    for r in range(1, 20):
        ring.append((r, 19))
    for c in range(18, -1, -1):
        ring.append((19, c))
    for r in range(18, 0, -1):
        ring.append((r, 0))
    picks = [ring[round(i * len(ring) / 30) % len(ring)] for i in range(30)]
    gazetteer = Gazetteer(
        {
            f"landmark-{i:02d}": network.nodes[f"n{r:03d}-{c:03d}"]
            for i, (r, c) in enumerate(picks)
        }
    )
    inits = tuple(
        network.nodes[f"n{r:03d}-{c:03d}"]
        for r, c in [(10, 10), (5, 5), (5, 14), (14, 5), (14, 14)]
    )
    return network, gazetteer, inits
