"""Bundled offline fixtures: a synthetic central-London network, landmark gazetteer,
and example recognition problems."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from ..roadnet import Gazetteer, RoadNetwork, load_gazetteer, load_network


def fixture_path(name: str) -> Path:
    return Path(str(resources.files(__package__).joinpath(name)))


def london_network() -> RoadNetwork:
    return load_network(fixture_path("london_network.json"))


def london_gazetteer() -> Gazetteer:
    return load_gazetteer(fixture_path("london_gazetteer.json"))


def london_problems_path() -> Path:
    return fixture_path("london_problems.json")
