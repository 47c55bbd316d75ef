#!/usr/bin/env python3
"""Regenerate the bundled London fixture files (network + gazetteer).

The network is a deterministic synthetic grid covering central London so
every example runs offline; the gazetteer carries the landmark coordinates
used by the bundled example problems.
"""

from __future__ import annotations

import json
from pathlib import Path

from routemirror import Gazetteer, LatLng, generate_grid_network, save_gazetteer, save_network

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "src" / "routemirror" / "fixtures"

LANDMARKS = {
    "Kensington Palace London": (51.5050, -0.1877),
    "London Bridge": (51.5079, -0.0877),
    "Univeristy of London": (51.5216, -0.1296),
    "Buckingham Palace London": (51.5014, -0.1419),
    "Tower Bridge London": (51.5055, -0.0754),
    "Farringdon Station London": (51.5203, -0.1053),
    "St Pauls Cathedral London": (51.5138, -0.0984),
    "Trafalgar Square London": (51.5080, -0.1281),
    "Hyde Park Corner London": (51.5027, -0.1527),
}


def main() -> None:
    network = generate_grid_network(
        rows=19,
        cols=40,
        spacing_m=250.0,
        origin=LatLng(51.49, -0.20),
        jitter_fraction=0.08,
        drop_probability=0.05,
        seed=0,
    )
    FIXTURE_DIR.mkdir(parents=True, exist_ok=True)
    save_network(network, FIXTURE_DIR / "london_network.json")
    gazetteer = Gazetteer({name: LatLng(lat, lng) for name, (lat, lng) in LANDMARKS.items()})
    save_gazetteer(gazetteer, FIXTURE_DIR / "london_gazetteer.json")
    print(f"wrote fixtures to {FIXTURE_DIR}")


if __name__ == "__main__":
    main()
