"""Spherical geodesy primitives: great-circle distance, similarity thresholding, resampling.

Distances are great-circle (spherical) distances in meters. Latitude and
longitude are degrees; longitude is normalized into (-180, 180] on
construction and the antimeridian is handled by taking the shorter
longitude difference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

# IUGG mean Earth radius.
MEAN_EARTH_RADIUS_M = 6_371_008.8

DEFAULT_SIMILARITY_THRESHOLD_M = 50.0
DEFAULT_RESAMPLE_SPACING_M = 25.0


@dataclass(frozen=True)
class LatLng:
    """A geographic point in degrees. lat in [-90, 90], lng normalized to (-180, 180]."""

    lat: float
    lng: float

    def __post_init__(self):
        lat = float(self.lat)
        lng = float(self.lng)
        if not (math.isfinite(lat) and math.isfinite(lng)):
            raise ValueError(f"non-finite coordinates ({self.lat}, {self.lng})")
        if not -90.0 <= lat <= 90.0:
            raise ValueError(f"latitude {lat} outside [-90, 90]")
        if not -180.0 < lng <= 180.0:
            lng = math.fmod(lng, 360.0)
            if lng <= -180.0:
                lng += 360.0
            elif lng > 180.0:
                lng -= 360.0
        object.__setattr__(self, "lat", lat)
        object.__setattr__(self, "lng", lng)

    def as_pair(self) -> list[float]:
        """[lat, lng] pair, the wire encoding used by every file format here."""
        return [self.lat, self.lng]


@dataclass(frozen=True)
class GeoConfig:
    """Shared geometry parameters: sphere radius, similarity threshold, resample spacing."""

    sphere_radius_m: float = MEAN_EARTH_RADIUS_M
    similarity_threshold_m: float = DEFAULT_SIMILARITY_THRESHOLD_M
    resample_spacing_m: float = DEFAULT_RESAMPLE_SPACING_M

    def __post_init__(self):
        for name in ("sphere_radius_m", "similarity_threshold_m", "resample_spacing_m"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be strictly positive, got {value}")


def _delta_lng_deg(a: LatLng, b: LatLng) -> float:
    """Absolute longitude difference in degrees, wrapped across the antimeridian."""
    d = abs(b.lng - a.lng)
    return 360.0 - d if d > 180.0 else d


def _central_angle(a: LatLng, b: LatLng) -> float:
    """Great-circle central angle in radians, via the haversine form (stable for short arcs)."""
    dlat = math.radians(abs(b.lat - a.lat))
    dlng = math.radians(_delta_lng_deg(a, b))
    h = math.sin(dlat / 2.0) ** 2 + math.cos(math.radians(b.lat)) * math.cos(
        math.radians(a.lat)
    ) * math.sin(dlng / 2.0) ** 2
    return 2.0 * math.asin(min(1.0, math.sqrt(h)))


def haversine_distance(a: LatLng, b: LatLng, radius_m: float = MEAN_EARTH_RADIUS_M) -> float:
    """Great-circle distance in meters between two points on a sphere of the given radius.

    Exactly symmetric in its arguments; always within [0, pi * radius_m].
    """
    if not radius_m > 0:
        raise ValueError(f"radius must be strictly positive, got {radius_m}")
    return radius_m * _central_angle(a, b)


def points_similar(a: LatLng, b: LatLng, cfg: GeoConfig) -> bool:
    """True iff the two points are within the configured similarity threshold."""
    return haversine_distance(a, b, cfg.sphere_radius_m) <= cfg.similarity_threshold_m


def polyline_length(points: Sequence[LatLng], radius_m: float = MEAN_EARTH_RADIUS_M) -> float:
    """Total great-circle length of a polyline in meters."""
    return sum(
        haversine_distance(p, q, radius_m) for p, q in zip(points, points[1:])
    )


def _unit_vector(p: LatLng) -> tuple[float, float, float]:
    lat = math.radians(p.lat)
    lng = math.radians(p.lng)
    cl = math.cos(lat)
    return (cl * math.cos(lng), cl * math.sin(lng), math.sin(lat))


def _vector_latlng(v: tuple[float, float, float]) -> LatLng:
    x, y, z = v
    return LatLng(math.degrees(math.atan2(z, math.hypot(x, y))), math.degrees(math.atan2(y, x)))


def _slerp(p: LatLng, q: LatLng, t: float) -> LatLng:
    """Point at fraction t along the great-circle arc from p to q."""
    omega = _central_angle(p, q)
    sin_omega = math.sin(omega)
    if sin_omega < 1e-12:
        if omega > 1.0:
            raise ValueError("cannot interpolate between antipodal points")
        return p
    u = _unit_vector(p)
    v = _unit_vector(q)
    a = math.sin((1.0 - t) * omega) / sin_omega
    b = math.sin(t * omega) / sin_omega
    return _vector_latlng((a * u[0] + b * v[0], a * u[1] + b * v[1], a * u[2] + b * v[2]))


def resample_polyline(
    points: Sequence[LatLng],
    spacing_m: float,
    radius_m: float = MEAN_EARTH_RADIUS_M,
) -> list[LatLng]:
    """Resample a polyline so consecutive points are at most spacing_m apart along each arc.

    Every original vertex is kept (so total length and endpoints are preserved);
    each segment is subdivided into equal sub-arcs no longer than spacing_m.
    A single-point polyline is returned unchanged.
    """
    if len(points) == 0:
        raise ValueError("empty polyline")
    if not spacing_m > 0:
        raise ValueError(f"spacing must be strictly positive, got {spacing_m}")
    if len(points) == 1:
        return [points[0]]
    out: list[LatLng] = [points[0]]
    for p, q in zip(points, points[1:]):
        seg_len = haversine_distance(p, q, radius_m)
        if seg_len == 0.0:
            out.append(q)
            continue
        # The 1e-9 guard keeps exact multiples of the spacing from picking up
        # an extra subdivision through floating-point noise.
        n = max(1, math.ceil(seg_len / spacing_m - 1e-9))
        for k in range(1, n):
            out.append(_slerp(p, q, k / n))
        out.append(q)
    return out


def point_at_arc_length(
    points: Sequence[LatLng],
    distance_m: float,
    radius_m: float = MEAN_EARTH_RADIUS_M,
) -> LatLng:
    """Point at the given arc-length distance along a polyline (clamped to its ends)."""
    if len(points) == 0:
        raise ValueError("empty polyline")
    if distance_m <= 0.0 or len(points) == 1:
        return points[0]
    walked = 0.0
    for p, q in zip(points, points[1:]):
        seg_len = haversine_distance(p, q, radius_m)
        if walked + seg_len >= distance_m and seg_len > 0.0:
            return _slerp(p, q, (distance_m - walked) / seg_len)
        walked += seg_len
    return points[-1]


def _points_to_radians(points: Sequence[LatLng]) -> np.ndarray:
    """(n, 2) array of [lat, lng] in radians."""
    arr = np.empty((len(points), 2), dtype=np.float64)
    for i, p in enumerate(points):
        arr[i, 0] = math.radians(p.lat)
        arr[i, 1] = math.radians(p.lng)
    return arr


def matched_fraction(
    probe: Sequence[LatLng],
    reference: Sequence[LatLng],
    cfg: GeoConfig,
) -> float:
    """Fraction of probe points whose nearest reference point is within the threshold.

    Equivalent to testing points_similar(probe[i], reference[j], cfg) for every
    pair, but vectorized.
    """
    if len(probe) == 0 or len(reference) == 0:
        raise ValueError("empty polyline")
    return _matched_fraction_arrays(_points_to_radians(probe), _points_to_radians(reference), cfg)


def _matched_fraction_arrays(probe: np.ndarray, reference: np.ndarray, cfg: GeoConfig) -> float:
    dlat = probe[:, None, 0] - reference[None, :, 0]
    dlng = np.abs(probe[:, None, 1] - reference[None, :, 1])
    dlng = np.minimum(dlng, 2.0 * math.pi - dlng)
    h = (
        np.sin(dlat / 2.0) ** 2
        + np.cos(probe[:, None, 0]) * np.cos(reference[None, :, 0]) * np.sin(dlng / 2.0) ** 2
    )
    dist = 2.0 * cfg.sphere_radius_m * np.arcsin(np.minimum(1.0, np.sqrt(h)))
    matched = int(np.count_nonzero((dist <= cfg.similarity_threshold_m).any(axis=1)))
    return matched / probe.shape[0]
