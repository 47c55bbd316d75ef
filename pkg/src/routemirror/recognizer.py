"""Destination-intention recognition by route mirroring.

For every candidate destination the session keeps the ideal route from the
initial location. Each incoming observation extends the observation route
(initial location, through all observations in order, to the candidate);
the compliance score epsilon is the fraction of observation-route points
that stay within the similarity threshold of the ideal route. The
likelihood [1 + (1 - epsilon)]^-1 feeds a normalized posterior over the
candidate set. Each step depends only on the full observation prefix,
never on earlier posteriors.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .errors import (
    DuplicateIntentionError,
    NoRouteError,
    PlannerError,
    ProblemSchemaError,
    UnreachableIntentionError,
)
from .geo import GeoConfig, LatLng, _matched_fraction_arrays, _points_to_radians, resample_polyline
from .planner import Route, RoutePlanner
from .roadnet import Gazetteer, RoadNetwork, resolve_place

# Candidates whose posterior is within this distance of the maximum are all
# reported as the argmax set.
TIE_EPSILON = 1e-9

PlaceRef = str | LatLng


def place_label(ref: str | LatLng) -> str:
    """Display label for a place reference: the name itself, or "lat,lng" for coordinates."""
    if isinstance(ref, str):
        return ref
    return f"{ref.lat!r},{ref.lng!r}"


def _canonical_ref(ref: str | LatLng):
    if isinstance(ref, str):
        return " ".join(ref.split()).casefold()
    return (ref.lat, ref.lng)


@dataclass(frozen=True)
class Candidate:
    label: str
    location: LatLng


@dataclass(frozen=True)
class RecognitionProblem:
    """One recognition problem: initial place, candidate set, ground truth, observations."""

    problem_id: str
    init: str | LatLng
    intent_location: str | LatLng
    intentions: tuple[str | LatLng, ...]
    observations: tuple[LatLng, ...]

    def __post_init__(self):
        members = {_canonical_ref(ref) for ref in self.intentions}
        if _canonical_ref(self.intent_location) not in members:
            raise ValueError(
                f"intent_location {place_label(self.intent_location)!r} is not one of the intentions"
            )

    @property
    def true_label(self) -> str:
        return place_label(self.intent_location)


@dataclass(frozen=True)
class RankedDistribution:
    """Posterior over candidate destinations after some number of observations."""

    labels: tuple[str, ...]
    epsilon: dict[str, float]
    likelihood: dict[str, float]
    posterior: dict[str, float]
    argmax: tuple[str, ...]
    observation_count: int

    def top(self) -> str:
        return self.argmax[0]


def score_epsilon(ideal: Route, observed: Route, cfg: GeoConfig) -> float:
    """Compliance of an observation route with an ideal route, in [0, 1].

    Both routes are resampled at the configured spacing; the score is the
    fraction of observation-route points whose nearest ideal-route point is
    within the similarity threshold. 1.0 means the observed behaviour fully
    complies with the ideal route.
    """
    ideal_pts = resample_polyline(ideal.points, cfg.resample_spacing_m, cfg.sphere_radius_m)
    observed_pts = resample_polyline(observed.points, cfg.resample_spacing_m, cfg.sphere_radius_m)
    return _matched_fraction_arrays(
        _points_to_radians(observed_pts), _points_to_radians(ideal_pts), cfg
    )


def likelihood(epsilon: float) -> float:
    """Observation likelihood [1 + (1 - epsilon)]^-1; increasing, from 0.5 at 0 to 1.0 at 1."""
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"epsilon must be within [0, 1], got {epsilon}")
    return 1.0 / (1.0 + (1.0 - epsilon))


def posterior(
    candidates: Sequence[str],
    priors: Sequence[float],
    likelihoods: Sequence[float],
    epsilons: dict[str, float] | None = None,
    observation_count: int = 0,
) -> RankedDistribution:
    """Normalized posterior proportional to prior * likelihood, with its argmax set."""
    if not (len(candidates) == len(priors) == len(likelihoods)):
        raise ValueError("candidates, priors and likelihoods must have equal lengths")
    if len(candidates) == 0:
        raise ValueError("empty candidate set")
    if abs(sum(priors) - 1.0) > 1e-9:
        raise ValueError(f"priors must sum to 1, got {sum(priors)}")
    for value in likelihoods:
        if not 0.0 < value <= 1.0:
            raise ValueError(f"likelihoods must lie in (0, 1], got {value}")
    weights = [p * l for p, l in zip(priors, likelihoods)]
    mass = sum(weights)
    if not mass > 0.0:
        raise RuntimeError("posterior normalization mass is zero")
    posteriors = {label: w / mass for label, w in zip(candidates, weights)}
    peak = max(posteriors.values())
    argmax = tuple(label for label in candidates if posteriors[label] >= peak - TIE_EPSILON)
    return RankedDistribution(
        labels=tuple(candidates),
        epsilon=dict(epsilons) if epsilons is not None else {},
        likelihood={label: l for label, l in zip(candidates, likelihoods)},
        posterior=posteriors,
        argmax=argmax,
        observation_count=observation_count,
    )


class Session:
    """A live recognition session: cached ideal routes plus a growing observation prefix.

    Not thread-safe; callers serialize observe() per session. Distinct
    sessions are fully independent.
    """

    def __init__(
        self,
        network: RoadNetwork,
        planner: RoutePlanner,
        geo: GeoConfig,
        init: LatLng,
        candidates: list[Candidate],
        priors: dict[str, float],
        ideal_routes: dict[str, Route],
    ):
        self.network = network
        self.planner = planner
        self.geo = geo
        self.init = init
        self.candidates = candidates
        self.priors = priors
        self.ideal_routes = ideal_routes
        self.observations: list[LatLng] = []
        self.distributions: list[RankedDistribution] = []
        self.warnings: list[str] = []
        self.last_observation_routes: dict[str, Route | None] = {}
        self._ideal_resampled = {
            label: _points_to_radians(
                resample_polyline(route.points, geo.resample_spacing_m, geo.sphere_radius_m)
            )
            for label, route in ideal_routes.items()
        }

    @property
    def labels(self) -> list[str]:
        return [c.label for c in self.candidates]

    def latest(self) -> RankedDistribution | None:
        return self.distributions[-1] if self.distributions else None

    def observe(self, observation: LatLng) -> RankedDistribution:
        """Consume one observation and return the updated posterior distribution.

        A routing failure for a candidate downgrades that candidate to
        epsilon 0 and records a warning instead of aborting the session.
        """
        self.observations.append(observation)
        epsilons: dict[str, float] = {}
        likelihoods: list[float] = []
        self.last_observation_routes = {}
        for candidate in self.candidates:
            try:
                obs_route = self.planner.plan_via(self.init, self.observations, candidate.location)
                obs_pts = resample_polyline(
                    obs_route.points, self.geo.resample_spacing_m, self.geo.sphere_radius_m
                )
                eps = _matched_fraction_arrays(
                    _points_to_radians(obs_pts), self._ideal_resampled[candidate.label], self.geo
                )
            except PlannerError as exc:
                obs_route = None
                eps = 0.0
                self.warnings.append(
                    f"step {len(self.observations)}, candidate {candidate.label!r}: {exc}"
                )
            self.last_observation_routes[candidate.label] = obs_route
            epsilons[candidate.label] = eps
            likelihoods.append(likelihood(eps))
        distribution = posterior(
            self.labels,
            [self.priors[label] for label in self.labels],
            likelihoods,
            epsilons=epsilons,
            observation_count=len(self.observations),
        )
        self.distributions.append(distribution)
        return distribution


def _normalize_candidates(
    intentions: Sequence[LatLng | tuple[str, LatLng] | Candidate],
) -> list[Candidate]:
    out: list[Candidate] = []
    for item in intentions:
        if isinstance(item, Candidate):
            out.append(item)
        elif isinstance(item, LatLng):
            out.append(Candidate(place_label(item), item))
        else:
            label, point = item
            out.append(Candidate(str(label), point))
    return out


def create_session(
    network: RoadNetwork,
    planner: RoutePlanner,
    cfg: GeoConfig,
    init: LatLng,
    intentions: Sequence[LatLng | tuple[str, LatLng] | Candidate],
    priors: Sequence[float] | dict[str, float] | None = None,
) -> Session:
    """Start a session: validates the candidate set and caches one ideal route per candidate.

    Priors default to uniform; explicit priors are positive weights and are
    normalized over the candidate set.
    """
    candidates = _normalize_candidates(intentions)
    if len(candidates) < 2:
        raise ValueError(f"need at least 2 intentions, got {len(candidates)}")
    seen_labels: set[str] = set()
    seen_coords: set[tuple[float, float]] = set()
    for c in candidates:
        if c.label in seen_labels:
            raise DuplicateIntentionError(f"duplicate intention label {c.label!r}")
        coords = (c.location.lat, c.location.lng)
        if coords in seen_coords:
            raise DuplicateIntentionError(
                f"intention {c.label!r} duplicates another intention's coordinates"
            )
        seen_labels.add(c.label)
        seen_coords.add(coords)
    if priors is None:
        weights = {c.label: 1.0 for c in candidates}
    elif isinstance(priors, dict):
        missing = [c.label for c in candidates if c.label not in priors]
        if missing:
            raise ValueError(f"priors missing for intentions: {missing}")
        weights = {c.label: float(priors[c.label]) for c in candidates}
    else:
        if len(priors) != len(candidates):
            raise ValueError("need one prior per intention")
        weights = {c.label: float(p) for c, p in zip(candidates, priors)}
    if any(not (math.isfinite(w) and w > 0) for w in weights.values()):
        raise ValueError("priors must be strictly positive")
    total = sum(weights.values())
    normalized = {label: w / total for label, w in weights.items()}
    ideal_routes: dict[str, Route] = {}
    for c in candidates:
        try:
            ideal_routes[c.label] = planner.plan(init, c.location)
        except NoRouteError as exc:
            raise UnreachableIntentionError(c.label, str(exc)) from exc
    return Session(network, planner, cfg, init, candidates, normalized, ideal_routes)


@dataclass
class Environment:
    """Everything needed to replay recognition problems offline."""

    network: RoadNetwork
    planner: RoutePlanner
    geo: GeoConfig = field(default_factory=GeoConfig)
    gazetteer: Gazetteer | None = None

    def resolve(self, ref: str | LatLng) -> LatLng:
        return resolve_place(self.gazetteer, ref)


def session_for_problem(problem: RecognitionProblem, env: Environment) -> Session:
    init = env.resolve(problem.init)
    candidates = [Candidate(place_label(ref), env.resolve(ref)) for ref in problem.intentions]
    return create_session(env.network, env.planner, env.geo, init, candidates)


def solve_problem(problem: RecognitionProblem, env: Environment) -> list[RankedDistribution]:
    """Replay a problem's observations through a fresh session; one distribution per step."""
    session = session_for_problem(problem, env)
    return [session.observe(obs) for obs in problem.observations]


# ---------------------------------------------------------------------------
# Problem JSON schema (see module docstring in bench for the dataset layout)
# ---------------------------------------------------------------------------

_PROBLEM_FIELDS = ("problem_id", "init", "intent_location", "intentions", "observations")


def _parse_place_ref(value: object, field_name: str, index: int | None):
    if isinstance(value, str):
        if not value.strip():
            raise ProblemSchemaError("place name is empty", field=field_name, index=index)
        return value
    if isinstance(value, (list, tuple)) and len(value) == 2:
        try:
            return LatLng(float(value[0]), float(value[1]))
        except (TypeError, ValueError) as exc:
            raise ProblemSchemaError(str(exc), field=field_name, index=index) from exc
    raise ProblemSchemaError(
        f"expected a place name or [lat, lng] pair, got {value!r}", field=field_name, index=index
    )


def problem_from_json_obj(obj: object, index: int | None = None) -> RecognitionProblem:
    if not isinstance(obj, dict):
        raise ProblemSchemaError(f"problem must be an object, got {type(obj).__name__}", index=index)
    for name in _PROBLEM_FIELDS:
        if name not in obj:
            raise ProblemSchemaError("missing required field", field=name, index=index)
    if not isinstance(obj["intentions"], list) or len(obj["intentions"]) < 2:
        raise ProblemSchemaError("need a list of at least 2 entries", field="intentions", index=index)
    if not isinstance(obj["observations"], list):
        raise ProblemSchemaError("must be a list of [lat, lng] pairs", field="observations", index=index)
    intentions = tuple(
        _parse_place_ref(item, f"intentions[{i}]", index) for i, item in enumerate(obj["intentions"])
    )
    observations = []
    for i, item in enumerate(obj["observations"]):
        ref = _parse_place_ref(item, f"observations[{i}]", index)
        if not isinstance(ref, LatLng):
            raise ProblemSchemaError(
                "observations must be [lat, lng] pairs", field=f"observations[{i}]", index=index
            )
        observations.append(ref)
    try:
        return RecognitionProblem(
            problem_id=str(obj["problem_id"]),
            init=_parse_place_ref(obj["init"], "init", index),
            intent_location=_parse_place_ref(obj["intent_location"], "intent_location", index),
            intentions=intentions,
            observations=tuple(observations),
        )
    except ValueError as exc:
        raise ProblemSchemaError(str(exc), field="intent_location", index=index) from exc


def problems_from_json(data: object) -> list[RecognitionProblem]:
    if isinstance(data, dict):
        data = [data]
    if not isinstance(data, list):
        raise ProblemSchemaError("problem document must be a JSON array of problems")
    return [problem_from_json_obj(obj, index=i) for i, obj in enumerate(data)]


def load_problems(path: str | Path) -> list[RecognitionProblem]:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ProblemSchemaError(f"cannot parse problem file {path}: {exc}") from exc
    return problems_from_json(data)


def _ref_to_json(ref: str | LatLng):
    return ref if isinstance(ref, str) else ref.as_pair()


def problem_to_json_obj(problem: RecognitionProblem) -> dict:
    return {
        "problem_id": problem.problem_id,
        "init": _ref_to_json(problem.init),
        "intent_location": _ref_to_json(problem.intent_location),
        "intentions": [_ref_to_json(ref) for ref in problem.intentions],
        "observations": [o.as_pair() for o in problem.observations],
    }


def save_problems(problems: Sequence[RecognitionProblem], path: str | Path) -> None:
    Path(path).write_text(
        json.dumps([problem_to_json_obj(p) for p in problems], sort_keys=True, separators=(",", ":"))
    )


def trace_rows(distributions: Sequence[RankedDistribution]) -> list[dict]:
    """Wire encoding of a per-step trace: step number, posterior, epsilon, argmax."""
    return [
        {
            "step": i + 1,
            "posterior": dict(d.posterior),
            "epsilon": dict(d.epsilon),
            "argmax": list(d.argmax),
        }
        for i, d in enumerate(distributions)
    ]
