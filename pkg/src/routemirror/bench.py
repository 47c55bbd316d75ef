"""Dataset generation and evaluation harness.

Problems are generated by planning a true route from a seeded initial
location to a seeded intended destination and extracting evenly spaced
observation points along it. Evaluation replays each problem and scores
the final-step argmax set against the hidden intent, reporting TPR, FPR
and F1 grouped by observation count and by intention count.
"""

from __future__ import annotations

import json
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .geo import LatLng, point_at_arc_length, polyline_length
from .recognizer import (
    Environment,
    RankedDistribution,
    RecognitionProblem,
    solve_problem,
)
from .roadnet import Gazetteer, resolve_place

DEFAULT_INTENTION_GROUP_SIZES = (2, 5, 10, 15)
DEFAULT_OBSERVATION_GROUP_SIZES = (1, 3, 5, 10, 15)


@dataclass(frozen=True)
class DatasetConfig:
    """Design of a generated benchmark dataset.

    The canonical design crosses 5 initial locations with the intention and
    observation group sizes, yielding 100 problems with every combination
    covered once.
    """

    initial_locations: tuple[str | LatLng, ...]
    intention_group_sizes: tuple[int, ...] = DEFAULT_INTENTION_GROUP_SIZES
    observation_group_sizes: tuple[int, ...] = DEFAULT_OBSERVATION_GROUP_SIZES
    problems_total: int = 100
    seed: int = 0
    # Planner spec used to produce the true routes (the CLI honors this when
    # building the generation environment).
    generation_planner: str = "internal"

    def __post_init__(self):
        if len(self.initial_locations) == 0:
            raise ValueError("need at least one initial location")
        if any(n <= 0 for n in self.intention_group_sizes + self.observation_group_sizes):
            raise ValueError("group sizes must be strictly positive")
        if self.problems_total % len(self.observation_group_sizes) != 0:
            raise ValueError(
                f"problems_total={self.problems_total} is not divisible by the "
                f"{len(self.observation_group_sizes)} observation groups"
            )


def dataset_config_from_json_obj(obj: dict) -> DatasetConfig:
    def ref(value):
        return value if isinstance(value, str) else LatLng(float(value[0]), float(value[1]))

    kwargs = {}
    if "intention_group_sizes" in obj:
        kwargs["intention_group_sizes"] = tuple(int(n) for n in obj["intention_group_sizes"])
    if "observation_group_sizes" in obj:
        kwargs["observation_group_sizes"] = tuple(int(n) for n in obj["observation_group_sizes"])
    if "problems_total" in obj:
        kwargs["problems_total"] = int(obj["problems_total"])
    if "seed" in obj:
        kwargs["seed"] = int(obj["seed"])
    if "generation_planner" in obj:
        kwargs["generation_planner"] = str(obj["generation_planner"])
    return DatasetConfig(
        initial_locations=tuple(ref(v) for v in obj["initial_locations"]), **kwargs
    )


def extract_observations(route_points: Sequence[LatLng], count: int, radius_m: float) -> list[LatLng]:
    """`count` evenly spaced points along the route: the midpoints of `count` equal arcs.

    Arc-length fractions (2i - 1) / (2 * count), so the start point is always
    excluded, the exact destination is never reached, and a single
    observation lands at the route's arc-length midpoint.
    """
    total = polyline_length(route_points, radius_m)
    return [
        point_at_arc_length(route_points, total * (2 * i - 1) / (2 * count), radius_m)
        for i in range(1, count + 1)
    ]


def generate_dataset(
    cfg: DatasetConfig,
    env: Environment,
    gazetteer: Gazetteer | None = None,
) -> list[RecognitionProblem]:
    """Deterministically generate the benchmark problems described by the config.

    For each problem: a scheduled initial location, a seeded sample of
    candidate intentions from the gazetteer (excluding places at the initial
    location), one of them picked as the hidden intent, the true route
    planned with the environment's planner, and the scheduled number of
    observations extracted along it.
    """
    gaz = gazetteer or env.gazetteer
    if gaz is None:
        raise ValueError("dataset generation needs a gazetteer")
    rng = random.Random(cfg.seed)
    names = gaz.names()
    scenarios = cfg.problems_total // len(cfg.observation_group_sizes)
    problems: list[RecognitionProblem] = []
    # Paired design: each scenario (initial location, intention set, true route)
    # is probed once per observation-group size, so groups differ only in how
    # much of the route has been observed.
    for slot in range(scenarios):
        intent_count = cfg.intention_group_sizes[slot % len(cfg.intention_group_sizes)]
        init_slot = slot % len(cfg.initial_locations)
        init_ref = cfg.initial_locations[init_slot]
        init_point = resolve_place(gaz, init_ref) if isinstance(init_ref, str) else init_ref
        pool = [n for n in names if gaz.lookup(n) != init_point]
        if len(pool) < intent_count:
            raise ValueError(
                f"gazetteer has only {len(pool)} usable places, need {intent_count}"
            )
        chosen = rng.sample(pool, intent_count)
        intent_name = rng.choice(chosen)
        true_route = env.planner.plan(init_point, gaz.lookup(intent_name))
        for obs_count in cfg.observation_group_sizes:
            observations = extract_observations(
                true_route.points, obs_count, env.geo.sphere_radius_m
            )
            problems.append(
                RecognitionProblem(
                    problem_id=f"{init_slot + 1}.{intent_count}.{obs_count}",
                    init=init_ref,
                    intent_location=intent_name,
                    intentions=tuple(chosen),
                    observations=tuple(observations),
                )
            )
    return problems


@dataclass(frozen=True)
class ProblemMetrics:
    problem_id: str
    observation_count: int
    intention_count: int
    tpr: float
    fpr: float
    precision: float
    f1: float
    argmax: tuple[str, ...]
    trace: tuple[RankedDistribution, ...]
    per_step: tuple["StepMetrics", ...] = ()


@dataclass(frozen=True)
class StepMetrics:
    step: int
    tpr: float
    fpr: float
    f1: float


def _score_distribution(
    distribution: RankedDistribution, true_label: str, intention_count: int
) -> tuple[float, float, float, float]:
    argmax = set(distribution.argmax)
    tp = 1.0 if true_label in argmax else 0.0
    false_positives = len(argmax - {true_label})
    fpr = false_positives / (intention_count - 1) if intention_count > 1 else 0.0
    precision = tp / len(argmax)
    f1 = 0.0 if precision + tp == 0.0 else 2.0 * precision * tp / (precision + tp)
    return tp, fpr, precision, f1


def evaluate_problem(
    problem: RecognitionProblem, env: Environment, per_step: bool = False
) -> ProblemMetrics:
    """Solve one problem and score its final-step argmax set against the hidden intent."""
    if len(problem.observations) == 0:
        raise ValueError(f"problem {problem.problem_id!r} has no observations to evaluate")
    trace = solve_problem(problem, env)
    true_label = problem.true_label
    m = len(problem.intentions)
    tp, fpr, precision, f1 = _score_distribution(trace[-1], true_label, m)
    steps: tuple[StepMetrics, ...] = ()
    if per_step:
        rows = []
        for i, d in enumerate(trace):
            s_tp, s_fpr, _, s_f1 = _score_distribution(d, true_label, m)
            rows.append(StepMetrics(i + 1, s_tp, s_fpr, s_f1))
        steps = tuple(rows)
    return ProblemMetrics(
        problem_id=problem.problem_id,
        observation_count=len(problem.observations),
        intention_count=m,
        tpr=tp,
        fpr=fpr,
        precision=precision,
        f1=f1,
        argmax=trace[-1].argmax,
        trace=tuple(trace),
        per_step=steps,
    )


@dataclass(frozen=True)
class MetricsRow:
    group: str
    tpr: float
    fpr: float
    f1: float
    problems: int


@dataclass(frozen=True)
class DatasetMetrics:
    overall: MetricsRow
    by_observations: tuple[MetricsRow, ...]
    by_intentions: tuple[MetricsRow, ...]
    per_problem: tuple[ProblemMetrics, ...]


def _mean_row(group: str, items: Sequence[ProblemMetrics]) -> MetricsRow:
    n = len(items)
    return MetricsRow(
        group=group,
        tpr=sum(p.tpr for p in items) / n,
        fpr=sum(p.fpr for p in items) / n,
        f1=sum(p.f1 for p in items) / n,
        problems=n,
    )


def evaluate_dataset(
    problems: Sequence[RecognitionProblem],
    env: Environment,
    workers: int = 1,
    per_step: bool = False,
) -> DatasetMetrics:
    """Evaluate every problem and aggregate metrics by |Obs| group and |I| group.

    Problems are independent; with workers > 1 they are evaluated
    concurrently, with aggregation always in input order.
    """
    if len(problems) == 0:
        raise ValueError("no problems to evaluate")
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda p: evaluate_problem(p, env, per_step), problems))
    else:
        results = [evaluate_problem(p, env, per_step) for p in problems]
    by_obs = [
        _mean_row(str(size), [r for r in results if r.observation_count == size])
        for size in sorted({r.observation_count for r in results})
    ]
    by_intent = [
        _mean_row(str(size), [r for r in results if r.intention_count == size])
        for size in sorted({r.intention_count for r in results})
    ]
    return DatasetMetrics(
        overall=_mean_row("all", results),
        by_observations=tuple(by_obs),
        by_intentions=tuple(by_intent),
        per_problem=tuple(results),
    )


def _row_json(row: MetricsRow) -> dict:
    return {
        "group": row.group,
        "tpr": row.tpr,
        "fpr": row.fpr,
        "f1": row.f1,
        "problems": row.problems,
    }


def metrics_to_json_obj(metrics: DatasetMetrics) -> dict:
    return {
        "overall": _row_json(metrics.overall),
        "by_observations": [_row_json(r) for r in metrics.by_observations],
        "by_intentions": [_row_json(r) for r in metrics.by_intentions],
    }


def format_metrics_table(metrics: DatasetMetrics) -> str:
    """Aligned text table: one row per group with TPR / FPR / F1 columns."""
    lines = [f"{'':>8}  {'TPR':>6}  {'FPR':>6}  {'F1':>6}  {'problems':>8}"]

    def emit(header: str, rows: Sequence[MetricsRow]):
        lines.append(header)
        for row in rows:
            lines.append(
                f"{row.group:>8}  {row.tpr:>6.2f}  {row.fpr:>6.2f}  {row.f1:>6.2f}  {row.problems:>8d}"
            )

    emit("|Obs|", metrics.by_observations)
    emit("|I|", metrics.by_intentions)
    emit("overall", (metrics.overall,))
    return "\n".join(lines)


def save_metrics(metrics: DatasetMetrics, path: str | Path) -> None:
    Path(path).write_text(json.dumps(metrics_to_json_obj(metrics), indent=1, sort_keys=True))
