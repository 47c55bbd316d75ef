"""Command-line interface: routing, solving, dataset generation, evaluation, serving.

Exit codes: 0 success, 1 usage error, 2 domain failure (no route, schema
violation, unreachable place, ...). With --json, stdout carries exactly one
JSON document.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .bench import (
    dataset_config_from_json_obj,
    evaluate_dataset,
    format_metrics_table,
    generate_dataset,
    metrics_to_json_obj,
)
from .errors import RouteMirrorError
from .geo import GeoConfig, LatLng
from .planner import (
    ExternalDirectionsClient,
    GraphPlanner,
    PerturbedPlanner,
    Route,
    RoutePlanner,
    TextRoutePlanner,
)
from .recognizer import (
    Environment,
    load_problems,
    problem_to_json_obj,
    trace_rows,
)
from .roadnet import (
    Gazetteer,
    RoadNetwork,
    generate_grid_network,
    load_gazetteer,
    load_network,
    resolve_place,
    serialize_network,
)

USAGE_EXIT = 1
DOMAIN_EXIT = 2


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; remap to the documented usage code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_EXIT)


@dataclass
class RunConfig:
    """Resolved common options shared by the subcommands."""

    network: RoadNetwork | None
    gazetteer: Gazetteer | None
    geo: GeoConfig
    planner_spec: str
    seed: int
    as_json: bool

    def planner(self) -> RoutePlanner:
        if self.network is None:
            raise RouteMirrorError("this command needs --network")
        return make_planner(self.planner_spec, self.network, self.seed)

    def environment(self) -> Environment:
        if self.network is None:
            raise RouteMirrorError("this command needs --network")
        return Environment(
            network=self.network,
            planner=self.planner(),
            geo=self.geo,
            gazetteer=self.gazetteer,
        )


def make_planner(spec: str, network: RoadNetwork, seed: int = 0) -> RoutePlanner:
    """Build a planner from its CLI spec: internal | perturbed:delta:seed | external:url | text:file."""
    if spec == "internal":
        return GraphPlanner(network)
    if spec.startswith("perturbed"):
        parts = spec.split(":")
        if len(parts) == 1:
            return PerturbedPlanner(network, seed=seed)
        if len(parts) != 3:
            raise RouteMirrorError(f"perturbed planner spec must be perturbed:DELTA:SEED, got {spec!r}")
        try:
            return PerturbedPlanner(network, delta=float(parts[1]), seed=int(parts[2]))
        except ValueError as exc:
            raise RouteMirrorError(f"bad perturbed planner spec {spec!r}: {exc}")
    if spec.startswith("external:"):
        return ExternalDirectionsClient(base_url=spec.split(":", 1)[1])
    if spec.startswith("text:"):
        return TextRoutePlanner(_file_text_transport(spec.split(":", 1)[1]))
    raise RouteMirrorError(
        f"unknown planner {spec!r} (expected internal, perturbed:DELTA:SEED, external:URL or text:FILE)"
    )


def _file_text_transport(path: str):
    """Text-planner transport backed by a JSON file of request-key -> reply text.

    Keys are "lat,lng->lat,lng" (origin->destination, 6 decimals); the key
    "*" is a catch-all reply.
    """
    replies = json.loads(Path(path).read_text())
    if not isinstance(replies, dict):
        raise RouteMirrorError(f"text planner fixture {path} must be a JSON object")

    def transport(prompt: str) -> str:
        import re

        pairs = re.findall(r"\(([-0-9.]+), ([-0-9.]+)\)", prompt)
        key = "*"
        if len(pairs) >= 2:
            o, d = pairs[0], pairs[-1]
            key = f"{float(o[0]):.6f},{float(o[1]):.6f}->{float(d[0]):.6f},{float(d[1]):.6f}"
        if key in replies:
            return str(replies[key])
        if "*" in replies:
            return str(replies["*"])
        raise KeyError(f"no reply recorded for request {key!r}")

    return transport


def parse_place_arg(value: str) -> str | LatLng:
    """CLI place argument: "lat,lng" if it parses as two floats, otherwise a name."""
    parts = value.split(",")
    if len(parts) == 2:
        try:
            return LatLng(float(parts[0]), float(parts[1]))
        except ValueError:
            pass
    return value


def _add_common_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--network", help="road-network JSON file")
    parser.add_argument("--gazetteer", help="gazetteer JSON file")
    parser.add_argument("--tau", type=float, default=None, help="similarity threshold, meters")
    parser.add_argument("--spacing", type=float, default=None, help="resample spacing, meters")
    parser.add_argument("--radius", type=float, default=None, help="sphere radius, meters")
    parser.add_argument(
        "--planner",
        default="internal",
        help="internal | perturbed:DELTA:SEED | external:URL | text:FILE",
    )
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--json", action="store_true", help="emit machine-readable JSON on stdout")


def _run_config(args: argparse.Namespace) -> RunConfig:
    defaults = GeoConfig()
    geo = GeoConfig(
        sphere_radius_m=args.radius if args.radius is not None else defaults.sphere_radius_m,
        similarity_threshold_m=args.tau if args.tau is not None else defaults.similarity_threshold_m,
        resample_spacing_m=args.spacing if args.spacing is not None else defaults.resample_spacing_m,
    )
    network = load_network(args.network) if args.network else None
    gazetteer = load_gazetteer(args.gazetteer) if args.gazetteer else None
    return RunConfig(
        network=network,
        gazetteer=gazetteer,
        geo=geo,
        planner_spec=args.planner,
        seed=args.seed,
        as_json=args.json,
    )


def _route_json(route: Route) -> dict:
    return {
        "points": [p.as_pair() for p in route.points],
        "length_m": route.total_length_m,
        "planner_id": route.planner_id,
    }


def _emit(args_json: bool, payload: object, human: str) -> None:
    if args_json:
        print(json.dumps(payload, indent=1))
    else:
        print(human)


def cmd_route(args: argparse.Namespace) -> int:
    cfg = _run_config(args)
    origin = resolve_place(cfg.gazetteer, parse_place_arg(args.origin))
    destination = resolve_place(cfg.gazetteer, parse_place_arg(args.destination))
    via = [resolve_place(cfg.gazetteer, parse_place_arg(v)) for v in args.via or []]
    planner = cfg.planner()
    route = planner.plan_via(origin, via, destination) if via else planner.plan(origin, destination)
    human = (
        f"route with {len(route.points)} points, {route.total_length_m:.1f} m "
        f"(planner {route.planner_id})"
    )
    _emit(cfg.as_json, _route_json(route), human)
    return 0


def cmd_solve(args: argparse.Namespace) -> int:
    cfg = _run_config(args)
    problems = load_problems(args.problems)
    env = cfg.environment()
    results = []
    for problem in problems:
        from .recognizer import solve_problem

        distributions = solve_problem(problem, env)
        rows = trace_rows(distributions)
        final_argmax = rows[-1]["argmax"] if rows else []
        results.append(
            {
                "problem_id": problem.problem_id,
                "steps": rows,
                "final_argmax": final_argmax,
                "contains_intent": problem.true_label in final_argmax,
            }
        )
    if cfg.as_json:
        print(json.dumps(results, indent=1))
    else:
        for result in results:
            for row in result["steps"]:
                ranked = sorted(row["posterior"].items(), key=lambda kv: -kv[1])
                summary = ", ".join(f"{label}={p:.3f}" for label, p in ranked[:3])
                print(f"[{result['problem_id']}] step {row['step']}: {summary}")
            verdict = "contains" if result["contains_intent"] else "misses"
            print(
                f"[{result['problem_id']}] final argmax {result['final_argmax']} "
                f"{verdict} the intended location"
            )
    return 0


def cmd_generate(args: argparse.Namespace) -> int:
    cfg = _run_config(args)
    config_obj = json.loads(Path(args.config).read_text())
    if args.seed_override is not None:
        config_obj = {**config_obj, "seed": args.seed_override}
    dataset_cfg = dataset_config_from_json_obj(config_obj)
    env = cfg.environment()
    if "generation_planner" in config_obj:
        env.planner = make_planner(dataset_cfg.generation_planner, env.network, dataset_cfg.seed)
    problems = generate_dataset(dataset_cfg, env)
    payload = [problem_to_json_obj(p) for p in problems]
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    if args.out:
        Path(args.out).write_text(text)
        if not cfg.as_json:
            print(f"wrote {len(problems)} problems to {args.out}")
    else:
        print(text)
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    cfg = _run_config(args)
    problems = load_problems(args.dataset)
    metrics = evaluate_dataset(problems, cfg.environment())
    if cfg.as_json:
        print(json.dumps(metrics_to_json_obj(metrics), indent=1))
    else:
        print(format_metrics_table(metrics))
    return 0


def cmd_genmap(args: argparse.Namespace) -> int:
    origin = parse_place_arg(args.origin)
    if not isinstance(origin, LatLng):
        raise RouteMirrorError(f"--origin must be lat,lng coordinates, got {args.origin!r}")
    network = generate_grid_network(
        rows=args.rows,
        cols=args.cols,
        spacing_m=args.grid_spacing,
        origin=origin,
        jitter_fraction=args.jitter,
        drop_probability=args.drop,
        seed=args.seed,
    )
    text = serialize_network(network)
    if args.out:
        Path(args.out).write_text(text)
        if not args.json:
            print(
                f"wrote {network.node_count}-node, {network.edge_count}-edge "
                f"network {network.name!r} to {args.out}"
            )
    else:
        print(text)
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import ServiceState, create_app

    cfg = _run_config(args)
    if cfg.network is None:
        raise RouteMirrorError("serve needs --network")
    name = cfg.network.name or Path(args.network).stem
    state = ServiceState(
        networks={name: cfg.network},
        gazetteer=cfg.gazetteer,
        geo=cfg.geo,
        planner_factory=lambda net: make_planner(cfg.planner_spec, net, cfg.seed),
    )
    host, _, port = args.bind.rpartition(":")
    if not host or not port.isdigit():
        raise RouteMirrorError(f"--bind must be HOST:PORT, got {args.bind!r}")
    uvicorn.run(create_app(state), host=host, port=int(port), log_level="warning")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="routemirror", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_route = sub.add_parser("route", help="plan a route between two places")
    p_route.add_argument("origin")
    p_route.add_argument("destination")
    p_route.add_argument("--via", action="append", help="waypoint place (repeatable)")
    _add_common_options(p_route)
    p_route.set_defaults(handler=cmd_route)

    p_solve = sub.add_parser("solve", help="replay recognition problems from a file")
    p_solve.add_argument("problems", help="problem JSON file")
    _add_common_options(p_solve)
    p_solve.set_defaults(handler=cmd_solve)

    p_gen = sub.add_parser("generate", help="generate a benchmark dataset")
    p_gen.add_argument("config", help="dataset config JSON file")
    p_gen.add_argument("--out", help="output problem file (stdout when omitted)")
    p_gen.add_argument(
        "--seed-override", type=int, default=None, help="replace the config file's seed"
    )
    _add_common_options(p_gen)
    p_gen.set_defaults(handler=cmd_generate)

    p_eval = sub.add_parser("eval", help="evaluate a dataset and print metric tables")
    p_eval.add_argument("dataset", help="problem JSON file")
    _add_common_options(p_eval)
    p_eval.set_defaults(handler=cmd_eval)

    p_genmap = sub.add_parser("genmap", help="generate a synthetic grid network")
    p_genmap.add_argument("--rows", type=int, required=True)
    p_genmap.add_argument("--cols", type=int, required=True)
    p_genmap.add_argument("--grid-spacing", type=float, default=100.0, help="node spacing, meters")
    p_genmap.add_argument("--origin", required=True, help="lat,lng of the grid's southwest corner")
    p_genmap.add_argument("--jitter", type=float, default=0.0)
    p_genmap.add_argument("--drop", type=float, default=0.0)
    p_genmap.add_argument("--seed", type=int, default=0)
    p_genmap.add_argument("--out", help="output network file (stdout when omitted)")
    p_genmap.add_argument("--json", action="store_true")
    p_genmap.set_defaults(handler=cmd_genmap)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--bind", default="127.0.0.1:8000", help="HOST:PORT to listen on")
    _add_common_options(p_serve)
    p_serve.set_defaults(handler=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except RouteMirrorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DOMAIN_EXIT
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DOMAIN_EXIT


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
