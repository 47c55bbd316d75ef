"""Destination intention recognition on road networks.

Plans ideal and observation-compliant routes for each candidate
destination, scores their great-circle similarity, and maintains a
posterior over candidates that updates with each observation.
"""

from .errors import (
    DuplicateIntentionError,
    GraphValidationError,
    MalformedResponseError,
    NoRouteError,
    PlannerError,
    ProblemSchemaError,
    RouteMirrorError,
    TextRouteParseError,
    TransportError,
    UnknownPlaceError,
    UnreachableIntentionError,
)
from .geo import (
    GeoConfig,
    LatLng,
    MEAN_EARTH_RADIUS_M,
    haversine_distance,
    matched_fraction,
    point_at_arc_length,
    points_similar,
    polyline_length,
    resample_polyline,
)
from .planner import (
    ExternalDirectionsClient,
    GraphPlanner,
    PerturbedPlanner,
    Route,
    RouteRequest,
    TextRoutePlanner,
    astar_cost,
    dijkstra_distances,
    format_textual_route,
    parse_textual_route,
    plan_with,
)
from .recognizer import (
    Candidate,
    Environment,
    RankedDistribution,
    RecognitionProblem,
    Session,
    create_session,
    likelihood,
    load_problems,
    place_label,
    posterior,
    score_epsilon,
    solve_problem,
    trace_rows,
)
from .roadnet import (
    Gazetteer,
    RoadNetwork,
    RoadEdge,
    gazetteer_from_network,
    generate_grid_network,
    load_gazetteer,
    load_network,
    nearest_node,
    resolve_place,
    save_gazetteer,
    save_network,
    serialize_network,
)
from .bench import (
    DatasetConfig,
    DatasetMetrics,
    MetricsRow,
    evaluate_dataset,
    evaluate_problem,
    format_metrics_table,
    generate_dataset,
    metrics_to_json_obj,
)

__version__ = "0.1.0"
