"""Exception types shared across the package."""

from __future__ import annotations


class RouteMirrorError(Exception):
    """Base class for all domain errors raised by this package."""


class GraphValidationError(RouteMirrorError):
    """A network file or in-memory graph violates the network invariants."""


class UnknownPlaceError(RouteMirrorError):
    """A place name is not present in the gazetteer."""

    def __init__(self, name: str, suggestions: list[str] | None = None):
        self.name = name
        self.suggestions = suggestions or []
        hint = f" (closest matches: {', '.join(self.suggestions)})" if self.suggestions else ""
        super().__init__(f"unknown place {name!r}{hint}")


class PlannerError(RouteMirrorError):
    """Base class for route-planning failures."""


class NoRouteError(PlannerError):
    """No path exists between two snapped graph nodes."""

    def __init__(self, from_node: str, to_node: str, leg: str | None = None):
        self.from_node = from_node
        self.to_node = to_node
        self.leg = leg
        where = f" while planning leg {leg}" if leg else ""
        super().__init__(f"no route from node {from_node!r} to node {to_node!r}{where}")


class TransportError(PlannerError):
    """The transport backing an external planner failed."""


class MalformedResponseError(PlannerError):
    """An external planner replied with a payload that does not match the protocol."""


class TextRouteParseError(PlannerError):
    """Free-text directions contained no parseable coordinate pairs."""


class UnreachableIntentionError(RouteMirrorError):
    """A candidate destination cannot be reached from the initial location."""

    def __init__(self, label: str, detail: str = ""):
        self.label = label
        suffix = f": {detail}" if detail else ""
        super().__init__(f"intention {label!r} is unreachable from the initial location{suffix}")


class DuplicateIntentionError(RouteMirrorError):
    """Two candidate destinations share the same label or coordinates."""


class ProblemSchemaError(RouteMirrorError):
    """A recognition-problem document violates the problem JSON schema."""

    def __init__(self, message: str, field: str | None = None, index: int | None = None):
        self.field = field
        self.index = index
        where = []
        if index is not None:
            where.append(f"problem[{index}]")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = " ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)
