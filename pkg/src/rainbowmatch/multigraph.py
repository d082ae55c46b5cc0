"""Properly edge-coloured multigraphs and instance hygiene checks.

The central object is :class:`ColouredMultigraph`: an immutable multigraph on
vertices ``0..V-1`` whose edges each carry a colour in ``0..C-1``.  Parallel
edges are allowed and kept distinct through dense integer edge ids.
Construction is permissive about colouring defects (loops, repeated colours at
a vertex) so that broken instances can still be loaded and reported on;
:func:`validate` names every defect instead of raising.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Edge:
    """A single coloured edge; ``id`` is its position in the instance."""

    id: int
    u: int
    v: int
    colour: int

    def other(self, vertex: int) -> int:
        if vertex == self.u:
            return self.v
        if vertex == self.v:
            return self.u
        raise ValueError(f"vertex {vertex} not an endpoint of edge {self.id}")

    def touches(self, vertex: int) -> bool:
        return vertex == self.u or vertex == self.v


@dataclass(frozen=True)
class Issue:
    """One defect found by a checking routine.

    ``kind`` is a short machine-readable tag; ``detail`` is for humans.
    Location fields are filled where they make sense and left None elsewhere.
    """

    kind: str
    detail: str
    edge_ids: tuple[int, ...] = ()
    vertex: int | None = None
    colour: int | None = None


class ColouredMultigraph:
    """Immutable edge-coloured multigraph with dense edge ids.

    Vertex and colour ids must be in range (enforced here, since out-of-range
    ids cannot be indexed); properness and loop-freeness are *not* enforced,
    see :func:`validate`.
    """

    __slots__ = ("num_vertices", "num_colours", "edges", "_by_colour",
                 "_by_vertex", "_by_vertex_colour", "_pair_count")

    def __init__(self, num_vertices: int, num_colours: int,
                 edges: list[tuple[int, int, int]] | tuple[tuple[int, int, int], ...]):
        if num_vertices < 0 or num_colours < 0:
            raise ValueError("vertex and colour counts must be non-negative")
        built = []
        for i, (u, v, c) in enumerate(edges):
            if not (0 <= u < num_vertices and 0 <= v < num_vertices):
                raise ValueError(f"edge {i}: endpoint out of range for V={num_vertices}")
            if not (0 <= c < num_colours):
                raise ValueError(f"edge {i}: colour {c} out of range for C={num_colours}")
            built.append(Edge(i, u, v, c))
        self.num_vertices = num_vertices
        self.num_colours = num_colours
        self.edges = tuple(built)

        by_colour: dict[int, list[int]] = {}
        by_vertex: dict[int, list[int]] = {}
        by_vc: dict[tuple[int, int], list[int]] = {}
        pair_count: dict[tuple[int, int], int] = {}
        for e in self.edges:
            by_colour.setdefault(e.colour, []).append(e.id)
            ends = (e.u,) if e.u == e.v else (e.u, e.v)
            for x in ends:
                by_vertex.setdefault(x, []).append(e.id)
                by_vc.setdefault((x, e.colour), []).append(e.id)
            key = (e.u, e.v) if e.u <= e.v else (e.v, e.u)
            pair_count[key] = pair_count.get(key, 0) + 1
        self._by_colour = {c: tuple(ids) for c, ids in by_colour.items()}
        self._by_vertex = {v: tuple(ids) for v, ids in by_vertex.items()}
        self._by_vertex_colour = {k: tuple(ids) for k, ids in by_vc.items()}
        self._pair_count = pair_count

    # -- basic accessors ----------------------------------------------------

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def edge(self, edge_id: int) -> Edge:
        return self.edges[edge_id]

    def edges_with_colour(self, colour: int) -> tuple[int, ...]:
        return self._by_colour.get(colour, ())

    def colour_class_size(self, colour: int) -> int:
        return len(self._by_colour.get(colour, ()))

    def edges_at(self, vertex: int) -> tuple[int, ...]:
        return self._by_vertex.get(vertex, ())

    def edges_at_with_colour(self, vertex: int, colour: int) -> tuple[int, ...]:
        return self._by_vertex_colour.get((vertex, colour), ())

    def degree(self, vertex: int) -> int:
        return len(self._by_vertex.get(vertex, ()))

    def multiplicity(self, u: int, v: int) -> int:
        key = (u, v) if u <= v else (v, u)
        return self._pair_count.get(key, 0)

    def max_multiplicity(self) -> int:
        return max(self._pair_count.values(), default=0)

    def __repr__(self) -> str:
        return (f"ColouredMultigraph(V={self.num_vertices}, "
                f"C={self.num_colours}, E={self.num_edges})")


def validate(graph: ColouredMultigraph) -> list[Issue]:
    """Report every structural defect of the colouring.

    Checks loops, properness (no two incident edges share a colour, parallel
    edges included), and audits the derived indexes against the edge list.
    A clean proper instance yields an empty list.
    """
    issues: list[Issue] = []
    for e in graph.edges:
        if e.u == e.v:
            issues.append(Issue("loop", f"edge {e.id} is a loop at vertex {e.u}",
                                edge_ids=(e.id,), vertex=e.u))
    for (v, c), ids in sorted(graph._by_vertex_colour.items()):
        if len(ids) > 1:
            issues.append(Issue(
                "colour_clash",
                f"vertex {v} carries {len(ids)} edges of colour {c}",
                edge_ids=tuple(ids), vertex=v, colour=c))
    # index audit: recount colour classes from scratch
    recount: dict[int, int] = {}
    for e in graph.edges:
        recount[e.colour] = recount.get(e.colour, 0) + 1
    for c, n in recount.items():
        if graph.colour_class_size(c) != n:
            issues.append(Issue("index", f"colour index out of sync for colour {c}",
                                colour=c))
    return issues


def as_fraction(x) -> Fraction:
    """Coerce a user-supplied ratio to an exact Fraction.

    Floats go through their decimal literal (``0.1`` means 1/10), strings may
    be decimals or ``p/q``.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(str(x))
    return Fraction(x)


@dataclass(frozen=True)
class InstanceParams:
    """Density parameters an instance is checked against.

    ``alpha`` defaults to ``epsilon/12``; larger values are legal but flagged,
    since the structural guarantees degrade past that point.
    ``min_colour_count`` defaults to ``ceil((1+epsilon) * C)`` for a graph with
    C colours and ``multiplicity_cap`` to ``max(1, floor(C/16))``.
    """

    epsilon: Fraction
    alpha: Fraction
    min_colour_count: int
    multiplicity_cap: int

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if self.alpha_exceeds_recommended:
            logger.warning("alpha=%s exceeds epsilon/12=%s; structural bounds "
                           "are not guaranteed", self.alpha, self.epsilon / 12)

    @property
    def alpha_exceeds_recommended(self) -> bool:
        return self.alpha > self.epsilon / 12

    @classmethod
    def for_graph(cls, graph: ColouredMultigraph, epsilon="1/2", alpha=None,
                  min_colour_count: int | None = None,
                  multiplicity_cap: int | None = None) -> "InstanceParams":
        eps = as_fraction(epsilon)
        a = eps / 12 if alpha is None else as_fraction(alpha)
        n = graph.num_colours
        if min_colour_count is None:
            min_colour_count = ceil((1 + eps) * n)
        if multiplicity_cap is None:
            multiplicity_cap = max(1, floor(Fraction(n, 16)))
        return cls(eps, a, min_colour_count, multiplicity_cap)


@dataclass(frozen=True)
class HypothesisReport:
    """Outcome of checking an instance against density hypotheses."""

    ok: bool
    issues: tuple[Issue, ...] = ()


def hypothesis_check(graph: ColouredMultigraph, params: InstanceParams) -> HypothesisReport:
    """Check properness plus the density hypotheses in ``params``.

    Requires: proper colouring, every colour class at least
    ``min_colour_count`` edges, and every vertex pair joined by at most
    ``multiplicity_cap`` parallel edges.
    """
    issues = list(validate(graph))
    for c in range(graph.num_colours):
        size = graph.colour_class_size(c)
        if size < params.min_colour_count:
            issues.append(Issue(
                "colour_count",
                f"colour {c} has {size} edges, needs >= {params.min_colour_count}",
                colour=c))
    cap = params.multiplicity_cap
    for (u, v), n in sorted(graph._pair_count.items()):
        if n > cap:
            issues.append(Issue(
                "multiplicity",
                f"pair ({u},{v}) joined by {n} edges, cap is {cap}",
                vertex=u))
    return HypothesisReport(ok=not issues, issues=tuple(issues))


# -- text format ------------------------------------------------------------
#
# Header line "V C", then one "u v c" line per edge in id order.  '#' starts
# a comment, blank lines are skipped.  Repeated "u v c" lines are distinct
# parallel edges.

def loads(text: str) -> ColouredMultigraph:
    """Parse an instance from its text form; raises ValueError with the
    offending line number on malformed input."""
    header: tuple[int, int] | None = None
    triples: list[tuple[int, int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            nums = [int(p) for p in parts]
        except ValueError:
            raise ValueError(f"line {lineno}: expected integers, got {line!r}") from None
        if header is None:
            if len(nums) != 2:
                raise ValueError(f"line {lineno}: header must be 'V C'")
            header = (nums[0], nums[1])
            continue
        if len(nums) != 3:
            raise ValueError(f"line {lineno}: edge line must be 'u v c'")
        triples.append((nums[0], nums[1], nums[2]))
    if header is None:
        raise ValueError("missing 'V C' header line")
    try:
        return ColouredMultigraph(header[0], header[1], triples)
    except ValueError as exc:
        raise ValueError(str(exc)) from None


def dumps(graph: ColouredMultigraph) -> str:
    lines = [f"{graph.num_vertices} {graph.num_colours}"]
    lines.extend(f"{e.u} {e.v} {e.colour}" for e in graph.edges)
    return "\n".join(lines) + "\n"


def load(path) -> ColouredMultigraph:
    with open(path, "r", encoding="utf-8") as fh:
        return loads(fh.read())


def save(graph: ColouredMultigraph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(graph))
