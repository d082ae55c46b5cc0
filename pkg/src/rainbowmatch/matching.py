"""Rainbow matchings: immutable edge sets, greedy construction, verification.

A rainbow matching is a set of edges that are pairwise vertex-disjoint and
pairwise differently coloured.  :class:`RainbowMatching` is a value object:
every mutation produces a new instance, which keeps the switching engine's
backtracking trivial.  Construction is permissive (any set of edge ids is
accepted) so that untrusted matchings can be loaded and then examined with
:func:`verify`, which names each violation instead of raising.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .multigraph import ColouredMultigraph, Issue


class RainbowMatching:
    """An immutable set of edge ids of one graph, intended to be a rainbow
    matching.

    Derived views (``edge_of_colour``, ``twin_of``, ``covered``) assume the
    matching is valid; for untrusted input run :func:`verify` first.  Ids that
    do not exist in the graph are kept (so ``verify`` can report them) but
    excluded from the derived views.
    """

    __slots__ = ("graph", "edge_ids", "_by_colour", "_twin", "_covered")

    def __init__(self, graph: ColouredMultigraph, edge_ids=()):
        self.graph = graph
        self.edge_ids = frozenset(int(i) for i in edge_ids)
        by_colour: dict[int, int] = {}
        twin: dict[int, int] = {}
        covered = set()
        for i in sorted(self.edge_ids):
            if not (0 <= i < graph.num_edges):
                continue
            e = graph.edge(i)
            by_colour.setdefault(e.colour, i)
            twin.setdefault(e.u, e.v)
            twin.setdefault(e.v, e.u)
            covered.add(e.u)
            covered.add(e.v)
        self._by_colour = by_colour
        self._twin = twin
        self._covered = frozenset(covered)

    def __len__(self) -> int:
        return len(self.edge_ids)

    def __contains__(self, edge_id: int) -> bool:
        return edge_id in self.edge_ids

    def __eq__(self, other) -> bool:
        return (isinstance(other, RainbowMatching)
                and self.graph is other.graph
                and self.edge_ids == other.edge_ids)

    def __hash__(self) -> int:
        return hash(self.edge_ids)

    @property
    def covered(self) -> frozenset[int]:
        return self._covered

    @property
    def colours(self) -> frozenset[int]:
        return frozenset(self._by_colour)

    def free_vertices(self) -> list[int]:
        return [v for v in range(self.graph.num_vertices) if v not in self._covered]

    def free_colours(self) -> list[int]:
        return [c for c in range(self.graph.num_colours) if c not in self._by_colour]

    def edge_of_colour(self, colour: int) -> int | None:
        return self._by_colour.get(colour)

    def twin_of(self, vertex: int) -> int | None:
        """The other endpoint of the matching edge at ``vertex``, if covered."""
        return self._twin.get(vertex)

    def is_covered(self, vertex: int) -> bool:
        return vertex in self._covered

    def uses_colour(self, colour: int) -> bool:
        return colour in self._by_colour

    def sorted_edge_ids(self) -> list[int]:
        return sorted(self.edge_ids)

    def with_swap(self, removed=(), added=()) -> "RainbowMatching":
        """A new matching with ``removed`` taken out and ``added`` put in.

        Every removed id must be present and every added id absent; validity
        of the result is the caller's business.
        """
        rem = frozenset(removed)
        add = frozenset(added)
        if not rem <= self.edge_ids:
            raise ValueError(f"cannot remove absent edges {sorted(rem - self.edge_ids)}")
        if add & self.edge_ids:
            raise ValueError(f"cannot add present edges {sorted(add & self.edge_ids)}")
        return RainbowMatching(self.graph, (self.edge_ids - rem) | add)

    def __repr__(self) -> str:
        return f"RainbowMatching({sorted(self.edge_ids)})"


@dataclass(frozen=True)
class Closeness:
    """Symmetric-difference distance between two matchings of one graph."""

    distance: int
    size_equal: bool

    def within(self, budget: int) -> bool:
        return self.size_equal and self.distance <= budget


def closeness(a: RainbowMatching, b: RainbowMatching) -> Closeness:
    if a.graph is not b.graph:
        raise ValueError("matchings belong to different graphs")
    return Closeness(distance=len(a.edge_ids ^ b.edge_ids),
                     size_equal=len(a.edge_ids) == len(b.edge_ids))


def verify(graph: ColouredMultigraph, matching: RainbowMatching) -> list[Issue]:
    """Report every way ``matching`` fails to be a rainbow matching of
    ``graph``: unknown edge ids, repeated colours, shared vertices."""
    issues: list[Issue] = []
    by_colour: dict[int, list[int]] = {}
    by_vertex: dict[int, list[int]] = {}
    for i in sorted(matching.edge_ids):
        if not (0 <= i < graph.num_edges):
            issues.append(Issue("unknown_edge", f"edge id {i} not in graph",
                                edge_ids=(i,)))
            continue
        e = graph.edge(i)
        by_colour.setdefault(e.colour, []).append(i)
        by_vertex.setdefault(e.u, []).append(i)
        if e.v != e.u:
            by_vertex.setdefault(e.v, []).append(i)
    for c, ids in sorted(by_colour.items()):
        if len(ids) > 1:
            issues.append(Issue("colour_clash",
                                f"colour {c} used by edges {ids}",
                                edge_ids=tuple(ids), colour=c))
    for v, ids in sorted(by_vertex.items()):
        if len(ids) > 1:
            issues.append(Issue("vertex_clash",
                                f"vertex {v} covered by edges {ids}",
                                edge_ids=tuple(ids), vertex=v))
    return issues


def greedy(graph: ColouredMultigraph, seed: int = 0) -> RainbowMatching:
    """Seeded greedy pass over a shuffled edge order.

    One full pass accepting every compatible edge, so the result is maximal:
    no remaining edge has both endpoints free and an unused colour.
    """
    rng = random.Random(seed)
    order = list(range(graph.num_edges))
    rng.shuffle(order)
    return _greedy_pass(graph, order, ())


def extend_to_maximal(graph: ColouredMultigraph,
                      matching: RainbowMatching) -> RainbowMatching:
    """Add compatible edges in id order until no more fit."""
    return _greedy_pass(graph, range(graph.num_edges), matching.edge_ids)


def _greedy_pass(graph, order, start_ids) -> RainbowMatching:
    chosen = set(start_ids)
    used_v = set()
    used_c = set()
    for i in start_ids:
        e = graph.edge(i)
        used_v.update((e.u, e.v))
        used_c.add(e.colour)
    for i in order:
        e = graph.edge(i)
        if e.u == e.v:
            continue
        if e.u in used_v or e.v in used_v or e.colour in used_c:
            continue
        chosen.add(i)
        used_v.update((e.u, e.v))
        used_c.add(e.colour)
    return RainbowMatching(graph, chosen)


def external_edges(graph: ColouredMultigraph, matching: RainbowMatching,
                   colours) -> list[int]:
    """Edge ids with exactly one endpoint covered and colour in ``colours``,
    sorted by id."""
    wanted = set(colours)
    out = []
    for e in graph.edges:
        if e.colour not in wanted:
            continue
        if matching.is_covered(e.u) != matching.is_covered(e.v):
            out.append(e.id)
    return out


# -- JSON form ----------------------------------------------------------------

def matching_to_json(graph: ColouredMultigraph, matching: RainbowMatching) -> dict:
    edges = []
    for i in matching.sorted_edge_ids():
        if 0 <= i < graph.num_edges:
            e = graph.edge(i)
            edges.append({"u": e.u, "v": e.v, "colour": e.colour, "edge_id": e.id})
        else:
            edges.append({"u": None, "v": None, "colour": None, "edge_id": i})
    return {"size": len(matching), "edges": edges}


def matching_from_json(graph: ColouredMultigraph, doc: dict) -> RainbowMatching:
    """Rebuild a matching from its JSON form; ids are taken as-is so a stale
    or corrupt document still loads and can be verified."""
    try:
        ids = [int(item["edge_id"]) for item in doc["edges"]]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed matching document: {exc}") from None
    return RainbowMatching(graph, ids)
