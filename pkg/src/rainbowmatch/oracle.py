"""Exact brute-force baselines for small instances.

Two independent searches: a branch-and-bound over graph edges for maximum
rainbow matchings, and a row-by-row search over Latin square cells for maximum
partial transversals.  They share no code beyond the result type, so agreement
between them on square-induced graphs is a real cross-check.

Both searches honour a node cap and a wall-clock limit and raise
:class:`CapExceeded` (carrying the best matching found so far) when either is
hit, so callers can distinguish a certified optimum from a lower bound.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .instances import LatinSquare
from .multigraph import ColouredMultigraph

DEFAULT_MAX_NODES = 100_000_000
DEFAULT_TIME_LIMIT = 60.0

_TIME_CHECK_STRIDE = 4096


@dataclass(frozen=True)
class OracleResult:
    """Certified optimum with a witness.

    ``witness`` holds edge ids for graph searches and (row, column) pairs for
    square searches; ``nodes`` is the number of search-tree nodes visited.
    """

    size: int
    witness: tuple
    nodes: int


class CapExceeded(Exception):
    """Search hit its node or time cap; ``best`` is a valid lower bound."""

    def __init__(self, reason: str, best: OracleResult):
        super().__init__(f"oracle cap exceeded ({reason}); best found {best.size}")
        self.reason = reason
        self.best = best


class _Caps:
    __slots__ = ("max_nodes", "deadline", "nodes")

    def __init__(self, max_nodes: int, time_limit: float):
        self.max_nodes = max_nodes
        self.deadline = time.perf_counter() + time_limit
        self.nodes = 0

    def tick(self) -> str | None:
        self.nodes += 1
        if self.nodes > self.max_nodes:
            return "nodes"
        if self.nodes % _TIME_CHECK_STRIDE == 0 and time.perf_counter() > self.deadline:
            return "time"
        return None


def max_rainbow_matching(graph: ColouredMultigraph,
                         max_nodes: int = DEFAULT_MAX_NODES,
                         time_limit: float = DEFAULT_TIME_LIMIT) -> OracleResult:
    """Exact maximum rainbow matching by branch and bound.

    Edges are ordered by ascending colour-class size (scarce colours first);
    the bound adds the number of distinct unused colours in the remaining
    suffix to the current size.  Loops never enter a matching and are skipped
    outright.
    """
    order = [e for e in graph.edges if e.u != e.v]
    order.sort(key=lambda e: (graph.colour_class_size(e.colour), e.id))
    m = len(order)
    # suffix[i] = bitmask of colours on order[i:]
    suffix = [0] * (m + 1)
    for i in range(m - 1, -1, -1):
        suffix[i] = suffix[i + 1] | (1 << order[i].colour)
    caps = _Caps(max_nodes, time_limit)
    best_size = 0
    best: tuple[int, ...] = ()
    chosen: list[int] = []

    def walk(i: int, used_v: int, used_c: int) -> None:
        nonlocal best_size, best
        breach = caps.tick()
        if breach:
            raise CapExceeded(breach, OracleResult(best_size, best, caps.nodes))
        if len(chosen) > best_size:
            best_size = len(chosen)
            best = tuple(chosen)
        if i == m:
            return
        if len(chosen) + (suffix[i] & ~used_c).bit_count() <= best_size:
            return
        e = order[i]
        if not (used_v >> e.u & 1 or used_v >> e.v & 1 or used_c >> e.colour & 1):
            chosen.append(e.id)
            walk(i + 1, used_v | 1 << e.u | 1 << e.v, used_c | 1 << e.colour)
            chosen.pop()
        walk(i + 1, used_v, used_c)

    walk(0, 0, 0)
    return OracleResult(best_size, best, caps.nodes)


def max_partial_transversal(square: LatinSquare,
                            max_nodes: int = DEFAULT_MAX_NODES,
                            time_limit: float = DEFAULT_TIME_LIMIT) -> OracleResult:
    """Exact maximum partial transversal by row-wise search over cells.

    Works on the square directly (columns and symbols as bitmasks), with the
    bound min(rows left, free columns, free symbols).  Independent of the
    graph search above.
    """
    n = square.order
    caps = _Caps(max_nodes, time_limit)
    best_size = 0
    best: tuple = ()
    chosen: list[tuple[int, int]] = []

    def walk(i: int, cols: int, syms: int) -> None:
        nonlocal best_size, best
        breach = caps.tick()
        if breach:
            raise CapExceeded(breach, OracleResult(best_size, best, caps.nodes))
        if len(chosen) > best_size:
            best_size = len(chosen)
            best = tuple(chosen)
        if i == n:
            return
        room = min(n - i, n - cols.bit_count(), n - syms.bit_count())
        if len(chosen) + room <= best_size:
            return
        for j in range(n):
            s = square.rows[i][j]
            if cols >> j & 1 or syms >> s & 1:
                continue
            chosen.append((i, j))
            walk(i + 1, cols | 1 << j, syms | 1 << s)
            chosen.pop()
        walk(i + 1, cols, syms)

    walk(0, 0, 0)
    return OracleResult(best_size, best, caps.nodes)
