"""Robust switching, augmentation recipes, and the solve loop.

A switch request asks: starting from a matching close to the iteration base,
free a given colour and its designated head while keeping named edges, never
touching named vertices or colours.  Level-1 colours are freed directly by a
four-edge exchange built from a good flexible-coloured edge and an external
unused-colour edge; higher levels recurse through lower levels first.  Every
produced matching stays within ``budget + closeness_slack(level)`` of the
base, which keeps chains composable.

Each violation kind from :mod:`rainbowmatch.reachability` has a recipe here:
a direct extension adds its edge; the other kinds run one to three switches
to clear the violating edge's colour and endpoints, then add it.  The solve
loop is greedy construction followed by repeated find-violations / augment
rounds until the target size is reached or no recipe lands.
"""

from __future__ import annotations

import logging
import random
import time
from collections import Counter
from dataclasses import dataclass, field

from .matching import (RainbowMatching, closeness, extend_to_maximal, greedy,
                       matching_to_json)
from .multigraph import ColouredMultigraph, InstanceParams
from .reachability import (FlexibleStructure, GoodBadReport, Hierarchy,
                           Violation, build_hierarchy, classify_good_bad,
                           compute_flexible, find_violations)

logger = logging.getLogger(__name__)


def closeness_slack(level: int) -> int:
    """Worst-case growth of distance-to-base for one switch at ``level``.

    A level-1 switch exchanges two edges out, two in (distance 4); each level
    above doubles the sub-chain and adds its own exchange, giving
    slack(i) = 2 * slack(i-1) + 2 = 3 * 2^i - 2.
    """
    if level < 1:
        raise ValueError("levels start at 1")
    return 3 * (1 << level) - 2


class SwitchUsageError(ValueError):
    """The request itself is malformed (caller bug), as opposed to a search
    that came up empty, which is reported as :class:`NotFound`."""


def _frozen(values) -> frozenset:
    return values if isinstance(values, frozenset) else frozenset(values)


@dataclass(frozen=True)
class SwitchRequest:
    """Free ``colour`` and its designated head ``vertex``.

    ``budget`` promises how far the current matching already is from the
    context base; ``fix`` edges must survive, ``avoid_vertices`` and
    ``avoid_colours`` must stay untouched.  Set sizes are capped by
    2 * (m - level + 1) for the colour's level.
    """

    colour: int
    vertex: int
    budget: int = 0
    fix: frozenset[int] = frozenset()
    avoid_vertices: frozenset[int] = frozenset()
    avoid_colours: frozenset[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "fix", _frozen(self.fix))
        object.__setattr__(self, "avoid_vertices", _frozen(self.avoid_vertices))
        object.__setattr__(self, "avoid_colours", _frozen(self.avoid_colours))


@dataclass(frozen=True)
class ExchangeStep:
    """One elementary exchange performed while serving a request."""

    depth: int
    level: int
    colour: int
    vertex: int
    case: str  # "base", "lift" (free endpoint), "descend" (lower head)
    removed: tuple[int, ...]
    added: tuple[int, ...]


@dataclass(frozen=True)
class CallRecord:
    """A successful switch call with everything needed to re-check its
    contract afterwards."""

    colour: int
    vertex: int
    level: int
    budget: int
    fix: tuple[int, ...]
    avoid_vertices: tuple[int, ...]
    avoid_colours: tuple[int, ...]
    base_ids: tuple[int, ...]
    start_ids: tuple[int, ...]
    result_ids: tuple[int, ...]
    distance_to_base: int


@dataclass
class SwitchOutcome:
    matching: RainbowMatching
    steps: list[ExchangeStep]
    distance_to_base: int
    rejections: dict[str, int]


@dataclass
class NotFound:
    """No admissible configuration; ``rejections`` counts the first filter
    each candidate failed."""

    reason: str
    rejections: dict[str, int]
    steps: list[ExchangeStep] = field(default_factory=list)


@dataclass
class SwitchContext:
    """Everything the engine needs about one base matching."""

    graph: ColouredMultigraph
    base: RainbowMatching
    params: InstanceParams
    flex: FlexibleStructure
    good: GoodBadReport
    hierarchy: Hierarchy
    max_budget: int = 64
    rng: random.Random | None = None
    call_log: list[CallRecord] = field(default_factory=list)

    @classmethod
    def build(cls, graph: ColouredMultigraph, matching: RainbowMatching,
              params: InstanceParams | None = None, max_budget: int = 64,
              rng: random.Random | None = None) -> "SwitchContext":
        if params is None:
            params = InstanceParams.for_graph(graph)
        flex = compute_flexible(graph, matching, params)
        good = classify_good_bad(graph, matching, flex, params)
        hierarchy = build_hierarchy(graph, matching, flex, good, params)
        return cls(graph, matching, params, flex, good, hierarchy,
                   max_budget=max_budget, rng=rng)

    def violations(self) -> list[Violation]:
        return find_violations(self.graph, self.base, self.flex, self.hierarchy)


def robust_switch(ctx: SwitchContext, current: RainbowMatching,
                  request: SwitchRequest, depth: int = 0) -> SwitchOutcome | NotFound:
    """Serve ``request`` against ``current``, a matching within
    ``request.budget`` of ``ctx.base``.

    Returns a new matching of the same size with the requested colour unused
    and the requested head uncovered, or :class:`NotFound`.  Malformed
    requests raise :class:`SwitchUsageError`.
    """
    entry = ctx.hierarchy.entry(request.colour)
    if entry is None:
        raise SwitchUsageError(f"colour {request.colour} is not reachable")
    level_idx, le = entry
    if request.vertex != le.head:
        raise SwitchUsageError(
            f"vertex {request.vertex} is not the designated head of colour "
            f"{request.colour} (expected {le.head})")
    if le.edge_id not in current.edge_ids:
        raise SwitchUsageError(f"edge {le.edge_id} for colour {request.colour} "
                               "has already left the matching")
    if le.edge_id in request.fix:
        raise SwitchUsageError("cannot fix the edge being switched out")
    if not request.fix <= current.edge_ids:
        raise SwitchUsageError("fix set contains edges outside the matching")
    clash = request.avoid_vertices & current.covered
    if clash:
        raise SwitchUsageError(f"avoided vertices already covered: {sorted(clash)}")
    for c in request.avoid_colours:
        if current.uses_colour(c):
            raise SwitchUsageError(f"avoided colour {c} already in use")
    cap = 2 * (ctx.hierarchy.m - level_idx + 1)
    for name, group in (("fix", request.fix),
                        ("avoid_vertices", request.avoid_vertices),
                        ("avoid_colours", request.avoid_colours)):
        if len(group) > cap:
            raise SwitchUsageError(f"{name} larger than {cap} at level {level_idx}")
    if not closeness(ctx.base, current).within(request.budget):
        raise SwitchUsageError("current matching is farther from base than the budget")
    if depth > ctx.hierarchy.m:
        raise SwitchUsageError("recursion deeper than the hierarchy")

    if request.budget + closeness_slack(level_idx) > ctx.max_budget:
        return NotFound("budget_cap", {})

    if level_idx == 1:
        out = _switch_base(ctx, current, request, le, depth)
    else:
        out = _switch_inductive(ctx, current, request, level_idx, le, depth)

    if isinstance(out, SwitchOutcome):
        result = out.matching
        assert result.edge_of_colour(request.colour) is None
        assert not result.is_covered(request.vertex)
        assert request.fix <= result.edge_ids
        assert not (request.avoid_vertices & result.covered)
        assert not any(result.uses_colour(c) for c in request.avoid_colours)
        assert closeness(ctx.base, result).within(
            request.budget + closeness_slack(level_idx))
        ctx.call_log.append(CallRecord(
            colour=request.colour, vertex=request.vertex, level=level_idx,
            budget=request.budget, fix=tuple(sorted(request.fix)),
            avoid_vertices=tuple(sorted(request.avoid_vertices)),
            avoid_colours=tuple(sorted(request.avoid_colours)),
            base_ids=tuple(ctx.base.sorted_edge_ids()),
            start_ids=tuple(current.sorted_edge_ids()),
            result_ids=tuple(result.sorted_edge_ids()),
            distance_to_base=out.distance_to_base,
        ))
    return out


def _switch_base(ctx, current, request, le, depth):
    """Level 1: trade the target edge and one flexible partner for a good
    flexible-coloured edge at the tail plus an external unused-colour edge at
    the partner's tail."""
    g = ctx.graph
    rej: Counter = Counter()
    pairs = []
    for gid in ctx.good.good_at.get(le.tail, ()):
        ge = g.edge(gid)
        w = ge.other(le.tail)
        partner = ctx.flex.by_colour(ge.colour)
        if partner is None or partner.edge_id == le.edge_id:
            continue
        for hid in ctx.flex.external_free_at.get(partner.tail, ()):
            z = g.edge(hid).other(partner.tail)
            if z == w:
                continue
            pairs.append((w, z, gid, hid, partner))
    pairs.sort(key=lambda t: t[:4])
    if ctx.rng is not None:
        ctx.rng.shuffle(pairs)

    for w, z, gid, hid, partner in pairs:
        if current.is_covered(w):
            rej["w_not_free"] += 1
            continue
        if w in request.avoid_vertices:
            rej["w_avoided"] += 1
            continue
        if current.is_covered(z):
            rej["z_not_free"] += 1
            continue
        if z in request.avoid_vertices:
            rej["z_avoided"] += 1
            continue
        holder = current.edge_of_colour(partner.colour)
        if holder is not None and holder != partner.edge_id:
            rej["partner_colour_in_use"] += 1
            continue
        if partner.edge_id not in current.edge_ids:
            rej["partner_missing"] += 1
            continue
        if partner.edge_id in request.fix:
            rej["partner_fixed"] += 1
            continue
        spare = g.edge(hid).colour
        if current.uses_colour(spare):
            rej["spare_colour_in_use"] += 1
            continue
        if spare in request.avoid_colours:
            rej["spare_colour_avoided"] += 1
            continue
        result = current.with_swap(removed=(le.edge_id, partner.edge_id),
                                   added=(gid, hid))
        step = ExchangeStep(depth, 1, request.colour, request.vertex, "base",
                            (le.edge_id, partner.edge_id), (gid, hid))
        return SwitchOutcome(result, [step],
                             closeness(ctx.base, result).distance, dict(rej))
    return NotFound("no_configuration", dict(rej))


def _switch_inductive(ctx, current, request, level_idx, le, depth):
    """Level >= 2: walk a certifying lower-level-coloured edge from the tail,
    first into a free vertex (one recursion), else into a lower head (two)."""
    g = ctx.graph
    rej: Counter = Counter()
    cert = ctx.hierarchy.levels[le.cert - 1]
    lower_heads = frozenset().union(
        *(lv.heads for lv in ctx.hierarchy.levels[:level_idx - 1]))
    base_free = frozenset(ctx.base.free_vertices())

    lifts = []
    descends = []
    for eid in g.edges_at(le.tail):
        e = g.edge(eid)
        if e.colour not in cert.colours or e.u == e.v:
            continue
        other = e.other(le.tail)
        if other in base_free:
            lifts.append((other, eid))
        elif other in lower_heads:
            descends.append((other, eid))
    lifts.sort()
    descends.sort()
    if ctx.rng is not None:
        ctx.rng.shuffle(lifts)
        ctx.rng.shuffle(descends)

    for w, eid in lifts:
        e = g.edge(eid)
        if current.is_covered(w):
            rej["w_not_free"] += 1
            continue
        if w in request.avoid_vertices:
            rej["w_avoided"] += 1
            continue
        sub_entry = ctx.hierarchy.entry(e.colour)
        partner_id = sub_entry[1].edge_id
        if current.edge_of_colour(e.colour) != partner_id or partner_id not in current.edge_ids:
            rej["partner_missing"] += 1
            continue
        if partner_id in request.fix or partner_id == le.edge_id:
            rej["partner_fixed"] += 1
            continue
        sub = robust_switch(ctx, current, SwitchRequest(
            colour=e.colour, vertex=sub_entry[1].head, budget=request.budget,
            fix=request.fix | {le.edge_id},
            avoid_vertices=request.avoid_vertices | {w},
            avoid_colours=request.avoid_colours), depth + 1)
        if isinstance(sub, NotFound):
            rej["recursion_failed"] += 1
            continue
        result = sub.matching.with_swap(removed=(le.edge_id,), added=(eid,))
        step = ExchangeStep(depth, level_idx, request.colour, request.vertex,
                            "lift", (le.edge_id,), (eid,))
        return SwitchOutcome(result, sub.steps + [step],
                             closeness(ctx.base, result).distance, dict(rej))

    for u, eid in descends:
        e = g.edge(eid)
        u_entry = ctx.hierarchy.head_entry(u)
        u_edge = u_entry[1]
        if u_edge.edge_id not in current.edge_ids:
            rej["head_edge_missing"] += 1
            continue
        if u_edge.edge_id in request.fix or u_edge.edge_id == le.edge_id:
            rej["head_edge_fixed"] += 1
            continue
        sub_entry = ctx.hierarchy.entry(e.colour)
        partner_id = sub_entry[1].edge_id
        if current.edge_of_colour(e.colour) != partner_id or partner_id not in current.edge_ids:
            rej["partner_missing"] += 1
            continue
        if partner_id in request.fix or partner_id in (le.edge_id, u_edge.edge_id):
            rej["partner_fixed"] += 1
            continue
        first = robust_switch(ctx, current, SwitchRequest(
            colour=e.colour, vertex=sub_entry[1].head, budget=request.budget,
            fix=request.fix | {le.edge_id, u_edge.edge_id},
            avoid_vertices=request.avoid_vertices,
            avoid_colours=request.avoid_colours), depth + 1)
        if isinstance(first, NotFound):
            rej["recursion_failed"] += 1
            continue
        second = robust_switch(ctx, first.matching, SwitchRequest(
            colour=u_edge.colour, vertex=u, budget=first.distance_to_base,
            fix=request.fix | {le.edge_id},
            avoid_vertices=request.avoid_vertices,
            avoid_colours=request.avoid_colours | {e.colour}), depth + 1)
        if isinstance(second, NotFound):
            rej["recursion_failed"] += 1
            continue
        result = second.matching.with_swap(removed=(le.edge_id,), added=(eid,))
        step = ExchangeStep(depth, level_idx, request.colour, request.vertex,
                            "descend", (le.edge_id,), (eid,))
        return SwitchOutcome(result, first.steps + second.steps + [step],
                             closeness(ctx.base, result).distance, dict(rej))

    return NotFound("no_configuration", dict(rej))


@dataclass
class AugmentOutcome:
    matching: RainbowMatching
    steps: list[ExchangeStep]
    violation: Violation


def augment(ctx: SwitchContext, violation: Violation) -> AugmentOutcome | NotFound:
    """Run the recipe for one violation against the context base.

    Returns a matching one edge larger, or :class:`NotFound` when some switch
    in the chain finds no configuration under the budget cap.
    """
    g = ctx.graph
    base = ctx.base
    e = g.edge(violation.edge_id)

    if violation.kind == "extend":
        return AugmentOutcome(base.with_swap((), (e.id,)), [], violation)

    target_level, target = ctx.hierarchy.entry(e.colour)

    if violation.kind == "free_free":
        out = robust_switch(ctx, base, SwitchRequest(
            colour=e.colour, vertex=target.head,
            avoid_vertices=frozenset((e.u, e.v))))
        if isinstance(out, NotFound):
            return out
        return AugmentOutcome(out.matching.with_swap((), (e.id,)),
                              out.steps, violation)

    if violation.kind == "reach_free":
        head, free_end = violation.vertices
        head_level, head_edge = ctx.hierarchy.head_entry(head)
        if head_edge.edge_id == target.edge_id:
            # the violating edge hangs off the head of its own colour's
            # matching edge: one switch frees colour and head together
            out = robust_switch(ctx, base, SwitchRequest(
                colour=e.colour, vertex=head,
                avoid_vertices=frozenset((free_end,))))
            if isinstance(out, NotFound):
                return out
            return AugmentOutcome(out.matching.with_swap((), (e.id,)),
                                  out.steps, violation)
        first = robust_switch(ctx, base, SwitchRequest(
            colour=head_edge.colour, vertex=head,
            fix=frozenset((target.edge_id,)),
            avoid_vertices=frozenset((free_end,))))
        if isinstance(first, NotFound):
            return first
        second = robust_switch(ctx, first.matching, SwitchRequest(
            colour=e.colour, vertex=target.head, budget=first.distance_to_base,
            avoid_vertices=frozenset((head, free_end))))
        if isinstance(second, NotFound):
            return second
        return AugmentOutcome(second.matching.with_swap((), (e.id,)),
                              first.steps + second.steps, violation)

    if violation.kind == "reach_reach":
        v, u = violation.vertices
        v_level, v_edge = ctx.hierarchy.head_entry(v)
        u_level, u_edge = ctx.hierarchy.head_entry(u)
        if target.edge_id in (v_edge.edge_id, u_edge.edge_id):
            # one endpoint is the head of the violating colour's own matching
            # edge; free the other endpoint first, then one switch clears both
            # the colour and the remaining endpoint
            if v_edge.edge_id == target.edge_id:
                other, other_edge = u, u_edge
            else:
                other, other_edge = v, v_edge
            first = robust_switch(ctx, base, SwitchRequest(
                colour=other_edge.colour, vertex=other,
                fix=frozenset((target.edge_id,))))
            if isinstance(first, NotFound):
                return first
            second = robust_switch(ctx, first.matching, SwitchRequest(
                colour=e.colour, vertex=target.head,
                budget=first.distance_to_base,
                avoid_vertices=frozenset((other,))))
            if isinstance(second, NotFound):
                return second
            return AugmentOutcome(second.matching.with_swap((), (e.id,)),
                                  first.steps + second.steps, violation)
        first = robust_switch(ctx, base, SwitchRequest(
            colour=v_edge.colour, vertex=v,
            fix=frozenset((u_edge.edge_id, target.edge_id))))
        if isinstance(first, NotFound):
            return first
        second = robust_switch(ctx, first.matching, SwitchRequest(
            colour=u_edge.colour, vertex=u, budget=first.distance_to_base,
            fix=frozenset((target.edge_id,)),
            avoid_vertices=frozenset((v,))))
        if isinstance(second, NotFound):
            return second
        third = robust_switch(ctx, second.matching, SwitchRequest(
            colour=e.colour, vertex=target.head, budget=second.distance_to_base,
            avoid_vertices=frozenset((v, u))))
        if isinstance(third, NotFound):
            return third
        return AugmentOutcome(third.matching.with_swap((), (e.id,)),
                              first.steps + second.steps + third.steps, violation)

    raise SwitchUsageError(f"unknown violation kind {violation.kind!r}")


@dataclass
class IterationRecord:
    index: int
    size_before: int
    size_after: int
    violations: int
    attempted: int
    kind: str | None
    edge_id: int | None
    exchanges: int
    base_ids: tuple[int, ...]


@dataclass
class SolveReport:
    """Everything one solve run did; :meth:`to_json_dict` is the stable
    serialised surface (timing excluded unless asked, to keep output
    byte-identical across runs)."""

    status: str
    n: int
    target_deficit: int
    target: int
    seed: int
    size: int
    matching: RainbowMatching
    iterations: list[IterationRecord]
    switch_calls: list[CallRecord]
    total_exchanges: int
    wall_ms: float

    EXIT_CODES = {"target_reached": 0, "stalled": 2, "iteration_cap": 3}

    @property
    def exit_code(self) -> int:
        return self.EXIT_CODES[self.status]

    def to_json_dict(self, include_timing: bool = False) -> dict:
        doc = {
            "status": self.status,
            "n": self.n,
            "target_deficit": self.target_deficit,
            "target": self.target,
            "seed": self.seed,
            "size": self.size,
            "iterations": len(self.iterations),
            "switches": self.total_exchanges,
            "matching": matching_to_json(self.matching.graph, self.matching),
        }
        if include_timing:
            doc["wall_ms"] = round(self.wall_ms, 3)
        return doc


def solve(graph: ColouredMultigraph, params: InstanceParams | None = None,
          target_deficit: int = 0, seed: int = 0, *, max_budget: int = 64,
          max_iterations: int = 1000, shuffle: bool = False) -> SolveReport:
    """Greedy start, then repeatedly pick the best-ranked violation whose
    recipe lands, until size n - target_deficit is reached, no recipe lands
    (stalled), or the iteration cap hits.

    A non-positive target is never reported reached; such runs go to stall,
    so asking for more than the graph can give is visible in the status.
    """
    t0 = time.perf_counter()
    if params is None:
        params = InstanceParams.for_graph(graph)
    n = graph.num_colours
    target = n - target_deficit
    current = greedy(graph, seed)
    rng = random.Random((seed * 0x9E3779B9) & 0xFFFFFFFF) if shuffle else None

    iterations: list[IterationRecord] = []
    calls: list[CallRecord] = []
    exchanges = 0
    status = None
    index = 0
    while True:
        if target >= 1 and len(current) >= target:
            status = "target_reached"
            break
        if index >= max_iterations:
            status = "iteration_cap"
            break
        current = extend_to_maximal(graph, current)
        if target >= 1 and len(current) >= target:
            status = "target_reached"
            break
        ctx = SwitchContext.build(graph, current, params,
                                  max_budget=max_budget, rng=rng)
        found = ctx.violations()
        chosen: tuple[Violation, AugmentOutcome] | None = None
        attempted = 0
        for violation in found:
            attempted += 1
            out = augment(ctx, violation)
            if isinstance(out, AugmentOutcome):
                chosen = (violation, out)
                break
        calls.extend(ctx.call_log)
        if chosen is None:
            iterations.append(IterationRecord(
                index, len(current), len(current), len(found), attempted,
                None, None, 0, tuple(current.sorted_edge_ids())))
            status = "stalled"
            break
        violation, out = chosen
        iterations.append(IterationRecord(
            index, len(current), len(out.matching), len(found), attempted,
            violation.kind, violation.edge_id, len(out.steps),
            tuple(current.sorted_edge_ids())))
        exchanges += len(out.steps)
        logger.debug("iteration %d: %s via edge %d, size %d -> %d", index,
                     violation.kind, violation.edge_id, len(current),
                     len(out.matching))
        current = out.matching
        index += 1

    wall_ms = (time.perf_counter() - t0) * 1000.0
    return SolveReport(
        status=status, n=n, target_deficit=target_deficit, target=target,
        seed=seed, size=len(current), matching=current, iterations=iterations,
        switch_calls=calls, total_exchanges=exchanges, wall_ms=wall_ms)
