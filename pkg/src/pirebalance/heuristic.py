"""Four-step rebalancing heuristic.

1. greedy b-matching of excess vertices to deficit vertices;
2. nearest-neighbor tours over the excess and the deficit vertices;
3. cutting both tours into segments carrying one shipload each;
4. routing the matched flow through segment pairs and serving the pairs
   nearest-first.

Every nearest choice breaks ties by ascending vertex label, so the output is
a deterministic function of the instance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from pirebalance.errors import (
    EmptyMemberSetError,
    InconsistentFlowError,
    UnbalancedClassificationError,
)
from pirebalance.instance import Classification, Instance, classify
from pirebalance.network import Network, format_length, sorted_neighbors
from pirebalance.plan import Plan, Step


@dataclass(frozen=True)
class MatchEntry:
    source: str
    sink: str
    qty: int


@dataclass(frozen=True)
class Matching:
    entries: tuple[MatchEntry, ...]
    # one distance per entry, not weighted by qty
    cost: float

    def as_tuples(self) -> list[tuple[str, str, int]]:
        return [(e.source, e.sink, e.qty) for e in self.entries]


@dataclass(frozen=True)
class Tour:
    kind: str  # "excess" or "deficit"
    order: tuple[str, ...]
    amounts: Mapping[str, int]

    @property
    def total(self) -> int:
        return sum(self.amounts[v] for v in self.order)


@dataclass(frozen=True)
class Segment:
    parts: tuple[tuple[str, int], ...]

    @property
    def total(self) -> int:
        return sum(q for _, q in self.parts)

    @property
    def vertices(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.parts)


@dataclass(frozen=True)
class SubpathPartition:
    kind: str
    segments: tuple[Segment, ...]

    def as_lists(self) -> list[list[tuple[str, int]]]:
        return [list(s.parts) for s in self.segments]


def greedy_b_matching(classification: Classification, network: Network) -> Matching:
    """Match surplus to shortfall, globally closest pair first."""
    if classification.total_surplus != classification.total_shortfall:
        raise UnbalancedClassificationError(
            f"surplus {classification.total_surplus} != shortfall {classification.total_shortfall}"
        )
    supply = dict(classification.excess)
    demand = dict(classification.deficit)
    pairs = sorted((network.d(s, t), s, t) for s in supply for t in demand)
    entries = []
    cost = 0.0
    for d, s, t in pairs:
        if not supply[s] or not demand[t]:
            continue
        qty = min(supply[s], demand[t])
        supply[s] -= qty
        demand[t] -= qty
        entries.append(MatchEntry(s, t, qty))
        cost += d
    return Matching(entries=tuple(entries), cost=cost)


def build_tour(members: Mapping[str, int], network: Network, anchor: str, kind: str = "excess") -> Tour:
    """Nearest-neighbor tour through ``members``, entered from ``anchor``.

    Walks the precomputed sorted neighbor lists: the next vertex is the first
    unvisited member on the current vertex's list.
    """
    if not members:
        raise EmptyMemberSetError(f"no {kind} vertices to tour")
    remaining = set(members)
    order = []
    here = anchor
    if here in remaining:
        order.append(here)
        remaining.discard(here)
    while remaining:
        here = next(v for v, _ in sorted_neighbors(network, here) if v in remaining)
        order.append(here)
        remaining.discard(here)
    return Tour(kind=kind, order=tuple(order), amounts=dict(members))


def split_tour(tour: Tour, k: int) -> SubpathPartition:
    """Cut a tour into consecutive segments of exactly ``k`` units.

    A vertex whose amount overflows the current segment continues into the
    next one. Only the last segment can be short, and only when the tour
    total is not a multiple of ``k``.
    """
    segments = []
    current: list[tuple[str, int]] = []
    room = k
    for v in tour.order:
        left = tour.amounts[v]
        while left:
            take = min(left, room)
            current.append((v, take))
            left -= take
            room -= take
            if room == 0:
                segments.append(Segment(tuple(current)))
                current, room = [], k
    if current:
        segments.append(Segment(tuple(current)))
    return SubpathPartition(kind=tour.kind, segments=tuple(segments))


@dataclass
class _Pieces:
    """Per-vertex queue of (segment index, quantity) slots, in tour order."""

    slots: dict[str, list[list[int]]] = field(default_factory=dict)

    @classmethod
    def of(cls, parts: SubpathPartition) -> "_Pieces":
        out = cls()
        for i, seg in enumerate(parts.segments):
            for v, q in seg.parts:
                out.slots.setdefault(v, []).append([i, q])
        return out

    def head(self, v: str) -> list[int] | None:
        queue = self.slots.get(v)
        while queue and queue[0][1] == 0:
            queue.pop(0)
        return queue[0] if queue else None


@dataclass(frozen=True)
class SegmentPair:
    ex_index: int
    def_index: int
    pickups: tuple[tuple[str, int], ...]
    drops: tuple[tuple[str, int], ...]


def route_flow(ex_parts: SubpathPartition, def_parts: SubpathPartition, matching: Matching) -> list[SegmentPair]:
    """Spread each matching entry over the segments holding its endpoints."""
    if sum(s.total for s in ex_parts.segments) != sum(s.total for s in def_parts.segments):
        raise InconsistentFlowError("excess and deficit partitions carry different totals")
    src, dst = _Pieces.of(ex_parts), _Pieces.of(def_parts)
    flow: dict[tuple[int, int], dict[str, dict[str, int]]] = {}
    for entry in matching.entries:
        left = entry.qty
        while left:
            a, b = src.head(entry.source), dst.head(entry.sink)
            if a is None or b is None:
                raise InconsistentFlowError(
                    f"cannot route {entry.qty} from {entry.source} to {entry.sink} through the segments"
                )
            q = min(left, a[1], b[1])
            a[1] -= q
            b[1] -= q
            left -= q
            cell = flow.setdefault((a[0], b[0]), {"up": {}, "down": {}})
            cell["up"][entry.source] = cell["up"].get(entry.source, 0) + q
            cell["down"][entry.sink] = cell["down"].get(entry.sink, 0) + q
    leftovers = [v for p in (src, dst) for v in p.slots if p.head(v) is not None]
    if leftovers:
        raise InconsistentFlowError(f"matching leaves segment quantity unrouted at {sorted(leftovers)}")

    pairs = []
    for (i, j), cell in sorted(flow.items()):
        ex_seg, def_seg = ex_parts.segments[i], def_parts.segments[j]
        pickups = tuple((v, cell["up"][v]) for v in ex_seg.vertices if v in cell["up"])
        drops = tuple((v, cell["down"][v]) for v in def_seg.vertices if v in cell["down"])
        pairs.append(SegmentPair(i, j, pickups, drops))
    return pairs


def assemble_plan(
    ex_parts: SubpathPartition,
    def_parts: SubpathPartition,
    matching: Matching,
    start: str,
    network: Network,
) -> Plan:
    """Serve segment pairs nearest-first: pick up along one, drop along the other."""
    todo = route_flow(ex_parts, def_parts, matching)
    steps = []
    here = start
    while todo:
        best = min(
            todo,
            key=lambda p: (network.d(here, p.pickups[0][0]), p.pickups[0][0], p.ex_index, p.def_index),
        )
        todo.remove(best)
        steps.extend(Step(v, q) for v, q in best.pickups)
        steps.extend(Step(v, -q) for v, q in best.drops)
        here = best.drops[-1][0]
    return Plan(start=start, steps=tuple(steps))


@dataclass(frozen=True)
class HeuristicResult:
    """The plan together with every intermediate artifact."""

    classification: Classification
    matching: Matching
    ex_tour: Tour | None
    def_tour: Tour | None
    ex_parts: SubpathPartition
    def_parts: SubpathPartition
    plan: Plan


def run_heuristic(instance: Instance) -> HeuristicResult:
    cls = classify(instance)
    net = instance.network
    matching = greedy_b_matching(cls, net)
    if cls.excess:
        ex_tour = build_tour(cls.excess, net, instance.start, "excess")
        def_tour = build_tour(cls.deficit, net, instance.start, "deficit")
        ex_parts = split_tour(ex_tour, instance.k)
        def_parts = split_tour(def_tour, instance.k)
    else:
        ex_tour = def_tour = None
        ex_parts = SubpathPartition("excess", ())
        def_parts = SubpathPartition("deficit", ())
    plan = assemble_plan(ex_parts, def_parts, matching, instance.start, net)
    return HeuristicResult(cls, matching, ex_tour, def_tour, ex_parts, def_parts, plan)


def solve_heuristic(instance: Instance) -> Plan:
    return run_heuristic(instance).plan


def result_to_dict(result: HeuristicResult) -> dict:
    """Intermediate artifacts in JSON-friendly form (for verbose output)."""

    def tour(t: Tour | None):
        return None if t is None else [[v, t.amounts[v]] for v in t.order]

    def parts(p: SubpathPartition):
        return [[[v, q] for v, q in seg.parts] for seg in p.segments]

    return {
        "excess": dict(result.classification.excess),
        "deficit": dict(result.classification.deficit),
        "matching": [[e.source, e.sink, e.qty] for e in result.matching.entries],
        "matching_cost": format_length(result.matching.cost),
        "excess_tour": tour(result.ex_tour),
        "deficit_tour": tour(result.def_tour),
        "excess_segments": parts(result.ex_parts),
        "deficit_segments": parts(result.def_parts),
    }
