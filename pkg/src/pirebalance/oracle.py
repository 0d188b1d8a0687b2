"""Exact solver for desk-sized instances, by uniform-cost search.

A search state is ``(at, load, residual)`` where ``residual[v]`` is the
current stock minus the target at ``v``, counted in grains (the quantum used
for every pickup and drop). Moving costs the shortest-path distance; picking
up or dropping costs nothing. Pickups may happen wherever stock is present
and drops anywhere, so the search also covers plans that park containers
at intermediate vertices.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from functools import reduce

from pirebalance.errors import InvalidGrainError, ResourceLimitError
from pirebalance.heuristic import solve_heuristic
from pirebalance.instance import Instance, require_valid
from pirebalance.plan import Plan, Step
from pirebalance.verify import verify_plan

DEFAULT_MAX_STATES = 2_000_000


def default_grain(instance: Instance) -> int:
    """gcd of every vertex imbalance and the capacity."""
    diffs = [abs(instance.x[v] - instance.y[v]) for v in instance.network.vertices]
    return reduce(math.gcd, diffs, instance.k)


@dataclass(frozen=True)
class ExactResult:
    plan: Plan
    cost: float
    grain: int
    states: int


def solve_exact(instance: Instance, max_states: int = DEFAULT_MAX_STATES, grain: int | None = None) -> ExactResult:
    """Minimum-distance plan among plans whose moves are multiples of ``grain``.

    Raises ResourceLimitError once more than ``max_states`` distinct states
    have been discovered.
    """
    require_valid(instance)
    labels = instance.network.vertices
    n = len(labels)
    g = default_grain(instance) if grain is None else grain
    if not isinstance(g, int) or g < 1:
        raise InvalidGrainError(f"grain must be a positive integer, got {g!r}")
    bad = [v for v in labels if (instance.x[v] - instance.y[v]) % g]
    if bad:
        raise InvalidGrainError(f"grain {g} does not divide the imbalance at {bad}")
    cap = instance.k // g
    if cap == 0 and any(instance.x[v] != instance.y[v] for v in labels):
        raise InvalidGrainError(f"grain {g} exceeds capacity {instance.k}")

    dist = instance.network.dist.tolist()
    target = [instance.y[v] for v in labels]
    start = (instance.network.index[instance.start], 0, tuple((instance.x[v] - instance.y[v]) // g for v in labels))

    best = {start: 0.0}
    parent: dict = {start: None}
    heap = [(0.0, start)]
    goal = None
    while heap:
        cost, state = heapq.heappop(heap)
        if cost > best[state]:
            continue
        at, load, res = state
        if load == 0 and not any(res):
            goal = state
            break

        moves = []
        avail = (target[at] + g * res[at]) // g
        for m in range(1, min(avail, cap - load) + 1):
            r = list(res)
            r[at] -= m
            moves.append(((at, load + m, tuple(r)), 0.0, ("pick", m)))
        for m in range(1, load + 1):
            r = list(res)
            r[at] += m
            moves.append(((at, load - m, tuple(r)), 0.0, ("drop", m)))
        for j in range(n):
            if j != at:
                moves.append(((j, load, res), dist[at][j], ("move", j)))

        for nxt, step_cost, action in moves:
            new_cost = cost + step_cost
            old = best.get(nxt)
            if old is None:
                if len(best) >= max_states:
                    raise ResourceLimitError(max_states)
            elif new_cost >= old:
                continue
            best[nxt] = new_cost
            parent[nxt] = (state, action)
            heapq.heappush(heap, (new_cost, nxt))

    if goal is None:  # pragma: no cover - valid instances are always solvable
        raise RuntimeError("search exhausted without reaching the target state")

    steps = []
    state = goal
    while parent[state] is not None:
        prev, (kind, m) = parent[state]
        if kind != "move":
            steps.append(Step(labels[prev[0]], m * g if kind == "pick" else -m * g))
        state = prev
    steps.reverse()
    return ExactResult(plan=Plan(instance.start, tuple(steps)), cost=best[goal], grain=g, states=len(best))


@dataclass(frozen=True)
class Comparison:
    heuristic_cost: float
    optimal_cost: float
    ratio: float
    heuristic_feasible: bool
    optimal_feasible: bool


def compare(instance: Instance, max_states: int = DEFAULT_MAX_STATES) -> Comparison:
    """Heuristic cost against the exact optimum. Ratio is 1 when both are 0."""
    heuristic = solve_heuristic(instance)
    exact = solve_exact(instance, max_states=max_states)
    h_report = verify_plan(instance, heuristic)
    o_report = verify_plan(instance, exact.plan)
    h, o = h_report.total_distance, o_report.total_distance
    if o == 0:
        ratio = 1.0 if h == 0 else math.inf
    else:
        ratio = h / o
    return Comparison(h, o, ratio, h_report.feasible, o_report.feasible)
