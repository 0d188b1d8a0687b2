"""Transfer plans: the ordered pickup/drop steps a ship performs."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

from pirebalance.errors import ParseError, UnknownVertexError
from pirebalance.instance import Instance
from pirebalance.network import Network, format_length


@dataclass(frozen=True)
class Step:
    vertex: str
    delta: int  # > 0 pickup, < 0 drop


@dataclass(frozen=True)
class Plan:
    start: str
    steps: tuple[Step, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))

    def __len__(self) -> int:
        return len(self.steps)

    def route(self) -> list[str]:
        return [s.vertex for s in self.steps]


@dataclass(frozen=True)
class PlanReport:
    feasible: bool
    total_distance: float
    final_state: Mapping[str, int]
    load_trace: tuple[int, ...]
    violations: tuple[str, ...] = field(default_factory=tuple)


def plan_cost(plan: Plan, network: Network) -> float:
    """Shortest-path distance travelled, start leg included."""
    total = 0.0
    here = plan.start
    for step in plan.steps:
        total += network.d(here, step.vertex)
        here = step.vertex
    if not plan.steps and plan.start not in network:
        raise UnknownVertexError(f"unknown vertex {plan.start!r}")
    return total


def simulate(instance: Instance, plan: Plan) -> PlanReport:
    """Replay ``plan`` from the instance stocks and report what happened.

    Violations are recorded, not raised; the replay continues past them so
    the final state reflects every step.
    """
    net = instance.network
    for v in [plan.start, *plan.route()]:
        if v not in net:
            raise UnknownVertexError(f"unknown vertex {v!r}")
    k = instance.k
    stock = dict(instance.x)
    load = 0
    trace = []
    problems = []
    for i, step in enumerate(plan.steps):
        if step.delta == 0:
            problems.append(f"step {i}: zero delta")
        if abs(step.delta) > k:
            problems.append(f"step {i}: delta {step.delta} exceeds capacity {k}")
        stock[step.vertex] -= step.delta
        load += step.delta
        if stock[step.vertex] < 0:
            problems.append(f"step {i}: stock negative at {step.vertex} ({stock[step.vertex]})")
        if load > k:
            problems.append(f"step {i}: load overflow ({load} > {k})")
        elif load < 0:
            problems.append(f"step {i}: load underflow ({load} < 0)")
        trace.append(load)
    for v in net.vertices:
        if stock[v] != instance.y[v]:
            problems.append(f"vertex {v}: wrong final state ({stock[v]} != target {instance.y[v]})")
    return PlanReport(
        feasible=not problems,
        total_distance=plan_cost(plan, net),
        final_state=stock,
        load_trace=tuple(trace),
        violations=tuple(problems),
    )


# -- file format -------------------------------------------------------------


def plan_to_dict(plan: Plan) -> dict:
    return {"start": plan.start, "steps": [{"vertex": s.vertex, "delta": s.delta} for s in plan.steps]}


def plan_from_dict(data) -> Plan:
    if not isinstance(data, dict):
        raise ParseError("top level must be an object", "$")
    start = data.get("start")
    if not isinstance(start, str):
        raise ParseError("missing or non-string field 'start'", "$.start")
    steps = data.get("steps")
    if not isinstance(steps, list):
        raise ParseError("missing or non-list field 'steps'", "$.steps")
    out = []
    for i, item in enumerate(steps):
        where = f"steps[{i}]"
        if not isinstance(item, dict):
            raise ParseError("step must be an object", where)
        vertex, delta = item.get("vertex"), item.get("delta")
        if not isinstance(vertex, str):
            raise ParseError("missing or non-string field 'vertex'", f"{where}.vertex")
        if not isinstance(delta, int) or isinstance(delta, bool):
            raise ParseError("missing or non-integer field 'delta'", f"{where}.delta")
        out.append(Step(vertex, delta))
    return Plan(start=start, steps=tuple(out))


def report_to_dict(report: PlanReport, order: Sequence[str] | None = None) -> dict:
    keys = list(order) if order is not None else list(report.final_state)
    return {
        "feasible": report.feasible,
        "total_distance": format_length(report.total_distance),
        "final_state": {v: report.final_state[v] for v in keys},
        "load_trace": list(report.load_trace),
        "violations": list(report.violations),
    }


def dumps_plan(plan: Plan, **extra) -> str:
    data = plan_to_dict(plan)
    data.update(extra)
    return json.dumps(data, indent=2) + "\n"


def read_plan(path) -> Plan:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}", path) from None
    try:
        return plan_from_dict(data)
    except ParseError as exc:
        raise ParseError(exc.message, exc.where, path) from None


def write_plan(plan: Plan, path, **extra) -> None:
    """Write the plan file; ``extra`` keys (e.g. a cost) are added verbatim."""
    Path(path).write_text(dumps_plan(plan, **extra), encoding="utf-8")
