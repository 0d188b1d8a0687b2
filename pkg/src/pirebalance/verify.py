"""Independent plan checker.

Deliberately written without the replay code in :mod:`pirebalance.plan` or
anything from the heuristic, so that the two can be cross-checked. It reads
the raw distance matrix by index and never raises on bad plans.
"""

from __future__ import annotations

from pirebalance.instance import Instance
from pirebalance.plan import Plan, PlanReport


def verify_plan(instance: Instance, plan: Plan) -> PlanReport:
    labels = list(instance.network.vertices)
    pos = {v: i for i, v in enumerate(labels)}
    matrix = instance.network.dist.tolist()
    cap = instance.k

    violations: list[str] = []
    loads: list[int] = []
    held = [instance.x[v] for v in labels]
    carried = 0
    travelled = 0.0

    at = pos.get(plan.start)
    if at is None:
        violations.append(f"unknown vertex {plan.start!r}")

    for n, (vertex, delta) in enumerate((s.vertex, s.delta) for s in plan.steps):
        j = pos.get(vertex)
        if j is None:
            violations.append(f"step {n}: unknown vertex {vertex!r}")
            loads.append(carried)
            continue
        if at is not None:
            travelled += matrix[at][j]
        at = j

        if delta == 0:
            violations.append(f"step {n}: zero delta")
        if delta > cap or -delta > cap:
            violations.append(f"step {n}: delta {delta} exceeds capacity {cap}")

        carried = carried + delta
        held[j] = held[j] - delta
        if held[j] < 0:
            violations.append(f"step {n}: stock negative at {vertex} ({held[j]})")
        if carried > cap:
            violations.append(f"step {n}: load overflow ({carried} > {cap})")
        if carried < 0:
            violations.append(f"step {n}: load underflow ({carried} < 0)")
        loads.append(carried)

    final = dict(zip(labels, held))
    for v, have in final.items():
        want = instance.y[v]
        if have != want:
            violations.append(f"vertex {v}: wrong final state ({have} != target {want})")

    return PlanReport(
        feasible=len(violations) == 0,
        total_distance=travelled,
        final_state=final,
        load_trace=tuple(loads),
        violations=tuple(violations),
    )
