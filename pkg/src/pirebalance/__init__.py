"""Single-ship container rebalancing on a logistics graph.

Given current stocks, target stocks and a ship of capacity ``k``, build a
short sequence of pickups and drops that moves the network from one state
to the other.
"""

from pirebalance.errors import RebalanceError
from pirebalance.network import Network, build_network, metric_closure, sorted_neighbors
from pirebalance.instance import (
    Classification,
    Instance,
    classify,
    generate_instance,
    read_instance,
    validate_instance,
    write_instance,
)
from pirebalance.plan import Plan, PlanReport, Step, plan_cost, read_plan, simulate, write_plan
from pirebalance.verify import verify_plan
from pirebalance.heuristic import (
    Matching,
    SubpathPartition,
    Tour,
    assemble_plan,
    build_tour,
    greedy_b_matching,
    run_heuristic,
    solve_heuristic,
    split_tour,
)
from pirebalance.oracle import Comparison, compare, solve_exact

__version__ = "0.1.0"

__all__ = [
    "Classification",
    "Comparison",
    "Instance",
    "Matching",
    "Network",
    "Plan",
    "PlanReport",
    "RebalanceError",
    "Step",
    "SubpathPartition",
    "Tour",
    "assemble_plan",
    "build_network",
    "build_tour",
    "classify",
    "compare",
    "generate_instance",
    "greedy_b_matching",
    "metric_closure",
    "plan_cost",
    "read_instance",
    "read_plan",
    "run_heuristic",
    "simulate",
    "solve_exact",
    "solve_heuristic",
    "sorted_neighbors",
    "split_tour",
    "validate_instance",
    "verify_plan",
    "write_instance",
    "write_plan",
]
