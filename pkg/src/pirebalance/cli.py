"""Command-line entry point.

Exit codes: 0 success, 1 infeasible plan / violation / non-closed matrix,
2 bad input or usage, 3 search resource limit.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from pirebalance.errors import RebalanceError, ResourceLimitError
from pirebalance.heuristic import result_to_dict, run_heuristic
from pirebalance.instance import Instance, generate_instance, read_instance, validate_instance, write_instance
from pirebalance.network import closure_changes, format_length, metric_closure, read_matrix_csv, write_matrix_csv
from pirebalance.oracle import DEFAULT_MAX_STATES, compare, solve_exact
from pirebalance.plan import read_plan, report_to_dict, write_plan
from pirebalance.verify import verify_plan

OK, FAILED, BAD_INPUT, LIMIT = 0, 1, 2, 3


def _fmt(value) -> str:
    value = format_length(value)
    return "inf" if value is None else str(value)


def _write_json(path, data) -> None:
    Path(path).write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")


def _load(path) -> Instance:
    instance = read_instance(path)
    report = validate_instance(instance)
    if not report.ok:
        raise RebalanceError("invalid instance: " + "; ".join(report.violations))
    return instance


def cmd_solve(args) -> int:
    instance = _load(args.instance)
    result = run_heuristic(instance)
    report = verify_plan(instance, result.plan)
    print(f"heuristic plan: {len(result.plan)} steps, distance {_fmt(report.total_distance)}")
    if args.verbose:
        details = result_to_dict(result)
        print(f"matching: {details['matching']} (entry distance sum {_fmt(result.matching.cost)})")
        print(f"excess tour: {details['excess_tour']}")
        print(f"deficit tour: {details['deficit_tour']}")
        print(f"route: {' '.join(f'{s.vertex}({s.delta:+d})' for s in result.plan.steps)}")
    if args.out:
        extra = {"total_distance": format_length(report.total_distance)}
        if args.verbose:
            extra["heuristic"] = result_to_dict(result)
        write_plan(result.plan, args.out, **extra)
    if not report.feasible:
        for v in report.violations:
            print(f"violation: {v}")
        return FAILED
    return OK


def cmd_verify(args) -> int:
    instance = _load(args.instance)
    plan = read_plan(args.plan)
    report = verify_plan(instance, plan)
    status = "feasible" if report.feasible else "INFEASIBLE"
    print(f"{status}: {len(plan)} steps, distance {_fmt(report.total_distance)}")
    for v in report.violations:
        print(f"violation: {v}")
    if args.out:
        _write_json(args.out, report_to_dict(report, instance.network.vertices))
    return OK if report.feasible else FAILED


def cmd_oracle(args) -> int:
    instance = _load(args.instance)
    exact = solve_exact(instance, max_states=args.max_states)
    print(f"optimal plan: {len(exact.plan)} steps, distance {_fmt(exact.cost)} (grain {exact.grain}, {exact.states} states)")
    if args.verbose:
        print(f"route: {' '.join(f'{s.vertex}({s.delta:+d})' for s in exact.plan.steps)}")
    if args.out:
        write_plan(exact.plan, args.out, total_distance=format_length(exact.cost))
    return OK


def _compare_seed(job):
    seed, n, k, units_of_k, max_units, max_states = job
    instance = generate_instance(n, k, seed, units_of_k=units_of_k, max_units=max_units)
    return seed, compare(instance, max_states=max_states)


def _row(label, c) -> dict:
    return {
        "instance": label,
        "heuristic_cost": format_length(c.heuristic_cost),
        "optimal_cost": format_length(c.optimal_cost),
        "ratio": c.ratio,
        "heuristic_feasible": c.heuristic_feasible,
        "optimal_feasible": c.optimal_feasible,
    }


def cmd_compare(args) -> int:
    if (args.instance is None) == (args.sweep is None):
        raise _Usage("compare needs exactly one of --instance or --sweep")
    if args.instance is not None:
        results = [(str(args.instance), compare(_load(args.instance), max_states=args.max_states))]
    else:
        jobs = [
            (args.seed + i, args.n, args.k, args.units_of_k, args.max_units, args.max_states)
            for i in range(args.sweep)
        ]
        if args.jobs > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                done = list(pool.map(_compare_seed, jobs))
        else:
            done = [_compare_seed(j) for j in jobs]
        results = [(f"seed {seed}", c) for seed, c in done]

    rows = [_row(label, c) for label, c in results]
    bad = 0
    for label, c in results:
        ok = c.heuristic_feasible and c.optimal_feasible and c.ratio >= 1
        bad += not ok
        print(f"{label}: heuristic {_fmt(c.heuristic_cost)}, optimal {_fmt(c.optimal_cost)}, ratio {c.ratio:.4f}"
              + ("" if ok else "  <-- FAILED"))
    ratios = sorted(c.ratio for _, c in results)
    if len(results) > 1:
        mid = ratios[len(ratios) // 2]
        print(f"{len(results)} instances: ratio min {ratios[0]:.4f}, median {mid:.4f}, max {ratios[-1]:.4f}")
    if args.out:
        _write_json(args.out, rows)
    return FAILED if bad else OK


def cmd_gen(args) -> int:
    instance = generate_instance(args.n, args.k, args.seed, units_of_k=args.units_of_k, max_units=args.max_units)
    write_instance(instance, args.out)
    print(f"wrote {args.out}: {args.n} vertices, k={args.k}, N={instance.total}, start {instance.start}")
    return OK


def cmd_closure(args) -> int:
    labels, matrix = read_matrix_csv(args.matrix)
    closed = metric_closure(matrix)
    changes = closure_changes(labels, matrix, closed)
    if args.out:
        write_matrix_csv(args.out, labels, closed)
    if not changes:
        print("matrix is already closed under shortest paths")
        return OK
    print(f"{len(changes)} pair(s) shortened by closure:")
    for u, v, old, new in changes:
        print(f"  ({u},{v}) {_fmt(old)} -> {_fmt(new)}")
    return FAILED


def _dot_id(v: str) -> str:
    return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'


def instance_to_dot(instance: Instance) -> str:
    net = instance.network
    lines = ["graph rebalance {"]
    for v in net.vertices:
        lines.append(f'  {_dot_id(v)} [label="{v} {instance.x[v]}/{instance.y[v]}"];')
    for (u, v), length in net.edge_lengths.items():
        lines.append(f'  {_dot_id(u)} -- {_dot_id(v)} [label="{_fmt(length)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_export_dot(args) -> int:
    instance = _load(args.instance)
    Path(args.out).write_text(instance_to_dot(instance), encoding="utf-8")
    print(f"wrote {args.out}: {len(instance.network)} vertices, {len(instance.network.edge_lengths)} edges")
    return OK


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(f"{self.prog}: error: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pirebalance", description="Single-ship container rebalancing.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="run the four-step heuristic")
    p.add_argument("--instance", type=Path, required=True)
    p.add_argument("--out", type=Path)
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a plan against an instance")
    p.add_argument("--instance", type=Path, required=True)
    p.add_argument("--plan", type=Path, required=True)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="exact uniform-cost search")
    p.add_argument("--instance", type=Path, required=True)
    p.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES)
    p.add_argument("--out", type=Path)
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("compare", help="heuristic against the exact optimum")
    p.add_argument("--instance", type=Path)
    p.add_argument("--sweep", type=int, metavar="COUNT", help="generate COUNT instances from --seed on")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--units-of-k", action="store_true")
    p.add_argument("--max-units", type=int, default=4)
    p.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("gen", help="write a random instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--units-of-k", action="store_true")
    p.add_argument("--max-units", type=int, default=4)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("closure", help="close a distance matrix and list shortened pairs")
    p.add_argument("--matrix", type=Path, required=True)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("export-dot", help="write the instance graph in DOT format")
    p.add_argument("--instance", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=cmd_export_dot)
    return parser


def run_cli(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except _Usage as exc:
        print(exc, file=sys.stderr)
        return BAD_INPUT
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return LIMIT
    except (RebalanceError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
