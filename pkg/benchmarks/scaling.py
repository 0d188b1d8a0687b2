"""Wall-time scaling of the heuristic in the number of vertices.

    python benchmarks/scaling.py [--repeats 5]

Instances come from the seeded generator (units of k, k = 5, up to n
shiploads), so the runs are reproducible up to timer noise.
"""

import argparse
import statistics
import time

from pirebalance.heuristic import solve_heuristic
from pirebalance.instance import generate_instance
from pirebalance.network import build_network


def timed(fn, repeats):
    samples = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--sizes", type=int, nargs="+", default=[10, 20, 40, 80, 160, 320])
    args = parser.parse_args()

    print("| n | N | build network (ms) | heuristic (ms) |")
    print("|---:|---:|---:|---:|")
    for n in args.sizes:
        inst = generate_instance(n, 5, seed=n, units_of_k=True, max_units=n, edge_prob=0.1)
        edges = [(u, v, d) for (u, v), d in inst.network.edge_lengths.items()]
        t_net = timed(lambda: build_network(inst.vertices, edges), args.repeats)
        t_heur = timed(lambda: solve_heuristic(inst), args.repeats)
        print(f"| {n} | {inst.total} | {t_net * 1e3:.2f} | {t_heur * 1e3:.2f} |")


if __name__ == "__main__":
    main()
