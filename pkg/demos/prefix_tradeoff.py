"""How the prefix size trades total work against the number of rounds.

A prefix of one vertex is the sequential loop: every round handles a single
vertex, so rounds and work both equal the vertex count.  A prefix of the
whole graph is the fully parallel root-set algorithm: one round, and the
parallel steps inside it equal the dependence length of the priority DAG.
In between, each round only looks at the earliest slice of the remaining
vertices, so little work is wasted but there are more rounds.

    python3 demos/prefix_tradeoff.py --n 16384 --graph rmat
"""

import argparse

import numpy as np

from lexgreedy import generate_gnm, generate_rmat, random_priority
from lexgreedy.matching import prefix_greedy_mm
from lexgreedy.mis import prefix_greedy
from lexgreedy.priority import PrefixSchedule, dependence_length


def main():
    parser = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    parser.add_argument("--n", type=int, default=1 << 14)
    parser.add_argument("--graph", choices=["gnm", "rmat"], default="gnm")
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()

    n, m = args.n, 5 * args.n
    if args.graph == "gnm":
        g = generate_gnm(n, m, seed=args.seed)
    else:
        g = generate_rmat(int(np.log2(n)), m, seed=args.seed)
    print(f"{args.graph} graph: n={g.n} m={g.m} max degree={g.max_degree}")

    p = random_priority(g.n, args.seed)
    q = random_priority(g.m, args.seed)
    print(f"dependence length of the vertex priority DAG: {dependence_length(g, p).dependence_length}\n")

    rows = [("one item", PrefixSchedule.fixed_count(1))]
    rows += [(f"{d:g}", PrefixSchedule.fixed_fraction(d)) for d in (1e-4, 1e-3, 1e-2, 1e-1, 1.0)]
    print(f"{'prefix':>9} | {'MIS work':>9} {'rounds':>7} {'steps':>7} | {'MM work':>9} {'rounds':>7} {'steps':>7}")
    for label, schedule in rows:
        a = prefix_greedy(g, p, schedule).stats
        b = prefix_greedy_mm(g, q, schedule).stats
        print(f"{label:>9} | {a.edge_touches:9d} {a.rounds:7d} {a.steps_total:7d} | "
              f"{b.edge_touches:9d} {b.rounds:7d} {b.steps_total:7d}")

    # the degree-aware schedule grows the prefix geometrically
    res = prefix_greedy(g, p, PrefixSchedule.degree_aware(c=2.0))
    s = res.stats
    print(f"\ndegree-aware (c=2): {s.rounds} rounds, work {s.edge_touches}, prefix sizes {s.round_sizes.tolist()}")


if __name__ == "__main__":
    main()
