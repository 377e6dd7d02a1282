"""Rounds of the fully parallel algorithms grow polylogarithmically.

For a random priority the priority DAG is shallow: the root-set algorithm
finishes in a number of steps that grows like ``(ln n)**2`` at worst, and
in practice much slower.  The longest directed path is an upper bound on
those steps but is noticeably longer.  Luby's algorithm, which redraws
priorities every round, needs a similar number of rounds but returns a
different set each time.

    python3 demos/dependence_length.py --max-exp 17
"""

import argparse
import math

import numpy as np

from lexgreedy import generate_gnm, random_priority
from lexgreedy.matching import parallel_rootset_mm
from lexgreedy.mis import luby, parallel_rootset
from lexgreedy.priority import longest_path


def _median(xs):
    return f"{np.median(xs):g}"


def main():
    parser = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    parser.add_argument("--min-exp", type=int, default=10)
    parser.add_argument("--max-exp", type=int, default=16)
    parser.add_argument("--orderings", type=int, default=11)
    args = parser.parse_args()

    print(f"{'n':>8} {'(ln n)^2':>9} | {'MIS steps':>9} {'longest path':>12} {'Luby rounds':>11} | {'MM steps':>8}")
    for k in range(args.min_exp, args.max_exp + 1):
        n = 1 << k
        g = generate_gnm(n, 5 * n, seed=k)
        steps, paths, lubys, mm = [], [], [], []
        for s in range(args.orderings):
            p = random_priority(n, s)
            steps.append(parallel_rootset(g, p).stats.rounds)
            paths.append(longest_path(g, p))
            lubys.append(luby(g, s).stats.rounds)
            mm.append(parallel_rootset_mm(g, random_priority(g.m, s)).stats.rounds)
        print(f"{n:8d} {math.log(n) ** 2:9.1f} | {_median(steps):>9} {_median(paths):>12} "
              f"{_median(lubys):>11} | {_median(mm):>8}")


if __name__ == "__main__":
    main()
