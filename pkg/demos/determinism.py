"""Same priority, same answer: the greedy results do not depend on scheduling.

Runs the root-set and prefix algorithms under many worker counts, loop
chunk sizes, frontier shuffles and prefix schedules, and checks that every
run returns exactly the set the sequential loop returns.  Luby's algorithm
is shown for contrast: a different seed gives a different (still valid)
independent set.

Run with a bigger thread pool to get real interleavings:

    NUMBA_NUM_THREADS=4 python3 demos/determinism.py
"""

import argparse
import itertools

import numpy as np

from lexgreedy import check_mis, check_mm, generate_rmat, random_priority
from lexgreedy import matching, mis
from lexgreedy._parallel import max_workers
from lexgreedy.priority import PrefixSchedule


def main():
    parser = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    parser.add_argument("--scale", type=int, default=13)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    g = generate_rmat(args.scale, 6 << args.scale, seed=args.seed)
    p, q = random_priority(g.n, args.seed), random_priority(g.m, args.seed)
    print(f"rmat graph: n={g.n} m={g.m}; thread pool of {max_workers()}")

    want = mis.sequential_greedy(g, p).in_mis
    want_mm = matching.sequential_greedy_mm(g, q).matched
    print(f"sequential: MIS of {want.sum()} vertices, matching of {want_mm.sum()} edges")

    schedules = [None, PrefixSchedule.fixed_fraction(0.02), PrefixSchedule.fixed_count(100),
                 PrefixSchedule.degree_aware(1.0)]
    runs = 0
    for schedule, workers, grain, shuffle in itertools.product(schedules, (1, 2, 4), (1, 64, 256), (None, 1, 2)):
        if schedule is None:
            a = mis.parallel_rootset(g, p, workers, grain=grain, shuffle_seed=shuffle)
            b = matching.parallel_rootset_mm(g, q, workers, grain=grain, shuffle_seed=shuffle)
        else:
            a = mis.prefix_greedy(g, p, schedule, workers, grain=grain, shuffle_seed=shuffle)
            b = matching.prefix_greedy_mm(g, q, schedule, workers, grain=grain, shuffle_seed=shuffle)
        assert np.array_equal(a.in_mis, want) and np.array_equal(b.matched, want_mm)
        runs += 2
    print(f"{runs} parallel runs, all identical to the sequential results")

    sizes = []
    for seed in range(5):
        res = mis.luby(g, seed)
        assert check_mis(g, res.in_mis).valid
        sizes.append((int(res.in_mis.sum()), res.stats.rounds, bool(np.array_equal(res.in_mis, want))))
    print("Luby (size, rounds, equals greedy) per seed:", sizes)
    assert check_mm(g, want_mm).valid


if __name__ == "__main__":
    main()
