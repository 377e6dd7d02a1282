"""Shared fixtures, plus a session-wide validity audit.

Every MIS and matching entry point is wrapped at import time so that each
result produced anywhere in the suite goes through ``check_mis`` or
``check_mm``.  An invalid result fails the test that produced it and is also
remembered for the validity criterion, which runs last.
"""

import functools
import itertools

import numpy as np
import pytest

import lexgreedy
from lexgreedy import build, matching, mis, verify

AUDIT = {"results": {}, "failures": []}

_MIS_ENTRY = ("sequential_greedy", "parallel_rootset", "prefix_greedy", "luby")
_MM_ENTRY = ("sequential_greedy_mm", "parallel_rootset_mm", "prefix_greedy_mm")


def _audited(fn, kind):
    @functools.wraps(fn)
    def wrapper(graph, *args, **kwargs):
        res = fn(graph, *args, **kwargs)
        if kind == "mis":
            verdict = verify.check_mis(graph, res.in_mis)
        else:
            verdict = verify.check_mm(graph, res.matched)
        counts = AUDIT["results"]
        counts[fn.__name__] = counts.get(fn.__name__, 0) + 1
        if not verdict.valid:
            AUDIT["failures"].append((fn.__name__, repr(graph), verdict.report()))
            raise AssertionError(f"{fn.__name__} returned an invalid result on {graph!r}:\n{verdict.report()}")
        return res

    wrapper.__wrapped_algorithm__ = fn
    return wrapper


def _install_audit():
    for module, names, kind in ((mis, _MIS_ENTRY, "mis"), (matching, _MM_ENTRY, "mm")):
        for name in names:
            wrapped = _audited(getattr(module, name), kind)
            setattr(module, name, wrapped)
            setattr(lexgreedy, name, wrapped)


_install_audit()


# -- acceptance reporting ------------------------------------------------------

_CRITERIA = []


def pytest_collection_modifyitems(items):
    # the validity audit summarizes everything else, so it goes last
    last = [it for it in items if it.name == "test_criterion_03_validity"]
    items[:] = [it for it in items if it not in last] + last


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py::test_criterion_" in report.nodeid:
        detail = dict(report.user_properties).get("detail", "")
        _CRITERIA.append((report.nodeid.rsplit("::", 1)[1], report.outcome, detail))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome, detail in sorted(_CRITERIA):
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict}  {name.removeprefix('test_')}  {detail}")


# -- small graphs ---------------------------------------------------------------

def path_graph(n):
    return build([(i, i + 1) for i in range(n - 1)], n)


def complete_graph(n):
    return build(list(itertools.combinations(range(n), 2)), n)


def star_graph(leaves):
    return build([(0, i) for i in range(1, leaves + 1)], leaves + 1)


def cycle_graph(n):
    return build([(i, (i + 1) % n) for i in range(n)], n)


def disjoint_edges(pairs):
    return build([(2 * i, 2 * i + 1) for i in range(pairs)], 2 * pairs)


def random_small_graph(rng, max_n=64):
    """G(n, p) with n and p drawn per instance, to vary density."""
    n = int(rng.integers(0, max_n + 1))
    p = rng.choice([0.02, 0.05, 0.1, 0.2, 0.4, 0.7, 1.0])
    iu, iv = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < p
    return build(np.stack([iu[keep], iv[keep]], axis=1), n)


@pytest.fixture
def triangle():
    return complete_graph(3)


@pytest.fixture
def path4():
    return path_graph(4)
