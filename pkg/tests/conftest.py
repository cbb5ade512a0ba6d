import itertools

import pytest

from hyperquasi import complete_hypergraph, gen_coregular_sum, gen_random, new_hypergraph


def petersen():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    return new_hypergraph(2, 10, outer + inner + spokes)


def cycle_graph(n):
    return new_hypergraph(2, n, [(i, (i + 1) % n) for i in range(n)])


def two_triangles():
    return new_hypergraph(2, 6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])


def k_like(k, n):
    """Complete k-graph on n vertices (no loops)."""
    return complete_hypergraph(k, n)


def hypergraph_corpus(k, n=5, seeds=range(5)):
    """Empty, complete-with-loops, complete, coregular d=1,2, and random instances."""
    out = {
        "empty": new_hypergraph(k, n, []),
        "complete_loops": complete_hypergraph(k, n, loops=True),
        "complete": k_like(k, n),
        "coregular_d1": gen_coregular_sum(k, n, [0]),
        "coregular_d2": gen_coregular_sum(k, n, [0, 1]),
    }
    for s in seeds:
        out[f"random_s{s}"] = gen_random(k, n, 0.5, s)
    return out


@pytest.fixture
def k3():
    return complete_hypergraph(2, 3)


@pytest.fixture
def k4():
    return complete_hypergraph(2, 4)


@pytest.fixture
def c4():
    return cycle_graph(4)


def all_subsets(n):
    for r in range(n + 1):
        yield from itertools.combinations(range(n), r)


# one summary line per acceptance criterion, filled in by test_acceptance
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
