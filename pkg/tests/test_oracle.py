from fractions import Fraction

import pytest

from workbench import oracle
from workbench.errors import CapExceeded
from workbench.lpa import GRAPH_FIXTURES
from workbench.space import free_group, grid


@pytest.mark.parametrize("r", range(6))
def test_ball_sizes_match_spaces(r):
    assert oracle.ball_size("grid", 2, r) == 2 * r * r + 2 * r + 1 == len(grid(2).ball(grid(2).point((0, 0)), r))
    F2 = free_group(2)
    assert oracle.ball_size("free", 2, r) == 2 * 3**r - 1 == len(F2.ball(F2.point(()), r))


def test_free_dist():
    assert oracle.free_dist((1,), (2,)) == 2
    assert oracle.free_dist((2, 1), (1,)) == 1
    assert oracle.free_dist((1, 2), (1,)) == 3
    assert oracle.free_dist((1, -1), ()) == 0


def test_caps():
    with pytest.raises(CapExceeded):
        oracle.grid_ball(3, 30)
    with pytest.raises(CapExceeded):
        oracle.free_ball(3, 12)
    with pytest.raises(CapExceeded):
        oracle.folner_scan(list(range(21)), list(range(21)), lambda a, b: abs(a - b), 1)
    with pytest.raises(CapExceeded):
        oracle.finite_universe({"kind": "grid", "dim": 1})


def test_boundaries_on_line():
    outer, inner = oracle.boundaries(range(-5, 6), lambda a, b: abs(a - b), [0, 1, 2], 1)
    assert outer == {-1, 3} and inner == {0, 2}


def test_kuhn():
    assert oracle.kuhn_matching([[0], [0]], 1) == 1
    assert oracle.kuhn_matching([[0, 1], [0]], 2) == 2
    assert oracle.kuhn_matching([], 3) == 0


def test_finite_universe_distances():
    pts, dist = oracle.finite_universe({"kind": "graph", "vertices": ["a", "b", "c"], "edges": [["a", "b"]]})
    assert dist(0, 1) == 1 and dist(0, 0) == 0
    assert dist(0, 2) == oracle.INF
    pts, dist = oracle.finite_universe({"kind": "matrix", "distances": [[0, "1/2"], ["1/2", 0]]})
    assert dist(0, 1) == Fraction(1, 2)
    _, dist = oracle.finite_universe({"kind": "matrix", "distances": [[0, "inf"], [None, 0]]})
    assert dist(0, 1) == dist(1, 0) == oracle.INF


def test_naive_rewriting_on_loop():
    E = GRAPH_FIXTURES["loop"]()
    assert oracle.naive_normal_form(E, [("e", 0), ("g", 0)]) == {((), (), 0): 1}
    assert oracle.naive_normal_form(E, [("g", 0), ("e", 0)]) == {((), (), 0): 1}


def test_naive_rewriting_uses_ck2():
    # e2 e2* is rewritten with the designated edge e2 on the rose
    E = GRAPH_FIXTURES["rose2"]()
    nf = oracle.naive_normal_form(E, [("e", 1), ("g", 1)])
    assert nf == {((), (), 0): 1, ((0,), (0,), 0): -1}


def test_paradox_feasibility():
    assert oracle.paradox_feasible(oracle.free_ball(2, 2), oracle.free_dist, 1, oracle.free_ball(2, 3))
    assert not oracle.paradox_feasible(oracle.grid_ball(1, 3), oracle.grid_dist, 1, oracle.grid_ball(1, 4))
