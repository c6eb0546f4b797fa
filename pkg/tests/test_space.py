from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from workbench.errors import InvalidMetric
from workbench.space import (
    INF,
    Window,
    ball_window,
    base_window,
    boundary,
    coarse_components,
    disjoint_union,
    format_rational,
    free_group,
    from_graph,
    from_matrix,
    grid,
    inner_boundary,
    neighborhood,
    outer_boundary,
    parse_distance,
    space_from_json,
    trunked_free_group,
)


def labels(space, pts):
    return sorted(space.label(x) for x in pts)


def test_line_ball():
    Z = grid(1)
    assert labels(Z, Z.ball(Z.point((0,)), 2)) == [(-2,), (-1,), (0,), (1,), (2,)]


@pytest.mark.parametrize("r", range(0, 6))
def test_free_group_ball_sizes(r):
    F2 = free_group(2)
    assert len(F2.ball(F2.point(()), r)) == 2 * 3**r - 1


def test_components_do_not_mix():
    G = disjoint_union([from_graph([0, 1, 2], [(0, 1), (1, 2)]), from_graph(["a", "b"], [("a", "b")])])
    x = G.point((0, 0))
    assert G.ball(x, 10) == {G.point((0, i)) for i in range(3)}
    assert G.dist(x, G.point((1, "a"))) is INF


def test_interval_boundaries():
    Z = grid(1)
    A = [Z.point((k,)) for k in range(10)]
    assert labels(Z, inner_boundary(Z, A, 1)) == [(0,), (9,)]
    assert labels(Z, outer_boundary(Z, A, 1)) == [(-1,), (10,)]
    assert len(boundary(Z, A, 1)) == 4


def test_whole_finite_space_has_no_boundary():
    X = from_graph(range(5), [(i, i + 1) for i in range(4)])
    for R in (1, 2, 7):
        assert boundary(X, X.points(), R) == frozenset()


def test_free_ball_boundaries():
    F2 = free_group(2)
    B2 = F2.ball(F2.point(()), 2)
    assert len(outer_boundary(F2, B2, 1)) == 36
    assert len(inner_boundary(F2, B2, 1)) == 12


def test_grid_neighborhood_of_b5():
    Z2 = grid(2)
    B5 = Z2.ball(Z2.point((0, 0)), 5)
    assert len(B5) == 61
    assert neighborhood(Z2, B5, 1) == Z2.ball(Z2.point((0, 0)), 6)
    assert len(neighborhood(Z2, B5, 1)) == 85


def test_neighborhood_without_outside_is_identity():
    X = from_graph(range(4), [(0, 1), (1, 2), (2, 3)])
    assert neighborhood(X, X.points(), 3) == frozenset(X.points())
    Z = grid(1)
    assert labels(Z, neighborhood(Z, [Z.point((0,))], 3)) == [(k,) for k in range(-3, 4)]


def test_single_point_boundary():
    # the closed-ball convention counts the point itself: ∂⁻ = {0}, ∂⁺ = {−1, 1}
    Z = grid(1)
    assert len(boundary(Z, [Z.point((0,))], 1)) == 3


def test_coarse_components():
    G = disjoint_union([from_graph([0, 1], [(0, 1)]), from_graph([0, 1, 2], [(0, 1), (1, 2)])])
    assert len(coarse_components(Window(G, frozenset(G.points())))) == 2
    X = from_graph(range(5), [(i, i + 1) for i in range(4)])
    assert len(coarse_components(Window(X, frozenset(X.points())))) == 1


@pytest.mark.parametrize("k", [1, 2, 3, 5])
def test_trunked_window_meets_k_components(k):
    T = trunked_free_group([1, 2, 3, 4, 5])
    pts = set()
    for part in range(k):
        pts |= T.ball(T.base_points()[part], 1)
    assert len(coarse_components(Window(T, frozenset(pts)))) == k


def test_trunk_lengths():
    T = trunked_free_group([1, 2, 3])
    assert len(coarse_components(base_window(T, 1))) == 3
    for i, b in enumerate(T.base_points(), start=1):
        trunk = [x for x in T.ball(b, 10) if T.label(x)[1][0] == "t"]
        assert len(trunk) == i


def test_non_metric_matrix_rejected():
    with pytest.raises(InvalidMetric):
        from_matrix([[0, 1, 5], [1, 0, 1], [5, 1, 0]])


def test_matrix_space_with_infinite_distance():
    X = from_matrix([[0, "inf", 2], ["inf", 0, "inf"], [2, "inf", 0]])
    assert X.dist(0, 1) is INF
    assert X.ball(0, 3) == {0, 2}


def test_distance_parsing_and_formatting():
    assert parse_distance("3/2") == Fraction(3, 2)
    assert parse_distance(None) is INF
    assert parse_distance("inf") is INF
    assert format_rational(Fraction(4, 10)) == "2/5"
    assert format_rational(3) == "3/1"
    with pytest.raises(ValueError):
        parse_distance(1.5)


def test_space_json_round_trip():
    obj = {"kind": "graph", "vertices": ["a", "b", "c"], "edges": [["a", "b"], ["b", "c"]]}
    X = space_from_json(obj)
    assert X.dist(X.point("a"), X.point("c")) == 2
    assert space_from_json(X.describe()).dist(X.point("a"), X.point("c")) == 2


@st.composite
def graph_and_set(draw):
    n = draw(st.integers(2, 12))
    edges = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=2 * n))
    A = draw(st.sets(st.integers(0, n - 1)))
    R = draw(st.sampled_from([1, 2, 3, Fraction(1, 2), Fraction(5, 2)]))
    return from_graph(range(n), [e for e in edges if e[0] != e[1]]), A, R


@given(graph_and_set())
def test_boundary_is_disjoint_union(data):
    X, A, R = data
    outer, inner = outer_boundary(X, A, R), inner_boundary(X, A, R)
    assert not outer & inner
    assert boundary(X, A, R) == outer | inner


@given(graph_and_set())
def test_boundary_of_complement_is_same(data):
    X, A, R = data
    comp = frozenset(X.points()) - frozenset(A)
    assert boundary(X, A, R) == boundary(X, comp, R)


@given(graph_and_set(), st.integers(1, 3))
def test_neighborhoods_nest(data, s):
    X, A, R = data
    assert neighborhood(X, A, R) <= neighborhood(X, A, R + s)
    assert frozenset(A) <= neighborhood(X, A, R)


@given(st.integers(0, 4), st.integers(0, 4))
def test_free_group_triangle_inequality_from_origin(r, s):
    F2 = free_group(2)
    e = F2.point(())
    for x in F2.ball(e, r):
        for y in F2.ball(x, s):
            assert F2.dist(e, y) <= F2.dist(e, x) + F2.dist(x, y)


def test_window_inner():
    Z = grid(1)
    w = ball_window(Z, Z.point((0,)), 5)
    assert labels(Z, w.inner(2)) == [(k,) for k in range(-3, 4)]
