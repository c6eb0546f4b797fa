import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from workbench.errors import (
    BreakingVerticesPresent,
    EmptyGraph,
    InvalidEpsilon,
    NotConstructibleHere,
    NotNonExclusive,
    ValidationFailed,
)
from workbench.linalg import GF2, GF7, QQ, is_folner_subspace, span
from workbench.lpa import (
    GRAPH_FIXTURES,
    DirectedGraph,
    NormalMonomial,
    adjoint,
    breaking_vertices,
    classify,
    cycles_summary,
    folner_witness,
    leavitt_algebra,
    left_folner_fixture_check,
    lpa_backend,
    parse_element,
    path_algebra,
    properly_infinite_quadruple,
    properly_infinite_vertex_witness,
    quotient_graph,
    saturation_closure,
    scc_condensation,
    tree,
)

# ---------------------------------------------------------------- graph structure


def test_graph_validation():
    with pytest.raises(ValidationFailed):
        DirectedGraph(["a", "a"], [])
    with pytest.raises(ValidationFailed):
        DirectedGraph(["a"], [("e", "a", "b")])
    with pytest.raises(ValidationFailed):
        DirectedGraph(["a"], [("e", "a", "a"), ("e", "a", "a")])
    with pytest.raises(ValidationFailed):
        DirectedGraph.from_json({"vertices": ["a"], "edges": [{"id": "e", "src": "a"}]})


@pytest.mark.parametrize("name", sorted(GRAPH_FIXTURES))
def test_json_round_trip(name):
    E = GRAPH_FIXTURES[name]()
    F = DirectedGraph.from_json(E.to_json())
    assert F.to_json() == E.to_json()
    assert classify(F).verdict == classify(E).verdict


def test_rose_cycle_is_non_exclusive_and_maximal():
    [c] = cycles_summary(GRAPH_FIXTURES["rose2"]())
    assert not c.exclusive and c.maximal
    [c] = cycles_summary(GRAPH_FIXTURES["loop"]())
    assert c.exclusive and c.maximal


def test_loop_to_rose_cycles():
    summary = {c.base: c for c in cycles_summary(GRAPH_FIXTURES["loop_to_rose"]())}
    assert summary["c"].exclusive and summary["c"].maximal
    assert not summary["u"].exclusive and not summary["u"].maximal


def test_condensation_is_topological():
    E = GRAPH_FIXTURES["loop_to_rose"]()
    cond = scc_condensation(E)
    for c, succ in enumerate(cond.dag):
        assert all(d > c for d in succ)


def test_tree_and_saturation():
    E = DirectedGraph(["a", "c"], [("l", "c", "c"), ("g", "a", "c")])
    assert tree(E, ["c"]) == {"c"}
    tr = saturation_closure(E, ["c"])
    assert tr.tree == {"c"} and tr.increments == ({"a"},)
    assert tr.closure == {"a", "c"}


def test_saturation_blocked_by_sink():
    E = DirectedGraph(["a", "b", "c"], [("l", "c", "c"), ("g", "a", "c"), ("h", "a", "b")])
    assert saturation_closure(E, ["c"]).closure == {"c"}


def test_saturation_of_empty_set():
    assert saturation_closure(GRAPH_FIXTURES["path3"](), []).closure == frozenset()


def _flag_graph(edge_target):
    return DirectedGraph(
        ["u", "w", "z"],
        [("l", "u", "u"), ("h", "w", edge_target)],
        {"w": ["u"]},
    )


def test_breaking_vertices():
    assert breaking_vertices(GRAPH_FIXTURES["rose2"](), ["v"]) == frozenset()
    assert breaking_vertices(_flag_graph("z"), ["u"]) == {"w"}
    assert breaking_vertices(_flag_graph("u"), ["u"]) == frozenset()
    with pytest.raises(BreakingVerticesPresent):
        quotient_graph(_flag_graph("z"), ["u"])


def test_breaking_vertices_needs_hereditary_saturated():
    with pytest.raises(ValidationFailed):
        breaking_vertices(GRAPH_FIXTURES["example57"](), ["v"])
    E = DirectedGraph(["a", "c"], [("l", "c", "c"), ("g", "a", "c")])
    with pytest.raises(ValidationFailed):
        breaking_vertices(E, ["c"])


def test_quotients():
    E = GRAPH_FIXTURES["rose2_plus_point"]()
    Q = quotient_graph(E, ["v"])
    assert Q.vertices == ["w"] and Q.edges == []
    P = GRAPH_FIXTURES["path3"]()
    assert quotient_graph(P, []).to_json() == P.to_json()
    assert quotient_graph(P, P.vertices).n == 0


# ---------------------------------------------------------------- classification


def test_more_verdicts():
    assert classify(GRAPH_FIXTURES["example57"]()).verdict == "A1"
    assert classify(GRAPH_FIXTURES["figure_eight"]()).verdict == "A1"
    with pytest.raises(EmptyGraph):
        classify(DirectedGraph([], []))


def test_a2_note_for_sinks():
    cls = classify(GRAPH_FIXTURES["rose2_plus_point"]())
    assert cls.verdict == "A2"
    assert cls.H == {"v"}
    assert cls.notes
    assert cls.witnesses["quotient_acyclic"]


def test_infinite_vertices_flag():
    E = DirectedGraph(["a", "b", "c", "d"], [("f", "a", "b")], infinite_vertices=True)
    cls = classify(E)
    assert cls.verdict == "A3" and cls.reasons == ["B3a"]


def test_a1_witness_trace():
    cls = classify(GRAPH_FIXTURES["example57"]())
    assert cls.witnesses["comparison_trace"]["level"] == "trace"
    assert "w" in cls.witnesses["divergence"]


def test_vertex_witnesses():
    p1, p2, div = properly_infinite_vertex_witness(GRAPH_FIXTURES["rose2"](), "v")
    assert (p1, p2, div) == (["e1"], ["e2"], ("e1", "e2"))
    p1, p2, div = properly_infinite_vertex_witness(GRAPH_FIXTURES["figure_eight"](), "u")
    assert {tuple(p1), tuple(p2)} == {("p1", "p2"), ("q1", "q2")}
    assert set(div) == {"p1", "q1"}
    with pytest.raises(NotNonExclusive):
        properly_infinite_vertex_witness(GRAPH_FIXTURES["loop"](), "v")


@st.composite
def small_graphs(draw):
    n = draw(st.integers(1, 4))
    m = draw(st.integers(0, 6))
    edges = [(f"e{j}", draw(st.integers(0, n - 1)), draw(st.integers(0, n - 1))) for j in range(m)]
    return DirectedGraph(list(range(n)), edges)


@given(small_graphs(), st.randoms(use_true_random=False))
def test_verdict_is_isomorphism_invariant(E, rnd):
    vs = list(E.vertices)
    rnd.shuffle(vs)
    vmap = {v: f"v{vs.index(v)}" for v in E.vertices}
    ids = [e.id for e in E.edges]
    rnd.shuffle(ids)
    emap = {e.id: f"f{ids.index(e.id)}" for e in E.edges}
    a, b = classify(E), classify(E.relabel(vmap, emap))
    assert a.verdict == b.verdict
    assert sorted(a.reasons) == sorted(b.reasons)
    assert {vmap[v] for v in a.H} == set(b.H)


@given(small_graphs())
def test_basis_size_does_not_depend_on_designation(E):
    for d in range(3):
        assert len(lpa_backend(E, "highest").basis(d)) == len(lpa_backend(E, "lowest").basis(d))


# ---------------------------------------------------------------- arithmetic


def test_loop_graph_is_laurent():
    L = leavitt_algebra(GRAPH_FIXTURES["loop"]())
    e, es, v = parse_element(L, "e"), parse_element(L, "e*"), parse_element(L, "v")
    assert e * es == v == es * e
    assert (e * e * es).terms == e.terms


def test_parse_and_format():
    L = leavitt_algebra(GRAPH_FIXTURES["rose2"]())
    x = parse_element(L, "2 e1 e2 e2* + -1/2 v")
    assert x.terms[NormalMonomial((), (), 0)] == Fraction(-1, 2)
    assert adjoint(adjoint(x)) == x
    with pytest.raises(ValueError):
        parse_element(L, "q1")
    A = path_algebra(GRAPH_FIXTURES["example57"]())
    with pytest.raises(ValueError):
        parse_element(A, "x*")


def _random_monomial(be, rnd, d):
    return rnd.choice(be.basis(d))


@pytest.mark.parametrize("name", ["rose2", "example58", "figure_eight", "loop_to_rose"])
def test_grading_is_additive(name):
    # the Z-grading |λ| - |ρ| is respected and the length filtration is subadditive
    E = GRAPH_FIXTURES[name]()
    be = lpa_backend(E)
    rnd = random.Random(1)
    for _ in range(300):
        a, b = _random_monomial(be, rnd, 3), _random_monomial(be, rnd, 3)
        for m in be.multiply(a, b):
            assert len(m.lam) - len(m.rho) == (len(a.lam) - len(a.rho)) + (len(b.lam) - len(b.rho))
            assert be.degree(m) <= be.degree(a) + be.degree(b)


@pytest.mark.parametrize("name", ["rose2", "example58", "figure_eight"])
def test_products_associate(name):
    L = leavitt_algebra(GRAPH_FIXTURES[name]())
    keys = L.basis(2)
    rnd = random.Random(2)
    for _ in range(200):
        a, b, c = (L.basis_element(rnd.choice(keys)) for _ in range(3))
        assert (a * b) * c == a * (b * c)


def test_designations_give_same_products_up_to_rewriting():
    # both normal forms describe the same element: compare through the other's span
    E = GRAPH_FIXTURES["rose2"]()
    hi, lo = leavitt_algebra(E, QQ, "highest"), leavitt_algebra(E, QQ, "lowest")
    for text in ["e1 e1*", "e2 e2*", "e1* e1", "e1 e1* + e2 e2*"]:
        assert parse_element(hi, text).terms.keys() != set() and parse_element(lo, text).terms.keys() != set()
    assert parse_element(hi, "e1 e1* + e2 e2*") == parse_element(hi, "v")
    assert parse_element(lo, "e1 e1* + e2 e2*") == parse_element(lo, "v")


# ---------------------------------------------------------------- witnesses


@pytest.mark.parametrize("name", ["rose2", "figure_eight", "example57"])
@pytest.mark.parametrize("field", [QQ, GF2, GF7])
def test_quadruples(name, field):
    w = properly_infinite_quadruple(GRAPH_FIXTURES[name](), field)
    assert w.ok, w.check.failing


def test_quadruple_not_constructible_outside_a1():
    with pytest.raises(NotConstructibleHere):
        properly_infinite_quadruple(GRAPH_FIXTURES["loop"]())


def test_loop_witness():
    E = GRAPH_FIXTURES["loop"]()
    L = leavitt_algebra(E)
    F = [parse_element(L, "e"), parse_element(L, "e*")]
    N = 10
    wit = folner_witness(E, classify(E), F, Fraction(2, 2 * N + 1), N)
    assert wit.ok and wit.bound_dominates
    # the symmetric window checked directly
    W = span(L, [L.basis_element(NormalMonomial((0,) * k, (), 0)).terms for k in range(N + 1)]
             + [L.basis_element(NormalMonomial((), (0,) * k, 0)).terms for k in range(1, N + 1)])
    assert W.dim == 2 * N + 1
    assert is_folner_subspace(F, W, Fraction(2, 2 * N + 1))


def test_b3a_witness():
    E = DirectedGraph(["a", "b", "c", "d"], [("f", "a", "b")], infinite_vertices=True)
    L = leavitt_algebra(E)
    F = [parse_element(L, "a"), parse_element(L, "f")]
    wit = folner_witness(E, classify(E), F, Fraction(1, 10), 2)
    assert wit.case == "B3a" and wit.ratios == [1, 1]
    with pytest.raises(NotConstructibleHere):
        folner_witness(E, classify(E), F, Fraction(1, 10), 3)


def test_witness_errors():
    E = GRAPH_FIXTURES["example58"]()
    L = leavitt_algebra(E)
    with pytest.raises(InvalidEpsilon):
        folner_witness(E, classify(E), [parse_element(L, "t")], 0, 5)
    R = GRAPH_FIXTURES["rose2"]()
    with pytest.raises(NotConstructibleHere):
        folner_witness(R, classify(R), [parse_element(leavitt_algebra(R), "e1")], Fraction(1, 2), 5)


def test_fixture_checks():
    r57 = left_folner_fixture_check("example57", max_dim=6, right_degree=3, right_size=2)
    assert r57["left"]["ok"] and r57["right"]["ok"]
    assert r57["right"]["evidence"] == "heuristic-evidence"
    r58 = left_folner_fixture_check("example58", max_dim=6)
    assert r58["ok"]
    assert [w["ratio"] for w in r58["left"]["witnesses"]] == [Fraction(d + 1, d) for d in range(1, 7)]


def test_witness_when_no_second_simple_cycle():
    # a <-> b <-> c: a sits on one simple cycle but has two return paths
    E = DirectedGraph(["a", "b", "c"], [("x", "a", "b"), ("y", "b", "a"), ("z", "b", "c"), ("w", "c", "b")])
    p1, p2, div = properly_infinite_vertex_witness(E, "a")
    assert sorted([p1, p2]) == [["x", "y"], ["x", "z", "w", "y"]]
    assert div == ("y", "z")
    assert classify(E).verdict == "A1"
    assert properly_infinite_quadruple(E).ok
