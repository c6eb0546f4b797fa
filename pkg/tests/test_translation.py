from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from workbench import oracle
from workbench.errors import BudgetExhausted, CarrierEscape, InvalidEpsilon
from workbench.space import ball_window, free_group, grid
from workbench.translation import (
    HallViolation,
    LazyTranslation,
    ParadoxCertificate,
    PartialTranslation,
    compose,
    doubling_radius,
    forward_orbit_hat,
    free_group_decomposition,
    inverse,
    paradox_certificate,
    schroeder_bernstein,
    verify_paradoxical,
)


def shift(Z, lo, hi, k):
    return PartialTranslation({Z.point((n,)): Z.point((n + k,)) for n in range(lo, hi + 1)})


def test_compose_shifts_clips_domain():
    Z = grid(1)
    s = shift(Z, -5, 5, 1)
    two = compose(s, s)
    assert two == shift(Z, -5, 4, 2)
    assert two.displacement(Z) == 2


def test_compose_with_inverse():
    Z = grid(1)
    s = shift(Z, 0, 4, 1)
    assert compose(s, inverse(s)) == PartialTranslation.identity(s.ran)


def test_disjoint_composition_is_empty():
    t = PartialTranslation({1: 2})
    u = PartialTranslation({5: 6})
    assert len(compose(t, u)) == 0


def test_inverse_basics():
    Z = grid(1)
    s = shift(Z, 0, 4, 1)
    assert inverse(inverse(s)) == s
    ident = PartialTranslation.identity([1, 2, 3])
    assert inverse(ident) == ident
    assert inverse(s) == shift(Z, 1, 5, -1)
    assert inverse(s).displacement(Z) == s.displacement(Z)


def test_not_injective():
    with pytest.raises(ValueError):
        PartialTranslation({1: 3, 2: 3})


@given(st.dictionaries(st.integers(0, 20), st.integers(0, 20)), st.dictionaries(st.integers(0, 20), st.integers(0, 20)))
def test_composition_domain_and_displacement(a, b):
    a = {x: y for x, y in a.items() if list(a.values()).count(y) == 1}
    b = {x: y for x, y in b.items() if list(b.values()).count(y) == 1}
    t, u = PartialTranslation(a), PartialTranslation(b)
    tu = compose(t, u)
    assert tu.dom == {x for x in u.dom if u(x) in t.dom}

    def disp(p):  # the ids themselves, with the line metric
        return max((abs(x - y) for x, y in p.items()), default=0)

    assert disp(tu) <= disp(t) + disp(u)


@pytest.mark.parametrize(
    "eps,R0,expected",
    [(Fraction(1), 1, 2), (Fraction(1, 2), 1, 3), (Fraction(1, 4), 3, 15)],
)
def test_doubling_radius(eps, R0, expected):
    assert doubling_radius(R0, eps) == expected


@given(st.fractions(min_value=Fraction(1, 50), max_value=1), st.integers(1, 5))
def test_doubling_radius_is_least_power(eps, R0):
    n = doubling_radius(R0, eps) // R0
    assert (1 + eps) ** (n - 1) >= 2
    assert n == 1 or (1 + eps) ** (n - 2) < 2


@pytest.mark.parametrize("eps", [0, -1, 2])
def test_doubling_radius_rejects(eps):
    with pytest.raises(InvalidEpsilon):
        doubling_radius(1, eps)


def test_free_group_b3_certificate():
    F2 = free_group(2)
    w = ball_window(F2, F2.point(()), 3)
    assert len(w) == 53
    cert = paradox_certificate(w, 1)
    assert isinstance(cert, ParadoxCertificate)
    assert cert.is_valid()
    assert oracle.paradox_feasible(oracle.free_ball(2, 3), oracle.free_dist, 1, oracle.free_ball(2, 4))


def test_single_point_certificate_on_line():
    Z = grid(1)
    cert = paradox_certificate(ball_window(Z, Z.point((0,)), 0), 1)
    assert isinstance(cert, ParadoxCertificate)
    o = Z.point((0,))
    assert cert.t_plus(o) != cert.t_minus(o)
    assert {cert.t_plus(o), cert.t_minus(o)} <= Z.ball(o, 1)


@pytest.mark.parametrize("r", [2, 3, 4, 5])
def test_grid_windows_violate_hall(r):
    Z2 = grid(2)
    res = paradox_certificate(ball_window(Z2, Z2.point((0, 0)), r), 1)
    assert isinstance(res, HallViolation)
    n, k = res.recount()
    assert n < k
    assert not oracle.paradox_feasible(oracle.grid_ball(2, r), oracle.grid_dist, 1, oracle.grid_ball(2, r + 1))


def test_certificate_problems_detects_tampering():
    F2 = free_group(2)
    w = ball_window(F2, F2.point(()), 2)
    cert = paradox_certificate(w, 1)
    bad = ParadoxCertificate(w, 1, cert.t_plus, cert.t_plus)
    assert not bad.is_valid()
    assert bad.problems()


def test_sb_empty_tilde_keeps_input():
    # t'₊ and t'₋ already partition the carrier: nothing is left over
    tp = PartialTranslation({0: 0, 1: 2})
    tm = PartialTranslation({0: 1, 1: 3})
    carrier = [0, 1]
    dec = schroeder_bernstein(tp, tm)
    assert dec.x_hat == frozenset()
    assert dec.t_plus == tp and dec.t_minus == tm
    assert dec.x_plus | dec.x_minus == frozenset(carrier)


def test_sb_finite_orbits_match_forward_oracle():
    # carrier 0..7 and X̃ = {0}; the t'₊-orbit of 0 leaves the carrier after 4
    tp = PartialTranslation({0: 1, 1: 2, 2: 3, 3: 4, 4: 8, 5: 9, 6: 10, 7: 11})
    tm = PartialTranslation({0: 5, 1: 6, 2: 7, 3: 12, 4: 13, 5: 14, 6: 15, 7: 16})
    dec = schroeder_bernstein(tp, tm)
    assert dec.x_hat == forward_orbit_hat(tp, tm) == frozenset({0, 1, 2, 3, 4})
    assert dec.x_minus == frozenset({5, 6, 7})
    for x in dec.x_hat:
        assert dec.t_plus(x) == x


def test_sb_overlapping_ranges():
    with pytest.raises(ValueError):
        schroeder_bernstein(PartialTranslation({0: 1}), PartialTranslation({0: 1}))


def test_sb_carrier_escape():
    tp = PartialTranslation({0: 1, 1: 2})
    tm = LazyTranslation(lambda n: n + 10, lambda y: None, lambda n: n in (0, 1))
    tp_lazy = LazyTranslation(lambda n: n + 1, lambda n: n - 1, lambda n: n in (0, 1))
    with pytest.raises(CarrierEscape):
        schroeder_bernstein(tp_lazy, tm, points=[0, 1])
    with pytest.raises(CarrierEscape):
        schroeder_bernstein(tp, tm, points=[5])


def test_sb_budget():
    tp = LazyTranslation(lambda n: n + 1, lambda n: n - 1, lambda n: True)
    tm = LazyTranslation(lambda n: ("out", n), lambda y: None, lambda n: True)
    with pytest.raises(BudgetExhausted):
        schroeder_bernstein(tp, tm, points=[0], budget=100)


@given(st.integers(0, 1000))
def test_sb_on_seeded_certificates(seed):
    F2 = free_group(2)
    w = ball_window(F2, F2.point(()), 2)
    cert = paradox_certificate(w, 1, seed=seed)
    dec = schroeder_bernstein(cert.t_plus, cert.t_minus)
    assert verify_paradoxical(dec.x_plus, dec.x_minus, dec.t_plus, dec.t_minus, space=F2).ok
    assert dec.x_hat == forward_orbit_hat(cert.t_plus, cert.t_minus)


def test_first_letter_decomposition_on_b4():
    F2 = free_group(2)
    w = ball_window(F2, F2.point(()), 4)
    dec = free_group_decomposition(F2, w)
    v = verify_paradoxical(dec.x_plus, dec.x_minus, dec.t_plus, dec.t_minus, space=F2)
    assert v.ok
    assert v.checked == F2.ball(F2.point(()), 3)


def test_overlapping_partition_rejected():
    v = verify_paradoxical({1, 2}, {2, 3}, PartialTranslation(), PartialTranslation())
    assert not v.ok
    assert v.witness == 2


def test_verify_detects_wrong_part():
    tp = PartialTranslation({0: 1, 1: 0})
    tm = PartialTranslation({0: 1, 1: 0})
    v = verify_paradoxical({0}, {1}, tp, tm)
    assert not v.ok
    assert v.reason == "t+ leaves its part"


def test_verify_detects_missing_point():
    v = verify_paradoxical({0}, {1}, PartialTranslation({0: 0}), PartialTranslation({0: 1}))
    assert not v.ok
    assert v.reason == "t+ undefined"
