"""Partial translations and paradoxicality certificates on finite windows.

A window W is certified paradoxical at scale R by two partial translations
t₊, t₋ defined on all of W, with disjoint ranges and displacement <= R. Such
a pair is exactly a matching that saturates two tagged copies of W inside the
bipartite graph "(x, ±) -- y whenever d(x, y) <= R"; Hopcroft-Karp finds it,
and when it does not exist the alternating-reachability set from the
unmatched vertices is a Hall violator.
"""

from __future__ import annotations

import random

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping

from . import kernels
from .errors import BudgetExhausted, CarrierEscape, InvalidEpsilon
from .space import INF, MetricSpace, Window, neighborhood

PLUS, MINUS = "+", "-"
DEFAULT_BUDGET = 10**6


class PartialTranslation:
    """A finite partial injection x -> t(x)."""

    __slots__ = ("_map", "_inv")

    def __init__(self, mapping: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        fwd = dict(mapping)
        inv: dict[int, int] = {}
        for x, y in fwd.items():
            if y in inv:
                raise ValueError(f"not injective: {inv[y]} and {x} both map to {y}")
            inv[y] = x
        self._map = fwd
        self._inv = inv

    @classmethod
    def identity(cls, A: Iterable[int]) -> "PartialTranslation":
        return cls({x: x for x in A})

    @property
    def mapping(self) -> dict[int, int]:
        return dict(self._map)

    @property
    def dom(self) -> frozenset[int]:
        return frozenset(self._map)

    @property
    def ran(self) -> frozenset[int]:
        return frozenset(self._inv)

    def __call__(self, x: int) -> int:
        return self._map[x]

    def __len__(self):
        return len(self._map)

    def __eq__(self, other):
        return isinstance(other, PartialTranslation) and self._map == other._map

    def __hash__(self):
        return hash(frozenset(self._map.items()))

    def __repr__(self):
        return f"PartialTranslation({dict(sorted(self._map.items()))})"

    def items(self):
        return sorted(self._map.items())

    # protocol shared with LazyTranslation
    def image(self, x):
        return self._map.get(x)

    def preimage(self, y):
        return self._inv.get(y)

    def in_domain(self, x) -> bool:
        return x in self._map

    def displacement(self, space: MetricSpace):
        """max d(x, t(x)) over the domain; 0 for the empty translation."""
        best = 0
        for x, y in self._map.items():
            d = space.dist(x, y)
            if d > best:
                best = d
        return best

    def inverse(self) -> "PartialTranslation":
        return PartialTranslation(self._inv)

    def restrict(self, A: Iterable[int]) -> "PartialTranslation":
        A = set(A)
        return PartialTranslation({x: y for x, y in self._map.items() if x in A})


def compose(t: PartialTranslation, u: PartialTranslation) -> PartialTranslation:
    """t ∘ u, defined on {x in dom u : u(x) in dom t}."""
    return PartialTranslation({x: t._map[y] for x, y in u._map.items() if y in t._map})


def inverse(t: PartialTranslation) -> PartialTranslation:
    return t.inverse()


class LazyTranslation:
    """A partial translation given by functions, for carriers that are not finite.

    ``forward(x)`` and ``backward(y)`` return None outside the domain/range;
    ``carrier(x)`` says whether x belongs to the carrier.
    """

    def __init__(self, forward: Callable, backward: Callable, carrier: Callable[[Hashable], bool]):
        self._f, self._b, self._c = forward, backward, carrier

    def image(self, x):
        return self._f(x) if self._c(x) else None

    def preimage(self, y):
        return self._b(y)

    def in_domain(self, x) -> bool:
        return self._c(x)


def doubling_radius(R0, epsilon0) -> int | Fraction:
    """n·R0 with n = ⌈log_{1+ε₀} 2⌉ + 1, computed by exact powers."""
    eps = Fraction(epsilon0)
    if not 0 < eps <= 1:
        raise InvalidEpsilon(f"epsilon0 must lie in (0, 1], got {eps}")
    if R0 is INF or R0 <= 0:
        raise ValueError("R0 must be finite and positive")
    k, power = 0, Fraction(1)
    while power < 2:
        power *= 1 + eps
        k += 1
    n = k + 1
    R = n * Fraction(R0)
    return int(R) if R.denominator == 1 else R


# ---------------------------------------------------------------- matching


@dataclass(frozen=True)
class ParadoxCertificate:
    window: Window
    R: object
    t_plus: PartialTranslation
    t_minus: PartialTranslation

    def problems(self) -> list[str]:
        """Independent re-check of the certificate invariants; empty when valid."""
        out = []
        space = self.window.ambient
        for name, t in (("t_plus", self.t_plus), ("t_minus", self.t_minus)):
            if t.dom != self.window.members:
                out.append(f"{name} is not defined on the whole window")
            if t.displacement(space) > self.R:
                out.append(f"{name} moves a point farther than R")
        clash = self.t_plus.ran & self.t_minus.ran
        if clash:
            out.append(f"ranges overlap at {min(clash)}")
        return out

    def is_valid(self) -> bool:
        return not self.problems()


@dataclass(frozen=True)
class HallViolation:
    window: Window
    R: object
    K: frozenset[tuple[int, str]]
    neighborhood: frozenset[int]

    @property
    def neighborhood_size(self) -> int:
        return len(self.neighborhood)

    def recount(self) -> tuple[int, int]:
        """(|⋃ B_R(x)| over K, |K|), recomputed from the ambient balls."""
        union: set[int] = set()
        for x, _ in self.K:
            union |= self.window.ambient.ball(x, self.R)
        return len(union), len(self.K)


def paradox_certificate(window: Window, R, seed: int | None = None) -> ParadoxCertificate | HallViolation:
    """Two disjoint injections window -> N⁺_R(window), or a Hall violator.

    ``seed`` shuffles the candidate order, giving a different (equally valid)
    matching when one exists.
    """
    space = window.ambient
    rng = random.Random(seed) if seed is not None else None
    pts = sorted(window.members)
    targets = sorted(neighborhood(space, pts, R))
    tindex = {y: i for i, y in enumerate(targets)}
    indptr, indices = [0], []
    balls = []
    for x in pts:
        nb = sorted(tindex[y] for y in space.ball(x, R))
        if rng:
            rng.shuffle(nb)
        balls.append(nb)
        for _ in (PLUS, MINUS):
            indices.extend(nb)
            indptr.append(len(indices))
    n_left = 2 * len(pts)
    ml, mr = kernels.hopcroft_karp(indptr, indices, n_left, len(targets))
    if all(m >= 0 for m in ml):
        tp = PartialTranslation({x: targets[ml[2 * i]] for i, x in enumerate(pts)})
        tm = PartialTranslation({x: targets[ml[2 * i + 1]] for i, x in enumerate(pts)})
        return ParadoxCertificate(window, R, tp, tm)
    # König: alternate from the unmatched left vertices
    seen_l = {u for u in range(n_left) if ml[u] < 0}
    seen_r: set[int] = set()
    stack = list(seen_l)
    while stack:
        u = stack.pop()
        for v in balls[u // 2]:
            if v not in seen_r:
                seen_r.add(v)
                w = mr[v]
                if w >= 0 and w not in seen_l:
                    seen_l.add(w)
                    stack.append(w)
    K = frozenset((pts[u // 2], PLUS if u % 2 == 0 else MINUS) for u in seen_l)
    return HallViolation(window, R, K, frozenset(targets[v] for v in seen_r))


# ---------------------------------------------------------------- decompositions


@dataclass
class ParadoxicalDecomposition:
    x_plus: frozenset[int]
    x_minus: frozenset[int]
    t_plus: PartialTranslation
    t_minus: PartialTranslation
    x_hat: frozenset[int] = frozenset()

    @property
    def carrier(self) -> frozenset[int]:
        return self.x_plus | self.x_minus


def schroeder_bernstein(t_plus, t_minus, points: Iterable[int] | None = None, budget: int = DEFAULT_BUDGET) -> ParadoxicalDecomposition:
    """Turn translations with disjoint ranges into a genuine partition.

    With X̃ = X minus both ranges and X̂ the forward t'₊-orbit of X̃, the
    result is X₊ = X'₊ ∪ X̃, X₋ = X'₋, t₊ = t'₊ off X̂ and the identity on
    X̂, t₋ = t'₋. A point lies in X̂ exactly when its backward t'₊-orbit
    reaches X̃; that orbit is followed for every requested point, and the
    budget bounds the total number of backward steps.
    """
    if points is None:
        if not isinstance(t_plus, PartialTranslation):
            raise ValueError("lazy translations need an explicit point set")
        if t_plus.dom != t_minus.dom:
            raise ValueError("t_plus and t_minus must share their domain")
        points = t_plus.dom
    points = sorted(set(points))
    if isinstance(t_plus, PartialTranslation) and isinstance(t_minus, PartialTranslation):
        clash = t_plus.ran & t_minus.ran
        if clash:
            raise ValueError(f"ranges overlap at {min(clash)}")
    in_hat: dict = {}
    steps = 0
    for y in points:
        if not t_plus.in_domain(y):
            raise CarrierEscape(f"point {y} is outside the carrier")
        chain = [y]
        on_chain = {y}
        z = y
        while True:
            if z in in_hat:
                verdict = in_hat[z]
                break
            pre = t_plus.preimage(z)
            if pre is None:
                # z starts its orbit: in X̃ unless it lies in the range of t'₋
                verdict = t_minus.preimage(z) is None
                break
            if not t_plus.in_domain(pre):
                raise CarrierEscape(f"backward orbit of {y} leaves the carrier at {pre}")
            steps += 1
            if steps > budget:
                raise BudgetExhausted(f"backward orbits exceeded {budget} steps")
            if pre in on_chain:
                verdict = False  # a cycle never meets X̃
                break
            chain.append(pre)
            on_chain.add(pre)
            z = pre
        for c in chain:
            in_hat[c] = verdict
    x_hat = frozenset(y for y in points if in_hat[y])
    x_minus = frozenset(y for y in points if t_minus.preimage(y) is not None)
    x_plus = frozenset(points) - x_minus
    tp = {}
    tm = {}
    for y in points:
        tp[y] = y if y in x_hat else t_plus.image(y)
        tm[y] = t_minus.image(y)
    return ParadoxicalDecomposition(x_plus, x_minus, PartialTranslation(tp), PartialTranslation(tm), x_hat)


def forward_orbit_hat(t_plus: PartialTranslation, t_minus: PartialTranslation) -> frozenset[int]:
    """X̂ by forward iteration from X̃ (orbits stop when they leave the carrier)."""
    carrier = t_plus.dom
    tilde = carrier - t_plus.ran - t_minus.ran
    hat: set[int] = set()
    for x in tilde:
        z = x
        while z in carrier and z not in hat:
            hat.add(z)
            z = t_plus(z)
    return frozenset(hat)


@dataclass
class Verification:
    ok: bool
    reason: str = ""
    witness: object = None
    margin: object = 0
    checked: frozenset[int] = field(default_factory=frozenset)

    def __bool__(self):
        return self.ok


def verify_paradoxical(
    x_plus: Iterable[int],
    x_minus: Iterable[int],
    t_plus: PartialTranslation,
    t_minus: PartialTranslation,
    space: MetricSpace | None = None,
    inner: Iterable[int] | None = None,
) -> Verification:
    """Check a paradoxical decomposition of the carrier X₊ ⊔ X₋.

    When the carrier is a window of a larger space, pass ``space``: the
    relations are then checked on the inner window N⁻_m(carrier), where m is
    the largest displacement. ``inner`` overrides that set.
    """
    xp, xm = frozenset(x_plus), frozenset(x_minus)
    both = xp & xm
    if both:
        return Verification(False, "X+ and X- overlap", min(both))
    carrier = xp | xm
    margin = 0
    if inner is not None:
        inner = frozenset(inner)
    elif space is not None and not (space.is_finite and carrier == frozenset(space.points())):
        margin = max(t_plus.displacement(space), t_minus.displacement(space))
        inner = Window(space, carrier).inner(margin)
    else:
        inner = carrier
    for t, part, name in ((t_plus, xp, "t+"), (t_minus, xm, "t-")):
        images = {}
        for x in sorted(inner):
            y = t.image(x)
            if y is None:
                return Verification(False, f"{name} undefined", x, margin, inner)
            if y not in part:
                return Verification(False, f"{name} leaves its part", x, margin, inner)
            if y in images:
                return Verification(False, f"{name} not injective", x, margin, inner)
            images[y] = x
    return Verification(True, "", None, margin, inner)


def free_group_decomposition(space: MetricSpace, window: Window) -> ParadoxicalDecomposition:
    """First-letter decomposition of the free group of rank >= 2 (letters 1 = a, 2 = b).

    X₊ = words starting with a^±1 and X₋ = the rest. t₊ fixes words starting
    with a and prepends a⁻¹ to every other word; t₋ prepends b⁻¹ to words not
    starting with b and to the powers b^k (shifting them down to e), fixing
    the remaining words that start with b. Both are bijections onto their
    parts and move points by at most 1.
    """
    from .space import reduce_word

    def tp(w):
        return w if w[:1] == (1,) else reduce_word((-1,) + w)

    def tm(w):
        if w[:1] != (2,) or all(s == 2 for s in w):
            return reduce_word((-2,) + w)
        return w

    xp, xm, mp, mm = set(), set(), {}, {}
    for x in window:
        w = space.label(x)
        (xp if w[:1] in ((1,), (-1,)) else xm).add(x)
        mp[x] = space.point(tp(w))
        mm[x] = space.point(tm(w))
    return ParadoxicalDecomposition(frozenset(xp), frozenset(xm), PartialTranslation(mp), PartialTranslation(mm))
