"""Finite-support matrices over a window: the translation-algebra side of the bridge."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import MarginTooSmall, OutOfWindow, WindowTooSmall
from .folner import folner_ratio
from .linalg import QQ, CoordinateSpace, Field, Subspace, rank
from .space import (
    INF,
    Window,
    coarse_components,
    inner_boundary,
    neighborhood,
    outer_boundary,
)
from .translation import PartialTranslation


class FiniteSupportMatrix:
    """Sparse matrix indexed by window points: entries[(x, y)] is T_xy."""

    __slots__ = ("window", "entries", "field")

    def __init__(self, window: Window, entries: dict | None = None, field: Field = QQ):
        self.window = window
        self.field = field
        clean = {}
        for (x, y), a in (entries or {}).items():
            if x not in window or y not in window:
                raise OutOfWindow(f"entry ({x}, {y}) outside the window")
            a = field(a)
            if a:
                clean[(x, y)] = a
        self.entries = clean

    @classmethod
    def _raw(cls, window, entries, field):
        M = cls.__new__(cls)
        M.window, M.entries, M.field = window, entries, field
        return M

    def _same(self, other: "FiniteSupportMatrix"):
        if other.window.members != self.window.members or other.field != self.field:
            raise ValueError("matrices live on different windows or fields")

    def __add__(self, other):
        self._same(other)
        out = dict(self.entries)
        f = self.field
        for k, a in other.entries.items():
            v = f.add(out.get(k, f.zero), a)
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return self._raw(self.window, out, f)

    def __neg__(self):
        return self._raw(self.window, {k: self.field.neg(a) for k, a in self.entries.items()}, self.field)

    def __sub__(self, other):
        return self + (-other)

    def __matmul__(self, other):
        self._same(other)
        f = self.field
        rows: dict = {}
        for (y, z), b in other.entries.items():
            rows.setdefault(y, []).append((z, b))
        out: dict = {}
        for (x, y), a in self.entries.items():
            for z, b in rows.get(y, ()):
                k = (x, z)
                v = f.add(out.get(k, f.zero), f.mul(a, b))
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
        return self._raw(self.window, out, f)

    __mul__ = __matmul__

    def transpose(self):
        return self._raw(self.window, {(y, x): a for (x, y), a in self.entries.items()}, self.field)

    def compress(self, rows: Iterable[int], cols: Iterable[int] | None = None):
        """P_rows · T · P_cols."""
        rows = frozenset(rows)
        cols = rows if cols is None else frozenset(cols)
        return self._raw(
            self.window, {k: a for k, a in self.entries.items() if k[0] in rows and k[1] in cols}, self.field
        )

    def column(self, y: int) -> dict:
        return {x: a for (x, yy), a in self.entries.items() if yy == y}

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other):
        return (
            isinstance(other, FiniteSupportMatrix)
            and other.window.members == self.window.members
            and self.entries == other.entries
        )

    def __repr__(self):
        return f"FiniteSupportMatrix({len(self.entries)} entries on {len(self.window)} points)"


def propagation(T: FiniteSupportMatrix):
    """Largest distance between the row and column of a nonzero entry; None for 0."""
    if not T.entries:
        return None
    space = T.window.ambient
    return max(space.dist(x, y) for x, y in T.entries)


def from_partial_translation(window: Window, t: PartialTranslation, field: Field = QQ) -> FiniteSupportMatrix:
    """V_t: δ_x ↦ δ_{t(x)} on dom t, zero elsewhere."""
    for x, y in t.items():
        if x not in window or y not in window:
            raise OutOfWindow(f"translation moves {x} -> {y} outside the window")
    return FiniteSupportMatrix._raw(window, {(y, x): field.one for x, y in t.items()}, field)


def projector(window: Window, A: Iterable[int], field: Field = QQ) -> FiniteSupportMatrix:
    A = list(A)
    for x in A:
        if x not in window:
            raise OutOfWindow(f"{x} is outside the window")
    return FiniteSupportMatrix._raw(window, {(x, x): field.one for x in A}, field)


def identity(window: Window, field: Field = QQ) -> FiniteSupportMatrix:
    return projector(window, window.members, field)


@dataclass
class CommutatorResult:
    ok: bool
    residual: FiniteSupportMatrix
    propagation: object

    def __bool__(self):
        return self.ok


def commutator_check(T: FiniteSupportMatrix, F: Iterable[int], R) -> CommutatorResult:
    """Check [T, P_F] = P_{∂⁺F} T P_{∂⁻F} − P_{∂⁻F} T P_{∂⁺F} with R-boundaries.

    The window must contain N⁺_R(F); otherwise the boundary projections would
    be truncated and MarginTooSmall is raised. A tester whose propagation
    exceeds R is not rejected: the identity can then fail, and the nonzero
    residual is returned.
    """
    W = T.window
    space = W.ambient
    F = frozenset(F)
    if not neighborhood(space, F, R) <= W.members:
        raise MarginTooSmall("the window does not contain the R-neighbourhood of F")
    bp, bm = outer_boundary(space, F, R), inner_boundary(space, F, R)
    PF = projector(W, F, T.field)
    lhs = T @ PF - PF @ T
    rhs = T.compress(bp, bm) - T.compress(bm, bp)
    res = lhs - rhs
    return CommutatorResult(res.is_zero(), res, propagation(T))


@dataclass
class TranslationFolnerCertificate:
    F: frozenset
    R: object
    dim: int
    ratios: list
    bound: Fraction
    method: str

    @property
    def ok(self) -> bool:
        return all(r <= self.bound for r in self.ratios)


def _ratio_support(T: FiniteSupportMatrix, F: frozenset) -> Fraction:
    # dim(TW + W) = |F| * (|F| + rank(P_{X∖F} T P_F))
    amb = CoordinateSpace(T.field)
    cols: dict = {a: {} for a in F}
    for (x, a), v in T.entries.items():
        if a in F and x not in F:
            cols[a][x] = v
    r = rank(amb, [c for c in cols.values() if c])
    n = len(F)
    return Fraction(n * (n + r), n * n)


def _ratio_echelon(T: FiniteSupportMatrix, F: frozenset) -> Fraction:
    amb = CoordinateSpace(T.field)
    f = T.field
    vecs = []
    Fs = sorted(F)
    for a in Fs:
        for b in Fs:
            vecs.append({(a, b): f.one})
            col = {(x, b): v for (x, aa), v in T.entries.items() if aa == a}
            if col:
                vecs.append(col)
    total = Subspace.span(amb, vecs).dim
    return Fraction(total, len(Fs) ** 2)


def folner_subspace_from_set(
    window: Window,
    F: Iterable[int],
    testers: Sequence[FiniteSupportMatrix],
    R,
    method: str = "support",
) -> TranslationFolnerCertificate:
    """W = matrices supported on F×F; ratio dim(TW+W)/dim W for each tester.

    ``method`` is "support" (row-support counting) or "echelon" (a general
    elimination over the |F|² matrix units, for cross-checks).
    """
    space = window.ambient
    F = frozenset(F)
    if not F:
        raise ValueError("F must be nonempty")
    if not neighborhood(space, F, R) <= window.members:
        raise WindowTooSmall("the window must contain the R-neighbourhood of F")
    for T in testers:
        p = propagation(T)
        if p is not None and p > R:
            raise ValueError(f"tester propagation {p} exceeds R = {R}")
    fn = _ratio_support if method == "support" else _ratio_echelon
    ratios = [fn(T, F) for T in testers]
    bound = 1 + folner_ratio(space, F, R)
    return TranslationFolnerCertificate(F, R, len(F) ** 2, ratios, bound, method)


@dataclass
class LeavittReport:
    ok: bool
    failing: list = field(default_factory=list)
    margin: object = 0
    inner: frozenset = frozenset()
    reason: str = ""

    def __bool__(self):
        return self.ok


def leavitt_relations_from_paradox(decomposition, window: Window, field: Field = QQ) -> LeavittReport:
    """Check the L(1,2) relations for x_± = V_{t±}, y_± = V_{t±⁻¹} on the inner window.

    Relations: y_i x_j = δ_ij·1 and x₊y₊ + x₋y₋ = 1, each compressed by the
    projection onto the points at distance >= 2m from the window's outside,
    where m is the largest displacement.
    """
    space = window.ambient
    tp, tm = decomposition.t_plus, decomposition.t_minus
    clash = tp.ran & tm.ran
    if clash:
        return LeavittReport(False, [], 0, frozenset(), f"ranges overlap at {min(clash)}")
    m = max(tp.displacement(space), tm.displacement(space))
    if m == INF:
        return LeavittReport(False, [], m, frozenset(), "unbounded displacement")
    inner = window.inner(2 * m)
    if not inner:
        raise MarginTooSmall(f"no point of the window has margin {2 * m}")

    def restrict(t):
        return PartialTranslation({x: y for x, y in t.items() if x in window and y in window})

    xp = from_partial_translation(window, restrict(tp), field)
    xm = from_partial_translation(window, restrict(tm), field)
    yp, ym = xp.transpose(), xm.transpose()
    one = identity(window, field)
    zero = FiniteSupportMatrix(window, {}, field)
    relations = {
        "y+ x+ = 1": (yp @ xp, one),
        "y- x- = 1": (ym @ xm, one),
        "y+ x- = 0": (yp @ xm, zero),
        "y- x+ = 0": (ym @ xp, zero),
        "x+ y+ + x- y- = 1": (xp @ yp + xm @ ym, one),
    }
    failing = [name for name, (lhs, rhs) in relations.items() if lhs.compress(inner) != rhs.compress(inner)]
    return LeavittReport(not failing, failing, 2 * m, inner)


@dataclass
class SplitReport:
    blocks: list
    ok: bool
    checked: int


def _random_translation(window: Window, comp_of: dict, radius: int, rng: random.Random) -> PartialTranslation:
    space = window.ambient
    pts = sorted(window)
    rng.shuffle(pts)
    used: set = set()
    mapping = {}
    for x in pts:
        if rng.random() < 0.3:
            continue
        near = sorted(y for y in space.ball(x, radius) if y in window and y not in used)
        if near:
            y = rng.choice(near)
            used.add(y)
            mapping[x] = y
    return PartialTranslation(mapping)


def direct_sum_split(window: Window, samples: int = 20, radius: int = 2, seed: int = 0, field: Field = QQ) -> SplitReport:
    """Split the window by coarse components and check sampled generators are block diagonal."""
    blocks = coarse_components(window)
    comp_of = {x: i for i, blk in enumerate(blocks) for x in blk}
    rng = random.Random(seed)
    projs = [projector(window, blk, field) for blk in blocks]
    ok = True
    checked = 0
    for _ in range(samples):
        t = _random_translation(window, comp_of, radius, rng)
        A = [x for x in sorted(window) if rng.random() < 0.5]
        for T in (from_partial_translation(window, t, field), projector(window, A, field)):
            for i, Pi in enumerate(projs):
                for j, Pj in enumerate(projs):
                    if i != j:
                        checked += 1
                        if not (Pi @ T @ Pj).is_zero():
                            ok = False
    return SplitReport(blocks, ok, checked)


@dataclass
class DimFloor:
    ok: bool
    dim: int
    F: frozenset


def folner_dim_floor(F: Iterable[int], N: int) -> DimFloor:
    """The matrix subspace on F×F has dimension |F|²; check it reaches N."""
    F = frozenset(F)
    return DimFloor(len(F) ** 2 >= N, len(F) ** 2, F)
