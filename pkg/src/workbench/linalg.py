"""Exact linear algebra over GF(p) and Q, and the Følner-subspace calculus.

Vectors are sparse dicts ``basis key -> scalar``. A :class:`Subspace` keeps a
reduced row echelon basis whose pivot is the smallest key of each row under
the ambient ordering, so equal subspaces have identical bases.

Algebras come from an :class:`AlgebraBackend` (basis, integer structure
constants, optional unit) paired with a :class:`Field`.
"""

from __future__ import annotations

import bisect
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Sequence

from . import kernels
from .errors import (
    BackendMismatch,
    FieldMismatch,
    MarginTooSmall,
    NonUnitalBackend,
    NotAnIdeal,
    SizeCap,
    ZeroSubspace,
)

DEFAULT_AMPLIFY_CAP = 10**5


# ---------------------------------------------------------------- fields


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    for d in range(2, math.isqrt(p) + 1):
        if p % d == 0:
            return False
    return True


class Field:
    """GF(p) for a prime p, or the rationals when p is None.

    Rationals with denominator 1 are kept as plain ints, which mix exactly
    with Fraction and avoid its overhead in the common 0/±1 case.
    """

    def __init__(self, p: int | None = None):
        if p is not None and not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.zero = 0
        self.one = 1

    @property
    def name(self) -> str:
        return f"GF({self.p})" if self.p else "Q"

    def __repr__(self):
        return f"Field({self.name})"

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __call__(self, value) -> int | Fraction:
        if type(value) is int:
            return value % self.p if self.p else value
        if self.p:
            if isinstance(value, Fraction):
                den = value.denominator % self.p
                if den == 0:
                    raise ZeroDivisionError(f"{value} has no image in {self.name}")
                return value.numerator * pow(den, -1, self.p) % self.p
            return int(value) % self.p
        q = Fraction(value)
        return q.numerator if q.denominator == 1 else q

    def inv(self, a):
        if self.p:
            return pow(a, -1, self.p)
        if a == 1 or a == -1:
            return int(a)
        return 1 / Fraction(a)

    def add(self, a, b):
        return (a + b) % self.p if self.p else a + b

    def mul(self, a, b):
        return a * b % self.p if self.p else a * b

    def neg(self, a):
        return -a % self.p if self.p else -a


QQ = Field(None)
GF2 = Field(2)
GF7 = Field(7)


def field_from_name(name: str) -> Field:
    name = name.lower()
    if name in ("rational", "q", "rationals"):
        return QQ
    if name.startswith("gf"):
        return Field(int(name[2:].strip("()")))
    raise ValueError(f"unknown field {name!r}")


# ---------------------------------------------------------------- vectors


def _axpy(field: Field, y: dict, a, x: dict) -> None:
    """y += a*x in place, dropping zeros."""
    p = field.p
    for k, v in x.items():
        w = y.get(k)
        if a == 1:
            nv = v if w is None else w + v
        elif a == -1:
            nv = -v if w is None else w - v
        else:
            nv = v * a if w is None else w + v * a
        if p:
            nv %= p
        if nv:
            y[k] = nv
        elif w is not None:
            del y[k]


class CoordinateSpace:
    """Ambient vector space with an ordered basis; ``key`` orders the basis."""

    def __init__(self, field: Field, key: Callable[[Hashable], object] | None = None, name: str = "coords"):
        self.field = field
        self._key = key or (lambda k: k)
        self.name = name

    def sort_key(self, k):
        return self._key(k)

    def vector(self, data: dict) -> dict:
        f = self.field
        out = {}
        for k, v in data.items():
            v = f(v)
            if v:
                out[k] = v
        return out


class Subspace:
    """A subspace held in reduced row echelon form."""

    __slots__ = ("ambient", "rows", "_pivots", "_order")

    def __init__(self, ambient: CoordinateSpace):
        self.ambient = ambient
        self.rows: list[dict] = []
        self._pivots: dict = {}  # pivot key -> row
        self._order: list = []  # sort keys of the pivots, parallel to rows

    # construction -------------------------------------------------------
    @classmethod
    def span(cls, ambient: CoordinateSpace, vectors: Iterable) -> "Subspace":
        vecs = [_coerce(ambient, v) for v in vectors]
        W = cls(ambient)
        f = ambient.field
        if f.p and f.p < kernels.GFP_LIMIT and len(vecs) >= 32:
            cols = sorted({k for v in vecs for k in v}, key=ambient.sort_key)
            if cols and len(cols) * len(vecs) <= 4_000_000:
                W._load_dense(vecs, cols)
                return W
        for v in vecs:
            W._insert(v)
        return W

    def _load_dense(self, vecs, cols):
        pos = {k: i for i, k in enumerate(cols)}
        dense = []
        for v in vecs:
            row = [0] * len(cols)
            for k, a in v.items():
                row[pos[k]] = a
            dense.append(row)
        red, pivots = kernels.gfp_rref(dense, self.ambient.field.p)
        for row, pc in zip(red, pivots):
            vec = {cols[j]: a for j, a in enumerate(row) if a}
            self.rows.append(vec)
            self._pivots[cols[pc]] = vec
            self._order.append(self.ambient.sort_key(cols[pc]))

    def copy(self) -> "Subspace":
        W = Subspace(self.ambient)
        W.rows = [dict(r) for r in self.rows]
        W._pivots = {self.pivot_of(r): r for r in W.rows}
        W._order = list(self._order)
        return W

    def pivot_of(self, row: dict):
        return min(row, key=self.ambient.sort_key)

    def reduce(self, v: dict) -> dict:
        """Remainder of v modulo the subspace (a normal form)."""
        v = dict(v)
        f = self.ambient.field
        for k in [k for k in v if k in self._pivots]:
            a = v.get(k)
            if a:
                _axpy(f, v, f.neg(a), self._pivots[k])
        return v

    def _insert(self, v: dict) -> bool:
        v = self.reduce(v)
        if not v:
            return False
        f = self.ambient.field
        q = self.pivot_of(v)
        inv = f.inv(v[q])
        if inv != f.one:
            for k in v:
                v[k] = f.mul(v[k], inv)
        for row in self.rows:
            a = row.get(q)
            if a:
                _axpy(f, row, f.neg(a), v)
        sk = self.ambient.sort_key(q)
        i = bisect.bisect(self._order, sk)
        self._order.insert(i, sk)
        self.rows.insert(i, v)
        self._pivots[q] = v
        return True

    # queries ------------------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self.rows)

    def __len__(self):
        return len(self.rows)

    def __contains__(self, v) -> bool:
        return not self.reduce(_coerce(self.ambient, v))

    def basis(self) -> list[dict]:
        return [dict(r) for r in self.rows]

    def canonical(self) -> tuple:
        return tuple(tuple(sorted(r.items(), key=lambda kv: self.ambient.sort_key(kv[0]))) for r in self.rows)

    def __eq__(self, other):
        return isinstance(other, Subspace) and self.ambient is other.ambient and self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())

    def __repr__(self):
        return f"Subspace(dim={self.dim}, over {self.ambient.field.name})"


def _coerce(ambient: CoordinateSpace, v) -> dict:
    if isinstance(v, Element):
        if v.algebra is not ambient:
            _check_same(v.algebra, ambient)
        return dict(v.terms)
    return ambient.vector(v)


def _check_same(a: CoordinateSpace, b: CoordinateSpace) -> None:
    if a.field != b.field:
        raise FieldMismatch(f"{a.field.name} vs {b.field.name}")
    if a is not b:
        raise BackendMismatch(f"{a.name} vs {b.name}")


def span(ambient: CoordinateSpace, vectors: Iterable) -> Subspace:
    return Subspace.span(ambient, vectors)


def subspace_sum(U: Subspace, V: Subspace) -> Subspace:
    _check_same(U.ambient, V.ambient)
    W = U.copy()
    for r in V.rows:
        W._insert(r)
    return W


def dim(U: Subspace) -> int:
    return U.dim


def intersect_dim(U: Subspace, V: Subspace) -> int:
    return U.dim + V.dim - subspace_sum(U, V).dim


def rank(ambient: CoordinateSpace, vectors: Iterable) -> int:
    return Subspace.span(ambient, vectors).dim


def null_combinations(ambient: CoordinateSpace, vectors: Sequence[dict]) -> list[dict[int, object]]:
    """Basis of {c : Σ c_i v_i = 0}, as dicts index -> coefficient."""
    # augment each vector with a tag coordinate; tags sort after every real key
    aug = CoordinateSpace(
        ambient.field,
        key=lambda k: (1, k[1]) if isinstance(k, tuple) and k and k[0] == "__tag__" else (0, ambient.sort_key(k)),
        name="augmented",
    )
    rows = []
    for i, v in enumerate(vectors):
        r = dict(_coerce(ambient, v))
        r[("__tag__", i)] = ambient.field.one
        rows.append(r)
    S = Subspace(aug)
    for r in rows:
        S._insert(r)
    out = []
    for r in S.rows:
        if all(isinstance(k, tuple) and k and k[0] == "__tag__" for k in r):
            out.append({k[1]: a for k, a in r.items()})
    return out


# ---------------------------------------------------------------- algebras


class AlgebraBackend:
    """Basis keys, integer structure constants and an optional unit."""

    name = "backend"

    def multiply(self, i, j) -> dict:
        raise NotImplementedError

    def sort_key(self, i):
        return i

    def degree(self, i) -> int:
        return 0

    def unit(self) -> dict | None:
        return None

    def basis(self, max_degree: int) -> list:
        raise NotImplementedError

    def format(self, i) -> str:
        return str(i)


class LaurentBackend(AlgebraBackend):
    """K[x, x⁻¹]; the key k stands for x^k."""

    name = "laurent"

    def multiply(self, i, j):
        return {i + j: 1}

    def sort_key(self, i):
        return (abs(i), i)

    def degree(self, i):
        return abs(i)

    def unit(self):
        return {0: 1}

    def basis(self, max_degree):
        return sorted(range(-max_degree, max_degree + 1), key=self.sort_key)

    def format(self, i):
        return "1" if i == 0 else f"x^{i}"


class MatrixBackend(AlgebraBackend):
    """M_n(K) with matrix units E_ij, all of degree 1 (the unit has degree 0)."""

    def __init__(self, n: int):
        self.n = n
        self.name = f"matrix{n}"

    def multiply(self, a, b):
        (i, j), (k, l) = a, b
        return {(i, l): 1} if j == k else {}

    def sort_key(self, a):
        return a

    def degree(self, a):
        return 1

    def unit(self):
        return {(i, i): 1 for i in range(self.n)}

    def basis(self, max_degree):
        if max_degree < 1:
            return []
        return [(i, j) for i in range(self.n) for j in range(self.n)]

    def format(self, a):
        return f"E{a[0] + 1}{a[1] + 1}"


class ScalarBackend(AlgebraBackend):
    """The field itself, one-dimensional with basis {1}."""

    name = "K"

    def multiply(self, a, b):
        return {0: 1}

    def unit(self):
        return {0: 1}

    def basis(self, max_degree):
        return [0]

    def format(self, a):
        return "1"


class DirectSumBackend(AlgebraBackend):
    """A ⊕ B with keys (0, a) and (1, b)."""

    def __init__(self, first: AlgebraBackend, second: AlgebraBackend):
        self.parts = (first, second)
        self.name = f"{first.name}+{second.name}"

    def multiply(self, a, b):
        if a[0] != b[0]:
            return {}
        return {(a[0], k): c for k, c in self.parts[a[0]].multiply(a[1], b[1]).items()}

    def sort_key(self, a):
        return (a[0], self.parts[a[0]].sort_key(a[1]))

    def degree(self, a):
        return self.parts[a[0]].degree(a[1])

    def unit(self):
        u0, u1 = self.parts[0].unit(), self.parts[1].unit()
        if u0 is None or u1 is None:
            return None
        out = {(0, k): c for k, c in u0.items()}
        out.update({(1, k): c for k, c in u1.items()})
        return out

    def basis(self, max_degree):
        return [(i, k) for i, p in enumerate(self.parts) for k in p.basis(max_degree)]

    def format(self, a):
        return f"({'0, ' if a[0] else ''}{self.parts[a[0]].format(a[1])}{'' if a[0] else ', 0'})"


class Algebra(CoordinateSpace):
    """An algebra backend over a field, with cached basis products."""

    def __init__(self, backend: AlgebraBackend, field: Field = QQ):
        super().__init__(field, backend.sort_key, backend.name)
        self.backend = backend
        self._cache: dict = {}

    def product_of(self, i, j) -> dict:
        key = (i, j)
        out = self._cache.get(key)
        if out is None:
            out = self.vector(self.backend.multiply(i, j))
            self._cache[key] = out
        return out

    def mul_terms(self, a: dict, b: dict) -> dict:
        f = self.field
        out: dict = {}
        for i, x in a.items():
            for j, y in b.items():
                pr = self.product_of(i, j)
                if pr:
                    _axpy(f, out, f.mul(x, y), pr)
        return out

    def element(self, data=None) -> "Element":
        return Element(self, self.vector(dict(data or {})))

    def basis_element(self, key) -> "Element":
        return Element(self, {key: self.field.one})

    @property
    def is_unital(self) -> bool:
        return self.backend.unit() is not None

    @property
    def one(self) -> "Element":
        u = self.backend.unit()
        if u is None:
            raise NonUnitalBackend(f"{self.backend.name} has no unit")
        return self.element(u)

    @property
    def zero(self) -> "Element":
        return Element(self, {})

    def basis(self, max_degree: int) -> list:
        return self.backend.basis(max_degree)

    def degree_of(self, a: "Element") -> int:
        return max((self.backend.degree(k) for k in a.terms), default=0)


class Element:
    """An algebra element: sparse coefficients over basis keys."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: Algebra, terms: dict):
        self.algebra = algebra
        self.terms = terms

    def _other(self, other) -> dict:
        if isinstance(other, Element):
            _check_same(self.algebra, other.algebra)
            return other.terms
        return {k: self.algebra.field.mul(self.algebra.field(other), c) for k, c in self.algebra.one.terms.items()}

    def __add__(self, other):
        out = dict(self.terms)
        _axpy(self.algebra.field, out, self.algebra.field.one, self._other(other))
        return Element(self.algebra, out)

    __radd__ = __add__

    def __neg__(self):
        f = self.algebra.field
        return Element(self.algebra, {k: f.neg(c) for k, c in self.terms.items()})

    def __sub__(self, other):
        out = dict(self.terms)
        _axpy(self.algebra.field, out, self.algebra.field.neg(self.algebra.field.one), self._other(other))
        return Element(self.algebra, out)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Element):
            _check_same(self.algebra, other.algebra)
            return Element(self.algebra, self.algebra.mul_terms(self.terms, other.terms))
        return self.scale(other)

    def __rmul__(self, scalar):
        return self.scale(scalar)

    def scale(self, scalar):
        f = self.algebra.field
        s = f(scalar)
        return Element(self.algebra, {k: f.mul(c, s) for k, c in self.terms.items() if f.mul(c, s)})

    def __eq__(self, other):
        if isinstance(other, Element):
            return self.algebra is other.algebra and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return self.format()

    def format(self) -> str:
        if not self.terms:
            return "0"
        b = self.algebra.backend
        parts = []
        for k in sorted(self.terms, key=b.sort_key):
            c = self.terms[k]
            name = b.format(k)
            parts.append(name if c == 1 else f"{c}*{name}")
        return " + ".join(parts)


def act(a: Element, W: Subspace, side: str = "left") -> Subspace:
    """span{a·w} (or span{w·a} for side="right") over the echelon basis of W."""
    alg = W.ambient
    _check_same(a.algebra, alg)
    if side == "left":
        vecs = [alg.mul_terms(a.terms, w) for w in W.rows]
    elif side == "right":
        vecs = [alg.mul_terms(w, a.terms) for w in W.rows]
    else:
        raise ValueError("side must be 'left' or 'right'")
    return Subspace.span(alg, vecs)


def folner_subspace_ratio(a: Element, W: Subspace, side: str = "left") -> Fraction:
    if W.dim == 0:
        raise ZeroSubspace("ratio of the zero subspace")
    return Fraction(subspace_sum(act(a, W, side), W).dim, W.dim)


def is_folner_subspace(F: Iterable[Element], W: Subspace, epsilon, side: str = "left") -> bool:
    bound = 1 + Fraction(epsilon)
    return all(folner_subspace_ratio(a, W, side) <= bound for a in F)


def span_variant_ratio(F: Iterable[Element], W: Subspace, side: str = "left") -> Fraction:
    if W.dim == 0:
        raise ZeroSubspace("ratio of the zero subspace")
    alg = W.ambient
    total = W.copy()
    for a in F:
        _check_same(a.algebra, alg)
        for w in W.rows:
            total._insert(alg.mul_terms(a.terms, w) if side == "left" else alg.mul_terms(w, a.terms))
    return Fraction(total.dim, W.dim)


def amplify(F: Sequence[Element], n: int, cap: int = DEFAULT_AMPLIFY_CAP) -> list[Element]:
    """All distinct nonzero products of 1..n factors from F."""
    if n < 1:
        raise ValueError("n must be at least 1")
    seen: dict = {}
    layer = []
    for a in F:
        if a and a not in seen:
            seen[a] = None
            layer.append(a)
    last = list(layer)
    for _ in range(n - 1):
        nxt = []
        for p in last:
            for a in F:
                q = p * a
                if q and q not in seen:
                    seen[q] = None
                    nxt.append(q)
                    if len(seen) > cap:
                        raise SizeCap(f"amplified set exceeds {cap} elements")
        last = nxt
    return list(seen)


@dataclass
class WitnessCheck:
    ok: bool
    failing: str | None = None

    def __bool__(self):
        return self.ok


def verify_properly_infinite_witness(u: Element, u2: Element, v: Element, v2: Element) -> WitnessCheck:
    """Check uu' = vv' = 1 and vu' = 0 = uv'."""
    alg = u.algebra
    one = alg.one
    checks = (
        ("u*u' = 1", u * u2, one),
        ("v*v' = 1", v * v2, one),
        ("v*u' = 0", v * u2, alg.zero),
        ("u*v' = 0", u * v2, alg.zero),
    )
    for name, lhs, rhs in checks:
        if lhs != rhs:
            return WitnessCheck(False, name)
    return WitnessCheck(True)


# ---------------------------------------------------------------- algebraic paradoxes


@dataclass
class AlgebraicDecomposition:
    """Blocks of basis keys: left = (L0, ..., Ln) with g1..gn, right = (R0, ..., Rm) with h1..hm.

    L0 and R0 are carried by the identity.
    """

    left: list[list]
    right: list[list]
    g: list[Element]
    h: list[Element]


@dataclass
class ParadoxCheck:
    ok: bool
    reason: str = ""
    family_size: int = 0
    rank: int = 0

    def __bool__(self):
        return self.ok


def verify_algebraic_paradox(alg: Algebra, B: Sequence, dec: AlgebraicDecomposition, margin: int) -> ParadoxCheck:
    """Check the decomposition on the basis window B, independence on the inner segment.

    B must be the full set of basis keys of degree <= d; the inner segment is
    degree <= d - margin, and every g, h must have degree <= margin so the
    translated inner segment stays inside B.
    """
    if len(dec.left) != len(dec.g) + 1 or len(dec.right) != len(dec.h) + 1:
        raise ValueError("need one element per non-identity block")
    be = alg.backend
    Bset = set(B)
    d = max((be.degree(k) for k in B), default=0)
    if Bset != set(be.basis(d)):
        raise ValueError("B is not a downward-closed degree segment")
    for x in list(dec.g) + list(dec.h):
        if alg.degree_of(x) > margin:
            raise MarginTooSmall(f"element {x} has degree above the margin {margin}")
    for side, blocks in (("left", dec.left), ("right", dec.right)):
        seen: set = set()
        for blk in blocks:
            for k in blk:
                if k in seen:
                    return ParadoxCheck(False, f"{side} blocks overlap at {be.format(k)}")
                seen.add(k)
        if seen != Bset:
            return ParadoxCheck(False, f"{side} blocks do not partition B")
    inner = {k for k in B if be.degree(k) <= d - margin}
    family = []
    for blocks, elems in ((dec.left, dec.g), (dec.right, dec.h)):
        family += [{k: alg.field.one} for k in blocks[0] if k in inner]
        for blk, x in zip(blocks[1:], elems):
            family += [alg.mul_terms(x.terms, {k: alg.field.one}) for k in blk if k in inner]
    for v in family:
        if any(k not in Bset for k in v):
            raise MarginTooSmall("translated inner segment leaves B")
    r = rank(alg, family)
    ok = r == len(family)
    return ParadoxCheck(ok, "" if ok else "family is linearly dependent", len(family), r)


def one_partition_form(alg: Algebra, dec: AlgebraicDecomposition) -> AlgebraicDecomposition:
    """Refine to blocks T_ij = L_i ∩ R_j carried by g_i and h_j (g_0 = h_0 = 1)."""
    one = alg.one
    gs = [one] + list(dec.g)
    hs = [one] + list(dec.h)
    blocks, g, h = [], [], []
    for i, L in enumerate(dec.left):
        Ls = set(L)
        for j, R in enumerate(dec.right):
            T = [k for k in R if k in Ls]
            if T:
                blocks.append(sorted(T, key=alg.sort_key))
                g.append(gs[i])
                h.append(hs[j])
    return AlgebraicDecomposition([[]] + blocks, [[]] + [list(b) for b in blocks], g, h)


# ---------------------------------------------------------------- dimension measure


class IdealMeasure:
    """μ(A) = dim(I ∩ A) / dim I for a finite-dimensional left ideal I."""

    def __init__(self, I: Subspace, generators: Iterable[Element]):
        if I.dim == 0:
            raise ZeroSubspace("the ideal must be nonzero")
        self.I = I
        for g in generators:
            for r in I.rows:
                if alg_reduce(I, g.algebra.mul_terms(g.terms, r)):
                    raise NotAnIdeal(f"{g} moves the ideal outside itself", g)

    def __call__(self, A: Subspace) -> Fraction:
        return Fraction(intersect_dim(self.I, A), self.I.dim)


def alg_reduce(W: Subspace, v: dict) -> dict:
    return W.reduce(v)


def ideal_dimension_measure(I: Subspace, A: Subspace, generators: Iterable[Element]) -> Fraction:
    return IdealMeasure(I, generators)(A)


def right_annihilator_in(s: Element, A: Subspace) -> Subspace:
    """A ∩ r.ann(s): solve s·x = 0 for x in A."""
    alg = A.ambient
    images = [alg.mul_terms(s.terms, a) for a in A.rows]
    kernel = []
    for combo in null_combinations(alg, images):
        x: dict = {}
        for i, c in combo.items():
            _axpy(alg.field, x, c, A.rows[i])
        kernel.append(x)
    return Subspace.span(alg, kernel)


@dataclass
class MeasureAxiomReport:
    checked: dict = field(default_factory=lambda: {"ii": 0, "monotone": 0, "iv": 0})
    skipped: dict = field(default_factory=lambda: {"ii": 0, "monotone": 0, "iv": 0})
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_measure_axioms_on_samples(
    mu: Callable[[Subspace], Fraction],
    pairs: Iterable[tuple[Subspace, Subspace]] = (),
    chains: Iterable[tuple[Subspace, Subspace]] = (),
    actions: Iterable[tuple[Element, Subspace]] = (),
) -> MeasureAxiomReport:
    """Sample checks of superadditivity, monotonicity and invariance under injective left multiplication.

    Pairs that are not independent, chains that are not nested, and actions
    where s is not injective on A are counted as skipped.
    """
    rep = MeasureAxiomReport()
    for A, B in pairs:
        if intersect_dim(A, B) != 0:
            rep.skipped["ii"] += 1
            continue
        rep.checked["ii"] += 1
        lhs, rhs = mu(subspace_sum(A, B)), mu(A) + mu(B)
        if lhs < rhs:
            rep.violations.append(("ii", A, B, lhs, rhs))
    for A, B in chains:
        if subspace_sum(A, B).dim != B.dim:
            rep.skipped["monotone"] += 1
            continue
        rep.checked["monotone"] += 1
        if mu(A) > mu(B):
            rep.violations.append(("monotone", A, B, mu(A), mu(B)))
    for s, A in actions:
        if right_annihilator_in(s, A).dim:
            rep.skipped["iv"] += 1
            continue
        rep.checked["iv"] += 1
        sA = act(s, A)
        if mu(sA) < mu(A):
            rep.violations.append(("iv", s, A, mu(sA), mu(A)))
    return rep


def monomial_subsets(keys: Sequence, max_size: int) -> Iterable[tuple]:
    for k in range(1, max_size + 1):
        yield from itertools.combinations(keys, k)
