"""Følner ratios, Følner-set search on windows, and enlargement of Følner sets.

A finite set F is (R, ε)-Følner when |∂_R F| / |F| <= ε. Searches run on a
finite window; only the exhaustive strategy can prove that no Følner subset
exists, the others are heuristics whose misses are inconclusive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from . import kernels
from .errors import EmptySet, InvalidEpsilon, LimitExceeded, SupplierExhausted
from .space import MetricSpace, Window, boundary, coarse_components, neighborhood

EXHAUSTIVE_LIMIT = 20
STRATEGIES = ("exhaustive", "greedy", "balls")

EVIDENCE = {
    "exhaustive": "window-proof",
    "greedy": "heuristic-evidence",
    "balls": "heuristic-evidence",
}


@dataclass(frozen=True)
class FolnerCertificate:
    F: frozenset[int]
    R: int | Fraction
    epsilon: Fraction
    ratio: Fraction
    strategy: str

    def verify(self, space: MetricSpace) -> bool:
        """Recompute the ratio from scratch (through the distance-based boundary)."""
        if not self.F:
            return False
        ratio = Fraction(len(boundary(space, self.F, self.R)), len(self.F))
        return ratio == self.ratio and ratio <= self.epsilon


def _as_fraction(eps) -> Fraction:
    eps = Fraction(eps)
    if eps < 0:
        raise InvalidEpsilon(f"epsilon must be nonnegative, got {eps}")
    return eps


def boundary_size(space: MetricSpace, F: Iterable[int], R) -> int:
    """|∂⁺_R F| + |∂⁻_R F| from one pass over the R-balls of F."""
    F = frozenset(F)
    reach: set[int] = set()
    inner = 0
    for x in F:
        b = space.ball(x, R)
        if not b <= F:
            inner += 1
        reach |= b
    return len(reach - F) + inner


def folner_ratio(space: MetricSpace, F: Iterable[int], R) -> Fraction:
    F = frozenset(F)
    if not F:
        raise EmptySet("Følner ratio of the empty set")
    return Fraction(boundary_size(space, F, R), len(F))


class BoundaryTracker:
    """Maintains |∂_R F| while points are added to F one at a time."""

    def __init__(self, space: MetricSpace, R):
        self.space = space
        self.R = R
        self.F: set[int] = set()
        self.cover: dict[int, int] = {}  # z -> #{x in F : z in B_R(x)}
        self.missing: dict[int, int] = {}  # x in F -> |B_R(x) \ F|
        self.outer = 0
        self.inner = 0
        self._balls: dict[int, frozenset[int]] = {}

    def ball(self, x):
        b = self._balls.get(x)
        if b is None:
            b = self._balls[x] = self.space.ball(x, self.R)
        return b

    @property
    def size(self) -> int:
        return self.outer + self.inner

    def delta(self, y) -> tuple[int, int]:
        """(outer change, inner change) if y were added."""
        b = self.ball(y)
        d_outer = -1 if self.cover.get(y, 0) > 0 else 0
        d_inner = 0
        miss_y = 0
        for z in b:
            if z == y:
                continue
            if z in self.F:
                if self.missing[z] == 1:
                    d_inner -= 1
            else:
                miss_y += 1
                if self.cover.get(z, 0) == 0:
                    d_outer += 1
        if miss_y:
            d_inner += 1
        return d_outer, d_inner

    def add(self, y) -> None:
        if y in self.F:
            return
        d_outer, d_inner = self.delta(y)
        b = self.ball(y)
        miss_y = 0
        for z in b:
            self.cover[z] = self.cover.get(z, 0) + 1
            if z != y:
                if z in self.F:
                    self.missing[z] -= 1
                else:
                    miss_y += 1
        self.F.add(y)
        self.missing[y] = miss_y
        self.outer += d_outer
        self.inner += d_inner


def _better(cand, best) -> bool:
    """Compare (boundary, size, tiebreak) triples: lower ratio, then larger size, then tiebreak."""
    if best is None:
        return True
    b1, k1, t1 = cand
    b0, k0, t0 = best
    lhs, rhs = b1 * k0, b0 * k1
    if lhs != rhs:
        return lhs < rhs
    if k1 != k0:
        return k1 > k0
    return t1 < t0


def _exhaustive(window: Window, R, floor: int):
    pts = sorted(window.members)
    n = len(pts)
    extra = sorted(neighborhood(window.ambient, pts, R) - window.members)
    index = {p: i for i, p in enumerate(pts + extra)}
    balls = []
    for p in pts:
        m = 0
        for q in window.ambient.ball(p, R):
            m |= 1 << index[q]
        balls.append(m)
    return pts, kernels.scan_subsets(balls, n, floor)


def _mask_to_set(pts, mask) -> frozenset[int]:
    return frozenset(p for i, p in enumerate(pts) if mask >> i & 1)


def _greedy(window: Window, R, floor: int):
    space = window.ambient
    W = window.members
    seed = min(W)
    tracker = BoundaryTracker(space, R)
    for x in sorted(space.ball(seed, R) & W):
        tracker.add(x)
    best = None
    if len(tracker.F) >= floor:
        best = (tracker.size, len(tracker.F), 0, frozenset(tracker.F))
    stale = 0
    step = 0
    while stale < 2 * len(W):
        frontier: set[int] = set()
        for x in tracker.F:
            frontier |= tracker.ball(x)
        cands = sorted((frontier & W) - tracker.F)
        if not cands:
            break
        k = len(tracker.F) + 1
        pick, pick_size = None, None
        for y in cands:
            do, di = tracker.delta(y)
            s = tracker.size + do + di
            if pick is None or s < pick_size:  # same |F| for all candidates
                pick, pick_size = y, s
        tracker.add(pick)
        step += 1
        if k >= floor and (best is None or tracker.size * best[1] < best[0] * k):
            best = (tracker.size, k, step, frozenset(tracker.F))
            stale = 0
        else:
            stale += 1
    return best


def _balls(window: Window, R, floor: int):
    space = window.ambient
    W = sorted(window.members)
    best = None
    for c in W:
        by_dist: dict = {}
        for w in W:
            by_dist.setdefault(space.dist(c, w), []).append(w)
        tracker = BoundaryTracker(space, R)
        for r in sorted(d for d in by_dist if d is not None):
            for w in by_dist[r]:
                tracker.add(w)
            k = len(tracker.F)
            if k >= floor:
                cand = (tracker.size, k, (c, r))
                if _better(cand, best and best[:3]):
                    best = (tracker.size, k, (c, r), frozenset(tracker.F))
    return best


def find_folner(
    window: Window,
    R,
    epsilon,
    strategy: str = "balls",
    size_floor: int | None = None,
    limit: int = EXHAUSTIVE_LIMIT,
) -> FolnerCertificate | None:
    """Search the window for an (R, ε)-Følner subset.

    Returns None when the strategy finds nothing. For ``exhaustive`` that is
    a proof of absence inside the window; for ``greedy`` and ``balls`` it is
    inconclusive.
    """
    eps = _as_fraction(epsilon)
    if not window.members:
        raise EmptySet("empty window")
    floor = max(1, size_floor or 1)
    if floor > len(window):
        return None
    if strategy == "exhaustive":
        if len(window) > limit:
            raise LimitExceeded(f"exhaustive search limited to {limit} points, window has {len(window)}")
        pts, (mask, bnd, k, _, _) = _exhaustive(window, R, floor)
        if mask == 0:
            return None
        F, ratio = _mask_to_set(pts, mask), Fraction(bnd, k)
    elif strategy == "greedy":
        found = _greedy(window, R, floor)
        if found is None:
            return None
        F, ratio = found[3], Fraction(found[0], found[1])
    elif strategy == "balls":
        found = _balls(window, R, floor)
        if found is None:
            return None
        F, ratio = found[3], Fraction(found[0], found[1])
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    if ratio > eps:
        return None
    return FolnerCertificate(F, R, eps, ratio, strategy)


def min_doubling_excess(window: Window, R) -> tuple[int, frozenset[int]]:
    """min over nonempty F ⊆ W of |N⁺_R F| - 2|F|, by exhaustive scan."""
    if len(window) > kernels.SCAN_LIMIT:
        raise LimitExceeded(f"doubling scan limited to {kernels.SCAN_LIMIT} points")
    pts, (_, _, _, mask, excess) = _exhaustive(window, R, 1)
    return excess, _mask_to_set(pts, mask)


Supplier = Callable[[object, Fraction, int], "FolnerCertificate | None"]


def window_supplier(window: Window, strategy: str = "balls", limit: int = EXHAUSTIVE_LIMIT) -> Supplier:
    def supply(R, eps, size_floor):
        return find_folner(window, R, eps, strategy, size_floor=size_floor, limit=limit)

    return supply


def ball_supplier(space: MetricSpace, center: int, max_radius: int) -> Supplier:
    """Offers the balls B_r(center), r = 0..max_radius, in increasing order."""

    def supply(R, eps, size_floor):
        for r in range(max_radius + 1):
            F = space.ball(center, r)
            if len(F) < size_floor:
                continue
            ratio = folner_ratio(space, F, R)
            if ratio <= eps:
                return FolnerCertificate(F, R, Fraction(eps), ratio, "ball-supplier")
        return None

    return supply


def enlarge_folner(space: MetricSpace, A: Iterable[int], R, epsilon, supplier: Supplier) -> FolnerCertificate:
    """Return an (R, ε)-Følner set containing A.

    Asks the supplier for F with |F| >= 2|∂_R A|/ε and ratio <= ε/2; then
    F ∪ A works because ∂_R(F ∪ A) ⊆ ∂_R F ∪ ∂_R A.
    """
    eps = _as_fraction(epsilon)
    if eps == 0:
        raise InvalidEpsilon("enlargement needs epsilon > 0")
    A = frozenset(A)
    bA = len(boundary(space, A, R)) if A else 0
    need = max(1, math.ceil(Fraction(2 * bA) / eps))
    half = eps / 2
    cert = supplier(R, half, need)
    if cert is None or len(cert.F) < need or folner_ratio(space, cert.F, R) > half:
        raise SupplierExhausted(f"no ({R}, {half})-Følner set with at least {need} points was supplied")
    F = cert.F | A
    ratio = folner_ratio(space, F, R)
    if ratio > eps:  # impossible by the boundary inclusion above
        raise AssertionError("enlarged set exceeds epsilon")
    return FolnerCertificate(F, R, eps, ratio, f"enlarged:{cert.strategy}")


# ---------------------------------------------------------------- components


@dataclass
class ComponentFinding:
    members: frozenset[int]
    finite: bool
    certificate: FolnerCertificate | None
    evidence: str
    strategy: str

    @property
    def status(self) -> str:
        if self.finite:
            return "finite"
        return "folner-found" if self.certificate else "none-found"


@dataclass
class ComponentReport:
    R: object
    epsilon: Fraction
    components: list[ComponentFinding] = field(default_factory=list)

    @property
    def y1(self) -> frozenset[int]:
        """Union of the finite components met by the window."""
        return frozenset().union(*(c.members for c in self.components if c.finite))

    @property
    def y2(self) -> frozenset[int]:
        """Union of the components where nothing was found."""
        return frozenset().union(*(c.members for c in self.components if c.status == "none-found"))

    @property
    def shape(self) -> str:
        has1, has2 = bool(self.y1), bool(self.y2)
        if has1 and has2:
            return "Y1+Y2"
        if has1:
            return "Y1"
        if has2:
            return "Y2"
        return "folner"


def component_amenability_report(window: Window, R, epsilon, limit: int = EXHAUSTIVE_LIMIT) -> ComponentReport:
    eps = _as_fraction(epsilon)
    space = window.ambient
    report = ComponentReport(R, eps)
    for comp in coarse_components(window):
        size = space.component_size(min(comp))
        if size is not None and size == len(comp):
            # the whole component is inside the window: empty boundary
            ratio = folner_ratio(space, comp, R)
            cert = FolnerCertificate(comp, R, eps, ratio, "finite-component")
            report.components.append(ComponentFinding(comp, True, cert, "proof", "finite-component"))
            continue
        sub = window.sub(comp)
        if len(comp) <= limit:
            cert = find_folner(sub, R, eps, "exhaustive", limit=limit)
            report.components.append(ComponentFinding(comp, False, cert, "window-proof", "exhaustive"))
            continue
        found = [c for c in (find_folner(sub, R, eps, s) for s in ("balls", "greedy")) if c is not None]
        cert = min(found, key=lambda c: (c.ratio, -len(c.F), c.strategy)) if found else None
        strategy = cert.strategy if cert else "balls+greedy"
        report.components.append(ComponentFinding(comp, False, cert, "heuristic-evidence", strategy))
    return report
