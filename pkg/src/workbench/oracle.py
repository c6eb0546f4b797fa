"""Brute-force reference computations.

Everything here works from point labels and definitions alone and shares no
code with the main path (no BFS spaces, no kernels, no echelon subspaces).
Caps keep instances small; exceeding one raises CapExceeded.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Sequence

from .errors import CapExceeded

INF = float("inf")
SCAN_CAP = 20
UNIVERSE_CAP = 20_000


# ---------------------------------------------------------------- label spaces


def grid_ball(d: int, r: int) -> list[tuple]:
    """Lattice points of Z^d with L1 norm <= r, by enumerating the cube."""
    pts = [p for p in itertools.product(range(-r, r + 1), repeat=d) if sum(abs(c) for c in p) <= r]
    if len(pts) > UNIVERSE_CAP:
        raise CapExceeded(f"{len(pts)} points exceed the cap")
    return pts


def grid_dist(p: tuple, q: tuple) -> int:
    return sum(abs(a - b) for a, b in zip(p, q))


def _free_reduce(word: Iterable[int]) -> tuple:
    out: list[int] = []
    for s in word:
        if out and out[-1] == -s:
            out.pop()
        else:
            out.append(s)
    return tuple(out)


def free_ball(rank: int, r: int) -> list[tuple]:
    """Reduced words of length <= r, by reducing every word of length <= r."""
    letters = [s for k in range(1, rank + 1) for s in (k, -k)]
    if (2 * rank) ** r > 50 * UNIVERSE_CAP:
        raise CapExceeded("word enumeration too large")
    seen = set()
    for n in range(r + 1):
        for w in itertools.product(letters, repeat=n):
            seen.add(_free_reduce(w))
    return sorted(seen, key=lambda w: (len(w), w))


def free_dist(x: tuple, y: tuple) -> int:
    """|x y⁻¹| computed by literal reduction."""
    return len(_free_reduce(tuple(x) + tuple(-s for s in reversed(y))))


def ball_size(kind: str, param: int, r: int) -> int:
    if kind == "grid":
        return len(grid_ball(param, r))
    if kind == "free":
        return len(free_ball(param, r))
    raise ValueError(f"unknown kind {kind!r}")


# ---------------------------------------------------------------- boundaries and Følner sets


def boundaries(universe: Sequence[Hashable], dist: Callable, A: Iterable, R) -> tuple[frozenset, frozenset]:
    """(outer, inner) R-boundaries of A, with the universe standing in for X."""
    A = frozenset(A)
    rest = [x for x in universe if x not in A]
    outer = frozenset(x for x in rest if any(dist(x, a) <= R for a in A))
    inner = frozenset(a for a in A if any(dist(a, x) <= R for x in rest))
    return outer, inner


def folner_scan(
    candidates: Sequence[Hashable], universe: Sequence[Hashable], dist: Callable, R, cap: int = SCAN_CAP
) -> tuple[frozenset, Fraction]:
    """Minimum boundary ratio over all nonempty subsets of the candidates.

    Ties prefer larger subsets, then the lexicographically smallest sorted
    index tuple.
    """
    cands = list(candidates)
    if len(cands) > cap:
        raise CapExceeded(f"{len(cands)} candidates exceed the scan cap {cap}")
    near = {x: frozenset(y for y in universe if dist(x, y) <= R) for x in cands}
    best = None
    for k in range(1, len(cands) + 1):
        for idx in itertools.combinations(range(len(cands)), k):
            S = frozenset(cands[i] for i in idx)
            cover = set().union(*(near[x] for x in S))
            outer = len(cover - S)
            inner = sum(1 for x in S if not near[x] <= S)
            key = (Fraction(outer + inner, k), -k, idx)
            if best is None or key < best[0]:
                best = (key, S)
    return best[1], best[0][0]


def finite_universe(obj: dict):
    """Points and an independent distance function for small finite spaces."""
    kind = obj["kind"]
    if kind == "matrix":
        n = len(obj["distances"])
        table = [[_parse_distance(v) for v in row] for row in obj["distances"]]
        return list(range(n)), lambda a, b: table[a][b]
    if kind == "graph":
        vs = list(range(len(obj["vertices"])))
        pos = {v: i for i, v in enumerate(obj["vertices"])}
        big = len(vs) + 1
        d = [[0 if i == j else big for j in vs] for i in vs]
        for e in obj["edges"]:
            a, b = (e["src"], e["rng"]) if isinstance(e, dict) else e
            d[pos[a]][pos[b]] = d[pos[b]][pos[a]] = 1
        for k in vs:
            for i in vs:
                for j in vs:
                    if d[i][k] + d[k][j] < d[i][j]:
                        d[i][j] = d[i][k] + d[k][j]
        return vs, lambda a, b: INF if d[a][b] >= big else d[a][b]
    raise CapExceeded("the oracle scan needs an explicit finite space (matrix or graph)")

def _parse_distance(v):
    if v is None or v == "inf":
        return INF
    return Fraction(v) if isinstance(v, str) else v


# ---------------------------------------------------------------- matching


def kuhn_matching(adj: Sequence[Sequence[int]], n_right: int) -> int:
    """Maximum bipartite matching size by repeated augmenting-path search."""
    match_r = [-1] * n_right

    def augment(u, seen):
        for v in adj[u]:
            if v in seen:
                continue
            seen.add(v)
            if match_r[v] < 0 or augment(match_r[v], seen):
                match_r[v] = u
                return True
        return False

    return sum(1 for u in range(len(adj)) if augment(u, set()))


def paradox_feasible(window: Sequence[Hashable], dist: Callable, R, universe: Sequence[Hashable]) -> bool:
    """Whether two disjoint injections window -> N_R(window) exist."""
    W = list(window)
    targets = sorted({y for y in universe if any(dist(x, y) <= R for x in W)}, key=repr)
    pos = {y: i for i, y in enumerate(targets)}
    adj = []
    for x in W:
        nb = [pos[y] for y in targets if dist(x, y) <= R]
        adj.append(nb)
        adj.append(nb)
    return kuhn_matching(adj, len(targets)) == 2 * len(W)


# ---------------------------------------------------------------- Leavitt path algebra words


def _designated(E) -> list:
    out = []
    for v in range(E.n):
        ids = [j for j in range(len(E.edges)) if E.src[j] == v]
        out.append(max(ids) if ids else None)
    return out


def monomial_word(m) -> tuple:
    """λρ* as a generator word: edges of λ, then ghosts of ρ in reverse."""
    lam, rho, v = m
    if not lam and not rho:
        return (("v", v),)
    return tuple(("e", j) for j in lam) + tuple(("g", j) for j in reversed(rho))


def _rule(E, desig, a, b):
    """Rewrite of the adjacent pair (a, b): a list of (coef, word) or None if irreducible."""
    ta, ia = a
    tb, ib = b
    if ta == "v":
        if tb == "v":
            return [(1, (a,))] if ia == ib else []
        if tb == "e":
            return [(1, (b,))] if E.src[ib] == ia else []
        return [(1, (b,))] if E.rng[ib] == ia else []
    if tb == "v":
        if ta == "e":
            return [(1, (a,))] if E.rng[ia] == ib else []
        return [(1, (a,))] if E.src[ia] == ib else []
    if ta == "e" and tb == "e":
        return None if E.rng[ia] == E.src[ib] else []
    if ta == "g" and tb == "g":
        return None if E.src[ia] == E.rng[ib] else []
    if ta == "g" and tb == "e":
        return [(1, (("v", E.rng[ia]),))] if ia == ib else []
    # edge followed by ghost
    if E.rng[ia] != E.rng[ib]:
        return []
    u = E.src[ia]
    if ia == ib and desig[u] == ia:
        out = [(1, (("v", u),))]
        for f in range(len(E.edges)):
            if E.src[f] == u and f != ia:
                out.append((-1, (("e", f), ("g", f))))
        return out
    return None


def naive_normal_form(E, word: Sequence, rng: random.Random | None = None, step_cap: int = 200_000) -> dict:
    """Rewrite a generator word to normal form, applying rules in random order."""
    rng = rng or random.Random(0)
    desig = _designated(E)
    elem: dict = {tuple(word): 1}
    steps = 0
    while True:
        todo = []
        for w in elem:
            spots = [i for i in range(len(w) - 1) if _rule(E, desig, w[i], w[i + 1]) is not None]
            if spots:
                todo.append((w, spots))
        if not todo:
            break
        w, spots = rng.choice(sorted(todo))
        i = rng.choice(spots)
        c = elem.pop(w)
        for k, rep in _rule(E, desig, w[i], w[i + 1]):
            nw = w[:i] + rep + w[i + 2 :]
            nc = elem.get(nw, 0) + c * k
            if nc:
                elem[nw] = nc
            else:
                elem.pop(nw, None)
        steps += 1
        if steps > step_cap:
            raise CapExceeded("rewriting did not finish within the step cap")
    return {_word_key(E, w): c for w, c in elem.items()}


def _word_key(E, w: tuple) -> tuple:
    if len(w) == 1 and w[0][0] == "v":
        return ((), (), w[0][1])
    lam = tuple(j for t, j in w if t == "e")
    ghosts = [j for t, j in w if t == "g"]
    rho = tuple(reversed(ghosts))
    v = E.rng[lam[-1]] if lam else E.rng[rho[-1]]
    return (lam, rho, v)


def lpa_mul_agreement(E, trials: int = 1000, max_degree: int = 5, seed: int = 0, orders: int = 1) -> dict:
    """Compare backend products with naive rewriting on random monomial pairs.

    With ``orders`` > 1 each product is also rewritten under several random
    rule orders, which must all agree (a confluence self-test).
    """
    from .lpa import LeavittBackend

    be = LeavittBackend(E)
    basis = be.basis(max_degree)
    rng = random.Random(seed)
    mismatches = []
    for _ in range(trials):
        a, b = rng.choice(basis), rng.choice(basis)
        word = monomial_word(a) + monomial_word(b)
        forms = [naive_normal_form(E, word, random.Random(rng.random())) for _ in range(max(1, orders))]
        got = {tuple(k): c for k, c in be.multiply(a, b).items()}
        if any(f != forms[0] for f in forms) or forms[0] != got:
            mismatches.append((a, b))
    return {"trials": trials, "mismatches": mismatches, "ok": not mismatches}
