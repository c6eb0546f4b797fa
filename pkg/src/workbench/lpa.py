"""Directed graphs, the amenability classifier for unital Leavitt path algebras,
normal-form arithmetic, and Følner-subspace witnesses.

Vertices and edges carry user ids; internally they are indexed, with edges
sorted by id so that "highest id" is simply the largest index.
"""

from __future__ import annotations

import itertools
import math
import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, NamedTuple, Sequence

from .errors import (
    BreakingVerticesPresent,
    EmptyGraph,
    InfiniteEmitterUnsupported,
    InvalidEpsilon,
    NotConstructibleHere,
    NotNonExclusive,
    ValidationFailed,
)
from .linalg import (
    QQ,
    Algebra,
    AlgebraBackend,
    Element,
    Field,
    Subspace,
    WitnessCheck,
    folner_subspace_ratio,
    span,
    span_variant_ratio,
    verify_properly_infinite_witness,
)

PATH_ENUM_CAP = 100_000


def _id_key(i) -> tuple:
    return (0, i, "") if isinstance(i, int) else (1, 0, str(i))


@dataclass(frozen=True)
class Edge:
    id: Hashable
    src: Hashable
    rng: Hashable


class DirectedGraph:
    """A finite quiver, optionally with infinite-emitter flags.

    ``infinite_emitters`` maps a flagged vertex to the declared set of
    vertices its unmaterialized edges land in. ``infinite_vertices`` marks a
    finite materialization of a graph with infinitely many vertices.
    """

    def __init__(
        self,
        vertices: Iterable[Hashable],
        edges: Iterable,
        infinite_emitters: dict | None = None,
        infinite_vertices: bool = False,
    ):
        self.vertices: list = list(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise ValidationFailed("duplicate vertex ids")
        self.vindex = {v: i for i, v in enumerate(self.vertices)}
        es = [e if isinstance(e, Edge) else Edge(*e) for e in edges]
        es.sort(key=lambda e: _id_key(e.id))
        if len({e.id for e in es}) != len(es):
            raise ValidationFailed("duplicate edge ids")
        for e in es:
            if e.src not in self.vindex or e.rng not in self.vindex:
                raise ValidationFailed(f"edge {e.id!r} has an unknown endpoint")
        self.edges: list[Edge] = es
        self.eindex = {e.id: j for j, e in enumerate(es)}
        self.src = [self.vindex[e.src] for e in es]
        self.rng = [self.vindex[e.rng] for e in es]
        n = len(self.vertices)
        self.out: list[list[int]] = [[] for _ in range(n)]
        self.inc: list[list[int]] = [[] for _ in range(n)]
        for j in range(len(es)):
            self.out[self.src[j]].append(j)
            self.inc[self.rng[j]].append(j)
        self.flags: dict[int, frozenset[int]] = {}
        for v, into in (infinite_emitters or {}).items():
            if v not in self.vindex or any(u not in self.vindex for u in into):
                raise ValidationFailed(f"infinite emitter {v!r} refers to unknown vertices")
            self.flags[self.vindex[v]] = frozenset(self.vindex[u] for u in into)
        self.infinite_vertices = bool(infinite_vertices)

    # basic structure ------------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.vertices)

    def is_flagged(self, v: int) -> bool:
        return v in self.flags

    def is_sink(self, v: int) -> bool:
        return not self.out[v] and v not in self.flags

    def is_regular(self, v: int) -> bool:
        return bool(self.out[v]) and v not in self.flags

    def vids(self, S: Iterable[int]) -> list:
        return [self.vertices[i] for i in sorted(S)]

    def eids(self, path: Iterable[int]) -> list:
        return [self.edges[j].id for j in path]

    def path_end(self, start: int, edges: Sequence[int]) -> int:
        return self.rng[edges[-1]] if edges else start

    # serialization --------------------------------------------------------
    @classmethod
    def from_json(cls, obj: dict) -> "DirectedGraph":
        try:
            flags = {f["vertex"]: f.get("unmaterialized_into", []) for f in obj.get("infinite_emitters", [])}
            edges = [Edge(e["id"], e["src"], e["rng"]) for e in obj.get("edges", [])]
            return cls(obj["vertices"], edges, flags, obj.get("infinite_vertices", False))
        except (KeyError, TypeError) as exc:
            raise ValidationFailed(f"malformed graph JSON: {exc}") from exc

    def to_json(self) -> dict:
        out = {
            "vertices": list(self.vertices),
            "edges": [{"id": e.id, "src": e.src, "rng": e.rng} for e in self.edges],
        }
        if self.flags:
            out["infinite_emitters"] = [
                {"vertex": self.vertices[v], "unmaterialized_into": self.vids(into)}
                for v, into in sorted(self.flags.items())
            ]
        if self.infinite_vertices:
            out["infinite_vertices"] = True
        return out

    def relabel(self, vmap: dict, emap: dict) -> "DirectedGraph":
        return DirectedGraph(
            [vmap[v] for v in self.vertices],
            [Edge(emap[e.id], vmap[e.src], vmap[e.rng]) for e in self.edges],
            {vmap[self.vertices[v]]: [vmap[self.vertices[u]] for u in into] for v, into in self.flags.items()},
            self.infinite_vertices,
        )

    def __repr__(self):
        return f"DirectedGraph({self.n} vertices, {len(self.edges)} edges)"


# ---------------------------------------------------------------- SCCs and cycles


@dataclass(frozen=True)
class Condensation:
    components: list  # vertex-index frozensets, in topological order
    comp_of: list  # vertex index -> component index
    dag: list  # component index -> set of successor component indices
    cyclic: list  # component index -> bool


def _tarjan(E: DirectedGraph) -> list[list[int]]:
    index = [0] * E.n
    low = [0] * E.n
    seen = [False] * E.n
    onstack = [False] * E.n
    stack: list[int] = []
    out: list[list[int]] = []
    counter = 1
    for root in range(E.n):
        if seen[root]:
            continue
        work = [(root, 0)]
        seen[root] = True
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        onstack[root] = True
        while work:
            v, i = work[-1]
            edges = E.out[v]
            if i < len(edges):
                work[-1] = (v, i + 1)
                w = E.rng[edges[i]]
                if not seen[w]:
                    seen[w] = True
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    onstack[w] = True
                    work.append((w, 0))
                elif onstack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    onstack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                out.append(sorted(comp))
    out.reverse()  # Tarjan emits sinks first
    return out


def scc_condensation(E: DirectedGraph) -> Condensation:
    comps = _tarjan(E)
    comp_of = [0] * E.n
    for c, vs in enumerate(comps):
        for v in vs:
            comp_of[v] = c
    dag: list[set] = [set() for _ in comps]
    cyclic = [len(vs) > 1 for vs in comps]
    for j in range(len(E.edges)):
        a, b = comp_of[E.src[j]], comp_of[E.rng[j]]
        if a != b:
            dag[a].add(b)
        elif E.src[j] == E.rng[j]:
            cyclic[a] = True
    return Condensation([frozenset(c) for c in comps], comp_of, dag, cyclic)


@dataclass(frozen=True)
class CycleClass:
    edges: tuple  # representative simple cycle, as edge ids
    vertices: frozenset  # vertex ids on the representative cycle
    component: frozenset  # vertex ids of the strongly connected component
    exclusive: bool
    maximal: bool
    base: Hashable  # the vertex the representative cycle starts at

    def to_json(self) -> dict:
        return {
            "cycle": list(self.edges),
            "vertices": sorted(self.vertices, key=_id_key),
            "component": sorted(self.component, key=_id_key),
            "exclusive": self.exclusive,
            "maximal": self.maximal,
        }


def _shortest_cycle(E: DirectedGraph, v: int, allowed: frozenset) -> tuple[int, ...]:
    parent: dict[int, int] = {}
    q = deque([v])
    seen = {v}
    while q:
        x = q.popleft()
        for j in E.out[x]:
            y = E.rng[j]
            if y not in allowed:
                continue
            if y == v:
                path = [j]
                while x != v:
                    path.append(parent[x])
                    x = E.src[parent[x]]
                return tuple(reversed(path))
            if y not in seen:
                seen.add(y)
                parent[y] = j
                q.append(y)
    raise AssertionError("cyclic component without a cycle")


def _ancestors(cond: Condensation) -> list[set[int]]:
    preds: list[set[int]] = [set() for _ in cond.components]
    for a, succ in enumerate(cond.dag):
        for b in succ:
            preds[b].add(a)
    out = []
    for c in range(len(cond.components)):
        seen: set[int] = set()
        stack = list(preds[c])
        while stack:
            x = stack.pop()
            if x not in seen:
                seen.add(x)
                stack.extend(preds[x])
        out.append(seen)
    return out


def _cycle_data(E: DirectedGraph, cond: Condensation | None = None):
    """Yield (component index, representative edge indices, exclusive, maximal)."""
    cond = cond or scc_condensation(E)
    anc = _ancestors(cond)
    for c, vs in enumerate(cond.components):
        if not cond.cyclic[c]:
            continue
        base = min(vs)
        cyc = _shortest_cycle(E, base, vs)
        induced = sum(1 for j in range(len(E.edges)) if E.src[j] in vs and E.rng[j] in vs)
        exclusive = induced == len(cyc)
        maximal = not any(cond.cyclic[a] for a in anc[c])
        yield c, cyc, exclusive, maximal


def cycles_summary(E: DirectedGraph) -> list[CycleClass]:
    cond = scc_condensation(E)
    out = []
    for c, cyc, exclusive, maximal in _cycle_data(E, cond):
        vs = cond.components[c]
        out.append(
            CycleClass(
                tuple(E.eids(cyc)),
                frozenset(E.vertices[E.src[j]] for j in cyc),
                frozenset(E.vertices[v] for v in vs),
                exclusive,
                maximal,
                E.vertices[min(vs)],
            )
        )
    return out


# ---------------------------------------------------------------- hereditary saturated sets


def _tree(E: DirectedGraph, X: Iterable[int]) -> set[int]:
    seen = set(X)
    stack = list(seen)
    while stack:
        v = stack.pop()
        for j in E.out[v]:
            w = E.rng[j]
            if w not in seen:
                seen.add(w)
                stack.append(w)
        for w in E.flags.get(v, ()):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def _to_index(E: DirectedGraph, X: Iterable[Hashable]) -> set[int]:
    try:
        return {E.vindex[x] for x in X}
    except KeyError as exc:
        raise ValidationFailed(f"unknown vertex {exc.args[0]!r}") from None


def tree(E: DirectedGraph, X: Iterable[Hashable]) -> frozenset:
    """T(X): every vertex reachable from X, including X."""
    return frozenset(E.vertices[v] for v in _tree(E, _to_index(E, X)))


@dataclass(frozen=True)
class SaturationTrace:
    tree: frozenset
    increments: tuple  # the vertices added at each Λ step, in order

    @property
    def closure(self) -> frozenset:
        return self.tree.union(*self.increments)


def _saturate(E: DirectedGraph, X: set[int]) -> tuple[set[int], list[set[int]]]:
    H = _tree(E, X)
    T = set(H)
    incs = []
    while True:
        new = {
            v
            for v in range(E.n)
            if v not in H and E.is_regular(v) and all(E.rng[j] in H for j in E.out[v])
        }
        if not new:
            break
        incs.append(new)
        H |= new
    return T, incs


def saturation_closure(E: DirectedGraph, X: Iterable[Hashable]) -> SaturationTrace:
    T, incs = _saturate(E, _to_index(E, X))
    return SaturationTrace(
        frozenset(E.vertices[v] for v in T),
        tuple(frozenset(E.vertices[v] for v in inc) for inc in incs),
    )


def _check_hereditary_saturated(E: DirectedGraph, H: set[int]) -> None:
    for v in H:
        for j in E.out[v]:
            if E.rng[j] not in H:
                raise ValidationFailed(f"{E.vertices[v]!r} in H has an edge leaving H")
        if not E.flags.get(v, frozenset()) <= H:
            raise ValidationFailed(f"flagged {E.vertices[v]!r} in H emits outside H")
    for v in range(E.n):
        if v not in H and E.is_regular(v) and all(E.rng[j] in H for j in E.out[v]):
            raise ValidationFailed(f"H is not saturated at {E.vertices[v]!r}")


def _breaking(E: DirectedGraph, H: set[int]) -> set[int]:
    out = set()
    for w, into in E.flags.items():
        if w in H or not into <= H:
            continue
        leaving = sum(1 for j in E.out[w] if E.rng[j] not in H)
        if leaving >= 1:
            out.add(w)
    return out


def breaking_vertices(E: DirectedGraph, H: Iterable[Hashable]) -> frozenset:
    Hi = _to_index(E, H)
    _check_hereditary_saturated(E, Hi)
    return frozenset(E.vertices[v] for v in _breaking(E, Hi))


def quotient_graph(E: DirectedGraph, H: Iterable[Hashable]) -> DirectedGraph:
    """E/H: vertices outside H and the edges whose range is outside H."""
    Hi = _to_index(E, H)
    _check_hereditary_saturated(E, Hi)
    if _breaking(E, Hi):
        raise BreakingVerticesPresent("H has breaking vertices")
    keep = [v for v in range(E.n) if v not in Hi]
    edges = [e for j, e in enumerate(E.edges) if E.rng[j] not in Hi]
    flags = {E.vertices[v]: [E.vertices[u] for u in sorted(E.flags[v] - Hi)] for v in keep if v in E.flags}
    return DirectedGraph([E.vertices[v] for v in keep], edges, flags, E.infinite_vertices)


# ---------------------------------------------------------------- classification


@dataclass
class Classification:
    verdict: str  # "A1" | "A2" | "A3"
    reasons: list
    H: frozenset
    witnesses: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "reasons": list(self.reasons),
            "H": sorted(self.H, key=_id_key),
            "witnesses": self.witnesses,
            "notes": list(self.notes),
        }


def properly_infinite_vertex_witness(E: DirectedGraph, v: Hashable):
    """Two distinct simple closed paths at v and their first divergence.

    Returns (path1, path2, (e_t, f_t)) with paths as edge-id lists.
    """
    p1, p2, t = _two_closed_paths(E, E.vindex[v])
    return E.eids(p1), E.eids(p2), (E.edges[p1[t]].id, E.edges[p2[t]].id)


def _two_closed_paths(E: DirectedGraph, v: int):
    cond = scc_condensation(E)
    c = cond.comp_of[v]
    comp = cond.components[c]
    if not cond.cyclic[c]:
        raise NotNonExclusive(f"{E.vertices[v]!r} is not on a cycle")
    # return paths meet v only at their ends, so two distinct ones never
    # extend each other; the second is routed through an edge off the first
    p1 = _route(E, comp, v, v)
    off = [j for j in sorted(_comp_edges(E, comp)) if j not in p1]
    if not off:
        raise NotNonExclusive(f"{E.vertices[v]!r} lies on an exclusive cycle")
    f = off[0]
    head = _route(E, comp, v, E.src[f]) if E.src[f] != v else ()
    tail = _route(E, comp, E.rng[f], v) if E.rng[f] != v else ()
    p2 = head + (f,) + tail
    p1, p2 = sorted([p1, p2])
    t = next(i for i in range(min(len(p1), len(p2))) if p1[i] != p2[i])
    return p1, p2, t


def _comp_edges(E: DirectedGraph, comp) -> list[int]:
    return [j for j in range(len(E.edges)) if E.src[j] in comp and E.rng[j] in comp]


def _route(E: DirectedGraph, comp, a: int, b: int) -> tuple[int, ...]:
    """Shortest path a -> b inside comp whose interior avoids a and b."""
    parent: dict[int, tuple[int, int]] = {}
    frontier = [a]
    seen = {a}
    while frontier:
        nxt = []
        for x in frontier:
            for j in E.out[x]:
                y = E.rng[j]
                if y not in comp:
                    continue
                if y == b:
                    path = [j]
                    while x != a:
                        x, j = parent[x]
                        path.append(j)
                    return tuple(reversed(path))
                if y not in seen and y != a:
                    seen.add(y)
                    parent[y] = (x, j)
                    nxt.append(y)
        frontier = nxt
    raise NotNonExclusive(f"no path from {E.vertices[a]!r} to {E.vertices[b]!r}")


def classify(E: DirectedGraph, witnesses: bool = True) -> Classification:
    """Decide which amenability class L(E) falls in.

    A3 when some maximal cycle is exclusive, a flagged infinite emitter lies
    outside H, the vertex set is flagged infinite, or E is finite and acyclic;
    otherwise A1 when H is everything and A2 when it is not.
    """
    if E.n == 0:
        raise EmptyGraph("the graph has no vertices")
    cond = scc_condensation(E)
    data = list(_cycle_data(E, cond))
    cycle_vertices = set().union(*(cond.components[c] for c, *_ in data)) if data else set()
    T, incs = _saturate(E, cycle_vertices)
    H = T.union(*incs) if incs else set(T)
    reasons = []
    notes = []
    if E.infinite_vertices:
        reasons.append("B3a")
    outside_flags = sorted(w for w in E.flags if w not in H)
    if outside_flags:
        reasons.append("B3b")
    excl_max = [(c, cyc) for c, cyc, ex, mx in data if ex and mx]
    if excl_max:
        reasons.append("B3c")
    if not data and not E.flags and not E.infinite_vertices:
        reasons.append("finite-dimensional")
        notes.append(
            "acyclic finite graph: none of the literal B-conditions holds; "
            "classified A3 because the algebra is finite-dimensional"
        )
    if reasons:
        verdict = "A3"
    elif len(H) == E.n:
        verdict, reasons = "A1", ["B1"]
    else:
        verdict, reasons = "A2", ["B2"]
        sinks = [v for v in range(E.n) if v not in H and E.is_sink(v)]
        if sinks:
            notes.append(
                "the literal B2 wording asks for regular vertices outside H; sinks "
                f"{E.vids(sinks)} are outside H, corrected predicate applied"
            )
    wit: dict = {}
    if witnesses:
        summary = cycles_summary(E)
        wit["cycles"] = [c.to_json() for c in summary]
        wit["saturation_trace"] = {
            "tree": E.vids(T),
            "increments": [E.vids(inc) for inc in incs],
        }
        if excl_max:
            wit["exclusive_maximal_cycles"] = [E.eids(cyc) for _, cyc in excl_max]
        if outside_flags:
            wit["flagged_outside_H"] = E.vids(outside_flags)
        if verdict == "A1":
            wit["divergence"] = {}
            for c, cyc, ex, mx in data:
                if mx:
                    base = E.src[cyc[0]]
                    p1, p2, t = _two_closed_paths(E, base)
                    wit["divergence"][str(E.vertices[base])] = {
                        "paths": [E.eids(p1), E.eids(p2)],
                        "diverge": [E.edges[p1[t]].id, E.edges[p2[t]].id],
                    }
            wit["comparison_trace"] = {"level": "trace", "lines": _comparison_trace(E, T, incs)}
        if verdict == "A2":
            Q = quotient_graph(E, [E.vertices[v] for v in H])
            wit["quotient"] = Q.to_json()
            wit["quotient_acyclic"] = not any(scc_condensation(Q).cyclic)
    return Classification(verdict, reasons, frozenset(E.vertices[v] for v in H), wit, notes)


def _comparison_trace(E: DirectedGraph, T: set[int], incs: list[set[int]]) -> list[str]:
    lines = [f"T(X) = {E.vids(T)}: each vertex is reached from a maximal cycle by a path"]
    for n, inc in enumerate(incs, 1):
        for v in sorted(inc):
            targets = [E.vertices[E.rng[j]] for j in E.out[v]]
            edges = " + ".join(f"{E.edges[j].id}{E.edges[j].id}*" for j in E.out[v])
            lines.append(f"Λ{n}: {E.vertices[v]} = {edges}, ranges {targets} already dominated")
    return lines


# ---------------------------------------------------------------- arithmetic backends


class NormalMonomial(NamedTuple):
    """λρ* with λ, ρ edge-index tuples and r(λ) = r(ρ) = vertex."""

    lam: tuple
    rho: tuple
    vertex: int


def _require_unflagged(E: DirectedGraph) -> None:
    if E.flags:
        raise InfiniteEmitterUnsupported("arithmetic needs a graph without infinite-emitter flags")


def _paths_upto(E: DirectedGraph, d: int) -> list[tuple[int, tuple]]:
    """All (start, edges) paths of length <= d, by length."""
    layer = [(v, ()) for v in range(E.n)]
    out = list(layer)
    for _ in range(d):
        nxt = []
        for s, p in layer:
            for j in E.out[E.path_end(s, p)]:
                nxt.append((s, p + (j,)))
        if len(out) + len(nxt) > PATH_ENUM_CAP:
            raise NotConstructibleHere("path enumeration exceeds the cap")
        out += nxt
        layer = nxt
    return out


class LeavittBackend(AlgebraBackend):
    """Reduced λρ* monomials with CK-1 contraction and oriented CK-2 rewriting."""

    def __init__(self, E: DirectedGraph, designate: str = "highest"):
        _require_unflagged(E)
        if designate not in ("highest", "lowest"):
            raise ValueError("designate must be 'highest' or 'lowest'")
        self.graph = E
        self.name = "lpa"
        pick = max if designate == "highest" else min
        self.designated = [pick(E.out[v]) if E.out[v] else None for v in range(E.n)]

    def _start(self, path: tuple, v: int) -> int:
        return self.graph.src[path[0]] if path else v

    def is_reduced(self, m: NormalMonomial) -> bool:
        lam, rho, _ = m
        return not (lam and rho and lam[-1] == rho[-1] and lam[-1] == self.designated[self.graph.src[lam[-1]]])

    def reduce(self, lam: tuple, rho: tuple, v: int) -> dict:
        """Normal form of λρ* (which need not be reduced) as key -> int."""
        E = self.graph
        out: dict = {}
        stack = [(lam, rho, v, 1)]
        while stack:
            lam, rho, v, c = stack.pop()
            if lam and rho and lam[-1] == rho[-1]:
                u = E.src[lam[-1]]
                d = self.designated[u]
                if lam[-1] == d:
                    lp, rp = lam[:-1], rho[:-1]
                    stack.append((lp, rp, u, c))
                    for f in E.out[u]:
                        if f != d:
                            stack.append((lp + (f,), rp + (f,), E.rng[f], -c))
                    continue
            key = NormalMonomial(lam, rho, v)
            nc = out.get(key, 0) + c
            if nc:
                out[key] = nc
            else:
                out.pop(key, None)
        return out

    def multiply(self, a, b):
        lam1, rho1, v1 = a
        lam2, rho2, v2 = b
        if self._start(rho1, v1) != self._start(lam2, v2):
            return {}
        k = len(rho1)
        if lam2[:k] == rho1:
            return self.reduce(lam1 + lam2[k:], rho2, v2)
        k = len(lam2)
        if rho1[:k] == lam2:
            return self.reduce(lam1, rho2 + rho1[k:], v1)
        return {}

    def sort_key(self, m):
        return (len(m.lam) + len(m.rho), m.lam, m.rho, m.vertex)

    def degree(self, m):
        return len(m.lam) + len(m.rho)

    def unit(self):
        return {NormalMonomial((), (), v): 1 for v in range(self.graph.n)}

    def basis(self, max_degree):
        by_end: dict[int, list[tuple]] = {}
        for s, p in _paths_upto(self.graph, max_degree):
            by_end.setdefault(self.graph.path_end(s, p), []).append(p)
        out = []
        for v, paths in by_end.items():
            for lam in paths:
                for rho in paths:
                    if len(lam) + len(rho) > max_degree:
                        continue
                    m = NormalMonomial(lam, rho, v)
                    if self.is_reduced(m):
                        out.append(m)
        return sorted(out, key=self.sort_key)

    def format(self, m):
        E = self.graph
        if not m.lam and not m.rho:
            return str(E.vertices[m.vertex])
        parts = [str(E.edges[j].id) for j in m.lam]
        parts += [f"{E.edges[j].id}*" for j in reversed(m.rho)]
        return " ".join(parts)

    def monomial(self, lam_ids: Sequence, rho_ids: Sequence) -> dict:
        """Normal form of λρ* given as edge-id lists."""
        E = self.graph
        lam = tuple(E.eindex[i] for i in lam_ids)
        rho = tuple(E.eindex[i] for i in rho_ids)
        end_l = E.rng[lam[-1]] if lam else None
        end_r = E.rng[rho[-1]] if rho else None
        v = end_l if end_l is not None else end_r
        if v is None:
            raise ValueError("give at least one edge, or use a vertex")
        if end_l is not None and end_r is not None and end_l != end_r:
            return {}
        return self.reduce(lam, rho, v)


class PathAlgebraBackend(AlgebraBackend):
    """Paths (start, edges) with concatenation; vertices are the trivial paths."""

    def __init__(self, E: DirectedGraph):
        _require_unflagged(E)
        self.graph = E
        self.name = "path"

    def multiply(self, a, b):
        s1, p1 = a
        s2, p2 = b
        if self.graph.path_end(s1, p1) != s2:
            return {}
        return {(s1, p1 + p2): 1}

    def sort_key(self, a):
        return (len(a[1]), a[1], a[0])

    def degree(self, a):
        return len(a[1])

    def unit(self):
        return {(v, ()): 1 for v in range(self.graph.n)}

    def basis(self, max_degree):
        return sorted(_paths_upto(self.graph, max_degree), key=self.sort_key)

    def format(self, a):
        E = self.graph
        if not a[1]:
            return str(E.vertices[a[0]])
        return " ".join(str(E.edges[j].id) for j in a[1])


def lpa_backend(E: DirectedGraph, designate: str = "highest") -> LeavittBackend:
    return LeavittBackend(E, designate)


def path_algebra_backend(E: DirectedGraph) -> PathAlgebraBackend:
    return PathAlgebraBackend(E)


def leavitt_algebra(E: DirectedGraph, field: Field = QQ, designate: str = "highest") -> Algebra:
    return Algebra(LeavittBackend(E, designate), field)


def path_algebra(E: DirectedGraph, field: Field = QQ) -> Algebra:
    return Algebra(PathAlgebraBackend(E), field)


_COEF = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_element(alg: Algebra, text: str) -> Element:
    """Parse e.g. ``"2 e1 e2* + -1/2 v"`` (generators: vertex, edge, edge*)."""
    be = alg.backend
    E = be.graph
    names_v = {str(v): i for i, v in enumerate(E.vertices)}
    names_e = {str(e.id): j for j, e in enumerate(E.edges)}
    total = alg.zero
    for term in re.split(r"\s+\+\s+", text.strip()):
        toks = term.split()
        if not toks:
            raise ValueError(f"empty term in {text!r}")
        coef = Fraction(1)
        if _COEF.match(toks[0]):
            coef = Fraction(toks[0])
            toks = toks[1:]
        elif toks[0] == "-":
            coef, toks = Fraction(-1), toks[1:]
        x = alg.one
        for tok in toks:
            x = x * _generator(alg, tok, names_v, names_e)
        total = total + x.scale(coef)
    return total


def _generator(alg: Algebra, tok: str, names_v: dict, names_e: dict) -> Element:
    be = alg.backend
    E = be.graph
    if tok in names_v:
        v = names_v[tok]
        key = NormalMonomial((), (), v) if isinstance(be, LeavittBackend) else (v, ())
        return alg.basis_element(key)
    ghost = tok.endswith("*")
    name = tok[:-1] if ghost else tok
    if name not in names_e:
        raise ValueError(f"unknown generator {tok!r}")
    j = names_e[name]
    if isinstance(be, LeavittBackend):
        key = NormalMonomial((), (j,), E.rng[j]) if ghost else NormalMonomial((j,), (), E.rng[j])
    else:
        if ghost:
            raise ValueError("ghost edges do not exist in the path algebra")
        key = (E.src[j], (j,))
    return alg.basis_element(key)


# ---------------------------------------------------------------- witnesses


def _adjoint(alg: Algebra, x: Element) -> Element:
    be = alg.backend
    out = alg.zero
    for m, c in x.terms.items():
        out = out + alg.element(be.reduce(m.rho, m.lam, m.vertex)).scale(c)
    return out


def adjoint(x: Element) -> Element:
    """The involution λρ* ↦ ρλ* (coefficients unchanged)."""
    return _adjoint(x.algebra, x)


@dataclass
class QuadrupleWitness:
    u: Element
    u2: Element
    v: Element
    v2: Element
    check: WitnessCheck
    isometries: dict

    @property
    def ok(self) -> bool:
        return self.check.ok


def _bfs_path(E: DirectedGraph, a: int, b: int) -> tuple[int, ...] | None:
    if a == b:
        return ()
    parent: dict[int, int] = {}
    q = deque([a])
    seen = {a}
    while q:
        x = q.popleft()
        for j in E.out[x]:
            y = E.rng[j]
            if y in seen:
                continue
            seen.add(y)
            parent[y] = j
            if y == b:
                path = []
                while y != a:
                    path.append(parent[y])
                    y = E.src[parent[y]]
                return tuple(reversed(path))
            q.append(y)
    return None


def properly_infinite_quadruple(E: DirectedGraph, field: Field = QQ, designate: str = "highest") -> QuadrupleWitness:
    """Build (u, u', v, v') with uu' = vv' = 1 and vu' = 0 = uv' in L(E).

    Each vertex is expanded by CK-2 until it reaches T(X), X being one base
    vertex per maximal cycle; the resulting paths β are paired with distinct
    equal-length words in two closed paths at a base vertex. The isometries
    s = Σ αβ* then give u = s₁*, u' = s₁, v = s₂*, v' = s₂.
    """
    cls = classify(E, witnesses=False)
    if cls.verdict != "A1":
        raise NotConstructibleHere(f"verdict is {cls.verdict}, not A1")
    _require_unflagged(E)
    alg = leavitt_algebra(E, field, designate)
    be: LeavittBackend = alg.backend
    bases = [E.src[cyc[0]] for c, cyc, ex, mx in _cycle_data(E) if mx]
    closed = {b: _two_closed_paths(E, b) for b in bases}
    T, incs = _saturate(E, set(bases))
    expansion: dict[int, list[tuple]] = {v: [()] for v in T}
    for inc in incs:  # Λ order: every range is already expanded
        for v in sorted(inc):
            expansion[v] = [(j,) + beta for j in E.out[v] for beta in expansion[E.rng[j]]]
    if len(expansion) != E.n:
        raise NotConstructibleHere("vertex set is not exhausted by the saturation")
    groups: dict[int, list[tuple]] = {b: [] for b in bases}
    for w in range(E.n):
        for beta in expansion[w]:
            z = E.path_end(w, beta)
            for b in bases:
                pi = _bfs_path(E, b, z)
                if pi is not None:
                    groups[b].append((beta, z, pi))
                    break
            else:
                raise NotConstructibleHere(f"{E.vertices[z]!r} is not reached from a base vertex")
    s1, s2, s1a, s2a = alg.zero, alg.zero, alg.zero, alg.zero
    for b, items in groups.items():
        if not items:
            continue
        p1, p2, _ = closed[b]
        L = max(1, math.ceil(math.log2(2 * len(items))))
        words = itertools.product((p1, p2), repeat=L)
        for beta, z, pi in items:
            for target in ("first", "second"):
                omega = tuple(itertools.chain.from_iterable(next(words)))
                alpha = omega + pi
                m = alg.element(be.reduce(alpha, beta, z))
                ma = alg.element(be.reduce(beta, alpha, z))
                if target == "first":
                    s1, s1a = s1 + m, s1a + ma
                else:
                    s2, s2a = s2 + m, s2a + ma
    check = verify_properly_infinite_witness(s1a, s1, s2a, s2)
    return QuadrupleWitness(s1a, s1, s2a, s2, check, {"s1": s1, "s2": s2})


@dataclass
class FolnerWitness:
    case: str
    W: Subspace
    ratios: list
    bound: Fraction
    epsilon: Fraction
    N: int
    params: dict

    @property
    def dim(self) -> int:
        return self.W.dim

    @property
    def ok(self) -> bool:
        return self.dim >= self.N and all(r <= 1 + self.epsilon for r in self.ratios)

    @property
    def bound_dominates(self) -> bool:
        return all(r <= self.bound for r in self.ratios)


def _minimal_paths_to(E: DirectedGraph, v0: int) -> list[tuple]:
    """Paths ending at v0 that do not visit v0 before their end."""
    out = [()]
    stack = [(v0, ())]
    while stack:
        s, p = stack.pop()
        for j in E.inc[s]:
            if E.src[j] == v0:
                continue
            q = (j,) + p
            out.append(q)
            if len(out) > PATH_ENUM_CAP:
                raise NotConstructibleHere("too many minimal paths to the base vertex")
            stack.append((E.src[j], q))
    return sorted(out, key=lambda p: (len(p), p))


def folner_witness(
    E: DirectedGraph,
    classification: Classification,
    F: Sequence[Element],
    epsilon,
    N: int,
) -> FolnerWitness:
    """Construct and verify a left (F, ε)-Følner subspace of dimension >= N."""
    eps = Fraction(epsilon)
    if eps <= 0:
        raise InvalidEpsilon("epsilon must be positive")
    if classification.verdict != "A3":
        raise NotConstructibleHere(f"verdict {classification.verdict} has no Følner construction")
    if E.flags:
        raise NotConstructibleHere("arithmetic is unsupported on graphs with infinite emitters")
    if not F:
        raise ValueError("F must be nonempty")
    alg = F[0].algebra
    if not isinstance(alg.backend, LeavittBackend):
        raise ValueError("F must live in a Leavitt path algebra")
    reasons = classification.reasons
    if "B3c" in reasons:
        return _b3c_witness(E, alg, F, eps, N)
    if "B3a" in reasons:
        return _b3a_witness(E, alg, F, eps, N)
    raise NotConstructibleHere(f"no constructive case among {reasons}")


def _b3c_witness(E, alg, F, eps, N):
    c, mu0 = next((c, cyc) for c, cyc, ex, mx in _cycle_data(E) if ex and mx)
    v0 = E.src[mu0[0]]
    P = _minimal_paths_to(E, v0)
    L = max((max(len(m.lam), len(m.rho)) for a in F for m in a.terms), default=0)
    N1 = L // len(mu0) + 1
    N2 = N1 + max(N, math.ceil(2 * N1 / eps))
    vecs = [
        {NormalMonomial(gamma + mu0 * k, (), v0): alg.field.one}
        for gamma in P
        for k in range(N1 + 1, N2 + 1)
    ]
    W = span(alg, vecs)
    ratios = [folner_subspace_ratio(a, W) for a in F]
    bound = Fraction(N2 + N1, N2 - N1)
    params = {
        "base": E.vertices[v0],
        "cycle": E.eids(mu0),
        "P": [E.eids(g) for g in P],
        "L": L,
        "N1": N1,
        "N2": N2,
    }
    return FolnerWitness("B3c", W, ratios, bound, eps, N, params)


def _b3a_witness(E, alg, F, eps, N):
    used = set()
    for a in F:
        for m in a.terms:
            used.add(E.src[m.rho[0]] if m.rho else m.vertex)
    spare = [v for v in range(E.n) if v not in used]
    if len(spare) < max(N, 1):
        raise NotConstructibleHere(f"only {len(spare)} spare vertices, need {N}")
    W = span(alg, [{NormalMonomial((), (), v): alg.field.one} for v in spare])
    ratios = [folner_subspace_ratio(a, W) for a in F]
    return FolnerWitness("B3a", W, ratios, Fraction(1), eps, N, {"spare": E.vids(spare)})


# ---------------------------------------------------------------- fixtures


def loop_graph() -> DirectedGraph:
    return DirectedGraph(["v"], [("e", "v", "v")])


def rose_graph(n: int = 2) -> DirectedGraph:
    return DirectedGraph(["v"], [(f"e{i}", "v", "v") for i in range(1, n + 1)])


def rose2_plus_point() -> DirectedGraph:
    return DirectedGraph(["v", "w"], [("e1", "v", "v"), ("e2", "v", "v")])


def path_graph(n: int = 3) -> DirectedGraph:
    vs = [f"v{i}" for i in range(1, n + 1)]
    return DirectedGraph(vs, [(f"a{i}", vs[i - 1], vs[i]) for i in range(1, n)])


def example57() -> DirectedGraph:
    """Loops y, z at w and an edge x from v to w."""
    return DirectedGraph(["v", "w"], [("x", "v", "w"), ("y", "w", "w"), ("z", "w", "w")])


def example58() -> DirectedGraph:
    """example57 with an extra loop t at v."""
    return DirectedGraph(["v", "w"], [("t", "v", "v"), ("x", "v", "w"), ("y", "w", "w"), ("z", "w", "w")])


def loop_to_rose() -> DirectedGraph:
    return DirectedGraph(["c", "u"], [("e", "c", "c"), ("f1", "u", "u"), ("f2", "u", "u"), ("g", "c", "u")])


def flagged_emitter() -> DirectedGraph:
    """A rose at u and a flagged infinite emitter w whose edges all land at u."""
    return DirectedGraph(
        ["u", "w"],
        [("e1", "u", "u"), ("e2", "u", "u"), ("h", "w", "u")],
        {"w": ["u"]},
    )


def figure_eight() -> DirectedGraph:
    return DirectedGraph(
        ["u", "a", "b"],
        [("p1", "u", "a"), ("p2", "a", "u"), ("q1", "u", "b"), ("q2", "b", "u")],
    )


GRAPH_FIXTURES = {
    "loop": loop_graph,
    "rose2": rose_graph,
    "rose2_plus_point": rose2_plus_point,
    "path3": path_graph,
    "example57": example57,
    "example58": example58,
    "loop_to_rose": loop_to_rose,
    "flagged_emitter": flagged_emitter,
    "figure_eight": figure_eight,
}


# ---------------------------------------------------------------- left/right fixture checks


def _paths_from(E: DirectedGraph, start: int, first_edge: int | None, count: int) -> list[tuple]:
    out = []
    layer = [(first_edge,)] if first_edge is not None else [()]
    while len(out) < count and layer:
        out += layer
        layer = sorted(p + (j,) for p in layer for j in E.out[E.path_end(start, p)])
    return out[:count]


def left_folner_fixture_check(name: str, field: Field = QQ, max_dim: int = 10, right_degree: int = 4, right_size: int = 3) -> dict:
    """Exact left Følner witnesses for the two quiver fixtures, plus sampled right-side evidence."""
    if name == "example57":
        E = example57()
    elif name == "example58":
        E = example58()
    else:
        raise ValueError(f"no left Følner check for {name!r}")
    A = path_algebra(E, field)
    v, w = E.vindex["v"], E.vindex["w"]
    report: dict = {"fixture": name, "field": field.name}
    if name == "example57":
        x = E.eindex["x"]
        F = [A.one] + [A.basis_element(k) for k in A.basis(3)]
        left = []
        for d in range(1, max_dim + 1):
            W = span(A, [{(v, p): field.one} for p in _paths_from(E, v, x, d)])
            ratios = {folner_subspace_ratio(a, W) for a in F}
            left.append({"dim": W.dim, "max_ratio": max(ratios), "min_ratio": min(ratios)})
        report["left"] = {"evidence": "proof", "F_size": len(F), "witnesses": left,
                          "ok": all(r["max_ratio"] == 1 for r in left)}
        gens = ["w", "y y", "y z", "z y", "z z", "x", "v"]
        Fr = [parse_element(A, g) for g in gens]
        keys = A.basis(right_degree)
        worst = None
        count = 0
        for size in range(1, right_size + 1):
            for subset in itertools.combinations(keys, size):
                W = span(A, [{k: field.one} for k in subset])
                r = span_variant_ratio(Fr, W, side="right")
                count += 1
                if worst is None or r < worst:
                    worst = r
        report["right"] = {
            "evidence": "heuristic-evidence",
            "F": gens,
            "truncation_degree": right_degree,
            "basis_size": len(keys),
            "subspaces_checked": count,
            "min_ratio": worst,
            "ok": worst is not None and worst >= 2,
        }
    else:
        t = A.basis_element((v, (E.eindex["t"],)))
        left = []
        for d in range(1, max_dim + 1):
            W = span(A, [{(v, (E.eindex["t"],) * k): field.one} for k in range(d)])
            left.append({"dim": W.dim, "ratio": folner_subspace_ratio(t, W)})
        report["left"] = {
            "evidence": "proof",
            "witnesses": left,
            "ok": all(r["ratio"] == Fraction(r["dim"] + 1, r["dim"]) for r in left),
        }
    report["ok"] = all(part["ok"] for key, part in report.items() if isinstance(part, dict))
    return report
