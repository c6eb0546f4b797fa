"""Locally finite extended metric spaces.

Distances are exact: a finite distance is an ``int`` or ``Fraction``; the
infinite distance is the enum member :data:`INF`, which absorbs addition and
compares above every finite value.

Two families of spaces exist. Finite spaces (``from_matrix``, ``from_graph``)
materialize every distance. Lazy spaces (``grid``, ``free_group``,
``trunked_free_group``) grow a breadth-first enumeration from a root on demand
and never enumerate globally; point ids are assigned in BFS order, so they are
reproducible between runs.

>>> Z = grid(1)
>>> sorted(Z.label(p) for p in Z.ball(Z.point((0,)), 2))
[(-2,), (-1,), (0,), (1,), (2,)]
"""

from __future__ import annotations

import enum
import threading
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Iterator, Sequence

from .errors import InvalidMetric, NonLocallyFinite

DEFAULT_CAP = 10**6


class Infinite(enum.Enum):
    INF = "inf"

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __str__(self):
        return "inf"


INF = Infinite.INF


def parse_distance(value) -> int | Fraction | Infinite:
    """Read a distance from JSON: an int, "p/q", "inf" or null."""
    if value is None or value is INF:
        return INF
    if isinstance(value, bool):
        raise ValueError(f"not a distance: {value!r}")
    if isinstance(value, int):
        d = value
    elif isinstance(value, Fraction):
        d = value
    elif isinstance(value, str):
        if value.strip().lower() in ("inf", "infinity", "∞"):
            return INF
        d = Fraction(value)
    else:
        raise ValueError(f"not an exact distance: {value!r}")
    if d < 0:
        raise ValueError(f"negative distance {value!r}")
    if isinstance(d, Fraction) and d.denominator == 1:
        return int(d)
    return d


def format_rational(q) -> str:
    if q is INF:
        return "inf"
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def _check_radius(R, *, positive=False):
    if R is INF:
        raise ValueError("radius must be finite")
    if R < 0 or (positive and R == 0):
        raise ValueError(f"radius must be {'positive' if positive else 'nonnegative'}, got {R}")


class MetricSpace:
    """Interface shared by all spaces. Points are nonnegative ints."""

    is_finite: bool = False
    cap: int = DEFAULT_CAP

    def dist(self, x: int, y: int):
        raise NotImplementedError

    def ball(self, x: int, R) -> frozenset[int]:
        raise NotImplementedError

    def label(self, x: int) -> Hashable:
        raise NotImplementedError

    def point(self, label: Hashable) -> int:
        raise NotImplementedError

    def component_key(self, x: int) -> Hashable:
        raise NotImplementedError

    def component_size(self, x: int) -> int | None:
        """Size of the coarse component of ``x``; None when it is infinite."""
        raise NotImplementedError

    def base_points(self) -> list[int]:
        """One distinguished point per builder part (roots of lazy parts)."""
        raise NotImplementedError

    def points(self) -> list[int]:
        raise TypeError("lazy spaces do not support global enumeration")

    def describe(self) -> dict:
        raise NotImplementedError


class FiniteSpace(MetricSpace):
    """A finite space with a fully materialized distance table."""

    is_finite = True

    def __init__(self, labels: Sequence[Hashable], table: list[list], descriptor: dict | None = None):
        self._labels = list(labels)
        self._ids = {lab: i for i, lab in enumerate(self._labels)}
        if len(self._ids) != len(self._labels):
            raise InvalidMetric("duplicate point labels")
        self._table = table
        self._descriptor = descriptor or {}
        comp = [-1] * len(self._labels)
        for i in range(len(comp)):
            if comp[i] < 0:
                for j, d in enumerate(table[i]):
                    if d is not INF:
                        comp[j] = i
        self._comp = comp
        self._comp_size: dict[int, int] = {}
        for c in comp:
            self._comp_size[c] = self._comp_size.get(c, 0) + 1

    def __len__(self):
        return len(self._labels)

    def dist(self, x, y):
        return self._table[x][y]

    def ball(self, x, R):
        _check_radius(R)
        return frozenset(y for y, d in enumerate(self._table[x]) if d is not INF and d <= R)

    def label(self, x):
        return self._labels[x]

    def point(self, label):
        return self._ids[label]

    def component_key(self, x):
        return self._comp[x]

    def component_size(self, x):
        return self._comp_size[self._comp[x]]

    def base_points(self):
        return sorted(set(self._comp))

    def points(self):
        return list(range(len(self._labels)))

    def describe(self):
        return dict(self._descriptor)


def validate_metric(table: list[list]) -> None:
    """Raise InvalidMetric naming a violating triple (or pair)."""
    n = len(table)
    for row in table:
        if len(row) != n:
            raise InvalidMetric("distance matrix is not square")
    for x in range(n):
        if table[x][x] != 0:
            raise InvalidMetric(f"d({x},{x}) != 0", (x, x, x))
        for y in range(n):
            if table[x][y] != table[y][x]:
                raise InvalidMetric(f"d({x},{y}) != d({y},{x})", (x, y, y))
            if x != y and table[x][y] == 0:
                raise InvalidMetric(f"d({x},{y}) = 0 for distinct points", (x, y, y))
    for x in range(n):
        for y in range(n):
            dxy = table[x][y]
            if dxy is INF:
                continue
            for z in range(n):
                if table[x][z] > dxy + table[y][z]:
                    raise InvalidMetric(f"triangle inequality fails for ({x},{y},{z})", (x, y, z))


def from_matrix(matrix: Sequence[Sequence], labels: Sequence[Hashable] | None = None) -> FiniteSpace:
    table = [[parse_distance(v) for v in row] for row in matrix]
    validate_metric(table)
    labels = list(labels) if labels is not None else list(range(len(table)))
    desc = {
        "kind": "matrix",
        "labels": labels,
        "distances": [[format_rational(d) for d in row] for row in table],
    }
    return FiniteSpace(labels, table, desc)


def from_graph(vertices: Sequence[Hashable], edges: Iterable[tuple]) -> FiniteSpace:
    """Unweighted shortest-path metric; disconnected pairs are at distance INF."""
    vertices = list(vertices)
    index = {v: i for i, v in enumerate(vertices)}
    adj: list[list[int]] = [[] for _ in vertices]
    edge_list = []
    for a, b in edges:
        i, j = index[a], index[b]
        if i != j:
            adj[i].append(j)
            adj[j].append(i)
        edge_list.append([a, b])
    table = []
    for s in range(len(vertices)):
        row: list = [INF] * len(vertices)
        row[s] = 0
        q = deque([s])
        while q:
            u = q.popleft()
            for w in adj[u]:
                if row[w] is INF:
                    row[w] = row[u] + 1
                    q.append(w)
        table.append(row)
    desc = {"kind": "graph", "vertices": vertices, "edges": edge_list}
    return FiniteSpace(vertices, table, desc)


class LazyGraphSpace(MetricSpace):
    """Connected, locally finite graph explored breadth-first from a root.

    ``neighbors(label)`` must be deterministic. ``distance`` and ``depth`` are
    optional closed forms; without them distances come from bounded BFS.
    """

    is_finite = False

    def __init__(
        self,
        root: Hashable,
        neighbors: Callable[[Hashable], Iterable[Hashable]],
        cap: int = DEFAULT_CAP,
        distance: Callable[[Hashable, Hashable], int] | None = None,
        depth: Callable[[Hashable], int] | None = None,
        descriptor: dict | None = None,
    ):
        if cap <= 0:
            raise ValueError("cap must be positive")
        self.cap = cap
        self._neighbors = neighbors
        self._distance = distance
        self._depth_fn = depth
        self._descriptor = descriptor or {}
        self._ids: dict[Hashable, int] = {root: 0}
        self._labels: list[Hashable] = [root]
        self._depth: list[int] = [0]
        self._adj: list[tuple[int, ...]] = []
        self._layer_start = [0]
        self._lock = threading.Lock()

    @property
    def materialized(self) -> int:
        return len(self._labels)

    def _grow(self, depth: int) -> None:
        # layer k+1 is generated while expanding layer k, so after this call
        # every point at depth < `depth` has its adjacency recorded.
        if len(self._layer_start) > depth:
            return
        with self._lock:
            while len(self._layer_start) <= depth:
                start, end = self._layer_start[-1], len(self._labels)
                d = len(self._layer_start)
                for i in range(start, end):
                    nbrs = []
                    for lab in self._neighbors(self._labels[i]):
                        j = self._ids.get(lab)
                        if j is None:
                            j = len(self._labels)
                            if j >= self.cap:
                                raise NonLocallyFinite(
                                    f"enumeration exceeded the cap of {self.cap} points"
                                )
                            self._ids[lab] = j
                            self._labels.append(lab)
                            self._depth.append(d)
                        nbrs.append(j)
                    self._adj.append(tuple(nbrs))
                self._layer_start.append(end)

    def label(self, x):
        return self._labels[x]

    def point(self, label):
        j = self._ids.get(label)
        if j is not None:
            return j
        if self._depth_fn is not None:
            self._grow(self._depth_fn(label) + 1)
            return self._ids[label]
        while label not in self._ids:
            self._grow(len(self._layer_start) + 1)
        return self._ids[label]

    def depth(self, x: int) -> int:
        return self._depth[x]

    def ball(self, x, R):
        _check_radius(R)
        r = int(R)  # graph distances are integers
        self._grow(self._depth[x] + r + 1)
        seen = {x}
        frontier = [x]
        for _ in range(r):
            nxt = []
            for u in frontier:
                for w in self._adj[u]:
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
            if len(seen) > self.cap:
                raise NonLocallyFinite(f"ball exceeded the cap of {self.cap} points")
            frontier = nxt
        return frozenset(seen)

    def dist(self, x, y):
        if x == y:
            return 0
        if self._distance is not None:
            return self._distance(self._labels[x], self._labels[y])
        limit = self._depth[x] + self._depth[y]
        self._grow(self._depth[x] + limit + 1)
        seen = {x}
        frontier = [x]
        for d in range(1, limit + 1):
            nxt = []
            for u in frontier:
                for w in self._adj[u]:
                    if w == y:
                        return d
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
            frontier = nxt
        raise AssertionError("connected lazy graph lost a path")

    def component_key(self, x):
        return 0

    def component_size(self, x):
        return None

    def base_points(self):
        return [0]

    def describe(self):
        return dict(self._descriptor)


def grid(d: int, cap: int = DEFAULT_CAP) -> LazyGraphSpace:
    """Z^d with the word metric of the standard generators (the L1 metric)."""
    if d < 1:
        raise ValueError("dimension must be at least 1")

    def neighbors(p):
        for i in range(d):
            for s in (1, -1):
                q = list(p)
                q[i] += s
                yield tuple(q)

    def distance(p, q):
        return sum(abs(a - b) for a, b in zip(p, q))

    return LazyGraphSpace(
        (0,) * d,
        neighbors,
        cap,
        distance=distance,
        depth=lambda p: sum(abs(a) for a in p),
        descriptor={"kind": "grid", "dim": d, "cap": cap},
    )


def reduce_word(word: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for a in word:
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


def word_inverse(word: Sequence[int]) -> tuple[int, ...]:
    return tuple(-a for a in reversed(word))


def _free_neighbors(rank: int):
    letters = [s for i in range(1, rank + 1) for s in (i, -i)]

    def neighbors(w):
        # edges x ~ s*x: left multiplication by a generator
        for s in letters:
            if w and w[0] == -s:
                yield w[1:]
            else:
                yield (s,) + w

    return neighbors


def free_word_distance(x: Sequence[int], y: Sequence[int]) -> int:
    """|x y^-1| for reduced words: total length minus twice the common suffix."""
    k = 0
    while k < len(x) and k < len(y) and x[-1 - k] == y[-1 - k]:
        k += 1
    return len(x) + len(y) - 2 * k


def free_group(rank: int = 2, cap: int = DEFAULT_CAP) -> LazyGraphSpace:
    """Cayley graph of the free group; letters are ±1..±rank, edges x ~ s·x."""
    if rank < 1:
        raise ValueError("rank must be at least 1")
    return LazyGraphSpace(
        (),
        _free_neighbors(rank),
        cap,
        distance=free_word_distance,
        depth=len,
        descriptor={"kind": "free_group", "rank": rank, "cap": cap},
    )


def _trunked_component(n: int, rank: int, cap: int) -> LazyGraphSpace:
    # labels: ("w", word) for tree vertices, ("t", i) for trunk vertex v_i;
    # v_i ~ v_{i+1} and v_n ~ e.
    tree_nb = _free_neighbors(rank)

    def neighbors(lab):
        kind, val = lab
        if kind == "w":
            for w in tree_nb(val):
                yield ("w", w)
            if val == () and n > 0:
                yield ("t", n)
        else:
            if val < n:
                yield ("t", val + 1)
            else:
                yield ("w", ())
            if val > 1:
                yield ("t", val - 1)

    def height(lab):
        kind, val = lab
        return len(val) if kind == "w" else n - val + 1

    def distance(a, b):
        if a[0] == "w" and b[0] == "w":
            return free_word_distance(a[1], b[1])
        if a[0] == "t" and b[0] == "t":
            return abs(a[1] - b[1])
        return height(a) + height(b)

    return LazyGraphSpace(
        ("w", ()),
        neighbors,
        cap,
        distance=distance,
        depth=height,
        descriptor={"kind": "trunked_component", "trunk": n, "rank": rank},
    )


class DisjointUnion(MetricSpace):
    """Parts at mutual distance INF; point id = local_id * len(parts) + part index."""

    def __init__(self, parts: Sequence[MetricSpace], descriptor: dict | None = None):
        if not parts:
            raise ValueError("disjoint union of no spaces")
        self.parts = list(parts)
        self._m = len(self.parts)
        self.is_finite = all(p.is_finite for p in self.parts)
        self.cap = min(p.cap for p in self.parts)
        self._descriptor = descriptor or {
            "kind": "disjoint_union",
            "parts": [p.describe() for p in self.parts],
        }

    def split(self, x: int) -> tuple[int, int]:
        """(part index, local id)."""
        return x % self._m, x // self._m

    def join(self, part: int, local: int) -> int:
        return local * self._m + part

    def dist(self, x, y):
        (i, a), (j, b) = self.split(x), self.split(y)
        if i != j:
            return INF
        return self.parts[i].dist(a, b)

    def ball(self, x, R):
        i, a = self.split(x)
        return frozenset(self.join(i, b) for b in self.parts[i].ball(a, R))

    def label(self, x):
        i, a = self.split(x)
        return (i, self.parts[i].label(a))

    def point(self, label):
        i, lab = label
        return self.join(i, self.parts[i].point(lab))

    def component_key(self, x):
        i, a = self.split(x)
        return (i, self.parts[i].component_key(a))

    def component_size(self, x):
        i, a = self.split(x)
        return self.parts[i].component_size(a)

    def base_points(self):
        return [self.join(i, b) for i, p in enumerate(self.parts) for b in p.base_points()]

    def points(self):
        if not self.is_finite:
            raise TypeError("lazy spaces do not support global enumeration")
        return sorted(self.join(i, b) for i, p in enumerate(self.parts) for b in p.points())

    def describe(self):
        return dict(self._descriptor)


def disjoint_union(spaces: Sequence[MetricSpace]) -> DisjointUnion:
    return DisjointUnion(spaces)


def trunked_free_group(n_list: Sequence[int], cap: int = DEFAULT_CAP, rank: int = 2) -> DisjointUnion:
    """One free-group Cayley graph per entry of ``n_list``, each with a trunk of that length."""
    if not n_list:
        raise ValueError("need at least one component")
    if any(n < 0 for n in n_list):
        raise ValueError("trunk lengths must be nonnegative")
    parts = [_trunked_component(n, rank, cap) for n in n_list]
    desc = {"kind": "trunked_free_group", "trunks": list(n_list), "rank": rank, "cap": cap}
    return DisjointUnion(parts, desc)


# ---------------------------------------------------------------- windows


@dataclass(frozen=True)
class Window:
    """A finite subset of a space, with access to the ambient metric."""

    ambient: MetricSpace
    members: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))

    def __contains__(self, x):
        return x in self.members

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.members))

    def __len__(self):
        return len(self.members)

    def inner(self, margin) -> frozenset[int]:
        """N^-_m(W): members whose closed m-ball stays inside the window."""
        return frozenset(x for x in self.members if self.ambient.ball(x, margin) <= self.members)

    def sub(self, members: Iterable[int]) -> "Window":
        members = frozenset(members)
        if not members <= self.members:
            raise ValueError("sub-window must be contained in the window")
        return Window(self.ambient, members)


def ball_window(space: MetricSpace, center: int, radius) -> Window:
    return Window(space, space.ball(center, radius))


def whole_space(space: MetricSpace) -> Window:
    return Window(space, frozenset(space.points()))


def base_window(space: MetricSpace, radius) -> Window:
    """Union of balls around every base point (one per builder part)."""
    pts: set[int] = set()
    for b in space.base_points():
        pts |= space.ball(b, radius)
    return Window(space, frozenset(pts))


# ---------------------------------------------------------------- boundaries


def ball(space: MetricSpace, x: int, R) -> frozenset[int]:
    return space.ball(x, R)


def neighborhood(space: MetricSpace, A: Iterable[int], R) -> frozenset[int]:
    _check_radius(R)
    out: set[int] = set()
    for a in A:
        out |= space.ball(a, R)
    return frozenset(out)


def outer_boundary(space: MetricSpace, A: Iterable[int], R) -> frozenset[int]:
    A = frozenset(A)
    _check_radius(R, positive=True)
    return neighborhood(space, A, R) - A


def inner_boundary(space: MetricSpace, A: Iterable[int], R) -> frozenset[int]:
    A = frozenset(A)
    _check_radius(R, positive=True)
    return frozenset(x for x in A if not space.ball(x, R) <= A)


def distance_to_set(space: MetricSpace, x: int, A: Iterable[int]):
    best = INF
    for a in A:
        d = space.dist(x, a)
        if d < best:
            best = d
    return best


def boundary(space: MetricSpace, A: Iterable[int], R) -> frozenset[int]:
    """{x : d(x,A) <= R and d(x, X \\ A) <= R}, evaluated through distances."""
    A = frozenset(A)
    _check_radius(R, positive=True)
    out = set()
    for x in neighborhood(space, A, R):
        if distance_to_set(space, x, A) > R:
            continue
        if x not in A:
            out.add(x)  # d(x, X \ A) = 0
            continue
        # d(x, X \ A) <= R iff the R-ball meets the complement
        if any(space.dist(x, y) <= R for y in space.ball(x, R) if y not in A):
            out.add(x)
    return frozenset(out)


def coarse_components(window: Window) -> list[frozenset[int]]:
    """Partition a window by finiteness of distance, ordered by least member."""
    groups: dict[Hashable, set[int]] = {}
    for x in window:
        groups.setdefault(window.ambient.component_key(x), set()).add(x)
    return sorted((frozenset(g) for g in groups.values()), key=min)


# ---------------------------------------------------------------- JSON


def space_from_json(obj: dict) -> MetricSpace:
    kind = obj.get("kind")
    cap = int(obj.get("cap", DEFAULT_CAP))
    if kind == "matrix":
        return from_matrix(obj["distances"], obj.get("labels"))
    if kind == "graph":
        edges = [tuple(e) if not isinstance(e, dict) else (e["src"], e["rng"]) for e in obj["edges"]]
        return from_graph(obj["vertices"], edges)
    if kind == "grid":
        return grid(int(obj["dim"]), cap)
    if kind == "free_group":
        return free_group(int(obj.get("rank", 2)), cap)
    if kind == "disjoint_union":
        return disjoint_union([space_from_json(p) for p in obj["parts"]])
    if kind == "trunked_free_group":
        return trunked_free_group([int(n) for n in obj["trunks"]], cap, int(obj.get("rank", 2)))
    raise ValueError(f"unknown space kind {kind!r}")
