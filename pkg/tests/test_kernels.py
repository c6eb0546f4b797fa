import os

import pytest
from hypothesis import given
from hypothesis import strategies as st

from workbench import _pykernels, kernels
from workbench import oracle

compiled = kernels.IMPLEMENTATIONS.get("cython")
needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled kernels not built")


def test_backend_selected():
    assert kernels.BACKEND in kernels.IMPLEMENTATIONS
    forced = os.environ.get("WORKBENCH_KERNELS", "").lower() == "python"
    assert kernels.BACKEND == ("cython" if compiled is not None and not forced else "python")


@st.composite
def ball_masks(draw):
    n = draw(st.integers(1, 10))
    extra = draw(st.integers(0, 4))
    balls = []
    for i in range(n):
        m = draw(st.integers(0, (1 << (n + extra)) - 1)) | (1 << i)
        balls.append(m)
    return balls, n, draw(st.integers(1, n))


@needs_compiled
@given(ball_masks())
def test_scan_subsets_parity(data):
    balls, n, floor = data
    assert compiled.scan_subsets(list(balls), n, floor) == _pykernels.scan_subsets(list(balls), n, floor)


@st.composite
def bipartite(draw):
    nl = draw(st.integers(0, 12))
    nr = draw(st.integers(1, 12))
    adj = [sorted(draw(st.sets(st.integers(0, nr - 1), max_size=4))) for _ in range(nl)]
    indptr = [0]
    indices = []
    for row in adj:
        indices += row
        indptr.append(len(indices))
    return adj, indptr, indices, nl, nr


def _check_matching(adj, ml, mr):
    for u, v in enumerate(ml):
        if v >= 0:
            assert v in adj[u] and mr[v] == u
    return sum(1 for v in ml if v >= 0)


@given(bipartite())
def test_hopcroft_karp_is_maximum(data):
    adj, indptr, indices, nl, nr = data
    ml, mr = _pykernels.hopcroft_karp(indptr, indices, nl, nr)
    assert _check_matching(adj, ml, mr) == oracle.kuhn_matching(adj, nr)


@needs_compiled
@given(bipartite())
def test_hopcroft_karp_parity(data):
    adj, indptr, indices, nl, nr = data
    ml, mr = compiled.hopcroft_karp(indptr, indices, nl, nr)
    assert _check_matching(adj, ml, mr) == oracle.kuhn_matching(adj, nr)
    assert (list(ml), list(mr)) == tuple(map(list, _pykernels.hopcroft_karp(indptr, indices, nl, nr)))


@st.composite
def matrices(draw):
    p = draw(st.sampled_from([2, 3, 7, 101]))
    m = draw(st.integers(0, 6))
    n = draw(st.integers(1, 7))
    rows = [[draw(st.integers(0, p - 1)) for _ in range(n)] for _ in range(m)]
    return rows, p


@needs_compiled
@given(matrices())
def test_gfp_rref_parity(data):
    rows, p = data
    a = compiled.gfp_rref([list(r) for r in rows], p)
    b = _pykernels.gfp_rref([list(r) for r in rows], p)
    assert ([list(r) for r in a[0]], list(a[1])) == ([list(r) for r in b[0]], list(b[1]))


@given(matrices())
def test_gfp_rref_is_reduced(data):
    rows, p = data
    out, pivots = kernels.gfp_rref(rows, p)
    assert len(out) == len(pivots)
    for r, c in zip(out, pivots):
        assert r[c] % p == 1
        for other, c2 in zip(out, pivots):
            if other is not r:
                assert other[c] % p == 0
    assert pivots == sorted(pivots)


def test_scan_limit():
    with pytest.raises(ValueError):
        kernels.scan_subsets([1] * 30, 30)
