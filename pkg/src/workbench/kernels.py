"""Hot kernels, compiled when available.

The compiled module is preferred; set ``WORKBENCH_KERNELS=python`` to force
the pure-Python implementations. Both expose identical functions, and the
test-suite runs them side by side.
"""

from __future__ import annotations

import os

from . import _pykernels

try:  # pragma: no cover - depends on the build
    from . import _ckernels
except ImportError:  # pragma: no cover
    _ckernels = None

IMPLEMENTATIONS = {"python": _pykernels}
if _ckernels is not None:
    IMPLEMENTATIONS["cython"] = _ckernels

if os.environ.get("WORKBENCH_KERNELS", "").lower() == "python" or _ckernels is None:
    BACKEND = "python"
else:
    BACKEND = "cython"

_impl = IMPLEMENTATIONS[BACKEND]

SCAN_LIMIT = 26
GFP_LIMIT = 2**31


def scan_subsets(balls: list[int], n: int, min_size: int = 1):
    if n > SCAN_LIMIT:
        raise ValueError(f"subset scan limited to {SCAN_LIMIT} points")
    if n == 0:
        return 0, 0, 0, 0, 0
    return _impl.scan_subsets(list(balls), n, min_size)


def hopcroft_karp(indptr, indices, n_left: int, n_right: int):
    return _impl.hopcroft_karp(list(indptr), list(indices), n_left, n_right)


def gfp_rref(rows: list[list[int]], p: int):
    if p >= GFP_LIMIT:
        return _pykernels.gfp_rref([list(r) for r in rows], p)
    return _impl.gfp_rref([list(r) for r in rows], p)
