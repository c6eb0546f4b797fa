"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import random
import timeit

from workbench import _pykernels, kernels
from workbench.space import free_group, grid


def _balls(space, center, radius, R):
    pts = sorted(space.ball(center, radius))
    idx = {x: i for i, x in enumerate(pts)}
    extra = {}
    masks = []
    for x in pts:
        m = 0
        for y in space.ball(x, R):
            j = idx.get(y)
            if j is None:
                j = extra.setdefault(y, len(pts) + len(extra))
            m |= 1 << j
        masks.append(m)
    return masks, len(pts)


def _bipartite(n_left, n_right, degree, rng):
    indptr, indices = [0], []
    for _ in range(n_left):
        indices += sorted(rng.sample(range(n_right), degree))
        indptr.append(len(indices))
    return indptr, indices, n_left, n_right


def cases():
    rng = random.Random(0)
    Z2 = grid(2)
    F2 = free_group(2)
    balls, n = _balls(Z2, Z2.point((0, 0)), 2, 1)
    yield "scan_subsets Z² B_2 (13 pts)", "scan_subsets", (balls, n, 1)
    balls, n = _balls(F2, F2.point(()), 2, 1)
    yield "scan_subsets F2 B_2 (17 pts)", "scan_subsets", (balls, n, 1)
    yield "hopcroft_karp 2000x2000 deg 4", "hopcroft_karp", _bipartite(2000, 2000, 4, rng)
    rows = [[rng.randrange(7) for _ in range(120)] for _ in range(120)]
    yield "gfp_rref 120x120 over GF(7)", "gfp_rref", (rows, 7)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    compiled = kernels.IMPLEMENTATIONS.get("cython")
    if compiled is None:
        print("compiled kernels not built; only the Python timings are shown")
    print(f"{'case':34} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for label, fn, argv in cases():
        def call(mod):
            a = [list(x) if isinstance(x, list) else x for x in argv]
            if fn == "gfp_rref":
                a[0] = [list(r) for r in argv[0]]
            return getattr(mod, fn)(*a)

        py = min(timeit.repeat(lambda: call(_pykernels), number=1, repeat=args.repeat))
        if compiled is None:
            print(f"{label:34} {py:10.4f} {'-':>10} {'-':>8}")
            continue
        cy = min(timeit.repeat(lambda: call(compiled), number=1, repeat=args.repeat))
        print(f"{label:34} {py:10.4f} {cy:10.4f} {py / cy:7.1f}x")


if __name__ == "__main__":
    main()
