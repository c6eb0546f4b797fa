"""Pure-Python kernels. Same signatures and results as the compiled module."""

from __future__ import annotations

from collections import deque


def scan_subsets(balls: list[int], n: int, min_size: int = 1):
    """Scan every nonempty subset F of a window of n points.

    ``balls[i]`` is a bitmask over a universe whose first n bits are the
    window; it holds the closed R-ball of window point i. Returns
    ``(best_mask, best_boundary, best_size, excess_mask, min_excess)`` where
    the best subset minimizes |∂F|/|F| among |F| >= min_size (ties: larger
    F, then smaller mask) and the excess is |N(F)| - 2|F| (ties: smaller
    mask). best_mask is 0 when no subset meets the size floor.
    """
    full = (1 << n) - 1
    outside = [b >> n != 0 for b in balls]
    local = [b & full for b in balls]
    size = 1 << n
    union = [0] * size
    pop = [0] * size
    best = (0, 0, 0)
    excess_mask, min_excess = 0, None
    for mask in range(1, size):
        low = mask & -mask
        i = low.bit_length() - 1
        prev = mask ^ low
        u = union[prev] | balls[i]
        union[mask] = u
        k = pop[prev] + 1
        pop[mask] = k
        nb = bin(u).count("1")
        exc = nb - 2 * k
        if min_excess is None or exc < min_excess:
            min_excess, excess_mask = exc, mask
        if k < min_size:
            continue
        inner = 0
        m = mask
        while m:
            lb = m & -m
            j = lb.bit_length() - 1
            if outside[j] or local[j] & ~mask:
                inner += 1
            m ^= lb
        bnd = (nb - k) + inner
        bm, bb, bk = best
        if bm == 0 or bnd * bk < bb * k or (bnd * bk == bb * k and k > bk):
            best = (mask, bnd, k)
    return best[0], best[1], best[2], excess_mask, (min_excess if min_excess is not None else 0)


def hopcroft_karp(indptr: list[int], indices: list[int], n_left: int, n_right: int):
    """Maximum matching in a bipartite graph given in CSR form (left -> right).

    Returns (match_left, match_right) with -1 marking unmatched vertices.
    """
    INF = n_left + n_right + 1
    ml = [-1] * n_left
    mr = [-1] * n_right
    dist = [0] * n_left
    while True:
        q = deque()
        for u in range(n_left):
            if ml[u] < 0:
                dist[u] = 0
                q.append(u)
            else:
                dist[u] = INF
        found = INF
        while q:
            u = q.popleft()
            if dist[u] >= found:
                continue
            for k in range(indptr[u], indptr[u + 1]):
                w = mr[indices[k]]
                if w < 0:
                    if found == INF:
                        found = dist[u] + 1
                elif dist[w] == INF:
                    dist[w] = dist[u] + 1
                    q.append(w)
        if found == INF:
            break
        ptr = [indptr[u] for u in range(n_left)]
        for root in range(n_left):
            if ml[root] >= 0:
                continue
            # iterative DFS along the layered graph
            stack = [root]
            while stack:
                u = stack[-1]
                advanced = False
                while ptr[u] < indptr[u + 1]:
                    v = indices[ptr[u]]
                    w = mr[v]
                    if w < 0:
                        if dist[u] + 1 == found:
                            # augment along the stack
                            for a in reversed(stack):
                                nxt = ml[a]
                                ml[a] = v
                                mr[v] = a
                                v = nxt
                                if v < 0:
                                    break
                            stack = []
                            advanced = True
                            break
                        ptr[u] += 1
                    elif dist[w] == dist[u] + 1:
                        ptr[u] += 1
                        stack.append(w)
                        advanced = True
                        break
                    else:
                        ptr[u] += 1
                if not advanced and stack:
                    dist[u] = INF
                    stack.pop()
    return ml, mr


def gfp_rref(rows: list[list[int]], p: int):
    """Reduced row echelon form over GF(p) of a dense matrix (modified in place).

    Returns (rows, pivots): the nonzero reduced rows and their pivot columns.
    """
    m = len(rows)
    ncols = len(rows[0]) if m else 0
    r = 0
    pivots = []
    for c in range(ncols):
        piv = -1
        for i in range(r, m):
            if rows[i][c] % p:
                piv = i
                break
        if piv < 0:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        row = rows[r]
        inv = pow(row[c], p - 2, p)
        for j in range(c, ncols):
            row[j] = row[j] * inv % p
        for i in range(m):
            if i != r:
                f = rows[i][c] % p
                if f:
                    other = rows[i]
                    for j in range(c, ncols):
                        other[j] = (other[j] - f * row[j]) % p
        pivots.append(c)
        r += 1
        if r == m:
            break
    return rows[:r], pivots
