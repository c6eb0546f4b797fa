# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: subset scan, Hopcroft-Karp, dense GF(p) elimination."""

from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport malloc, free


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


cdef inline int popcount64(uint64_t x) noexcept nogil:
    return __builtin_popcountll(x)


def scan_subsets(list balls, int n, int min_size=1):
    if n > 26:
        raise ValueError("subset scan limited to 26 points")
    cdef int i, j, k, w, nb, inner, bnd, exc
    cdef int nwords = 1
    cdef object b
    for b in balls:
        while (b >> (64 * nwords)) != 0:
            nwords += 1
    cdef uint64_t full = (<uint64_t>1 << n) - 1
    cdef uint64_t *ball = <uint64_t *>malloc(n * nwords * sizeof(uint64_t))
    cdef char *outside = <char *>malloc(n)
    cdef uint64_t *local = <uint64_t *>malloc(n * sizeof(uint64_t))
    cdef long size = 1 << n
    cdef uint64_t *uni = <uint64_t *>malloc(size * nwords * sizeof(uint64_t))
    cdef unsigned char *pop = <unsigned char *>malloc(size)
    if not ball or not outside or not local or not uni or not pop:
        free(ball); free(outside); free(local); free(uni); free(pop)
        raise MemoryError()
    mask64 = (1 << 64) - 1
    for i in range(n):
        b = balls[i]
        for w in range(nwords):
            ball[i * nwords + w] = <uint64_t>((b >> (64 * w)) & mask64)
        outside[i] = 1 if (b >> n) != 0 else 0
        local[i] = ball[i * nwords] & full
    cdef long mask, prev, m, lb
    cdef long best_mask = 0, excess_mask = 0
    cdef long best_bnd = 0, best_k = 0
    cdef long min_excess = 0
    cdef bint have_excess = False
    for w in range(nwords):
        uni[w] = 0
    pop[0] = 0
    with nogil:
        for mask in range(1, size):
            i = __builtin_ctzll(<unsigned long long>mask)
            prev = mask ^ (<long>1 << i)
            nb = 0
            for w in range(nwords):
                uni[mask * nwords + w] = uni[prev * nwords + w] | ball[i * nwords + w]
                nb += popcount64(uni[mask * nwords + w])
            k = pop[prev] + 1
            pop[mask] = k
            exc = nb - 2 * k
            if not have_excess or exc < min_excess:
                min_excess = exc
                excess_mask = mask
                have_excess = True
            if k < min_size:
                continue
            inner = 0
            m = mask
            while m:
                j = __builtin_ctzll(<unsigned long long>m)
                if outside[j] or (local[j] & ~(<uint64_t>mask)):
                    inner += 1
                m &= m - 1
            bnd = (nb - k) + inner
            if best_mask == 0 or bnd * best_k < best_bnd * k or (bnd * best_k == best_bnd * k and k > best_k):
                best_mask = mask
                best_bnd = bnd
                best_k = k
    free(ball); free(outside); free(local); free(uni); free(pop)
    return best_mask, best_bnd, best_k, excess_mask, min_excess


def hopcroft_karp(indptr, indices, int n_left, int n_right):
    cdef int INF = n_left + n_right + 1
    cdef int *ip = <int *>malloc((n_left + 1) * sizeof(int))
    cdef int nidx = len(indices)
    cdef int *ix = <int *>malloc((nidx + 1) * sizeof(int))
    cdef int *ml = <int *>malloc((n_left + 1) * sizeof(int))
    cdef int *mr = <int *>malloc((n_right + 1) * sizeof(int))
    cdef int *dist = <int *>malloc((n_left + 1) * sizeof(int))
    cdef int *queue = <int *>malloc((n_left + 1) * sizeof(int))
    cdef int *ptr = <int *>malloc((n_left + 1) * sizeof(int))
    cdef int *stack = <int *>malloc((n_left + 1) * sizeof(int))
    if not (ip and ix and ml and mr and dist and queue and ptr and stack):
        free(ip); free(ix); free(ml); free(mr); free(dist); free(queue); free(ptr); free(stack)
        raise MemoryError()
    cdef int u, v, w, a, nxt, head, tail, found, root, top, kk
    cdef bint advanced
    for u in range(n_left + 1):
        ip[u] = indptr[u]
    for u in range(nidx):
        ix[u] = indices[u]
    for u in range(n_left):
        ml[u] = -1
    for v in range(n_right):
        mr[v] = -1
    with nogil:
        while True:
            head = 0
            tail = 0
            for u in range(n_left):
                if ml[u] < 0:
                    dist[u] = 0
                    queue[tail] = u
                    tail += 1
                else:
                    dist[u] = INF
            found = INF
            while head < tail:
                u = queue[head]
                head += 1
                if dist[u] >= found:
                    continue
                for kk in range(ip[u], ip[u + 1]):
                    w = mr[ix[kk]]
                    if w < 0:
                        if found == INF:
                            found = dist[u] + 1
                    elif dist[w] == INF:
                        dist[w] = dist[u] + 1
                        queue[tail] = w
                        tail += 1
            if found == INF:
                break
            for u in range(n_left):
                ptr[u] = ip[u]
            for root in range(n_left):
                if ml[root] >= 0:
                    continue
                top = 0
                stack[0] = root
                while top >= 0:
                    u = stack[top]
                    advanced = False
                    while ptr[u] < ip[u + 1]:
                        v = ix[ptr[u]]
                        w = mr[v]
                        if w < 0:
                            if dist[u] + 1 == found:
                                while top >= 0:
                                    a = stack[top]
                                    nxt = ml[a]
                                    ml[a] = v
                                    mr[v] = a
                                    v = nxt
                                    top -= 1
                                    if v < 0:
                                        break
                                top = -1
                                advanced = True
                                break
                            ptr[u] += 1
                        elif dist[w] == dist[u] + 1:
                            ptr[u] += 1
                            top += 1
                            stack[top] = w
                            advanced = True
                            break
                        else:
                            ptr[u] += 1
                    if not advanced and top >= 0:
                        dist[u] = INF
                        top -= 1
    out_l = [ml[u] for u in range(n_left)]
    out_r = [mr[v] for v in range(n_right)]
    free(ip); free(ix); free(ml); free(mr); free(dist); free(queue); free(ptr); free(stack)
    return out_l, out_r


def gfp_rref(list rows, long p):
    cdef int m = len(rows)
    cdef int ncols = len(rows[0]) if m else 0
    if m == 0 or ncols == 0:
        return [], []
    cdef int64_t *a = <int64_t *>malloc(m * ncols * sizeof(int64_t))
    if not a:
        raise MemoryError()
    cdef int i, j, c, r = 0, piv
    cdef int64_t inv, f, base, e, x
    for i in range(m):
        row = rows[i]
        for j in range(ncols):
            a[i * ncols + j] = row[j] % p
    pivots = []
    for c in range(ncols):
        piv = -1
        for i in range(r, m):
            if a[i * ncols + c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(ncols):
                x = a[r * ncols + j]
                a[r * ncols + j] = a[piv * ncols + j]
                a[piv * ncols + j] = x
        # inverse by Fermat
        inv = 1
        base = a[r * ncols + c]
        e = p - 2
        while e > 0:
            if e & 1:
                inv = inv * base % p
            base = base * base % p
            e >>= 1
        with nogil:
            for j in range(c, ncols):
                a[r * ncols + j] = a[r * ncols + j] * inv % p
            for i in range(m):
                if i != r:
                    f = a[i * ncols + c]
                    if f != 0:
                        for j in range(c, ncols):
                            a[i * ncols + j] = (a[i * ncols + j] - f * a[r * ncols + j]) % p
                            if a[i * ncols + j] < 0:
                                a[i * ncols + j] += p
        pivots.append(c)
        r += 1
        if r == m:
            break
    out = [[a[i * ncols + j] for j in range(ncols)] for i in range(r)]
    free(a)
    return out, pivots
