# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the functions in ``_kernels_py``.

Rows are packed into 64-bit words, so these kernels take posets of at most
``MAX_NODES`` nodes; ``canonical_form`` is limited to ``MAX_CANON`` nodes
because its code must fit in one word.  The dispatcher in ``kernels``
falls back to pure Python beyond those sizes.
"""

from libc.stdint cimport uint64_t
from libc.string cimport memset

cdef enum:
    CAP = 64
    CANON_CAP = 8

MAX_NODES = CAP
MAX_CANON = CANON_CAP


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


cdef inline int popcount(uint64_t x) nogil:
    return __builtin_popcountll(x)


cdef inline int _load(list rows, int n, uint64_t* out) except -1:
    cdef int i
    for i in range(n):
        out[i] = <uint64_t>rows[i]
    return 0


cdef inline list _store(int n, uint64_t* src):
    cdef int i
    return [src[i] for i in range(n)]


def closure(int n, rows):
    cdef uint64_t up[CAP]
    cdef int i, k
    cdef uint64_t bit, row_k
    _load(list(rows), n, up)
    for i in range(n):
        up[i] |= (<uint64_t>1) << i
    for k in range(n):
        bit = (<uint64_t>1) << k
        row_k = up[k]
        for i in range(n):
            if up[i] & bit:
                up[i] |= row_k
    return _store(n, up)


def find_cycle(int n, up_rows):
    cdef uint64_t up[CAP]
    cdef int i, j
    cdef uint64_t m
    _load(list(up_rows), n, up)
    for i in range(n):
        m = up[i] & ~((<uint64_t>1) << i)
        while m:
            j = __builtin_ctzll(m)
            m &= m - 1
            if (up[j] >> i) & 1:
                return (i, j)
    return None


def reduction(int n, up_rows):
    cdef uint64_t strict[CAP]
    cdef uint64_t cov[CAP]
    cdef int i, j
    cdef uint64_t m
    _load(list(up_rows), n, strict)
    for i in range(n):
        strict[i] &= ~((<uint64_t>1) << i)
    for i in range(n):
        cov[i] = strict[i]
        m = strict[i]
        while m:
            j = __builtin_ctzll(m)
            m &= m - 1
            cov[i] &= ~strict[j]
    return _store(n, cov)


def transpose(int n, rows):
    cdef uint64_t src[CAP]
    cdef uint64_t out[CAP]
    cdef int i, j
    cdef uint64_t m
    _load(list(rows), n, src)
    memset(out, 0, sizeof(out))
    for i in range(n):
        m = src[i]
        while m:
            j = __builtin_ctzll(m)
            m &= m - 1
            out[j] |= (<uint64_t>1) << i
    return _store(n, out)


def heights(int n, up_rows, cover_rows):
    cdef uint64_t up[CAP]
    cdef uint64_t cov[CAP]
    cdef int down_size[CAP]
    cdef int order[CAP]
    cdef int h[CAP]
    cdef int i, j, k, key, v, hi
    cdef uint64_t m
    _load(list(up_rows), n, up)
    _load(list(cover_rows), n, cov)
    for i in range(n):
        down_size[i] = 0
        h[i] = 0
    for i in range(n):
        m = up[i]
        while m:
            j = __builtin_ctzll(m)
            m &= m - 1
            down_size[j] += 1
    # stable insertion sort by down-set size
    for i in range(n):
        order[i] = i
    for i in range(1, n):
        v = order[i]
        key = down_size[v]
        k = i - 1
        while k >= 0 and down_size[order[k]] > key:
            order[k + 1] = order[k]
            k -= 1
        order[k + 1] = v
    for k in range(n):
        i = order[k]
        hi = h[i] + 1
        m = cov[i]
        while m:
            j = __builtin_ctzll(m)
            m &= m - 1
            if h[j] < hi:
                h[j] = hi
    return [h[i] for i in range(n)]


# --- canonical form -------------------------------------------------------

cdef struct Canon:
    int n
    int total_bits
    uint64_t sup[CANON_CAP]
    uint64_t sdown[CANON_CAP]
    int rank[CANON_CAP]
    int slot_rank[CANON_CAP]
    int order[CANON_CAP]
    int best_order[CANON_CAP]
    int used[CANON_CAP]
    uint64_t best
    int have_best


cdef inline int _row_cmp(int* sigs, int width, int a, int b) nogil:
    cdef int t
    for t in range(width):
        if sigs[a * width + t] != sigs[b * width + t]:
            return -1 if sigs[a * width + t] < sigs[b * width + t] else 1
    return 0


cdef int _dense_rank(int n, int* sigs, int width, int* out) nogil:
    """Dense rank of each row of ``sigs``; returns the number of ranks."""
    cdef int i, j, t, first
    cdef int n_distinct = 0
    for i in range(n):
        out[i] = 0
        for j in range(n):
            if _row_cmp(sigs, width, j, i) >= 0:
                continue
            first = 1
            for t in range(j):
                if _row_cmp(sigs, width, t, j) == 0:
                    first = 0
                    break
            out[i] += first
        if out[i] + 1 > n_distinct:
            n_distinct = out[i] + 1
    return n_distinct


cdef void _refine(Canon* cs) nogil:
    cdef int n = cs.n
    cdef int width = 2 * n + 1
    cdef int sigs[CANON_CAP * (2 * CANON_CAP + 1)]
    cdef int init[CANON_CAP * 2]
    cdef int newrank[CANON_CAP]
    cdef int i, j, k, n_colors
    cdef uint64_t m
    for i in range(n):
        init[2 * i] = popcount(cs.sdown[i])
        init[2 * i + 1] = popcount(cs.sup[i])
    n_colors = _dense_rank(n, init, 2, cs.rank)
    while True:
        for i in range(n * width):
            sigs[i] = 0
        for i in range(n):
            sigs[i * width] = cs.rank[i]
            m = cs.sup[i]
            while m:
                j = __builtin_ctzll(m)
                m &= m - 1
                sigs[i * width + 1 + cs.rank[j]] += 1
            m = cs.sdown[i]
            while m:
                j = __builtin_ctzll(m)
                m &= m - 1
                sigs[i * width + 1 + n + cs.rank[j]] += 1
        k = _dense_rank(n, sigs, width, newrank)
        for i in range(n):
            cs.rank[i] = newrank[i]
        if k == n_colors:
            return
        n_colors = k


cdef void _descend(Canon* cs, int k, uint64_t code) nogil:
    cdef int n = cs.n
    cdef int v, j, u, t, twin, want
    cdef int tried[CANON_CAP]
    cdef int n_tried = 0
    cdef uint64_t c
    if k == n:
        if not cs.have_best or code > cs.best:
            cs.best = code
            cs.have_best = 1
            for j in range(n):
                cs.best_order[j] = cs.order[j]
        return
    want = cs.slot_rank[k]
    for v in range(n):
        if cs.used[v] or cs.rank[v] != want:
            continue
        twin = 0
        for t in range(n_tried):
            u = tried[t]
            if cs.sup[u] == cs.sup[v] and cs.sdown[u] == cs.sdown[v]:
                twin = 1
                break
        if twin:
            continue
        tried[n_tried] = v
        n_tried += 1
        c = code
        for j in range(k):
            u = cs.order[j]
            c = (c << 2) | (((cs.sup[u] >> v) & 1) << 1) | ((cs.sup[v] >> u) & 1)
        if cs.have_best and c < (cs.best >> (cs.total_bits - k * (k + 1))):
            continue
        cs.used[v] = 1
        cs.order[k] = v
        _descend(cs, k + 1, c)
        cs.used[v] = 0


def canonical_form(int n, up_rows):
    cdef Canon cs
    cdef int i, j, v, k
    cdef uint64_t m
    cdef list rows = list(up_rows)
    if n > CANON_CAP:
        raise ValueError("canonical_form supports at most %d nodes" % CANON_CAP)
    cs.n = n
    cs.total_bits = n * (n - 1)
    cs.best = 0
    cs.have_best = 0
    for i in range(n):
        cs.sup[i] = (<uint64_t>rows[i]) & ~((<uint64_t>1) << i)
        cs.sdown[i] = 0
        cs.used[i] = 0
    for i in range(n):
        m = cs.sup[i]
        while m:
            j = __builtin_ctzll(m)
            m &= m - 1
            cs.sdown[j] |= (<uint64_t>1) << i
    _refine(&cs)
    # slot ranks: sorted copy of ranks
    for i in range(n):
        cs.slot_rank[i] = cs.rank[i]
    for i in range(1, n):
        v = cs.slot_rank[i]
        k = i - 1
        while k >= 0 and cs.slot_rank[k] > v:
            cs.slot_rank[k + 1] = cs.slot_rank[k]
            k -= 1
        cs.slot_rank[k + 1] = v
    _descend(&cs, 0, 0)
    return cs.best, [cs.best_order[i] for i in range(n)]
