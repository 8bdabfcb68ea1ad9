"""Pure-Python bitmask kernels.

Every relation is a list of ints, one per node; bit ``j`` of ``rows[i]``
says that ``i`` is related to ``j``.  The compiled module ``_ckernels``
exposes the same functions with the same signatures.
"""


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def closure(n, rows):
    """Reflexive-transitive closure of ``rows`` (Warshall on bit rows)."""
    up = [rows[i] | (1 << i) for i in range(n)]
    for k in range(n):
        bit = 1 << k
        row_k = up[k]
        for i in range(n):
            if up[i] & bit:
                up[i] |= row_k
    return up


def find_cycle(n, up):
    """Return a pair ``(i, j)`` with i != j related both ways, or None."""
    for i in range(n):
        for j in _bits(up[i] & ~(1 << i)):
            if up[j] >> i & 1:
                return (i, j)
    return None


def reduction(n, up):
    """Upper-cover rows: the transitive reduction of the strict order."""
    strict = [up[i] & ~(1 << i) for i in range(n)]
    covers = []
    for i in range(n):
        cov = strict[i]
        for j in _bits(strict[i]):
            cov &= ~strict[j]
        covers.append(cov)
    return covers


def transpose(n, rows):
    out = [0] * n
    for i in range(n):
        for j in _bits(rows[i]):
            out[j] |= 1 << i
    return out


def heights(n, up, covers):
    """Longest cover path from a minimal node to each node."""
    down_size = [0] * n
    for i in range(n):
        for j in _bits(up[i]):
            down_size[j] += 1
    # x < y implies the down-set of x is strictly smaller, so this is a
    # linear extension
    order = sorted(range(n), key=down_size.__getitem__)
    h = [0] * n
    for i in order:
        hi = h[i] + 1
        for c in _bits(covers[i]):
            if h[c] < hi:
                h[c] = hi
    return h


def _refine(n, strict_up, strict_down):
    """Colour refinement; returns a canonical colour rank per node."""
    ranks = _rank(
        [(bin(strict_down[i]).count("1"), bin(strict_up[i]).count("1")) for i in range(n)]
    )
    n_colors = len(set(ranks))
    while True:
        sigs = []
        for i in range(n):
            above = [0] * n
            below = [0] * n
            for j in _bits(strict_up[i]):
                above[ranks[j]] += 1
            for j in _bits(strict_down[i]):
                below[ranks[j]] += 1
            sigs.append((ranks[i], tuple(above), tuple(below)))
        new = _rank(sigs)
        k = len(set(new))
        ranks = new
        if k == n_colors:
            return ranks
        n_colors = k


def _rank(items):
    table = {v: r for r, v in enumerate(sorted(set(items)))}
    return [table[v] for v in items]


def canonical_form(n, up):
    """Canonical code and node order of a poset given by its ``up`` rows.

    Nodes are placed colour-class by colour-class; inside a class every
    order is tried with prefix pruning, and twin nodes (same strict up-set
    and down-set) are tried only once per level because swapping them is
    an automorphism.  The code is the maximum, over admissible orders, of
    the bit string listing ``[p_j < p_k], [p_k < p_j]`` for ``k = 1..n-1``,
    ``j < k``.  Returns ``(code, order)`` with ``order[pos] = node``.
    """
    strict_up = [up[i] & ~(1 << i) for i in range(n)]
    strict_down = transpose(n, strict_up)
    ranks = _refine(n, strict_up, strict_down)
    slot_rank = sorted(ranks)

    total_bits = n * (n - 1)
    best = [-1]
    best_order = [None]
    order = []
    used = [False] * n

    def descend(k, code):
        if k == n:
            if code > best[0]:
                best[0] = code
                best_order[0] = list(order)
            return
        want = slot_rank[k]
        tried = []
        for v in range(n):
            if used[v] or ranks[v] != want:
                continue
            twin = False
            for t in tried:
                if strict_up[t] == strict_up[v] and strict_down[t] == strict_down[v]:
                    twin = True
                    break
            if twin:
                continue
            tried.append(v)
            c = code
            for j in range(k):
                u = order[j]
                c = (c << 2) | ((strict_up[u] >> v & 1) << 1) | (strict_up[v] >> u & 1)
            if best[0] >= 0 and c < best[0] >> (total_bits - k * (k + 1)):
                continue
            used[v] = True
            order.append(v)
            descend(k + 1, c)
            order.pop()
            used[v] = False

    descend(0, 0)
    return best[0], best_order[0]
