"""Finite posets and their order-theoretic primitives.

A :class:`Poset` is immutable.  Nodes are identified by position
(``0 .. n-1``); labels are for presentation and file I/O.  The order is
stored as bitmask rows: bit ``j`` of ``up[i]`` is set iff ``i <= j``.
"""

import warnings
from functools import cached_property
from itertools import combinations

from . import kernels
from .errors import (
    CycleDetected,
    DuplicateLabel,
    EmptyPoset,
    EmptySelection,
    NonCoveringGenerator,
    RedundantGeneratorWarning,
    UnknownLabel,
)


def bits(mask):
    """Indices of the set bits of ``mask``, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def popcount(mask):
    return bin(mask).count("1")


class Poset:
    """A nonempty finite poset.

    Build one with :meth:`build` (labels plus order generators) or
    :meth:`from_up_rows` (labels plus an already closed order).
    """

    def __init__(self, labels, up):
        labels = tuple(labels)
        if not labels:
            raise EmptyPoset("a poset needs at least one node")
        self.labels = labels
        self.up = tuple(up)
        index = {}
        for i, lab in enumerate(labels):
            if lab in index:
                raise DuplicateLabel(f"duplicate label {lab!r}")
            index[lab] = i
        self._index = index

    # -- construction ---------------------------------------------------

    @classmethod
    def build(cls, labels, generators=(), strict_covers=False):
        """Poset generated by ``generators``, a list of ``(a, b)`` label pairs
        meaning ``a <= b``.

        Generator pairs that are not covers are accepted with a
        :class:`RedundantGeneratorWarning`, or rejected when
        ``strict_covers`` is set.
        """
        labels = tuple(labels)
        if not labels:
            raise EmptyPoset("a poset needs at least one node")
        index = {}
        for i, lab in enumerate(labels):
            if lab in index:
                raise DuplicateLabel(f"duplicate label {lab!r}")
            index[lab] = i
        n = len(labels)
        rows = [0] * n
        pairs = []
        for a, b in generators:
            for lab in (a, b):
                if lab not in index:
                    raise UnknownLabel(f"unknown label {lab!r}")
            i, j = index[a], index[b]
            rows[i] |= 1 << j
            pairs.append((i, j))
        up = kernels.closure(n, rows)
        cyc = kernels.find_cycle(n, up)
        if cyc is not None:
            a, b = labels[cyc[0]], labels[cyc[1]]
            raise CycleDetected(f"{a!r} and {b!r} lie on a cycle")
        poset = cls(labels, up)
        redundant = [
            (labels[i], labels[j]) for i, j in pairs if i != j and not poset.covers(i, j)
        ]
        if redundant:
            msg = "non-covering generator pairs: " + ", ".join(
                f"{a}<{b}" for a, b in redundant
            )
            if strict_covers:
                raise NonCoveringGenerator(msg)
            warnings.warn(msg, RedundantGeneratorWarning, stacklevel=2)
        return poset

    @classmethod
    def from_up_rows(cls, labels, up):
        return cls(labels, up)

    @classmethod
    def chain(cls, labels):
        labels = list(labels)
        return cls.build(labels, zip(labels, labels[1:]))

    @classmethod
    def antichain(cls, labels):
        return cls.build(list(labels), [])

    # -- basic structure ------------------------------------------------

    def __len__(self):
        return len(self.labels)

    @property
    def n(self):
        return len(self.labels)

    def __repr__(self):
        rels = " ".join(f"{a}<{b}" for a, b in self.cover_pairs(labels=True))
        return f"Poset([{' '.join(self.labels)}] {rels})"

    def __eq__(self, other):
        """Label-identical equality (same labels, same order)."""
        if not isinstance(other, Poset):
            return NotImplemented
        if set(self.labels) != set(other.labels):
            return False
        for a, b in combinations(self.labels, 2):
            if self.leq_label(a, b) != other.leq_label(a, b):
                return False
            if self.leq_label(b, a) != other.leq_label(b, a):
                return False
        return True

    def __hash__(self):
        return hash(frozenset(self.labels))

    def index(self, label):
        try:
            return self._index[label]
        except KeyError:
            raise UnknownLabel(f"unknown label {label!r}") from None

    def sort_ids(self, ids):
        """Node ids in label order."""
        return sorted(ids, key=self.labels.__getitem__)

    @cached_property
    def down(self):
        return tuple(kernels.transpose(self.n, self.up))

    @cached_property
    def cover_rows(self):
        """Bit rows of upper covers."""
        return tuple(kernels.reduction(self.n, self.up))

    @cached_property
    def lower_cover_rows(self):
        return tuple(kernels.transpose(self.n, self.cover_rows))

    @cached_property
    def heights(self):
        return tuple(kernels.heights(self.n, self.up, self.cover_rows))

    @property
    def leq_matrix(self):
        n = self.n
        return [[bool(self.up[i] >> j & 1) for j in range(n)] for i in range(n)]

    @property
    def covers_matrix(self):
        n = self.n
        return [[bool(self.cover_rows[i] >> j & 1) for j in range(n)] for i in range(n)]

    def cover_pairs(self, labels=False):
        """All covering pairs ``(x, y)`` with ``x <_c y``, sorted by label."""
        pairs = [(i, j) for i in range(self.n) for j in bits(self.cover_rows[i])]
        pairs.sort(key=lambda p: (self.labels[p[0]], self.labels[p[1]]))
        if labels:
            return [(self.labels[i], self.labels[j]) for i, j in pairs]
        return pairs

    # -- order queries ----------------------------------------------------

    def leq(self, x, y):
        return bool(self.up[x] >> y & 1)

    def lt(self, x, y):
        return x != y and bool(self.up[x] >> y & 1)

    def leq_label(self, a, b):
        return self.leq(self.index(a), self.index(b))

    def covers(self, x, y):
        """True iff ``y`` covers ``x`` (``x <_c y``)."""
        return bool(self.cover_rows[x] >> y & 1)

    def upper_covers(self, x):
        return self.sort_ids(bits(self.cover_rows[x]))

    def lower_covers(self, x):
        return self.sort_ids(bits(self.lower_cover_rows[x]))

    def height(self, x):
        return self.heights[x]

    @cached_property
    def dim(self):
        return max(self.heights)

    def minimals(self):
        return self.sort_ids(i for i in range(self.n) if self.down[i] == 1 << i)

    def maximals(self):
        return self.sort_ids(i for i in range(self.n) if self.up[i] == 1 << i)

    def nodes_at_height(self, k):
        return self.sort_ids(i for i in range(self.n) if self.heights[i] == k)

    # -- subposets --------------------------------------------------------

    def induced_subposet(self, ids):
        """Induced subposet on ``ids``; node order follows ``self``.

        The result keeps labels, and ``result.parent_ids[k]`` is the id in
        ``self`` of node ``k`` of the result.
        """
        keep = sorted(set(ids))
        if not keep:
            raise EmptySelection("cannot induce a subposet on no nodes")
        pos = {old: new for new, old in enumerate(keep)}
        up = []
        for old in keep:
            row = 0
            for j in bits(self.up[old]):
                if j in pos:
                    row |= 1 << pos[j]
            up.append(row)
        sub = Poset([self.labels[i] for i in keep], up)
        sub.parent_ids = tuple(keep)
        return sub

    def up_set(self, x):
        return self.induced_subposet(bits(self.up[x]))

    def up_dim(self, x):
        """``dim(up_set(x))``, the longest chain starting at ``x``."""
        return self.coheights[x]

    @cached_property
    def coheights(self):
        # heights of the dual order
        return tuple(kernels.heights(self.n, self.down, self.lower_cover_rows))

    def height_floor(self, k):
        keep = [i for i in range(self.n) if self.heights[i] >= k]
        if not keep:
            raise EmptySelection(f"no node has height >= {k}")
        return self.induced_subposet(keep)

    # -- subset predicates ------------------------------------------------

    def is_saturated_chain(self, chain):
        if not chain:
            raise EmptySelection("a chain must be nonempty")
        return all(self.covers(a, b) for a, b in zip(chain, chain[1:]))

    def is_complete_subset(self, subset):
        mask = 0
        for i in subset:
            mask |= 1 << i
        for u in subset:
            for v in subset:
                if self.leq(u, v):
                    between = self.up[u] & self.down[v]
                    if between & ~mask:
                        return False
        return True

    def is_saturated_subset(self, subset):
        sub = self.induced_subposet(subset)
        ids = sub.parent_ids
        return all(self.covers(ids[a], ids[b]) for a, b in sub.cover_pairs())

    # -- relabelling ------------------------------------------------------

    def relabel(self, mapping):
        """Same order, labels replaced through ``mapping`` (a dict or callable)."""
        f = mapping if callable(mapping) else mapping.__getitem__
        return Poset([f(lab) for lab in self.labels], self.up)

    def permuted(self, order):
        """Poset whose node ``k`` is node ``order[k]`` of ``self``."""
        pos = {old: new for new, old in enumerate(order)}
        up = []
        for old in order:
            row = 0
            for j in bits(self.up[old]):
                row |= 1 << pos[j]
            up.append(row)
        return Poset([self.labels[i] for i in order], up)

    # -- canonical form -----------------------------------------------------

    @cached_property
    def _canonical(self):
        return kernels.canonical_form(self.n, list(self.up))

    @property
    def canonical_code(self):
        """Isomorphism invariant: equal for two posets iff they are isomorphic."""
        return (self.n, self._canonical[0])

    def canonical(self, labels=None):
        """Canonical representative; nodes relabelled ``0..n-1`` unless
        ``labels`` is given."""
        order = self._canonical[1]
        p = self.permuted(order)
        if labels is None:
            labels = [str(k) for k in range(self.n)]
        return Poset(labels, p.up)


def node_profile(p, x):
    return (
        p.heights[x],
        popcount(p.lower_cover_rows[x]),
        popcount(p.cover_rows[x]),
        popcount(p.up[x]),
        popcount(p.down[x]),
    )


def is_isomorphic(p, q):
    """An isomorphism ``p -> q`` as a list (``f[x]`` = node of ``q``), or None.

    Backtracking search; candidates for each node are restricted to nodes of
    ``q`` with the same (height, lower-cover count, upper-cover count,
    up-set size, down-set size) profile.
    """
    if p.n != q.n:
        return None
    n = p.n
    prof_p = [node_profile(p, x) for x in range(n)]
    prof_q = [node_profile(q, y) for y in range(n)]
    if sorted(prof_p) != sorted(prof_q):
        return None
    if sorted(popcount(r) for r in p.cover_rows) != sorted(popcount(r) for r in q.cover_rows):
        return None
    # most constrained first
    counts = {}
    for pr in prof_q:
        counts[pr] = counts.get(pr, 0) + 1
    order = sorted(range(n), key=lambda x: (counts[prof_p[x]], prof_p[x], x))
    cands = [[y for y in range(n) if prof_q[y] == prof_p[x]] for x in range(n)]
    f = [-1] * n
    used = [False] * n

    def extend(k):
        if k == n:
            return True
        x = order[k]
        for y in cands[x]:
            if used[y]:
                continue
            ok = True
            for j in range(k):
                x2 = order[j]
                y2 = f[x2]
                if p.leq(x, x2) != q.leq(y, y2) or p.leq(x2, x) != q.leq(y2, y):
                    ok = False
                    break
            if not ok:
                continue
            f[x] = y
            used[y] = True
            if extend(k + 1):
                return True
            used[y] = False
            f[x] = -1
        return False

    if extend(0):
        return list(f)
    return None
