"""Poset maps and the hierarchy of properties they can have.

Each ``is_*`` predicate has a matching ``*_violation`` function returning
the first offending node pair (as labels, with a reason) or ``None``;
the CLI uses those for ``--explain``.
"""

from dataclasses import dataclass

from .core import Poset
from .errors import NonTotalMap, PreconditionFailed, UnknownLabel


@dataclass(frozen=True)
class PosetMap:
    dom: Poset
    cod: Poset
    assign: tuple

    def __post_init__(self):
        assign = tuple(self.assign)
        object.__setattr__(self, "assign", assign)
        if len(assign) != self.dom.n:
            raise NonTotalMap(f"map assigns {len(assign)} of {self.dom.n} nodes")
        for y in assign:
            if not 0 <= y < self.cod.n:
                raise NonTotalMap(f"target id {y} out of range")

    @classmethod
    def from_pairs(cls, dom, cod, pairs):
        """Map from ``(domain label, codomain label)`` pairs; must be total."""
        assign = [None] * dom.n
        for a, b in pairs:
            x = dom.index(a)
            y = cod.index(b)
            if assign[x] is not None:
                raise NonTotalMap(f"domain label {a!r} assigned twice")
            assign[x] = y
        missing = [dom.labels[x] for x in range(dom.n) if assign[x] is None]
        if missing:
            raise NonTotalMap("unassigned domain labels: " + " ".join(sorted(missing)))
        return cls(dom, cod, tuple(assign))

    @classmethod
    def by_label(cls, dom, cod):
        """Inclusion sending each node to the codomain node with its label."""
        try:
            return cls(dom, cod, tuple(cod.index(lab) for lab in dom.labels))
        except UnknownLabel as exc:
            raise NonTotalMap(str(exc)) from None

    @classmethod
    def identity(cls, p):
        return cls(p, p, tuple(range(p.n)))

    def __call__(self, x):
        return self.assign[x]

    def pairs(self):
        """``(domain label, codomain label)`` pairs in domain-label order."""
        return [
            (self.dom.labels[x], self.cod.labels[self.assign[x]])
            for x in self.dom.sort_ids(range(self.dom.n))
        ]

    def image(self):
        return self.cod.sort_ids(set(self.assign))


def _lab(f, x, y):
    return (f.dom.labels[x], f.dom.labels[y])


def map_violation(f):
    dom, cod, g = f.dom, f.cod, f.assign
    for x in range(dom.n):
        for y in range(dom.n):
            if dom.leq(x, y) and not cod.leq(g[x], g[y]):
                return ("order not preserved", _lab(f, x, y))
    return None


def embedding_violation(f):
    v = map_violation(f)
    if v:
        return v
    dom, cod, g = f.dom, f.cod, f.assign
    for x in range(dom.n):
        for y in range(dom.n):
            if cod.leq(g[x], g[y]) and not dom.leq(x, y):
                return ("order not reflected", _lab(f, x, y))
    return None


def saturated_violation(f):
    v = embedding_violation(f)
    if v:
        return v
    g = f.assign
    for x, y in f.dom.cover_pairs():
        if not f.cod.covers(g[x], g[y]):
            return ("cover not preserved", _lab(f, x, y))
    return None


def dimension_violation(f):
    v = saturated_violation(f)
    if v:
        return v
    if f.dom.dim != f.cod.dim:
        return (f"dimension {f.dom.dim} != {f.cod.dim}", ())
    return None


def coheight_violation(f, along=None):
    v = saturated_violation(f)
    if v:
        return v
    dom, cod = f.dom, f.cod
    targets = cod.minimals() if along is None else cod.sort_ids(along)
    for p in targets:
        pre = [x for x in range(dom.n) if f.assign[x] == p]
        want = cod.up_dim(p)
        if not any(dom.up_dim(x) == want for x in pre):
            got = max((dom.up_dim(x) for x in pre), default=None)
            return (
                f"coheight of {cod.labels[p]} is {want}, preimage up-set dim {got}",
                (cod.labels[p],),
            )
    return None


def is_poset_map(f):
    return map_violation(f) is None


def is_poset_embedding(f):
    return embedding_violation(f) is None


def is_saturated_embedding(f):
    return saturated_violation(f) is None


def is_dimension_preserving(f):
    return dimension_violation(f) is None


def is_coheight_preserving(f, along=None):
    """Saturated embedding such that every target ``p`` in ``along``
    (default: the codomain minimals) has a preimage whose up-set has the
    same dimension as the up-set of ``p``."""
    return coheight_violation(f, along) is None


def image_saturated_subset(f):
    if not is_saturated_embedding(f):
        raise PreconditionFailed("map is not a saturated embedding")
    return f.cod.is_saturated_subset(f.image())


PROPERTIES = {
    "map": map_violation,
    "embedding": embedding_violation,
    "saturated": saturated_violation,
    "dim": dimension_violation,
    "coheight": coheight_violation,
}
