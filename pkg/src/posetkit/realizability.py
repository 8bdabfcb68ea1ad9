"""Realizability conditions for spectra of Noetherian UFDs, and the
constructions used to reach them (add top/bottom, dim+1, extension).

The checkers certify the combinatorial conditions only:

* local: one minimal node, one maximal node, and (when ``dim >= 2``)
  every cover of a height-one node has height two;
* non-local: the same without the unique-maximal requirement.
"""

import json
from dataclasses import dataclass, field

from .core import Poset, bits
from .errors import DimensionTooSmall, NoUniqueMinimal
from .maps import PosetMap
from .surgery import fresh_label

MULTIPLE_MINIMAL = "MultipleMinimal"
MULTIPLE_MAXIMAL = "MultipleMaximal"
BAD_COVER = "BadCover"


@dataclass(frozen=True)
class Violation:
    kind: str
    nodes: tuple
    heights: tuple

    def to_dict(self):
        return {"kind": self.kind, "nodes": list(self.nodes), "heights": list(self.heights)}


@dataclass(frozen=True)
class RealizabilityReport:
    verdict: bool
    violations: tuple = ()

    def to_dict(self):
        return {
            "verdict": self.verdict,
            "violations": [v.to_dict() for v in self.violations],
        }

    def to_json(self, indent=None):
        return json.dumps(self.to_dict(), indent=indent, ensure_ascii=False)

    def bad_covers(self):
        return [v for v in self.violations if v.kind == BAD_COVER]


def _violation(p, kind, ids):
    return Violation(kind, tuple(p.labels[i] for i in ids), tuple(p.heights[i] for i in ids))


def bad_covers(p):
    """Covering pairs ``(x, y)`` with ``height(x) == 1`` and ``height(y) != 2``;
    empty when ``dim(p) < 2``."""
    if p.dim < 2:
        return []
    out = []
    for x in p.nodes_at_height(1):
        for y in p.upper_covers(x):
            if p.heights[y] != 2:
                out.append((x, y))
    return out


def _report(p, require_max):
    found = []
    mins = p.minimals()
    if len(mins) != 1:
        found.append(_violation(p, MULTIPLE_MINIMAL, mins))
    if require_max:
        maxs = p.maximals()
        if len(maxs) != 1:
            found.append(_violation(p, MULTIPLE_MAXIMAL, maxs))
    for x, y in bad_covers(p):
        found.append(_violation(p, BAD_COVER, (x, y)))
    return RealizabilityReport(not found, tuple(found))


def check_local_ufd(p):
    return _report(p, require_max=True)


def check_nonlocal_ufd(p):
    return _report(p, require_max=False)


@dataclass(frozen=True)
class Construction:
    """A constructed poset with the canonical inclusion of the input.

    ``extra`` carries intermediate objects of multi-stage constructions.
    """

    poset: Poset
    inclusion: PosetMap
    extra: dict = field(default_factory=dict)

    def __iter__(self):
        return iter((self.poset, self.inclusion))


def add_top(p, label="top"):
    lab = fresh_label(label, set(p.labels))
    n = p.n
    up = [row | 1 << n for row in p.up] + [1 << n]
    q = Poset(list(p.labels) + [lab], up)
    return Construction(q, PosetMap(p, q, tuple(range(n))))


def add_bottom(p, label="bottom"):
    lab = fresh_label(label, set(p.labels))
    n = p.n
    # bottom goes first so that it is node 0
    up = [(1 << (n + 1)) - 1] + [row << 1 for row in p.up]
    q = Poset([lab] + list(p.labels), up)
    return Construction(q, PosetMap(p, q, tuple(range(1, n + 1))))


def risky_minimals(p):
    """Minimal nodes covered by some node of height at least two."""
    return p.sort_ids(
        x for x in p.minimals() if any(p.heights[y] >= 2 for y in bits(p.cover_rows[x]))
    )


def _duplicate_below(p, nodes):
    """Add, for each node ``x`` in ``nodes``, a fresh node strictly below
    exactly the up-set of ``x``; duplicates are mutually incomparable.
    Returns the new poset and the ``(duplicate, original)`` label pairs."""
    taken = set(p.labels)
    labels = list(p.labels)
    up = list(p.up)
    pairs = []
    for x in nodes:
        lab = fresh_label(f"{p.labels[x]}'", taken)
        taken.add(lab)
        labels.append(lab)
        up.append((1 << len(up)) | p.up[x])
        pairs.append((lab, p.labels[x]))
    return Poset(labels, up), pairs


def dim_plus_one(p):
    """Duplicate every risky minimal below itself, then add a global bottom.

    The intermediate objects are kept in ``extra``: ``risky`` (labels),
    ``duplicates`` (``(copy, original)`` pairs) and ``widened`` (the poset
    before the bottom is added).
    """
    risky = risky_minimals(p)
    widened, pairs = _duplicate_below(p, risky)
    bottom = add_bottom(widened, label="z")
    inclusion = PosetMap(p, bottom.poset, tuple(bottom.inclusion.assign[i] for i in range(p.n)))
    extra = {
        "risky": tuple(p.labels[i] for i in risky),
        "duplicates": tuple(pairs),
        "widened": widened,
    }
    return Construction(bottom.poset, inclusion, extra)


def extension_poset(p):
    """Drop the unique minimal node and give each height-one node its own
    fresh minimal below it.

    Returns ``(extended, pairing)`` where ``pairing`` lists
    ``(new minimal, height-one node)`` label pairs.
    """
    mins = p.minimals()
    if len(mins) != 1:
        raise NoUniqueMinimal(f"{len(mins)} minimal nodes")
    if p.dim < 2:
        raise DimensionTooSmall(f"dimension {p.dim} < 2")
    floor = p.height_floor(1)
    ones = [floor.index(p.labels[x]) for x in p.nodes_at_height(1)]
    ext, pairs = _duplicate_below(floor, ones)
    return ext, pairs
