"""Gluing, height-zero splitting, retraction, and reduction to a point."""

from dataclasses import dataclass, field

from . import kernels
from .core import Poset, bits, is_isomorphic, popcount
from .errors import (
    EmptySelection,
    FewerThanTwoCovers,
    NoUniqueMaximal,
    NotCompleteSubset,
    NotMinimal,
    NotSimpleNode,
    QuotientNotAntisymmetric,
    ZeroDimensional,
)
from .maps import PosetMap


def fresh_label(base, taken):
    lab = base
    while lab in taken:
        lab += "'"
    return lab


def _mask(ids):
    m = 0
    for i in ids:
        m |= 1 << i
    return m


@dataclass(frozen=True)
class GluingResult:
    source: Poset
    quotient: Poset
    map: PosetMap
    glued: tuple

    @property
    def glued_node(self):
        return self.map.assign[self.glued[0]]


def glue(x, glued):
    """Identify the complete subset ``glued`` of ``x`` to a single node.

    For ``u, v`` outside the glued set, ``u <= v`` in the quotient iff
    ``u <= v`` in ``x`` or ``u`` lies below and ``v`` above some glued
    node.  The glued class is labelled by its members' sorted labels joined
    with ``+`` and sits where its first member sat.
    """
    glued = x.sort_ids(set(glued))
    if not glued:
        raise EmptySelection("cannot glue along an empty set")
    if not x.is_complete_subset(glued):
        raise NotCompleteSubset(
            "not a complete subset: " + " ".join(x.labels[i] for i in glued)
        )
    cmask = _mask(glued)
    below = 0  # nodes <= some glued node
    above = 0  # nodes >= some glued node
    for s in glued:
        below |= x.down[s]
        above |= x.up[s]

    first = min(glued)
    keep = [i for i in range(x.n) if not cmask >> i & 1 or i == first]
    pos = {old: new for new, old in enumerate(keep)}
    star = pos[first]
    assign = tuple(star if cmask >> i & 1 else pos[i] for i in range(x.n))

    def project(mask):
        out = 0
        for j in bits(mask):
            out |= 1 << assign[j]
        return out

    up = []
    for old in keep:
        if old == first:
            up.append(project(above))
        elif below >> old & 1:
            up.append(project(x.up[old] | above))
        else:
            up.append(project(x.up[old]))
    n = len(keep)
    if list(kernels.closure(n, up)) != up:
        raise QuotientNotAntisymmetric("glued relation is not transitive")
    if kernels.find_cycle(n, up) is not None:
        raise QuotientNotAntisymmetric("glued relation is not antisymmetric")

    if len(glued) == 1:
        star_label = x.labels[first]
    else:
        others = {x.labels[i] for i in range(x.n) if not cmask >> i & 1}
        star_label = fresh_label("+".join(sorted(x.labels[i] for i in glued)), others)
    labels = [star_label if old == first else x.labels[old] for old in keep]
    y = Poset(labels, up)
    return GluingResult(x, y, PosetMap(x, y, assign), tuple(glued))


def verify_gluing(x, glued, y, g):
    """Check that ``g: x -> y`` is a gluing of ``x`` along ``glued``.

    ``g`` may be a :class:`PosetMap` or a sequence of target ids.  Checks
    surjectivity, constancy on the glued set, injectivity off it, and
    ``g(a) <= g(b)`` iff ``a <= b`` or ``a <= s`` and ``t <= b`` for some
    glued ``s, t``.
    """
    assign = tuple(g.assign if isinstance(g, PosetMap) else g)
    if len(assign) != x.n or any(not 0 <= t < y.n for t in assign):
        return False
    glued = set(glued)
    if not glued:
        return False
    if set(assign) != set(range(y.n)):
        return False
    if len({assign[s] for s in glued}) != 1:
        return False
    for a in range(x.n):
        for b in range(a + 1, x.n):
            if assign[a] == assign[b] and not (a in glued and b in glued):
                return False
    cmask = _mask(glued)
    below = 0
    above = 0
    for s in glued:
        below |= x.down[s]
        above |= x.up[s]
    for a in range(x.n):
        for b in range(x.n):
            want = x.leq(a, b) or bool(below >> a & 1 and above >> b & 1)
            if y.leq(assign[a], assign[b]) != want:
                return False
    return True


def is_height_zero_gluing(result):
    mins = set(result.source.minimals())
    return set(result.glued) <= mins


def n_value(y):
    """Number of minimal nodes with at least two upper covers."""
    return sum(1 for u in y.minimals() if popcount(y.cover_rows[u]) >= 2)


def simple_nodes(x):
    """Height-one nodes that are the only cover of everything below them."""
    if x.dim == 0:
        raise ZeroDimensional("a zero-dimensional poset has no simple nodes")
    out = []
    for v in x.nodes_at_height(1):
        below = x.down[v] & ~(1 << v)
        if all(x.cover_rows[u] == 1 << v for u in bits(below)):
            out.append(v)
    return out


def retract(x, node):
    """Remove everything below the simple node ``node``."""
    if x.dim == 0 or node not in simple_nodes(x):
        raise NotSimpleNode(f"{x.labels[node]!r} is not a simple node")
    removed = x.down[node] & ~(1 << node)
    return x.induced_subposet(i for i in range(x.n) if not removed >> i & 1)


@dataclass(frozen=True)
class SplitResult:
    """Height-zero splitting of ``target`` at one minimal node.

    ``map`` sends ``poset`` onto ``target`` and glues ``glued`` back to
    the split node.
    """

    poset: Poset
    glued: tuple
    map: PosetMap
    target: Poset


def split(y, u):
    """Replace the minimal node ``u`` by one fresh minimal per upper cover."""
    if y.down[u] != 1 << u:
        raise NotMinimal(f"{y.labels[u]!r} is not minimal")
    covers = y.upper_covers(u)
    if len(covers) < 2:
        raise FewerThanTwoCovers(f"{y.labels[u]!r} has {len(covers)} cover(s)")
    taken = set(y.labels)
    new_labels = []
    for i in range(1, len(covers) + 1):
        lab = fresh_label(f"{y.labels[u]}.{i}", taken)
        taken.add(lab)
        new_labels.append(lab)

    # positions in the split poset: u's slot expands into k slots
    order = []
    for v in range(y.n):
        if v == u:
            order.extend(("new", i) for i in range(len(covers)))
        else:
            order.append(("old", v))
    pos = {key: p for p, key in enumerate(order)}

    def project(mask):
        out = 0
        for j in bits(mask):
            out |= 1 << pos[("old", j)]
        return out

    labels, up, assign = [], [], []
    for key in order:
        kind, v = key
        if kind == "new":
            labels.append(new_labels[v])
            up.append((1 << pos[key]) | project(y.up[covers[v]]))
            assign.append(u)
        else:
            labels.append(y.labels[v])
            up.append(project(y.up[v]))
            assign.append(v)
    x = Poset(labels, up)
    glued = tuple(pos[("new", i)] for i in range(len(covers)))
    return SplitResult(x, glued, PosetMap(x, y, tuple(assign)), y)


def attach_below(x, p, m):
    """Add ``m`` fresh minimals below the minimal node ``p``, making ``p`` a
    simple height-one node."""
    if x.down[p] != 1 << p:
        raise NotMinimal(f"{x.labels[p]!r} is not minimal")
    if m < 1:
        raise ValueError("m must be at least 1")
    taken = set(x.labels)
    labels = list(x.labels)
    up = list(x.up)
    for i in range(1, m + 1):
        lab = fresh_label(f"{x.labels[p]}.q{i}", taken)
        taken.add(lab)
        labels.append(lab)
        up.append((1 << len(up)) | x.up[p])
    return Poset(labels, up)


@dataclass(frozen=True)
class ReductionStep:
    """One link of a reduction sequence.

    ``Split``: ``node`` is the minimal node of the larger poset and
    ``nodes`` its replacements in the smaller one.  ``Retract``: ``node``
    is the simple node and ``nodes`` the removed set below it.
    """

    kind: str
    node: str = None
    nodes: tuple = ()

    def describe(self):
        if self.kind == "Split":
            return f"split {self.node} -> {' '.join(self.nodes)}"
        if self.kind == "Retract":
            return f"retract {self.node} (remove {' '.join(self.nodes)})"
        return "identity"


@dataclass(frozen=True)
class ReductionSequence:
    """``posets[0]`` is a point and ``posets[-1]`` the reduced poset;
    ``steps[i]`` links ``posets[i]`` to ``posets[i + 1]``."""

    posets: tuple
    steps: tuple = field(default=())

    def __len__(self):
        return len(self.steps)


def reduce_to_point(x):
    """Reduction sequence from a one-point poset up to ``x``.

    Split the label-least minimal with two or more covers while any exists,
    otherwise retract the label-least simple node.
    """
    if len(x.maximals()) != 1:
        raise NoUniqueMaximal("reduction needs a unique maximal node")
    chain = [x]
    steps = []
    cur = x
    while cur.n > 1:
        busy = [u for u in cur.minimals() if popcount(cur.cover_rows[u]) >= 2]
        if busy:
            u = busy[0]
            res = split(cur, u)
            steps.append(
                ReductionStep(
                    "Split", cur.labels[u], tuple(res.poset.labels[i] for i in res.glued)
                )
            )
            cur = res.poset
        else:
            v = simple_nodes(cur)[0]
            removed = cur.sort_ids(bits(cur.down[v] & ~(1 << v)))
            steps.append(
                ReductionStep("Retract", cur.labels[v], tuple(cur.labels[i] for i in removed))
            )
            cur = retract(cur, v)
        chain.append(cur)
    return ReductionSequence(tuple(reversed(chain)), tuple(reversed(steps)))


def replay_problems(seq):
    """Replay every step of ``seq``; returns a list of problem strings."""
    problems = []
    if not seq.posets:
        return ["empty sequence"]
    if seq.posets[0].n != 1:
        problems.append("sequence does not start at a point")
    if len(seq.steps) != len(seq.posets) - 1:
        problems.append("step count does not match poset count")
        return problems
    for i, step in enumerate(seq.steps):
        small, large = seq.posets[i], seq.posets[i + 1]
        where = f"step {i + 1} ({step.describe()})"
        try:
            if step.kind == "Split":
                problems.extend(where + ": " + p for p in _check_split(small, large, step))
            elif step.kind == "Retract":
                problems.extend(where + ": " + p for p in _check_retract(small, large, step))
            elif step.kind == "Identity":
                if small != large:
                    problems.append(where + ": posets differ")
            else:
                problems.append(where + ": unknown step kind")
        except (KeyError, ValueError) as exc:
            problems.append(f"{where}: {exc}")
    return problems


def _check_split(small, large, step):
    out = []
    u = large.index(step.node)
    glued = [small.index(lab) for lab in step.nodes]
    if not set(glued) <= set(small.minimals()):
        out.append("replacements are not minimal")
    assign = []
    for lab in small.labels:
        assign.append(u if lab in step.nodes else large.index(lab))
    if not verify_gluing(small, glued, large, assign):
        out.append("gluing characterization fails")
    if is_isomorphic(glue(small, glued).quotient, large) is None:
        out.append("re-glued poset not isomorphic to the larger poset")
    ns, nl = n_value(small), n_value(large)
    if not (ns == 0 or ns < nl):
        out.append(f"n did not drop ({ns} vs {nl})")
    return out


def _check_retract(small, large, step):
    out = []
    v = large.index(step.node)
    if v not in simple_nodes(large):
        return ["node is not simple"]
    removed = large.sort_ids(bits(large.down[v] & ~(1 << v)))
    if tuple(large.labels[i] for i in removed) != tuple(step.nodes):
        out.append("removed set does not match")
    if retract(large, v) != small:
        out.append("retraction does not reproduce the smaller poset")
    return out
