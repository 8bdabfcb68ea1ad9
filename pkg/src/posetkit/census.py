"""Exhaustive enumeration of small posets and population-wide checks.

Posets on ``n`` nodes are generated from the classes on ``n - 1`` nodes by
adding a new maximal node above every down-closed set, then deduplicated
by canonical code.  The brute-force ``oracle_*`` functions here share no
code with :mod:`posetkit.core` beyond the :class:`Poset` container and are
used to validate it.
"""

import random
from collections import Counter
from dataclasses import astuple, dataclass, fields
from functools import lru_cache
from itertools import combinations, permutations

from . import kernels
from .core import Poset, bits, is_isomorphic
from .errors import NotSimpleNode, PosetError, SizeLimitExceeded
from .realizability import check_local_ufd, check_nonlocal_ufd
from .surgery import (
    attach_below,
    glue,
    reduce_to_point,
    replay_problems,
    retract,
    simple_nodes,
    split,
    verify_gluing,
)

DEFAULT_MAX_N = 7
HARD_MAX_N = 8
ORACLE_MAX_N = 8
RANDOM_MAX_N = 10
DENSITIES = (0.2, 0.4, 0.6)


def _check_n(n, ceiling):
    if n > min(ceiling, HARD_MAX_N):
        raise SizeLimitExceeded(f"n={n} exceeds the limit of {min(ceiling, HARD_MAX_N)}")


# -- enumeration ---------------------------------------------------------


@lru_cache(maxsize=None)
def _classes(n):
    """Canonical up-rows of every class on ``n`` nodes, in code order."""
    if n == 1:
        return ((1,),)
    found = {}
    top = n - 1
    for rows in _classes(n - 1):
        m = n - 1
        down = [0] * m
        for i in range(m):
            for j in bits(rows[i]):
                down[j] |= 1 << i
        for ideal in range(1 << m):
            if any(down[i] & ~ideal for i in bits(ideal)):
                continue
            up = [rows[i] | (1 << top if ideal >> i & 1 else 0) for i in range(m)]
            up.append(1 << top)
            p = Poset([str(k) for k in range(n)], up)
            code = p.canonical_code
            if code not in found:
                found[code] = tuple(p.canonical().up)
    return tuple(found[c] for c in sorted(found))


def enumerate_posets(n, ceiling=DEFAULT_MAX_N):
    """One poset per isomorphism class on ``n`` nodes, labelled ``0..n-1``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    _check_n(n, ceiling)
    labels = [str(k) for k in range(n)]
    for rows in _classes(n):
        yield Poset(labels, rows)


def all_posets(max_n, ceiling=DEFAULT_MAX_N):
    for n in range(1, max_n + 1):
        yield from enumerate_posets(n, ceiling)


# -- independent oracles ---------------------------------------------------


def oracle_chains(p):
    """Every nonempty chain of ``p`` as a sorted tuple of ids (brute force)."""
    if p.n > ORACLE_MAX_N:
        raise SizeLimitExceeded(f"oracle limited to {ORACLE_MAX_N} nodes")
    out = []
    for r in range(1, p.n + 1):
        for sub in combinations(range(p.n), r):
            if all(p.leq(a, b) or p.leq(b, a) for a, b in combinations(sub, 2)):
                out.append(sub)
    return out


def oracle_height(p, x):
    """Longest chain whose top element is ``x``, by enumeration."""
    best = 0
    for c in oracle_chains(p):
        if x in c and all(p.leq(y, x) for y in c):
            best = max(best, len(c) - 1)
    return best


def oracle_dim(p):
    return max(len(c) - 1 for c in oracle_chains(p))


def oracle_saturated_heights(p):
    """Height of each node via explicitly built saturated chains.

    Covers are found by scanning for elements in between, not from the
    reduction kernel.
    """
    n = p.n

    def cov(a, b):
        return p.lt(a, b) and not any(p.lt(a, z) and p.lt(z, b) for z in range(n))

    best = [0] * n
    minimal = [x for x in range(n) if not any(p.lt(y, x) for y in range(n))]
    stack = [[m] for m in minimal]
    while stack:
        ch = stack.pop()
        top = ch[-1]
        best[top] = max(best[top], len(ch) - 1)
        stack.extend(ch + [z] for z in range(n) if cov(top, z))
    return best


def _orbit_key(n, rel, perm):
    return tuple(sorted((perm[a], perm[b]) for a, b in rel))


def oracle_labeled_posets(n):
    """All strict partial orders on ``0..n-1`` from the full relation space."""
    if n > 4:
        raise SizeLimitExceeded("labelled brute force limited to 4 nodes")
    pairs = [(a, b) for a in range(n) for b in range(n) if a != b]
    out = []
    for mask in range(1 << len(pairs)):
        rel = {pairs[k] for k in range(len(pairs)) if mask >> k & 1}
        if any((b, a) in rel for a, b in rel):
            continue
        if any((a, d) not in rel for a, b in rel for c, d in rel if b == c and a != d):
            continue
        out.append(frozenset(rel))
    return out


def oracle_natural_posets(n):
    """Strict orders on ``0..n-1`` contained in the natural order ``<``.

    Every poset has such a labelling (a linear extension), so orbit counting
    over these also gives the class count.
    """
    if n > 5:
        raise SizeLimitExceeded("natural-labelling brute force limited to 5 nodes")
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    out = []
    for mask in range(1 << len(pairs)):
        rel = {pairs[k] for k in range(len(pairs)) if mask >> k & 1}
        if any((a, d) not in rel for a, b in rel for c, d in rel if b == c):
            continue
        out.append(frozenset(rel))
    return out


def oracle_class_count(n):
    """Number of isomorphism classes on ``n`` nodes by explicit orbit counting."""
    rels = oracle_labeled_posets(n) if n <= 4 else oracle_natural_posets(n)
    perms = list(permutations(range(n)))
    seen = set()
    for rel in rels:
        seen.add(min(_orbit_key(n, rel, perm) for perm in perms))
    return len(seen)


def oracle_is_isomorphic(p, q):
    """Brute force over all bijections."""
    if p.n != q.n:
        return False
    n = p.n
    for perm in permutations(range(n)):
        if all(p.leq(a, b) == q.leq(perm[a], perm[b]) for a in range(n) for b in range(n)):
            return True
    return False


# -- random posets -----------------------------------------------------------


def random_poset(rng, n=None, max_n=RANDOM_MAX_N):
    """Random poset: forward edges of a shuffled order kept with a density
    drawn from ``DENSITIES``, then closed."""
    if n is None:
        n = rng.randint(1, max_n)
    density = rng.choice(DENSITIES)
    perm = list(range(n))
    rng.shuffle(perm)
    rows = [0] * n
    for a in range(n):
        for b in range(a + 1, n):
            if rng.random() < density:
                rows[perm[a]] |= 1 << perm[b]
    return Poset([str(k) for k in range(n)], kernels.closure(n, rows))


# -- per-class checks --------------------------------------------------------


@dataclass(frozen=True)
class CensusRow:
    n: int
    iso_classes: int = 0
    unique_max: int = 0
    unique_min_max: int = 0
    local_realizable: int = 0
    nonlocal_realizable: int = 0
    reduced_ok: int = 0

    def __add__(self, other):
        return CensusRow(self.n, *(a + b for a, b in zip(astuple(self)[1:], astuple(other)[1:])))


CENSUS_COLUMNS = tuple(f.name for f in fields(CensusRow))


def classify_one(p):
    """Census row contribution and reduction problems for one poset."""
    umax = len(p.maximals()) == 1
    umin = len(p.minimals()) == 1
    reduced = 0
    problems = []
    if umax:
        try:
            seq = reduce_to_point(p)
            problems = replay_problems(seq)
            if seq.posets[-1] != p:
                problems.append("sequence does not end at the input")
        except PosetError as exc:
            problems = [f"reduction raised {exc!r}"]
        reduced = int(not problems)
    row = CensusRow(
        p.n,
        1,
        int(umax),
        int(umax and umin),
        int(check_local_ufd(p).verdict),
        int(check_nonlocal_ufd(p).verdict),
        reduced,
    )
    return row, problems


LEMMA_CHECKS = (
    "glue.characterization",
    "glue.min_image",
    "glue.dim",
    "glue.cover_lift",
    "glue.upset_dim",
    "retract.dim",
    "roundtrip.split",
    "roundtrip.attach",
)


def gluing_lemma_problems(x, glued):
    """Checks of one height-zero gluing; returns ``(checked, failed)``
    Counters keyed by check name."""
    checked, failed = Counter(), Counter()

    def record(name, ok):
        checked[name] += 1
        if not ok:
            failed[name] += 1

    r = glue(x, glued)
    y, g = r.quotient, r.map.assign
    record("glue.characterization", verify_gluing(x, glued, y, g))
    record("glue.min_image", {g[i] for i in x.minimals()} == set(y.minimals()))
    record("glue.dim", x.dim == y.dim)
    lift = True
    for a in range(x.n):
        for b in range(x.n):
            if y.covers(g[a], g[b]):
                if not any(x.covers(a2, b) and g[a2] == g[a] for a2 in range(x.n)):
                    lift = False
    record("glue.cover_lift", lift)
    if len(x.maximals()) == 1:
        for x0 in x.minimals():
            want = max(x.up_dim(a) for a in range(x.n) if g[a] == g[x0])
            record("glue.upset_dim", y.up_dim(g[x0]) == want)
    return checked, failed


def retraction_lemma_problems(x):
    checked, failed = Counter(), Counter()
    if x.dim == 0:
        return checked, failed
    for v in simple_nodes(x):
        below = bits(x.down[v] & ~(1 << v))
        if any(x.up_dim(u) == x.dim for u in below):
            r = retract(x, v)
            checked["retract.dim"] += 1
            if x.dim != r.up_dim(r.index(x.labels[v])) + 1:
                failed["retract.dim"] += 1
    return checked, failed


def round_trip_problems(x, attach_counts=(1, 2)):
    checked, failed = Counter(), Counter()
    for u in x.minimals():
        if len(x.upper_covers(u)) >= 2:
            s = split(x, u)
            checked["roundtrip.split"] += 1
            back = glue(s.poset, s.glued).quotient
            ok = verify_gluing(s.poset, s.glued, x, s.map) and is_isomorphic(back, x) is not None
            if not ok:
                failed["roundtrip.split"] += 1
        for m in attach_counts:
            grown = attach_below(x, u, m)
            checked["roundtrip.attach"] += 1
            try:
                ok = retract(grown, grown.index(x.labels[u])) == x
            except NotSimpleNode:
                ok = False
            if not ok:
                failed["roundtrip.attach"] += 1
    return checked, failed


def lemma_problems(x, subsets=None):
    """All surgery-lemma checks on ``x``.  ``subsets`` defaults to every
    nonempty set of minimal nodes."""
    checked, failed = Counter(), Counter()
    if subsets is None:
        mins = x.minimals()
        subsets = [c for r in range(1, len(mins) + 1) for c in combinations(mins, r)]
    for c in subsets:
        a, b = gluing_lemma_problems(x, c)
        checked += a
        failed += b
    for fn in (retraction_lemma_problems, round_trip_problems):
        a, b = fn(x)
        checked += a
        failed += b
    return checked, failed


def random_lemma_case(rng):
    """A random poset and one random nonempty set of its minimal nodes."""
    x = random_poset(rng)
    mins = x.minimals()
    k = rng.randint(1, len(mins))
    return x, tuple(sorted(rng.sample(mins, k)))


# -- population runs ---------------------------------------------------------


def _chunks(items, k):
    k = max(1, k)
    return [items[i::k] for i in range(k)]


def _run(fn, items, jobs):
    """Apply ``fn`` to every chunk of ``items``; results are merged by the
    caller with order-independent operations."""
    if jobs <= 1 or len(items) < 2:
        return [fn(items)]
    from multiprocessing import get_context

    with get_context("fork").Pool(jobs) as pool:
        return pool.map(fn, _chunks(items, jobs))


def _classify_chunk(posets):
    rows = {}
    failures = []
    for p in posets:
        row, problems = classify_one(p)
        rows[p.n] = rows[p.n] + row if p.n in rows else row
        if problems:
            failures.append((p.n, p.canonical_code[1], problems))
    return rows, failures


def classify(max_n, jobs=1, ceiling=DEFAULT_MAX_N):
    """Per-``n`` census rows and a sorted list of reduction failures."""
    _check_n(max_n, ceiling)
    posets = list(all_posets(max_n, ceiling))
    rows = {n: CensusRow(n) for n in range(1, max_n + 1)}
    failures = []
    for part_rows, part_fail in _run(_classify_chunk, posets, jobs):
        for n, row in part_rows.items():
            rows[n] = rows[n] + row
        failures.extend(part_fail)
    failures.sort()
    return [rows[n] for n in sorted(rows)], failures


def verify_reduction_theorem(max_n, jobs=1, ceiling=DEFAULT_MAX_N):
    rows, failures = classify(max_n, jobs, ceiling)
    return {
        "max_n": max_n,
        "unique_max_classes": sum(r.unique_max for r in rows),
        "reduced": sum(r.reduced_ok for r in rows),
        "failures": len(failures),
        "failed_classes": [f"n={n} code={code}" for n, code, _ in failures],
    }


def _lemma_chunk(cases):
    checked, failed = Counter(), Counter()
    for x, subsets in cases:
        a, b = lemma_problems(x, subsets)
        checked += a
        failed += b
    return checked, failed


def verify_surgery_lemmas(max_n, random_trials=0, seed=0, jobs=1, ceiling=DEFAULT_MAX_N):
    """Run every surgery check exhaustively up to ``max_n`` nodes and on
    ``random_trials`` seeded random posets of at most 10 nodes."""
    _check_n(max_n, ceiling)
    cases = [(x, None) for x in all_posets(max_n, ceiling)] if max_n >= 1 else []
    rng = random.Random(seed)
    for _ in range(random_trials):
        x, c = random_lemma_case(rng)
        cases.append((x, [c]))
    checked, failed = Counter(), Counter()
    for a, b in _run(_lemma_chunk, cases, jobs):
        checked += a
        failed += b
    return {
        "max_n": max_n,
        "random_trials": random_trials,
        "seed": seed,
        "checks": {name: [checked[name], failed[name]] for name in LEMMA_CHECKS},
        "violations": sum(failed.values()),
    }


def format_table(rows):
    widths = [max(len(c), 6) for c in CENSUS_COLUMNS]
    head = "  ".join(c.rjust(w) for c, w in zip(CENSUS_COLUMNS, widths))
    lines = [head, "  ".join("-" * w for w in widths)]
    for r in rows:
        lines.append("  ".join(str(v).rjust(w) for v, w in zip(astuple(r), widths)))
    return "\n".join(lines)


def format_lemmas(summary):
    lines = [
        f"surgery lemmas: max_n={summary['max_n']} random_trials={summary['random_trials']}"
        f" seed={summary['seed']}"
    ]
    for name in LEMMA_CHECKS:
        c, f = summary["checks"][name]
        lines.append(f"  {name:<24}{c:>9} checked{f:>6} violations")
    lines.append(f"  total violations: {summary['violations']}")
    return "\n".join(lines)
