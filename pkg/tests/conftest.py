import sys
import warnings

import pytest
from hypothesis import strategies as st

from posetkit import corpus_path
from posetkit import kernels
from posetkit.core import Poset
from posetkit.fileio import load_poset


def P(labels, rels=""):
    """Poset from a label string and ``"a<b c<d"`` generator pairs."""
    pairs = [tuple(r.split("<")) for r in rels.split()]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return Poset.build(labels.split(), pairs)


@pytest.fixture
def diamond():
    return P("m a b t", "m<a m<b a<t b<t")


@pytest.fixture
def chain3():
    return P("m a t", "m<a a<t")


@pytest.fixture
def antichain2():
    return P("x y")


@pytest.fixture
def figure1a():
    return load_poset(corpus_path("figure1a"))


@st.composite
def posets(draw, max_n=7, min_n=1):
    """Random posets: a random DAG along a shuffled order, closed."""
    n = draw(st.integers(min_n, max_n))
    perm = draw(st.permutations(range(n)))
    rows = [0] * n
    for a in range(n):
        for b in range(a + 1, n):
            if draw(st.booleans()):
                rows[perm[a]] |= 1 << perm[b]
    return Poset([f"v{k}" for k in range(n)], kernels.closure(n, rows))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
