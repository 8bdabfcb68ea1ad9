"""Finite poset toolkit: surgery on posets (gluing, splitting, retraction,
reduction to a point) and realizability checks for prime spectra of
Noetherian UFDs."""

from importlib.resources import files

from .core import Poset, is_isomorphic
from .errors import PosetError
from .kernels import BACKEND
from .maps import PosetMap

__all__ = ["BACKEND", "Poset", "PosetError", "PosetMap", "corpus_path", "is_isomorphic"]


def corpus_path(name):
    """Path of a bundled example poset, e.g. ``corpus_path("diamond")``."""
    if not name.endswith(".poset"):
        name += ".poset"
    return files(__package__).joinpath("data", name)
