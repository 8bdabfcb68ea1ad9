"""Kernel dispatch: compiled extension when available, pure Python otherwise.

Set ``POSETKIT_PURE=1`` in the environment to force the Python kernels.
"""

import os

from . import _kernels_py as py

try:
    if os.environ.get("POSETKIT_PURE"):
        raise ImportError("pure kernels requested")
    from . import _ckernels as _c
except ImportError:
    _c = None

BACKEND = "cython" if _c is not None else "python"


def _pick(name, limit):
    slow = getattr(py, name)
    if _c is None:
        return slow
    fast = getattr(_c, name)

    def kernel(n, *rows):
        if n <= limit:
            return fast(n, *rows)
        return slow(n, *rows)

    kernel.__name__ = name
    kernel.__doc__ = slow.__doc__
    return kernel


_cap = _c.MAX_NODES if _c is not None else 0
closure = _pick("closure", _cap)
find_cycle = _pick("find_cycle", _cap)
reduction = _pick("reduction", _cap)
transpose = _pick("transpose", _cap)
heights = _pick("heights", _cap)
canonical_form = _pick("canonical_form", _c.MAX_CANON if _c is not None else 0)
