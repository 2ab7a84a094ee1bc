"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``LOOPKIT_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernels

BACKENDS = {"python": _pykernels}

if not os.environ.get("LOOPKIT_PURE_PYTHON"):
    try:
        from . import _ckernels
    except ImportError:  # extension not built
        _ckernels = None
    else:
        BACKENDS["cython"] = _ckernels

BACKEND = "cython" if "cython" in BACKENDS else "python"
_impl = BACKENDS[BACKEND]

search_tables = _impl.search_tables
canonical_table = _impl.canonical_table


def get_backend(name: str | None = None):
    """The kernel module called ``name`` (default: the selected one)."""
    if name is None:
        return _impl
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} unavailable; have {sorted(BACKENDS)}") from None
