"""Kernel backend selection.

The hot loops (clique enumeration, boundary assembly, GF(p) elimination)
exist twice: a Cython extension (``_fastcore``) and a pure-Python fallback
(``_pure``).  The compiled backend is used when importable; setting the
environment variable ``PACX_PURE_PYTHON=1`` forces the fallback.
``benchmarks/bench_kernels.py`` compares the two.
"""

from __future__ import annotations

import os

from . import _pure

if os.environ.get("PACX_PURE_PYTHON", "").strip() not in ("", "0"):
    _impl = _pure
else:
    try:
        from . import _fastcore as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _pure

enumerate_cliques = _impl.enumerate_cliques
boundary_csc = _impl.boundary_csc
rank_csc = _impl.rank_csc


def backend_name() -> str:
    return _impl.BACKEND


def get_backend(name: str):
    """Fetch a backend module by name ('compiled' or 'pure-python')."""
    if name == "pure-python":
        return _pure
    if name == "compiled":
        from . import _fastcore
        return _fastcore
    raise ValueError(f"unknown backend {name!r}")
