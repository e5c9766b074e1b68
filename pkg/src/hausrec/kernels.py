"""Select the compiled scan kernels when available, else the Python ones.

Set ``HAUSREC_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _fallback

BACKEND = "python"
_compiled = None

if not os.environ.get("HAUSREC_PURE_PYTHON"):
    try:
        from . import _kernels as _compiled

        BACKEND = "cython"
    except ImportError:  # extension not built
        _compiled = None

ODOMETER_WINDOW_MAX = 39


def get_backend(name=None):
    """Kernel module for ``name`` (``"cython"``, ``"python"`` or None for the default)."""
    if name is None:
        name = BACKEND
    if name == "python":
        return _fallback
    if name == "cython":
        if _compiled is None:
            raise ImportError("compiled kernels are not available")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")


def odometer_scan(x, W, ones_tail, N, backend=None):
    mod = get_backend(backend)
    if mod is not _fallback and W > ODOMETER_WINDOW_MAX:
        mod = _fallback
    return mod.odometer_scan(x, W, ones_tail, N)


def rotation_scan(F, bits, N, backend=None):
    mod = get_backend(backend)
    if mod is not _fallback and bits != 64:
        mod = _fallback
    return mod.rotation_scan(F, bits, N)


def doubling_scan(bits, D, start, N, best_n, backend=None):
    return get_backend(backend).doubling_scan(bits, D, start, N, best_n)
