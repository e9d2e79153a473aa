"""Walk kernels with a compiled core and a numpy fallback.

The compiled extension is used when it imported cleanly and the environment
variable RMPLAB_PURE_PYTHON is unset; otherwise the numpy fallback takes over
with identical semantics.
"""

import os

from . import fallback

try:
    from . import _walk as _compiled
except ImportError:
    _compiled = None


def get_backend(name: str = "auto"):
    """Return the kernel module for 'auto', 'python' or 'compiled'."""
    if name == "python":
        return fallback
    if name == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernel not available")
        return _compiled
    if name != "auto":
        raise ValueError(f"unknown backend {name!r}")
    if _compiled is not None and not os.environ.get("RMPLAB_PURE_PYTHON"):
        return _compiled
    return fallback


_backend = get_backend()
BACKEND = "compiled" if _backend is not fallback else "python"

left_products = _backend.left_products
right_products = _backend.right_products
vector_left_walk = _backend.vector_left_walk
qr_deflation = _backend.qr_deflation
