"""Backend selection for the hot kernels.

The compiled extension is used when it imports; set ``UNTANGLE_PURE_PYTHON=1``
to force the pure-Python fallback.
"""
import os

from . import _pykernels

if os.environ.get("UNTANGLE_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"

euler_counts = _impl.euler_counts
min_separator_mask = _impl.min_separator_mask
dart_successors = _pykernels.dart_successors

__all__ = ["BACKEND", "euler_counts", "min_separator_mask", "dart_successors"]
