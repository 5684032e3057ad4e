"""Select the search kernel at import time.

The compiled extension ``contexture._kernels`` is used when it was built;
otherwise the pure-Python twin is used. Setting ``CONTEXTURE_PURE_PYTHON=1``
forces the fallback.
"""
import os

from . import _kernels_py

if os.environ.get("CONTEXTURE_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:  # extension not built
        _impl = _kernels_py

COMPILED = _impl is not _kernels_py
BACKEND = "cython" if COMPILED else "python"
search = _impl.search
python_search = _kernels_py.search


def thread_count() -> int:
    """Worker cap from ``CONTEXTURE_THREADS`` (default 1)."""
    try:
        return max(1, int(os.environ.get("CONTEXTURE_THREADS", "1")))
    except ValueError:
        return 1
