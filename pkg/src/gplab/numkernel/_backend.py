"""Select the compiled kernels when available, else the pure-Python twin.

Setting ``GPLAB_PURE_PYTHON=1`` forces the fallback.
"""
import os

from . import _kernels_py

if os.environ.get("GPLAB_PURE_PYTHON", "") not in ("", "0"):
    kernels = _kernels_py
else:
    try:
        from . import _kernels as kernels
    except ImportError:  # extension not built
        kernels = _kernels_py

BACKEND = kernels.BACKEND
reference = _kernels_py
