"""Select the split-search implementation at import time.

The compiled kernel is used when it was built; set ``ECOMREC_PURE_PYTHON=1``
to force the numpy fallback.
"""
import os

from . import _split_py

BACKENDS = {"python": _split_py}

try:
    from . import _split_kernel
except ImportError:  # extension not built
    _split_kernel = None
else:
    BACKENDS["cython"] = _split_kernel

if _split_kernel is not None and not os.environ.get("ECOMREC_PURE_PYTHON"):
    BACKEND = "cython"
else:
    BACKEND = "python"

impl = BACKENDS[BACKEND]
