"""Kernel backend selection.

The compiled extension is used when it was built; otherwise the NumPy
fallback is loaded.  Setting ``NETSTATE_PURE_PYTHON=1`` forces the fallback.
"""
import os

from . import _pykernels

if os.environ.get("NETSTATE_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels
        BACKEND = "python"

lag_grid = _pykernels.lag_grid
lag_products = _impl.lag_products
plv_all_pairs = _impl.plv_all_pairs

__all__ = ["BACKEND", "lag_grid", "lag_products", "plv_all_pairs"]
