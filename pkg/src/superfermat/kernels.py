"""Kernel selection.

The compiled ``_speedups`` extension is used when it was built; otherwise the
pure-Python kernels are used.  Setting ``SUPERFERMAT_PURE_PYTHON=1`` forces the
fallback.
"""
import os

from . import _purekernels

BACKEND = "python"

if os.environ.get("SUPERFERMAT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _speedups as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _purekernels
else:
    _impl = _purekernels

odd_sign = _impl.odd_sign
mul_terms = _impl.mul_terms
submul_terms = _impl.submul_terms

__all__ = ["BACKEND", "odd_sign", "mul_terms", "submul_terms"]
