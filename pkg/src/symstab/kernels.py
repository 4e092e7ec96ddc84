"""Selects the orbit kernel backend at import time.

The compiled extension is used when it was built; setting
``SYMSTAB_PURE_PYTHON=1`` forces the pure-Python fallback.
"""
from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"

if os.environ.get("SYMSTAB_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py

_LIMIT = 1 << 61


def orbit_min(vec, shifts, modulus):
    if modulus >= _LIMIT:
        return _kernels_py.orbit_min(vec, shifts, modulus)
    return _impl.orbit_min(vec, shifts, modulus)


def batch_orbit_min(vecs, shifts, modulus):
    if modulus >= _LIMIT:
        return _kernels_py.batch_orbit_min(vecs, shifts, modulus)
    return _impl.batch_orbit_min(vecs, shifts, modulus)


def count_distinct_orbits(vecs, shifts, modulus):
    if modulus >= _LIMIT:
        return _kernels_py.count_distinct_orbits(vecs, shifts, modulus)
    return _impl.count_distinct_orbits(vecs, shifts, modulus)
