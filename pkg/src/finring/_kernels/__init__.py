"""Kernel backend selection: compiled extension when available, else pure Python.

Set FINRING_PURE=1 to force the pure backend (used by the benchmark and the
backend-parity tests).
"""

from __future__ import annotations

import os

from . import _pykernels

if os.environ.get("FINRING_PURE"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _pykernels

BACKEND = _impl.BACKEND

assoc_violation_flat = _impl.assoc_violation_flat
canonical_key = _impl.canonical_key
enumerate_shape_tables = _impl.enumerate_shape_tables
iso_matrix = _impl.iso_matrix
mono_minimal = _impl.mono_minimal

# pure helpers shared by both backends
key_to_table = _pykernels.key_to_table
table_key = _pykernels.table_key


def pure_backend():
    return _pykernels
