"""Clique-kernel backend selection.

The Cython extension is used when it was built; ``EKR_PURE_PYTHON=1`` forces
the pure-Python twin. Both expose ``max_clique_size``, ``first_clique`` and
``cliques_of_size`` over uint64 adjacency bitset matrices.
"""
from __future__ import annotations

import os

import numpy as np

from . import _pykernels

try:
    if os.environ.get("EKR_PURE_PYTHON"):
        raise ImportError("pure-Python kernels requested")
    from . import _ckernels as _impl
except ImportError:
    _impl = _pykernels

BACKEND = _impl.BACKEND
max_clique_size = _impl.max_clique_size
first_clique = _impl.first_clique
cliques_of_size = _impl.cliques_of_size


def backend(name: str):
    """Module for an explicitly named backend ("python" or "cython")."""
    if name == "python":
        return _pykernels
    if name == "cython":
        from . import _ckernels
        return _ckernels
    raise ValueError(f"unknown kernel backend {name!r}")


def pack_adjacency(A: np.ndarray) -> np.ndarray:
    """Boolean (m, m) adjacency -> (m, W) little-endian uint64 bitsets."""
    A = np.asarray(A, dtype=bool)
    m = A.shape[0]
    W = max(1, (m + 63) // 64)
    bits = np.packbits(A, axis=1, bitorder="little")
    out = np.zeros((m, W * 8), dtype=np.uint8)
    out[:, :bits.shape[1]] = bits
    return out.view(np.uint64).reshape(m, W)
