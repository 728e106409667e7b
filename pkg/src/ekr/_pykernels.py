"""Pure-Python clique kernels (fallback for :mod:`ekr._ckernels`).

Graphs arrive as an ``(m, W)`` uint64 adjacency bitset matrix; internally each
row becomes a Python int. Vertex order is the row order, which callers keep
canonical, so all results are deterministic.
"""
from __future__ import annotations

import numpy as np

BACKEND = "python"


def _rows(adj: np.ndarray) -> list[int]:
    adj = np.ascontiguousarray(adj, dtype=np.uint64)
    return [int.from_bytes(r.tobytes(), "little") for r in adj]


def _mask_to_int(mask) -> int:
    bits = np.packbits(np.asarray(mask, dtype=bool), bitorder="little")
    return int.from_bytes(bits.tobytes(), "little")


def _color_sort(adj: list[int], P: int) -> tuple[list[int], list[int]]:
    """Greedy sequential colouring in index order; colour classes are
    independent sets, so ``bounds[i]`` bounds any clique within
    ``order[:i+1]``."""
    order: list[int] = []
    bounds: list[int] = []
    U = P
    color = 0
    while U:
        color += 1
        Q = U
        while Q:
            low = Q & -Q
            v = low.bit_length() - 1
            Q &= ~low
            U &= ~low
            Q &= ~adj[v]
            order.append(v)
            bounds.append(color)
    return order, bounds


def max_clique_size(adj: np.ndarray, cand=None, lower: int = 0, stop_at: int = 0) -> int:
    """Largest clique inside ``cand`` (all vertices if None), or ``lower`` if
    nothing beats it. Stops early once ``stop_at`` is reached."""
    rows = _rows(adj)
    P = (1 << len(rows)) - 1 if cand is None else _mask_to_int(cand)
    best = lower
    stopped = False

    def expand(size: int, P: int) -> None:
        nonlocal best, stopped
        order, bounds = _color_sort(rows, P)
        for i in range(len(order) - 1, -1, -1):
            if size + bounds[i] <= best:
                return
            v = order[i]
            NP = P & rows[v]
            if NP:
                expand(size + 1, NP)
            elif size + 1 > best:
                best = size + 1
            if stop_at and best >= stop_at:
                stopped = True
            if stopped:
                return
            P &= ~(1 << v)

    if P:
        expand(0, P)
    return best


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _search(rows: list[int], k: int, cap: int, first_only: bool):
    out: list[tuple[int, ...]] = []
    R: list[int] = []
    overflow = False

    def ext(P: int) -> bool:
        nonlocal overflow
        if len(R) == k:
            out.append(tuple(R))
            if len(out) > cap:
                overflow = True
            return first_only or overflow
        if len(R) + _popcount(P) < k:
            return False
        bounds = _color_sort(rows, P)[1]
        if len(R) + bounds[-1] < k:
            return False
        while P:
            if len(R) + _popcount(P) < k:
                return False
            low = P & -P
            v = low.bit_length() - 1
            P &= ~low
            R.append(v)
            done = ext(P & rows[v])
            R.pop()
            if done:
                return True
        return False

    full = (1 << len(rows)) - 1
    if k == 0:
        return [()], False
    ext(full)
    return out, overflow


def first_clique(adj: np.ndarray, k: int) -> list[int] | None:
    """Lexicographically smallest clique of size ``k`` (sorted vertex list)."""
    out, _ = _search(_rows(adj), k, 1, True)
    return list(out[0]) if out else None


def cliques_of_size(adj: np.ndarray, k: int, cap: int) -> tuple[np.ndarray, bool]:
    """All ``k``-cliques in lexicographic order; ``overflow`` if more than ``cap``."""
    out, overflow = _search(_rows(adj), k, cap, False)
    arr = np.array(out[:cap], dtype=np.int64).reshape(-1, k)
    return arr, overflow
