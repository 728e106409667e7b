# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled clique kernels; same contract as ``ekr._pykernels``.

Bitsets are arrays of ``W`` uint64 words; the search itself runs without the
GIL so callers may fan subproblems out over threads.
"""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport malloc, realloc, free
from libc.string cimport memcpy

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil

BACKEND = "cython"


cdef struct Ctx:
    const uint64_t* adj
    int m
    int W
    int best
    int stop_at
    int stopped
    # enumeration state
    int k
    int* R
    int depth
    int64_t* out
    int64_t count
    int64_t cap
    int64_t out_cap
    int first_only
    int overflow
    int oom


cdef inline int popcount_set(const uint64_t* P, int W) nogil:
    cdef int w, c = 0
    for w in range(W):
        c += __builtin_popcountll(P[w])
    return c


cdef int color_sort(Ctx* c, const uint64_t* P, int* order, int* bounds,
                    uint64_t* U, uint64_t* Q) nogil:
    """Greedy colouring in index order; returns the number of vertices."""
    cdef int W = c.W, w, x, v, n = 0, color = 0, nonempty
    cdef uint64_t word
    cdef const uint64_t* row
    memcpy(U, P, W * sizeof(uint64_t))
    while True:
        nonempty = 0
        for w in range(W):
            if U[w]:
                nonempty = 1
                break
        if not nonempty:
            break
        color += 1
        memcpy(Q, U, W * sizeof(uint64_t))
        for w in range(W):
            while Q[w]:
                word = Q[w]
                v = w * 64 + __builtin_ctzll(word)
                Q[w] &= word - 1
                U[w] &= ~(<uint64_t>1 << (v & 63))
                row = c.adj + <int64_t>v * W
                for x in range(w, W):
                    Q[x] &= ~row[x]
                order[n] = v
                bounds[n] = color
                n += 1
    return n


cdef void expand(Ctx* c, int size, uint64_t* P) nogil:
    cdef int W = c.W, m = c.m, n, i, v, w, any_
    cdef int* order = <int*>malloc(m * sizeof(int))
    cdef int* bounds = <int*>malloc(m * sizeof(int))
    cdef uint64_t* U = <uint64_t*>malloc(W * sizeof(uint64_t))
    cdef uint64_t* Q = <uint64_t*>malloc(W * sizeof(uint64_t))
    cdef uint64_t* NP = <uint64_t*>malloc(W * sizeof(uint64_t))
    cdef const uint64_t* row
    if order == NULL or bounds == NULL or U == NULL or Q == NULL or NP == NULL:
        c.oom = 1
        c.stopped = 1
    else:
        n = color_sort(c, P, order, bounds, U, Q)
        i = n - 1
        while i >= 0:
            if size + bounds[i] <= c.best:
                break
            v = order[i]
            row = c.adj + <int64_t>v * W
            any_ = 0
            for w in range(W):
                NP[w] = P[w] & row[w]
                if NP[w]:
                    any_ = 1
            if any_:
                expand(c, size + 1, NP)
            elif size + 1 > c.best:
                c.best = size + 1
            if c.stop_at and c.best >= c.stop_at:
                c.stopped = 1
            if c.stopped:
                break
            P[v >> 6] &= ~(<uint64_t>1 << (v & 63))
            i -= 1
    free(order)
    free(bounds)
    free(U)
    free(Q)
    free(NP)


cdef int emit(Ctx* c) nogil:
    cdef int j
    cdef int64_t* grown
    if c.count >= c.cap:
        c.overflow = 1
        return 1
    if (c.count + 1) * c.k > c.out_cap:
        c.out_cap = c.out_cap * 2 + c.k * 64
        grown = <int64_t*>realloc(c.out, c.out_cap * sizeof(int64_t))
        if grown == NULL:
            c.oom = 1
            return 1
        c.out = grown
    for j in range(c.k):
        c.out[c.count * c.k + j] = c.R[j]
    c.count += 1
    return c.first_only


cdef int ext(Ctx* c, uint64_t* P) nogil:
    """Lexicographic DFS over k-cliques; returns 1 to abort the search."""
    cdef int W = c.W, m = c.m, w, x, v, done = 0, ncol, npop
    cdef int* order
    cdef int* bounds
    cdef uint64_t* U
    cdef uint64_t* Q
    cdef uint64_t* NP
    cdef uint64_t* rest
    cdef const uint64_t* row
    if c.depth == c.k:
        return emit(c)
    npop = popcount_set(P, W)
    if c.depth + npop < c.k:
        return 0
    order = <int*>malloc(m * sizeof(int))
    bounds = <int*>malloc(m * sizeof(int))
    U = <uint64_t*>malloc(W * sizeof(uint64_t))
    Q = <uint64_t*>malloc(W * sizeof(uint64_t))
    NP = <uint64_t*>malloc(W * sizeof(uint64_t))
    rest = <uint64_t*>malloc(W * sizeof(uint64_t))
    if order == NULL or bounds == NULL or U == NULL or Q == NULL or NP == NULL or rest == NULL:
        c.oom = 1
        done = 1
    else:
        ncol = color_sort(c, P, order, bounds, U, Q)
        if ncol == 0 or c.depth + bounds[ncol - 1] >= c.k:
            memcpy(rest, P, W * sizeof(uint64_t))
            for w in range(W):
                while rest[w] and not done:
                    if c.depth + npop < c.k:
                        break
                    v = w * 64 + __builtin_ctzll(rest[w])
                    rest[w] &= rest[w] - 1
                    npop -= 1
                    row = c.adj + <int64_t>v * W
                    for x in range(W):
                        NP[x] = rest[x] & row[x]
                    c.R[c.depth] = v
                    c.depth += 1
                    done = ext(c, NP)
                    c.depth -= 1
                if done or c.depth + npop < c.k:
                    break
    free(order)
    free(bounds)
    free(U)
    free(Q)
    free(NP)
    free(rest)
    return done


cdef cnp.ndarray _as_adj(adj):
    return np.ascontiguousarray(adj, dtype=np.uint64)


def max_clique_size(adj, cand=None, int lower=0, int stop_at=0):
    cdef cnp.ndarray[cnp.uint64_t, ndim=2] A = _as_adj(adj)
    cdef int m = A.shape[0]
    cdef int W = A.shape[1] if m else 1
    cdef Ctx c
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] P
    if m == 0:
        return lower
    if cand is None:
        cand = np.ones(m, dtype=bool)
    bits = np.packbits(np.asarray(cand, dtype=bool), bitorder="little")
    bits = np.concatenate([bits, np.zeros(W * 8 - len(bits), dtype=np.uint8)])
    P = bits.view(np.uint64).copy()
    c.adj = <const uint64_t*>A.data
    c.m = m
    c.W = W
    c.best = lower
    c.stop_at = stop_at
    c.stopped = 0
    c.oom = 0
    with nogil:
        if popcount_set(<uint64_t*>P.data, W):
            expand(&c, 0, <uint64_t*>P.data)
    if c.oom:
        raise MemoryError("clique search ran out of memory")
    return c.best


def _search(adj, int k, long long cap, int first_only):
    cdef cnp.ndarray[cnp.uint64_t, ndim=2] A = _as_adj(adj)
    cdef int m = A.shape[0]
    cdef int W = A.shape[1] if m else 1
    cdef Ctx c
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] P
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64), False
    if m == 0:
        return np.zeros((0, k), dtype=np.int64), False
    bits = np.packbits(np.ones(m, dtype=bool), bitorder="little")
    bits = np.concatenate([bits, np.zeros(W * 8 - len(bits), dtype=np.uint8)])
    P = bits.view(np.uint64).copy()
    c.adj = <const uint64_t*>A.data
    c.m = m
    c.W = W
    c.k = k
    c.depth = 0
    c.R = <int*>malloc(k * sizeof(int))
    c.out = NULL
    c.count = 0
    c.cap = cap
    c.out_cap = 0
    c.first_only = first_only
    c.overflow = 0
    c.oom = 0
    if c.R == NULL:
        raise MemoryError()
    with nogil:
        ext(&c, <uint64_t*>P.data)
    free(c.R)
    try:
        if c.oom:
            raise MemoryError("clique enumeration ran out of memory")
        res = np.empty((c.count, k), dtype=np.int64)
        if c.count:
            memcpy(<void*>cnp.PyArray_DATA(res), c.out, c.count * k * sizeof(int64_t))
        return res, bool(c.overflow)
    finally:
        free(c.out)


def first_clique(adj, int k):
    res, _ = _search(adj, k, 1, 1)
    return [int(v) for v in res[0]] if len(res) else None


def cliques_of_size(adj, int k, long long cap):
    return _search(adj, k, cap, 0)
