"""Derangement graphs, exact clique search and the EKR deciders.

The graph on ``G`` joins ``g1`` and ``g2`` when ``g1^-1 g2`` fixes a point.
It is a Cayley graph, so every clique translates to one through the identity
and those live inside ``{1} | D``; all searches run on that small subgraph.
"""
from __future__ import annotations

import json
import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

import numpy as np

from . import kernels
from .action import CosetAction
from .groupcore import CapExceeded, GroupError, conjugates

logger = logging.getLogger(__name__)

MAX_CLIQUE_VERTICES = 100_000
MAX_REDUCED_VERTICES = 20_000
MAX_EXTREMAL = 1_000_000


class DerangementGraph:
    def __init__(self, action: CosetAction):
        self.action = action
        G = action.group
        self.group = G
        self.order = G.order
        conn = action.fixer_mask.copy()
        conn[G.identity] = False
        conn.setflags(write=False)
        self.connection = conn

    def __repr__(self):
        return f"<DerangementGraph on {self.order} vertices, degree {self.degree}>"

    @cached_property
    def connection_indices(self) -> np.ndarray:
        return np.flatnonzero(self.connection)

    @property
    def degree(self) -> int:
        return int(self.connection.sum())

    @property
    def is_complete(self) -> bool:
        return self.degree == self.order - 1

    def adjacent(self, g1: int, g2: int) -> bool:
        G = self.group
        return bool(self.connection[G.mul(G.inv(g1), g2)])

    def induced(self, vertices: Iterable[int]) -> np.ndarray:
        """Boolean adjacency matrix on ``vertices`` (in the given order)."""
        V = np.asarray(list(vertices) if not isinstance(vertices, np.ndarray) else vertices,
                       dtype=np.int64)
        G = self.group
        inv = G.inverses[V]
        out = np.empty((len(V), len(V)), dtype=bool)
        step = max(1, 4_000_000 // max(1, len(V)))
        for s in range(0, len(V), step):
            out[s:s + step] = self.connection[G.mul_many(inv[s:s + step, None], V[None, :])]
        return out

    @cached_property
    def reduced_adjacency(self) -> np.ndarray:
        """Packed adjacency on ``D \\ {1}`` in canonical order."""
        m = len(self.connection_indices)
        if m > MAX_REDUCED_VERTICES:
            raise CapExceeded(f"reduced clique graph has {m} vertices (cap {MAX_REDUCED_VERTICES})")
        return kernels.pack_adjacency(self.induced(self.connection_indices))


def build_graph(action: CosetAction) -> DerangementGraph:
    return DerangementGraph(action)


def _reduced_max(adj: np.ndarray, lower: int, stop_at: int, threads: int) -> int:
    """Largest clique in the packed graph ``adj``.

    With several threads the search splits by smallest vertex; workers only
    share the best size found so far, which makes the answer independent of
    scheduling.
    """
    m = adj.shape[0]
    if m == 0:
        return 0
    if threads <= 1:
        return kernels.max_clique_size(adj, lower=lower, stop_at=stop_at)
    dense = np.unpackbits(adj.view(np.uint8), axis=1, bitorder="little")[:, :m].astype(bool)
    best = [max(lower, 1)]
    lock = threading.Lock()
    done = threading.Event()

    def root(v: int) -> None:
        if done.is_set():
            return
        cand = dense[v].copy()
        cand[:v + 1] = False
        if cand.sum() + 1 <= best[0]:
            return
        with lock:
            floor = best[0] - 1
        s = kernels.max_clique_size(adj, cand, lower=floor,
                                    stop_at=stop_at - 1 if stop_at else 0)
        with lock:
            if s + 1 > best[0]:
                best[0] = s + 1
            if stop_at and best[0] >= stop_at:
                done.set()

    with ThreadPoolExecutor(max_workers=threads) as pool:
        list(pool.map(root, range(m)))
    return best[0]


def max_clique(graph: DerangementGraph, upper_hint: int | None = None, threads: int = 1,
               max_vertices: int = MAX_CLIQUE_VERTICES) -> tuple[int, tuple[int, ...]]:
    """Exact clique number and the lexicographically first maximum clique
    through the identity.

    ``upper_hint``, when given, must be a true upper bound; the search stops
    as soon as it is met.
    """
    G = graph.group
    if graph.order > max_vertices:
        raise CapExceeded(f"|G| = {graph.order} exceeds the clique cap {max_vertices}")
    Dp = graph.connection_indices
    if len(Dp) == 0:
        return 1, (G.identity,)
    adj = graph.reduced_adjacency
    h = graph.action.subgroup.order
    # H \ {1} is a clique of size h - 1 inside D \ {1}
    lower = max(h - 2, 0)
    stop_at = upper_hint - 1 if upper_hint else 0
    k = _reduced_max(adj, lower, stop_at, threads)
    first = kernels.first_clique(adj, k)
    if first is None:
        raise GroupError("internal error: clique of the computed size not found")
    witness = tuple(sorted([G.identity] + [int(Dp[i]) for i in first]))
    return k + 1, witness


def enumerate_maximum_cliques_through_identity(graph: DerangementGraph, size: int | None = None,
                                               cap: int = MAX_EXTREMAL,
                                               threads: int = 1) -> list[tuple[int, ...]]:
    """All cliques of the maximum size containing the identity, sorted."""
    G = graph.group
    if size is None:
        size = max_clique(graph, threads=threads)[0]
    Dp = graph.connection_indices
    if size == 1:
        return [(G.identity,)]
    rows, overflow = kernels.cliques_of_size(graph.reduced_adjacency, size - 1, cap)
    if overflow:
        raise CapExceeded(f"more than {cap} maximum cliques through the identity")
    out = [tuple(sorted([G.identity] + Dp[r].tolist())) for r in rows]
    out.sort()
    return out


def is_clique(graph: DerangementGraph, S: Iterable[int]) -> bool:
    S = np.unique(np.fromiter((int(s) for s in S), dtype=np.int64))
    A = graph.induced(S)
    np.fill_diagonal(A, True)
    return bool(A.all())


def verify_independent(graph: DerangementGraph, T: Iterable[int]) -> bool:
    T = np.unique(np.fromiter((int(t) for t in T), dtype=np.int64))
    return not graph.induced(T).any()


def clique_coclique_check(graph: DerangementGraph, S: Iterable[int], T: Iterable[int]) -> bool:
    """``|S| * |T| <= |G|`` for a clique ``S`` and an independent set ``T``."""
    S = sorted({int(s) for s in S})
    T = sorted({int(t) for t in T})
    if not is_clique(graph, S):
        raise ValueError("S is not a clique")
    if not verify_independent(graph, T):
        raise ValueError("T is not an independent set")
    ok = len(S) * len(T) <= graph.order
    if not ok:
        logger.error("clique-coclique bound violated: %d * %d > %d", len(S), len(T), graph.order)
    return ok


# -- reports -------------------------------------------------------------------

@dataclass
class EKRReport:
    group_order: int
    index: int
    stabilizer_size: int
    max_clique_size: int
    weak: bool
    strong: str
    witness: tuple[int, ...] | None = None
    witness_kind: str | None = None
    extremal_cliques_mod_translation: list[tuple[int, ...]] | None = None
    diagnostic: str | None = None

    @property
    def extremal_count(self) -> int | None:
        if self.extremal_cliques_mod_translation is None:
            return None
        return len(self.extremal_cliques_mod_translation)

    def to_dict(self) -> dict:
        d = {
            "group_order": self.group_order,
            "index": self.index,
            "stabilizer_size": self.stabilizer_size,
            "max_clique": self.max_clique_size,
            "weak": self.weak,
            "strong": self.strong,
            "witness": None if self.witness is None else
            {"elements": list(self.witness), "kind": self.witness_kind},
            "extremal_count": self.extremal_count,
        }
        if self.diagnostic:
            d["diagnostic"] = self.diagnostic
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False)


def _trivial_report(action: CosetAction) -> EKRReport:
    G = action.group
    return EKRReport(G.order, 1, G.order, G.order, True, "true",
                     extremal_cliques_mod_translation=[tuple(range(G.order))])


def check_weak_ekr(action: CosetAction, threads: int = 1,
                   max_vertices: int = MAX_CLIQUE_VERTICES) -> EKRReport:
    """Weak verdict only; strong stays not_computed unless weak fails."""
    G, H = action.group, action.subgroup
    if H.order == G.order:
        return _trivial_report(action)
    graph = build_graph(action)
    size, clique = max_clique(graph, threads=threads, max_vertices=max_vertices)
    weak = size == H.order
    if weak:
        return EKRReport(G.order, action.degree, H.order, size, True, "not_computed")
    return EKRReport(G.order, action.degree, H.order, size, False, "false",
                     witness=clique, witness_kind="clique")


def check_strong_ekr(action: CosetAction, threads: int = 1,
                     max_vertices: int = MAX_CLIQUE_VERTICES,
                     max_extremal: int = MAX_EXTREMAL) -> EKRReport:
    """Weak verdict plus a full classification of the maximum cliques through
    the identity against the conjugates of ``H``."""
    G, H = action.group, action.subgroup
    if H.order == G.order:
        return _trivial_report(action)
    report = check_weak_ekr(action, threads=threads, max_vertices=max_vertices)
    if not report.weak:
        return report
    graph = build_graph(action)
    try:
        cliques = enumerate_maximum_cliques_through_identity(
            graph, size=report.max_clique_size, cap=max_extremal)
    except CapExceeded as exc:
        report.strong = "not_computed"
        report.diagnostic = str(exc)
        return report
    canonical = set(conjugates(G, H))
    report.extremal_cliques_mod_translation = cliques
    for c in cliques:
        if c not in canonical:
            report.strong = "false"
            report.witness = c
            report.witness_kind = "non_canonical_max_clique"
            return report
    report.strong = "true"
    return report


# -- independent oracle ----------------------------------------------------------

def naive_adjacency(action: CosetAction) -> np.ndarray:
    """Adjacency straight from the action table: ``g1 ~ g2`` iff some point has
    the same image under both."""
    T = action.table
    n = T.shape[0]
    A = np.zeros((n, n), dtype=bool)
    step = max(1, 2_000_000 // max(1, n * T.shape[1]))
    for s in range(0, n, step):
        A[s:s + step] = (T[s:s + step, None, :] == T[None, :, :]).any(axis=2)
    np.fill_diagonal(A, False)
    return A


def naive_max_clique(action: CosetAction, roots: Iterable[int] | None = None) -> int:
    """Clique number by plain exhaustive search: for each root vertex, every
    subset of its later neighbours is explored, pruning only when the
    remaining candidates cannot beat the incumbent.
    """
    A = naive_adjacency(action)
    n = len(A)
    rows = [int.from_bytes(np.packbits(r, bitorder="little").tobytes(), "little") for r in A]
    best = 1

    def grow(size: int, P: int) -> None:
        nonlocal best
        if size > best:
            best = size
        while P:
            if size + bin(P).count("1") <= best:
                return
            low = P & -P
            v = low.bit_length() - 1
            P ^= low
            grow(size + 1, P & rows[v])

    for v in (range(n) if roots is None else roots):
        later = rows[v] & ~((1 << (v + 1)) - 1) if roots is None else rows[v]
        grow(1, later)
    return best
