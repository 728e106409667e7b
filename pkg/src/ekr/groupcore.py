"""Finite groups given by concrete generators.

A :class:`Group` is the full element table of a permutation or (projective)
matrix group, sorted by canonical encoding, so two runs from the same
generators agree index for index. All higher-level code talks about elements
through these integer indices.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .finfield import FiniteField, make_field

logger = logging.getLogger(__name__)

DEFAULT_ORDER_CAP = 2_000_000
TABLE_LIMIT = 4096
COMPLEMENT_CAP = 5000


class GroupError(ValueError):
    pass


class CapExceeded(RuntimeError):
    pass


# -- representations -----------------------------------------------------------

class PermRep:
    """Permutations of ``range(degree)`` stored as image arrays.

    Products compose right to left: ``(a*b)[i] == a[b[i]]``.
    """

    kind = "permutation"

    def __init__(self, degree: int):
        if degree < 1:
            raise GroupError("degree must be positive")
        self.degree = degree
        self.width = degree
        self.base = degree

    def __eq__(self, other):
        return isinstance(other, PermRep) and other.degree == self.degree

    def identity(self) -> np.ndarray:
        return np.arange(self.degree, dtype=np.int64)

    def validate(self, row) -> np.ndarray:
        a = np.asarray(row, dtype=np.int64).reshape(-1)
        if a.shape != (self.degree,) or sorted(a.tolist()) != list(range(self.degree)):
            raise GroupError(f"not a permutation of degree {self.degree}: {list(row)}")
        return a

    def mul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        A, B = np.broadcast_arrays(np.atleast_2d(A), np.atleast_2d(B))
        return np.take_along_axis(A, B, axis=1)

    def inv(self, A: np.ndarray) -> np.ndarray:
        return np.argsort(np.atleast_2d(A), axis=1).astype(np.int64)

    def encode(self, row) -> list[int]:
        return [int(x) for x in row]

    def spec(self) -> dict:
        return {"kind": "permutation", "degree": self.degree}


class MatrixRep:
    """n x n matrices over GF(q), rows flattened; optionally modulo scalars.

    Projective elements are normalized so the first nonzero entry in
    row-major order is 1.
    """

    kind = "matrix"

    def __init__(self, F: FiniteField, n: int, projective: bool = False,
                 determinant_one: bool = False):
        if n < 1:
            raise GroupError("dimension must be positive")
        self.F = F
        self.n = n
        self.projective = projective
        self.determinant_one = determinant_one
        self.width = n * n
        self.base = F.q
        q = F.q
        if F.k == 1:
            self._prime = True
            inv = np.zeros(q, dtype=np.int64)
            for a in range(1, q):
                inv[a] = F.inv(a)
            self._inv = inv
        else:
            self._prime = False
            self._add, self._mul, self._inv = F.tables
            self._neg = np.array([F.neg(a) for a in range(q)], dtype=np.int64)

    def __eq__(self, other):
        return (isinstance(other, MatrixRep) and other.F == self.F and other.n == self.n
                and other.projective == self.projective)

    # elementwise field ops on arrays
    def _fadd(self, x, y):
        if self._prime:
            return (x + y) % self.F.p
        return self._add[x, y]

    def _fsub(self, x, y):
        if self._prime:
            return (x - y) % self.F.p
        return self._add[x, self._neg[y]]

    def _fmul(self, x, y):
        if self._prime:
            return (x * y) % self.F.p
        return self._mul[x, y]

    def identity(self) -> np.ndarray:
        return np.eye(self.n, dtype=np.int64).reshape(-1)

    def matmul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """Batched product of (N, n, n) arrays, no normalization."""
        if self._prime:
            return (A @ B) % self.F.p
        n = self.n
        A, B = np.broadcast_arrays(A, B)
        acc = self._mul[A[..., :, 0, None], B[..., 0, None, :]]
        for k in range(1, n):
            acc = self._add[acc, self._mul[A[..., :, k, None], B[..., k, None, :]]]
        return acc

    def normalize(self, A: np.ndarray) -> np.ndarray:
        A = np.atleast_2d(A)
        if not self.projective:
            return A
        lead_pos = np.argmax(A != 0, axis=1)
        lead = A[np.arange(len(A)), lead_pos]
        return self._fmul(self._inv[lead][:, None], A)

    def mul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        n = self.n
        A, B = np.atleast_2d(A), np.atleast_2d(B)
        P = self.matmul(A.reshape(-1, n, n), B.reshape(-1, n, n))
        return self.normalize(P.reshape(-1, n * n))

    def _gauss(self, A: np.ndarray, want_inverse: bool):
        """Batched Gauss-Jordan; returns (det, inverse-or-None)."""
        n = self.n
        N = len(A)
        M = np.concatenate([A.reshape(N, n, n).copy(),
                            np.broadcast_to(np.eye(n, dtype=np.int64), (N, n, n))], axis=2)
        det = np.ones(N, dtype=np.int64)
        rows = np.arange(N)
        for c in range(n):
            nz = M[:, c:, c] != 0
            if not nz.any(axis=1).all():
                return np.zeros(N, dtype=np.int64), None
            piv = c + np.argmax(nz, axis=1)
            swap = piv != c
            top = M[rows, c].copy()
            M[rows, c] = M[rows, piv]
            M[rows[swap], piv[swap]] = top[swap]
            det = np.where(swap, self._fsub(np.zeros_like(det), det), det)
            p = M[:, c, c]
            det = self._fmul(det, p)
            M[:, c, :] = self._fmul(self._inv[p][:, None], M[:, c, :])
            for r in range(n):
                if r != c:
                    f = M[:, r, c]
                    M[:, r, :] = self._fsub(M[:, r, :], self._fmul(f[:, None], M[:, c, :]))
        return det, (M[:, :, n:].reshape(N, n * n) if want_inverse else None)

    def det(self, A: np.ndarray) -> np.ndarray:
        return self._gauss(np.atleast_2d(A), False)[0]

    def inv(self, A: np.ndarray) -> np.ndarray:
        det, inv = self._gauss(np.atleast_2d(A), True)
        if inv is None:
            raise GroupError("singular matrix")
        return self.normalize(inv)

    def validate(self, row) -> np.ndarray:
        a = np.asarray(row, dtype=np.int64).reshape(-1)
        if a.shape != (self.width,):
            raise GroupError(f"expected a {self.n}x{self.n} matrix")
        if (a < 0).any() or (a >= self.F.q).any():
            raise GroupError("matrix entry outside the field")
        d = int(self.det(a)[0])
        if d == 0:
            raise GroupError("singular matrix generator")
        if self.determinant_one and d != 1:
            # a normalized projective element only has det 1 up to an n-th power
            F = self.F
            e = (F.q - 1) // math.gcd(self.n, F.q - 1)
            if not self.projective or F.pow(d, e) != 1:
                raise GroupError("generator does not have determinant 1")
        return self.normalize(a)[0]

    def encode(self, row) -> list[list[int]]:
        n = self.n
        return [[int(row[i * n + j]) for j in range(n)] for i in range(n)]

    def spec(self) -> dict:
        return {"kind": "matrix", "field": {"p": self.F.p, "k": self.F.k}, "dim": self.n,
                "projective": self.projective, "determinant_one": self.determinant_one}


# -- groups --------------------------------------------------------------------

def _row_bytes(arr: np.ndarray) -> list[bytes]:
    arr = np.ascontiguousarray(arr, dtype=np.int64)
    raw = arr.tobytes()
    s = arr.shape[1] * 8
    return [raw[i:i + s] for i in range(0, len(raw), s)]


class Group:
    """Enumerated finite group; elements are addressed by sorted index."""

    def __init__(self, rep, elements: np.ndarray, generators: Sequence[int],
                 mul_table: np.ndarray | None = None, spec: dict | None = None):
        self.rep = rep
        self.elements = elements
        self.order = len(elements)
        self.generators = list(generators)
        self.mul_table = mul_table
        self.spec = spec
        self.name = None
        w = rep.width
        self._powers = None
        if float(rep.base) ** w < 2.0**62:
            self._powers = np.array([rep.base ** (w - 1 - i) for i in range(w)], dtype=np.int64)
            self._keys = elements @ self._powers
        else:
            self._index = {b: i for i, b in enumerate(_row_bytes(elements))}
        self.identity = self.index_of(rep.identity())

    def __len__(self):
        return self.order

    def __repr__(self):
        return f"<Group {self.name or self.rep.kind} order={self.order}>"

    # lookup
    def index_many(self, rows: np.ndarray) -> np.ndarray:
        rows = np.atleast_2d(rows)
        if self._powers is not None:
            keys = rows @ self._powers
            pos = np.searchsorted(self._keys, keys)
            pos = np.minimum(pos, self.order - 1)
            if not (self._keys[pos] == keys).all():
                raise GroupError("product left the group")
            return pos.astype(np.int64)
        try:
            return np.array([self._index[b] for b in _row_bytes(rows)], dtype=np.int64)
        except KeyError:
            raise GroupError("product left the group") from None

    def index_of(self, row) -> int:
        return int(self.index_many(np.asarray(row, dtype=np.int64).reshape(1, -1))[0])

    def element(self, i: int) -> np.ndarray:
        return self.elements[i]

    def encode(self, i: int):
        return self.rep.encode(self.elements[i])

    # arithmetic on indices
    def mul_many(self, I, J) -> np.ndarray:
        I, J = np.broadcast_arrays(np.asarray(I, dtype=np.int64), np.asarray(J, dtype=np.int64))
        if self.mul_table is not None:
            return self.mul_table[I, J]
        shape = I.shape
        out = self.index_many(self.rep.mul(self.elements[I.reshape(-1)],
                                           self.elements[J.reshape(-1)]))
        return out.reshape(shape)

    def mul(self, i: int, j: int) -> int:
        if self.mul_table is not None:
            return int(self.mul_table[i, j])
        return int(self.mul_many(i, j))

    @cached_property
    def inverses(self) -> np.ndarray:
        if self.mul_table is not None:
            return np.argmax(self.mul_table == self.identity, axis=1).astype(np.int64)
        out = np.empty(self.order, dtype=np.int64)
        step = 65536
        for s in range(0, self.order, step):
            out[s:s + step] = self.index_many(self.rep.inv(self.elements[s:s + step]))
        return out

    def inv(self, i: int) -> int:
        return int(self.inverses[i])

    def conj_many(self, H, g) -> np.ndarray:
        """``g^-1 h g`` elementwise (broadcast)."""
        H, g = np.broadcast_arrays(np.asarray(H, dtype=np.int64), np.asarray(g, dtype=np.int64))
        return self.mul_many(self.mul_many(self.inverses[g], H), g)

    def commutator(self, g: int, h: int) -> int:
        """``[g, h] = g^-1 h^-1 g h``."""
        inv = self.inverses
        return self.mul(self.mul(inv[g], inv[h]), self.mul(g, h))

    def power(self, i: int, e: int) -> int:
        if e < 0:
            i, e = self.inv(i), -e
        result, base = self.identity, i
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def all(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    def whole(self) -> Subgroup:
        return Subgroup(self, self.all(), tuple(self.generators))

    def trivial(self) -> Subgroup:
        return Subgroup(self, np.array([self.identity], dtype=np.int64), ())

    def is_abelian(self) -> bool:
        gens = self.generators
        return all(self.mul(a, b) == self.mul(b, a) for a in gens for b in gens)


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: Group
    members: np.ndarray
    gens: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "members", np.unique(np.asarray(self.members, dtype=np.int64)))

    @property
    def order(self) -> int:
        return len(self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, i) -> bool:
        return bool(self.mask[i])

    def __eq__(self, other):
        return (isinstance(other, Subgroup) and other.parent is self.parent
                and np.array_equal(other.members, self.members))

    def __hash__(self):
        return hash(self.key)

    @cached_property
    def key(self) -> tuple[int, ...]:
        return tuple(int(x) for x in self.members)

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.parent.order, dtype=bool)
        m[self.members] = True
        return m

    def generators(self) -> tuple[int, ...]:
        """A generating set: stored gens or a greedy one in canonical order."""
        if self.gens or self.order == 1:
            return self.gens
        G = self.parent
        chosen: list[int] = []
        cur = G.trivial()
        for x in self.members:
            if not cur.mask[x]:
                chosen.append(int(x))
                cur = subgroup_generate(G, chosen)
                if cur.order == self.order:
                    break
        object.__setattr__(self, "gens", tuple(chosen))
        return self.gens

    def is_normal(self) -> bool:
        G = self.parent
        for g in G.generators:
            if not self.mask[G.conj_many(self.members, g)].all():
                return False
        return True


# -- construction --------------------------------------------------------------

def enumerate_group(rep, generators: Iterable, cap: int = DEFAULT_ORDER_CAP,
                    spec: dict | None = None) -> Group:
    """Breadth-first closure of ``generators``; elements sorted canonically."""
    gens = [rep.validate(g) for g in generators]
    ident = rep.identity()
    if rep.kind == "matrix":
        ident = rep.normalize(ident)[0]
    rows = [ident]
    index = {_row_bytes(ident[None, :])[0]: 0}
    parent = [-1]
    via = [-1]
    frontier = np.array([ident], dtype=np.int64)
    frontier_ids = np.array([0])
    right: list[list[int]] = [[] for _ in gens]
    # right[s][i] = bfs index of element_i * gen_s, filled in bfs order
    while len(frontier):
        new_rows, new_ids = [], []
        prods = [rep.mul(frontier, g[None, :]) for g in gens]
        for pos, i in enumerate(frontier_ids):
            for s, P in enumerate(prods):
                b = P[pos].tobytes()
                j = index.get(b)
                if j is None:
                    j = len(rows)
                    if j >= cap:
                        raise CapExceeded(f"group order exceeds cap {cap}")
                    index[b] = j
                    rows.append(P[pos])
                    parent.append(int(i))
                    via.append(s)
                    new_rows.append(P[pos])
                    new_ids.append(j)
                right[s].append(j)
        frontier = np.array(new_rows, dtype=np.int64).reshape(-1, rep.width)
        frontier_ids = np.array(new_ids)
    E = np.array(rows, dtype=np.int64)
    N = len(E)
    order = np.lexsort(E.T[::-1])
    new_of_old = np.empty(N, dtype=np.int64)
    new_of_old[order] = np.arange(N)
    table = None
    if N <= TABLE_LIMIT:
        R = [np.array(r, dtype=np.int64) for r in right]
        T = np.empty((N, N), dtype=np.int64)
        T[:, 0] = np.arange(N)
        for g in range(1, N):
            T[:, g] = R[via[g]][T[:, parent[g]]]
        table = new_of_old[T[np.ix_(order, order)]]
    gen_idx = sorted({int(new_of_old[index[g.tobytes()]]) for g in gens})
    G = Group(rep, E[order], [], mul_table=table, spec=spec)
    G.generators = [i for i in gen_idx if i != G.identity]
    return G


def subgroup_generate(G: Group, gens: Iterable[int]) -> Subgroup:
    gens = [int(g) for g in gens]
    mask = np.zeros(G.order, dtype=bool)
    mask[G.identity] = True
    frontier = np.array([G.identity], dtype=np.int64)
    while len(frontier):
        found = []
        for s in gens:
            P = G.mul_many(frontier, s)
            new = np.unique(P[~mask[P]])
            mask[new] = True
            found.append(new)
        frontier = np.concatenate(found) if found else np.array([], dtype=np.int64)
    return Subgroup(G, np.flatnonzero(mask), tuple(g for g in gens if g != G.identity))


def subgroup_from_members(G: Group, members: Iterable[int]) -> Subgroup:
    """Wrap an index set that must already be a subgroup (closure checked)."""
    S = Subgroup(G, np.fromiter(members, dtype=np.int64))
    if not is_closed(G, S.members):
        raise GroupError("index set is not closed under multiplication")
    return S


def is_closed(G: Group, members: np.ndarray) -> bool:
    members = np.asarray(members, dtype=np.int64)
    mask = np.zeros(G.order, dtype=bool)
    mask[members] = True
    if not mask[G.identity]:
        return False
    if len(members) * len(members) <= 4_000_000:
        P = G.mul_many(members[:, None], members[None, :])
        return bool(mask[P].all())
    return all(mask[G.mul_many(members, m)].all() for m in members)


def left_cosets(G: Group, H: Subgroup) -> tuple[list[int], np.ndarray]:
    """Coset representatives (identity first, then by canonical minimum) and
    the coset number of every element."""
    coset_of = np.full(G.order, -1, dtype=np.int64)
    mins: list[int] = []
    if G.mul_table is not None:
        m = G.mul_table[:, H.members].min(axis=1)
        mins = sorted(set(m.tolist()))
        pos = {v: i for i, v in enumerate(mins)}
        coset_of = np.array([pos[v] for v in m.tolist()], dtype=np.int64)
    else:
        for g in range(G.order):
            if coset_of[g] < 0:
                coset_of[G.mul_many(g, H.members)] = len(mins)
                mins.append(g)
    id_coset = int(coset_of[G.identity])
    order = [id_coset] + [c for c in range(len(mins)) if c != id_coset]
    renum = np.empty(len(mins), dtype=np.int64)
    renum[order] = np.arange(len(mins))
    reps = [G.identity] + [mins[c] for c in order[1:]]
    return reps, renum[coset_of]


def conjugate_closure(G: Group, H: Subgroup, reps: Sequence[int] | None = None) -> np.ndarray:
    """Sorted index set of the union of all conjugates of ``H``.

    ``reps`` may pass precomputed left coset representatives.
    """
    if reps is None:
        reps, _ = left_cosets(G, H)
    # g^-1 H g only depends on the right coset Hg, i.e. g = r^-1 for a left rep r
    conjugators = G.inverses[np.array(reps, dtype=np.int64)]
    D = G.conj_many(H.members[None, :], conjugators[:, None])
    return np.unique(D)


def conjugates(G: Group, H: Subgroup) -> list[tuple[int, ...]]:
    """All distinct conjugates of ``H`` as sorted index tuples."""
    reps, _ = left_cosets(G, H)
    conjugators = G.inverses[np.array(reps, dtype=np.int64)]
    C = np.sort(G.conj_many(H.members[None, :], conjugators[:, None]), axis=1)
    return sorted({tuple(int(x) for x in row) for row in C})


def center(G: Group) -> Subgroup:
    mask = np.ones(G.order, dtype=bool)
    allg = G.all()
    for s in G.generators:
        mask &= G.mul_many(allg, s) == G.mul_many(s, allg)
    return Subgroup(G, np.flatnonzero(mask))


def normal_closure(G: Group, gens: Iterable[int]) -> Subgroup:
    gens = sorted(set(int(g) for g in gens))
    K = subgroup_generate(G, gens)
    while True:
        extra = []
        for g in G.generators:
            c = G.conj_many(np.array(gens, dtype=np.int64), g) if gens else np.array([], int)
            extra.extend(int(x) for x in c if not K.mask[x])
        if not extra:
            return K
        gens = sorted(set(gens) | set(extra))
        K = subgroup_generate(G, gens)


def commutator_subgroup(G: Group) -> Subgroup:
    gens = G.generators
    comms = {G.commutator(a, b) for a in gens for b in gens}
    comms.discard(G.identity)
    return normal_closure(G, comms)


def element_order(G: Group, i: int) -> int:
    n, x = 1, int(i)
    while x != G.identity:
        x = G.mul(x, i)
        n += 1
    return n


def is_coset_of_conjugate(G: Group, S: Iterable[int], H: Subgroup) -> bool:
    S = np.unique(np.fromiter((int(s) for s in S), dtype=np.int64))
    if len(S) == 0:
        raise GroupError("empty set")
    if len(S) != H.order:
        return False
    s0 = int(S[0])
    K = np.unique(G.mul_many(G.inverses[s0], S))
    if not is_closed(G, K):
        return False
    kmask = np.zeros(G.order, dtype=bool)
    kmask[K] = True
    ok = np.ones(G.order, dtype=bool)
    allg = G.all()
    for h in H.generators():
        ok &= kmask[G.conj_many(h, allg)]
    return bool(ok.any())


def find_complement(G: Group, H: Subgroup, cap: int = COMPLEMENT_CAP) -> Subgroup | None:
    """First complement of ``H``, scanning generator tuples by length, then
    lexicographically in canonical order."""
    if G.order > cap:
        raise CapExceeded(f"complement search is capped at |G| <= {cap}")
    m = G.order // H.order
    if m == 1:
        return G.trivial()
    if H.order == 1:
        return G.whole()
    hmask = H.mask
    # elements of a complement avoid H and have order dividing m
    cands = [g for g in range(G.order)
             if not hmask[g] and m % element_order(G, g) == 0]
    seen: set[tuple[int, ...]] = set()
    layer: list[tuple[tuple[int, ...], Subgroup]] = [((), G.trivial())]
    while layer:
        nxt = []
        for tup, K in layer:
            start = tup[-1] + 1 if tup else 0
            for g in cands:
                if g < start or K.mask[g]:
                    continue
                K2 = subgroup_generate(G, tup + (g,))
                if K2.key in seen:
                    continue
                seen.add(K2.key)
                if m % K2.order or hmask[K2.members].sum() > 1:
                    continue
                if K2.order == m:
                    return K2
                nxt.append((tup + (g,), K2))
        layer = nxt
    return None


def all_subgroups(G: Group) -> list[Subgroup]:
    """Every subgroup, by iterated extension of cyclic subgroups."""
    found: dict[tuple[int, ...], Subgroup] = {}
    triv = G.trivial()
    found[triv.key] = triv
    cyclic = {}
    for g in range(G.order):
        C = subgroup_generate(G, [g])
        cyclic.setdefault(C.key, C)
    layer = list(cyclic.values())
    for C in layer:
        found[C.key] = C
    cyc_list = sorted(cyclic.values(), key=lambda s: s.key)
    while layer:
        nxt = []
        for K in layer:
            for C in cyc_list:
                if K.mask[C.members].all():
                    continue
                J = subgroup_generate(G, K.generators() + C.generators())
                if J.key not in found:
                    found[J.key] = J
                    nxt.append(J)
        layer = nxt
    return sorted(found.values(), key=lambda s: (s.order, s.key))


def subgroup_classes(G: Group) -> list[Subgroup]:
    """One representative per conjugacy class (the canonically smallest)."""
    classes: dict[tuple[int, ...], Subgroup] = {}
    for K in all_subgroups(G):
        rep = min(conjugates(G, K))
        if rep not in classes:
            classes[rep] = Subgroup(G, np.array(rep, dtype=np.int64))
    return sorted(classes.values(), key=lambda s: (s.order, s.key))


# -- JSON specs ----------------------------------------------------------------

def rep_from_spec(spec: dict):
    kind = spec.get("kind")
    if kind == "permutation":
        return PermRep(int(spec["degree"]))
    if kind == "matrix":
        f = spec["field"]
        F = make_field(int(f["p"]), int(f.get("k", 1)))
        return MatrixRep(F, int(spec["dim"]), bool(spec.get("projective", False)),
                         bool(spec.get("determinant_one", False)))
    raise GroupError(f"unknown group kind {kind!r}")


def group_from_spec(spec: dict, cap: int = DEFAULT_ORDER_CAP) -> Group:
    rep = rep_from_spec(spec)
    gens = spec.get("generators")
    if not isinstance(gens, list):
        raise GroupError("group spec needs a generator list")
    return enumerate_group(rep, gens, cap=cap, spec=spec)


def subgroup_from_spec(G: Group, gens: list) -> Subgroup:
    """Generators in the ambient group's element encoding."""
    if not isinstance(gens, list):
        raise GroupError("subgroup spec must be a list of elements")
    idx = []
    for g in gens:
        row = G.rep.validate(g)
        try:
            idx.append(G.index_of(row))
        except GroupError:
            raise GroupError(f"subgroup generator {g} is not in the group") from None
    return subgroup_generate(G, idx)
