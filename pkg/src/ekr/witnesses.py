"""Explicit, replayable certificates for intersecting and independent sets.

Every builder returns a :class:`WitnessCertificate` holding concrete matrix or
permutation encodings, so a certificate can be written to JSON and checked
later against a freshly enumerated group.
"""
from __future__ import annotations

import json
import logging
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from .action import build_coset_action, is_intersecting
from .catalog import (build_named, heisenberg_element, load_group, prime_power, suzuki_field,
                      suzuki_k, suzuki_parts, suzuki_v)
from .ekrgraph import build_graph, check_strong_ekr, clique_coclique_check, verify_independent
from .finfield import (ExtensionField, FieldError, is_prime, is_square, make_field,
                       prime_factors, sum_of_two_squares)
from .groupcore import (DEFAULT_ORDER_CAP, CapExceeded, Group, GroupError, Subgroup, center,
                        conjugates, element_order, is_closed, is_coset_of_conjugate,
                        subgroup_from_spec, subgroup_generate)

logger = logging.getLogger(__name__)

KINDS = ("weak_failure", "strong_failure", "independent_set", "strong_success_support")


class ReplayError(RuntimeError):
    """A certificate did not reproduce its claim."""


@dataclass
class WitnessCertificate:
    name: str
    params: dict
    kind: str
    group_spec: dict
    subgroup: list
    elements: list
    claimed_sizes: tuple[int, int, int]
    # (element, g) pairs with g^-1 * element * g inside the subgroup
    conjugators: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown certificate kind {self.kind!r}")
        self.claimed_sizes = tuple(int(x) for x in self.claimed_sizes)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["claimed_sizes"] = list(self.claimed_sizes)
        return d

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, d: dict) -> WitnessCertificate:
        return cls(**{k: d[k] for k in ("name", "params", "kind", "group_spec", "subgroup",
                                        "elements", "claimed_sizes")},
                   conjugators=d.get("conjugators", []), notes=d.get("notes", {}))

    @classmethod
    def from_json(cls, text: str) -> WitnessCertificate:
        return cls.from_dict(json.loads(text))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json(indent=1))

    @classmethod
    def load(cls, path: str | Path) -> WitnessCertificate:
        return cls.from_json(Path(path).read_text())

    def replay(self, cap: int = DEFAULT_ORDER_CAP) -> dict[str, bool]:
        """Rebuild everything from the encodings and re-derive each claim."""
        return replay(self, cap)

    def verify(self, cap: int = DEFAULT_ORDER_CAP) -> bool:
        checks = self.replay(cap)
        bad = [k for k, v in checks.items() if not v]
        if bad:
            logger.error("certificate %s%s failed: %s", self.name, self.params, ", ".join(bad))
        return not bad


# -- helpers -------------------------------------------------------------------

def _flat(M) -> list[int]:
    return [int(x) for x in np.asarray(M, dtype=np.int64).reshape(-1)]


def _idx(G: Group, enc) -> int:
    return G.index_of(G.rep.validate(enc))


def _named_spec(name: str, params: dict) -> dict:
    return {"kind": "named", "name": name, "params": dict(params)}


def _find_conjugator(G: Group, s: int, Hmask: np.ndarray, pool: np.ndarray | None = None) -> int | None:
    """First ``g`` (canonical order) with ``g^-1 s g`` in the subgroup."""
    cand = G.all() if pool is None else pool
    hits = np.flatnonzero(Hmask[G.conj_many(s, cand)])
    return int(cand[hits[0]]) if len(hits) else None


def _cover_by_conjugates(G: Group, S, H: Subgroup) -> list[tuple[int, int]]:
    out = []
    mask = H.mask
    for s in S:
        if s == G.identity:
            continue
        g = _find_conjugator(G, s, mask)
        if g is None:
            raise GroupError(f"element {G.encode(s)} is not conjugate into the subgroup")
        out.append((s, g))
    return out


def _certificate(name, params, kind, G: Group, H: Subgroup, S, conj=(), notes=None,
                 index: int | None = None) -> WitnessCertificate:
    S = sorted({int(s) for s in S})
    return WitnessCertificate(
        name=name, params=dict(params), kind=kind, group_spec=G.spec,
        subgroup=[G.encode(g) for g in H.generators()],
        elements=[G.encode(s) for s in S],
        claimed_sizes=(len(S), H.order, index if index is not None else G.order // H.order),
        conjugators=[[G.encode(s), G.encode(g)] for s, g in conj],
        notes=notes or {})


# -- replay --------------------------------------------------------------------

_EXTRA_CHECKS: dict[str, Callable[[WitnessCertificate, Group, Subgroup, list[int]], dict]] = {}


def replay(cert: WitnessCertificate, cap: int = DEFAULT_ORDER_CAP) -> dict[str, bool]:
    G = load_group(cert.group_spec, cap)
    H = subgroup_from_spec(G, cert.subgroup)
    S = [_idx(G, e) for e in cert.elements]
    checks: dict[str, bool] = {}
    checks["distinct_elements"] = len(set(S)) == len(S)
    checks["sizes"] = (len(S), H.order, G.order // H.order) == tuple(cert.claimed_sizes)
    action = build_coset_action(G, H)

    if cert.conjugators:
        Hmask = H.mask
        ok = True
        for s_enc, g_enc in cert.conjugators:
            s = _idx(G, s_enc)
            g = _idx(G, g_enc)
            ok &= bool(Hmask[G.conj_many(s, g)])
        checks["conjugators"] = ok
        covered = {_idx(G, s) for s, _ in cert.conjugators} | {G.identity}
        if cert.kind == "weak_failure":
            checks["conjugators_cover_set"] = set(S) <= covered
        if cert.notes.get("conjugator_det_one"):
            dets = G.rep.det(np.array([_flat(g) for _, g in cert.conjugators], dtype=np.int64))
            checks["conjugator_det_one"] = bool((dets == 1).all())

    if cert.kind == "weak_failure":
        checks["intersecting"] = is_intersecting(action, S)
        checks["exceeds_stabilizer"] = len(S) > H.order
    elif cert.kind == "strong_failure":
        checks["intersecting"] = is_intersecting(action, S)
        checks["maximum_size"] = len(S) == H.order
        checks["not_coset_of_conjugate"] = not is_coset_of_conjugate(G, S, H)
    elif cert.kind == "independent_set":
        graph = build_graph(action)
        checks["independent"] = verify_independent(graph, S)
        checks["tight_bound"] = len(S) * H.order == G.order
        checks["clique_coclique"] = clique_coclique_check(graph, H.members, S)
    elif cert.kind == "strong_success_support":
        report = check_strong_ekr(action)
        checks["weak"] = report.weak
        checks["strong"] = report.strong == "true"
        checks["stabilizer_is_clique"] = set(S) == set(H.members.tolist())

    extra = _EXTRA_CHECKS.get(cert.name)
    if extra is not None:
        checks.update(extra(cert, G, H, S))
    return checks


# -- Heisenberg ----------------------------------------------------------------

def heisenberg_witness(p: int) -> WitnessCertificate:
    """The parabola ``{eta(x, 0, x^2)}``: intersecting, of stabilizer size, not a coset."""
    if not is_prime(p) or p == 2 or p > 13:
        raise GroupError("heisenberg witness needs an odd prime p <= 13")
    G = build_named("heisenberg", {"p": p})
    H = subgroup_generate(G, [G.index_of(heisenberg_element(p, 1, 0, 0))])
    S = [G.index_of(heisenberg_element(p, x, 0, x * x)) for x in range(p)]
    return _certificate("heisenberg", {"p": p}, "strong_failure", G, H, S)


# -- unipotent subgroups of PGL ------------------------------------------------

def _unit(n: int, entries: dict[tuple[int, int], int]) -> list[int]:
    M = np.eye(n, dtype=np.int64)
    for (i, j), v in entries.items():
        M[i, j] = v
    return M.reshape(-1).tolist()


def pgl_unipotent_witness(n: int, q: int) -> WitnessCertificate:
    """Unipotent ``U < V`` with every element of ``V`` conjugate into ``U``."""
    p, l = prime_power(q)
    F = make_field(p, l)
    if n == 2:
        if l < 2:
            raise GroupError("n = 2 needs q = p^l with l >= 2")
        U_gens = [_unit(2, {(0, 1): 1})]
        V_elems = [_unit(2, {(0, 1): x}) for x in range(q)]
    elif n >= 3:
        U_gens = [_unit(n, {(0, 1): x}) for x in range(1, q)]
        V_elems = [_unit(n, {(0, 1): x, (0, 2): z}) for x in range(q) for z in range(q)]
    else:
        raise GroupError("needs n = 2 with a proper prime power, or n >= 3")
    G = build_named("PGL", {"n": n, "q": q})
    U = subgroup_generate(G, [_idx(G, g) for g in U_gens])
    V = [_idx(G, v) for v in V_elems]
    conj = _cover_by_conjugates(G, V, U)
    return _certificate("pgl-unipotent", {"n": n, "q": q}, "weak_failure", G, U, V, conj,
                        notes={"field_order": F.q, "set_is_subgroup": True})


def _closed_set_check(cert, G, H, S):
    if not cert.notes.get("set_is_subgroup"):
        return {}
    return {"set_is_subgroup": is_closed(G, np.array(sorted(set(S)), dtype=np.int64))}


_EXTRA_CHECKS["pgl-unipotent"] = _closed_set_check
_EXTRA_CHECKS["alternating"] = _closed_set_check


def psl3_f3_witness() -> WitnessCertificate:
    """``U < V`` in PSL_3(F_3) with determinant-one conjugators found by search
    in GL_3(F_3), negated when their determinant is -1."""
    n, q = 3, 3
    G = build_named("PSL", {"n": n, "q": q})
    GL = build_named("GL", {"n": n, "q": q})
    U_gens = [_unit(n, {(0, 1): 1})]
    V_elems = [_unit(n, {(0, 1): x, (0, 2): z}) for x in range(q) for z in range(q)]
    U = subgroup_generate(G, [_idx(G, g) for g in U_gens])
    V = [_idx(G, v) for v in V_elems]
    U_gl = subgroup_generate(GL, [_idx(GL, g) for g in U_gens])
    det = GL.rep.det(GL.elements)
    raw = []
    for v_enc in V_elems:
        v = _idx(GL, v_enc)
        if v == GL.identity:
            continue
        P = _find_conjugator(GL, v, U_gl.mask)
        if P is None:
            raise GroupError("no conjugator in GL_3(F_3)")
        M = GL.elements[P].copy()
        if det[P] != 1:
            M = (-M) % 3
        raw.append([v_enc, np.asarray(M).reshape(n, n).tolist()])
    cert = _certificate("psl3-f3", {}, "weak_failure", G, U, V, notes={
        "conjugator_det_one": True, "set_is_subgroup": True})
    # keep the literal determinant-one matrices rather than their normal forms
    cert.conjugators = [[np.asarray(v).reshape(n, n).tolist(), M] for v, M in raw]
    return cert


_EXTRA_CHECKS["psl3-f3"] = _closed_set_check


# -- SL_2 / PSL_2 --------------------------------------------------------------

def psl2_witness(q: int) -> WitnessCertificate:
    """Intersecting set larger than the stabilizer for SL_2(F_q) on SL_2/H,
    with ``Z(SL_2) <= H`` so the failure passes to PSL_2(F_q)."""
    if q < 3:
        raise GroupError("psl2 witness needs q >= 3")
    p, k = prime_power(q)
    F = make_field(p, k)
    G = build_named("SL", {"n": 2, "q": q})
    I = [1, 0, 0, 1]
    m1 = F.neg(1)
    if p == 2:
        case = 3
        J = [0, 1, 1, 0]
        c = 2
        d = F.add(c, 1)
        B = [d, c, c, d]
        H = subgroup_generate(G, [_idx(G, J)])
        S = [_idx(G, I), _idx(G, J), _idx(G, B)]
        extra = {"c": c, "d": d}
    elif not is_square(F(m1)):
        case = 1
        J = [0, m1, 1, 0]
        c0, d0 = (x.value for x in sum_of_two_squares(F(m1)))
        B = [F.neg(d0), c0, c0, d0]
        H = subgroup_generate(G, [_idx(G, J)])
        S = [_idx(G, I), _idx(G, [m1, 0, 0, m1]), _idx(G, J),
             _idx(G, [0, 1, m1, 0]), _idx(G, B)]
        extra = {"c0": c0, "d0": d0}
    else:
        case = 2
        J = [0, m1, 1, 0]
        z = F.zeta.value
        H = subgroup_generate(G, [_idx(G, [z, 0, 0, F.inv(z)])])
        S = H.members.tolist() + [_idx(G, J)]
        extra = {}
    notes = {"case": case, "J": J, "descent_group": _named_spec("PSL", {"n": 2, "q": q}), **extra}
    if case != 2:
        notes["B"] = B
    return _certificate("psl2", {"q": q}, "weak_failure", G, H, S, notes=notes)


def _psl2_descent(cert, G, H, S):
    """Center inside H, and the images in PSL_2 still beat the stabilizer."""
    Z = center(G)
    out = {"center_in_stabilizer": bool(H.mask[Z.members].all())}
    P = load_group(cert.notes["descent_group"])
    image = P.index_many(P.rep.normalize(G.elements))
    Hbar = Subgroup(P, np.unique(image[H.members]))
    Sbar = np.unique(image[np.array(S)])
    act = build_coset_action(P, Hbar)
    out["descent_intersecting"] = is_intersecting(act, Sbar)
    out["descent_exceeds_stabilizer"] = len(Sbar) > Hbar.order
    return out


_EXTRA_CHECKS["psl2"] = _psl2_descent


def torus_normalizer_check(q: int) -> bool:
    """For odd ``q`` with -1 a square: J normalizes the diagonal torus and each
    ``J_a = [[0, a], [-1/a, 0]]`` is diagonalized by some determinant-one matrix."""
    p, k = prime_power(q)
    F = make_field(p, k)
    if p == 2 or not is_square(F(F.neg(1))):
        raise GroupError("needs odd q with -1 a square")
    G = build_named("SL", {"n": 2, "q": q})
    m1 = F.neg(1)
    J = _idx(G, [0, m1, 1, 0])
    z = F.zeta.value
    T = subgroup_generate(G, [_idx(G, [z, 0, 0, F.inv(z)])])
    if not T.mask[G.conj_many(T.members, J)].all():
        return False
    diag = (G.elements[:, 1] == 0) & (G.elements[:, 2] == 0)
    for a in range(1, q):
        Ja = _idx(G, [0, a, F.neg(F.inv(a)), 0])
        if not diag[G.conj_many(Ja, G.all())].any():
            return False
    return True


# -- Suzuki --------------------------------------------------------------------

def theta_inverse(F, a: int, n: int) -> int:
    """Inverse of ``x -> x^(2^(n+1))`` on GF(2^(2n+1)), namely ``x -> x^(2^n)``."""
    return F.pow(a, 2**n)


def suzuki_witness(n: int = 1, large: bool = False) -> WitnessCertificate:
    """``B = union of B0^h`` over the torus; ``B`` intersecting on Sz(q)/B0."""
    if n >= 2 and not large:
        raise CapExceeded("Sz(q) for q >= 32 needs the large-instance flag")
    F = suzuki_field(n)
    q = F.q
    G = build_named("suzuki", {"n": n, "large": True} if n >= 2 else {"n": n})
    B, B0, Hk = suzuki_parts(G, n)
    conj = []
    gammas = []
    for alpha in range(q):
        gamma = 1 if alpha == 0 else F.inv(theta_inverse(F, alpha, n))
        g = G.index_of(suzuki_k(F, gamma))
        for beta in range(q):
            conj.append((G.index_of(suzuki_v(F, alpha, beta)), g))
        gammas.append([alpha, gamma])
    params = {"n": n}
    return _certificate("suzuki", params, "weak_failure", G, B0, B.members, conj,
                        notes={"q": q, "gamma": gammas, "set_is_subgroup": True})


def _suzuki_extra(cert, G, H, S):
    n = int(cert.params["n"])
    B, B0, Hk = suzuki_parts(G, n)
    union = np.unique(G.conj_many(B0.members[None, :], Hk.members[:, None]))
    out = {"union_of_conjugates": np.array_equal(union, B.members),
           "set_is_B": sorted(S) == B.members.tolist(),
           "set_is_subgroup": is_closed(G, B.members)}
    out.update(suzuki_identities(n, G))
    return out


_EXTRA_CHECKS["suzuki"] = _suzuki_extra


def suzuki_identities(n: int = 1, G: Group | None = None) -> dict[str, bool]:
    """Exhaustive product rule ``v(a1,b1) v(a2,b2) = v(a1+a2, b1+b2+a1 a2^t)``
    and torus action ``k(g)^-1 v(a,b) k(g) = v(a g^t, b g^2 g^t)``."""
    from .finfield import suzuki_twist
    F = suzuki_field(n)
    q = F.q
    rep = G.rep if G is not None else build_named("suzuki", {"n": n}).rep
    th = [suzuki_twist(F(a)).value for a in range(q)]
    pairs = [(a, b) for a in range(q) for b in range(q)]
    V = np.array([suzuki_v(F, a, b) for a, b in pairs], dtype=np.int64)
    # product rule: all (pair, pair) combinations
    L = np.repeat(V, len(pairs), axis=0)
    R = np.tile(V, (len(pairs), 1))
    prod_ = rep.mul(L, R)
    want = np.array([suzuki_v(F, F.add(a1, a2), F.add(F.add(b1, b2), F.mul(a1, th[a2])))
                     for a1, b1 in pairs for a2, b2 in pairs], dtype=np.int64)
    product_ok = bool(np.array_equal(prod_, want))
    torus_ok = True
    for gamma in range(1, q):
        K = np.array(suzuki_k(F, gamma), dtype=np.int64)
        Kinv = rep.inv(K)
        lhs = rep.mul(rep.mul(np.broadcast_to(Kinv, V.shape), V), np.broadcast_to(K, V.shape))
        g2 = F.mul(F.mul(gamma, gamma), th[gamma])
        rhs = np.array([suzuki_v(F, F.mul(a, th[gamma]), F.mul(b, g2)) for a, b in pairs],
                       dtype=np.int64)
        torus_ok &= bool(np.array_equal(lhs, rhs))
    return {"product_rule": product_ok, "torus_action": torus_ok}


# -- alternating ---------------------------------------------------------------

def _perm(n: int, swaps) -> list[int]:
    img = list(range(n))
    for a, b in swaps:
        img[a], img[b] = img[b], img[a]
    return img


def alternating_witness(n: int) -> WitnessCertificate:
    """Klein four group ``V`` against ``U = <(12)(34)>`` in A_n, n >= 6."""
    if n < 6:
        raise GroupError("alternating witness needs n >= 6")
    G = build_named("alternating", {"n": n})
    U = subgroup_generate(G, [_idx(G, _perm(n, [(0, 1), (2, 3)]))])
    V = [_idx(G, _perm(n, s)) for s in ([], [(0, 1), (2, 3)], [(0, 1), (4, 5)], [(2, 3), (4, 5)])]
    conj = _cover_by_conjugates(G, V, U)
    return _certificate("alternating", {"n": n}, "weak_failure", G, U, V, conj,
                        notes={"set_is_subgroup": True})


# -- projective space: independent sets ----------------------------------------

def multiplication_map(E: ExtensionField, x) -> np.ndarray:
    """Matrix of ``a -> a x`` on GF(q^n) over GF(q) in the power basis."""
    return np.array(E.multiplication_matrix(x), dtype=np.int64)


def point_stabilizer(G: Group) -> Subgroup:
    """Stabilizer of the line through the first basis vector (first column
    vanishes below the diagonal)."""
    n = G.rep.n
    below = G.elements[:, [i * n for i in range(1, n)]]
    members = np.flatnonzero((below == 0).all(axis=1))
    return Subgroup(G, members)


def _projective_points(n: int, q: int) -> int:
    return (q**n - 1) // (q - 1)


def pgl_independent_set(n: int, q: int) -> WitnessCertificate:
    """``T = {Phi(zeta^j) : 0 <= j < m}`` in PGL_n(F_q), m = |P^(n-1)|."""
    if n < 2:
        raise GroupError("needs n >= 2")
    p, k = prime_power(q)
    E = ExtensionField(make_field(p, k), n)
    m = _projective_points(n, q)
    G = build_named("PGL", {"n": n, "q": q})
    H = point_stabilizer(G)
    x, z = E.one(), E.gen()
    T = []
    for _ in range(m):
        T.append(_idx(G, multiplication_map(E, x)))
        x = E.mul(x, z)
    return _certificate("pgl-independent", {"n": n, "q": q}, "independent_set", G, H, T,
                        notes={"m": m, "poly": list(E.poly)})


def psl_independent_set(n: int, q: int) -> WitnessCertificate:
    """``T_m = {Phi(zeta^((q-1) j))}`` in PSL_n(F_q), needs gcd(n, q-1) = 1."""
    if n < 2:
        raise GroupError("needs n >= 2")
    if math.gcd(n, q - 1) != 1:
        raise GroupError("needs gcd(n, q - 1) = 1")
    p, k = prime_power(q)
    F = make_field(p, k)
    E = ExtensionField(F, n)
    m = _projective_points(n, q)
    G = build_named("PSL", {"n": n, "q": q})
    H = point_stabilizer(G)
    step = E.pow(E.gen(), q - 1)
    x = E.one()
    mats = []
    for _ in range(m):
        mats.append(multiplication_map(E, x))
        x = E.mul(x, step)
    dets = G.rep.det(np.array([M.reshape(-1) for M in mats]))
    if not (dets == 1).all():
        raise GroupError("multiplication map with determinant != 1")
    T = [_idx(G, M) for M in mats]
    return _certificate("psl-independent", {"n": n, "q": q}, "independent_set", G, H, T,
                        notes={"m": m, "poly": list(E.poly), "determinants_one": True})


def charpoly(A, F) -> list[int]:
    """Characteristic polynomial ``det(tI - A)`` over ``F`` (low degree first),
    via reduction to Hessenberg form."""
    n = len(A)
    M = [[int(v) for v in row] for row in A]
    for m in range(1, n - 1):
        piv = next((i for i in range(m, n) if M[i][m - 1]), None)
        if piv is None:
            continue
        if piv != m:
            M[piv], M[m] = M[m], M[piv]
            for row in M:
                row[piv], row[m] = row[m], row[piv]
        inv = F.inv(M[m][m - 1])
        for i in range(m + 1, n):
            u = F.mul(M[i][m - 1], inv)
            if not u:
                continue
            for j in range(n):
                M[i][j] = F.sub(M[i][j], F.mul(u, M[m][j]))
            for r in range(n):
                M[r][m] = F.add(M[r][m], F.mul(u, M[r][i]))

    def pmul_lin(poly, c):  # (t - c) * poly
        out = [0] * (len(poly) + 1)
        for i, a in enumerate(poly):
            out[i + 1] = F.add(out[i + 1], a)
            out[i] = F.sub(out[i], F.mul(c, a))
        return out

    polys = [[1]]
    for k in range(1, n + 1):
        pk = pmul_lin(polys[k - 1], M[k - 1][k - 1])
        prod_ = 1
        for i in range(k - 1, 0, -1):
            prod_ = F.mul(prod_, M[i][i - 1])
            c = F.mul(M[i - 1][k - 1], prod_)
            for d, a in enumerate(polys[i - 1]):
                pk[d] = F.sub(pk[d], F.mul(c, a))
        polys.append(pk)
    return polys[n]


def _galois_product(E: ExtensionField, x) -> list[tuple[int, ...]]:
    """Coefficients (in E, low degree first) of prod_l (t - x^(q^l))."""
    q = E.base.q
    poly = [E.one()]
    conj = x
    neg = E.scalar(E.base.neg(1))
    for _ in range(E.n):
        out = [E.zero()] * (len(poly) + 1)
        for i, a in enumerate(poly):
            out[i + 1] = E.add(out[i + 1], a)
            out[i] = E.add(out[i], E.mul(neg, E.mul(conj, a)))
        poly = out
        conj = E.pow(conj, q)
    return poly


def charpoly_galois_check(n: int, q: int, samples: int = 100, seed: int = 0) -> bool:
    """``det(tI - phi_x)`` equals the product over Galois conjugates of x."""
    if q**n > 2**16:
        raise FieldError("needs q^n <= 2^16")
    p, k = prime_power(q)
    F = make_field(p, k)
    E = ExtensionField(F, n)
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        x = tuple(int(c) for c in rng.integers(0, q, size=n))
        if not any(x):
            x = E.one()
        lhs = charpoly(E.multiplication_matrix(x), F)
        rhs = _galois_product(E, x)
        if not all(E.in_base(c) for c in rhs):
            return False
        if lhs != [c[0] for c in rhs]:
            return False
    return True


# -- p-groups ------------------------------------------------------------------

def _commutators(G: Group, a: int, Y: np.ndarray) -> np.ndarray:
    inv = G.inverses
    return G.mul_many(G.mul_many(inv[a], inv[Y]), G.mul_many(a, Y))


def pgroup_strong_witness(G: Group, x: int | None = None) -> WitnessCertificate | None:
    """Scan (canonical order) for non-central ``x`` of order p and a central
    ``t = [x, y]`` of order p reachable as ``[x^i, y_i]`` for every i; the set
    ``{x^j : 1 <= j < p} | {t^-1}`` is then an intersecting non-coset on G/<x>.

    ``x`` pins the first element instead of scanning for it.
    """
    primes = prime_factors(G.order)
    if len(primes) != 1:
        raise GroupError("not a p-group")
    p = primes[0]
    if p == 2:
        raise GroupError("needs an odd prime")
    Zmask = center(G).mask
    allg = G.all()
    xs = range(G.order) if x is None else [int(x)]
    for xc in xs:
        if Zmask[xc] or element_order(G, xc) != p:
            continue
        powers = [G.power(xc, i) for i in range(1, p)]
        comm = [_commutators(G, xi, allg) for xi in powers]
        tried: set[int] = set()
        for t in comm[0].tolist():
            if t in tried or t == G.identity:
                continue
            tried.add(t)
            if not Zmask[t] or element_order(G, t) != p:
                continue
            ys = []
            for C in comm:
                hit = np.flatnonzero(C == t)
                if not len(hit):
                    break
                ys.append(int(hit[0]))
            if len(ys) != p - 1:
                continue
            H = subgroup_generate(G, [xc])
            S = powers + [G.inv(t)]
            cert = _certificate("pgroup", {}, "strong_failure", G, H, S, notes={
                "x": G.encode(xc), "t": G.encode(t), "y": [G.encode(y) for y in ys]})
            if G.spec and G.spec.get("kind") == "named":
                cert.params = {"family": G.spec["name"], **G.spec.get("params", {})}
            return cert
    return None


def _pgroup_extra(cert, G, H, S):
    x = _idx(G, cert.notes["x"])
    t = _idx(G, cert.notes["t"])
    ys = [_idx(G, y) for y in cert.notes["y"]]
    ok = all(G.commutator(G.power(x, i + 1), y) == t for i, y in enumerate(ys))
    Zmask = center(G).mask
    return {"commutator_identities": ok, "t_central": bool(Zmask[t]),
            "x_generates_stabilizer": subgroup_generate(G, [x]) == H}


_EXTRA_CHECKS["pgroup"] = _pgroup_extra


# -- unipotent subgroups of GL_2 -----------------------------------------------

def unipotent_subgroups(q: int, special: bool = False) -> tuple[Group, Subgroup, list[tuple[int, ...]]]:
    G = build_named("SL" if special else "GL", {"n": 2, "q": q})
    U = subgroup_generate(G, [_idx(G, [1, x, 0, 1]) for x in range(1, q)])
    return G, U, conjugates(G, U)


def _is_unipotent(G: Group, idx: np.ndarray) -> np.ndarray:
    rep = G.rep
    N = G.elements[idx].reshape(-1, 2, 2).copy()
    for i in range(2):
        N[:, i, i] = rep._fsub(N[:, i, i], 1)
    return (rep.matmul(N, N) == 0).all(axis=(1, 2))


def unipotent_lemma_check(q: int) -> bool:
    """Distinct unipotent subgroups of GL_2(F_q) meet trivially, and a product
    of non-identity elements from two of them is never unipotent."""
    if q > 7:
        raise GroupError("exhaustive check needs q <= 7")
    G, U, subs = unipotent_subgroups(q)
    if len(subs) != q + 1:
        return False
    if not _is_unipotent(G, np.array(sorted({g for s in subs for g in s}))).all():
        return False
    for i, A in enumerate(subs):
        for B in subs[i + 1:]:
            if set(A) & set(B) != {G.identity}:
                return False
            a = np.array([g for g in A if g != G.identity])
            b = np.array([g for g in B if g != G.identity])
            P = G.mul_many(a[:, None], b[None, :]).reshape(-1)
            if _is_unipotent(G, P).any():
                return False
    return True


def unipotent_support(q: int, special: bool = False) -> WitnessCertificate:
    """GL_2 (or SL_2) on G/U: every maximum intersecting set is a coset of a
    unipotent subgroup."""
    G, U, _ = unipotent_subgroups(q, special)
    return _certificate("unipotent", {"q": q, "special": special}, "strong_success_support",
                        G, U, U.members)


# -- registry ------------------------------------------------------------------

def _pgroup_from_params(params: dict) -> WitnessCertificate:
    params = dict(params)
    family = params.pop("family", "extraspecial")
    G = build_named(family, params)
    cert = pgroup_strong_witness(G)
    if cert is None:
        raise GroupError(f"no strong-failure certificate in {G.name}")
    return cert


WITNESSES: dict[str, Callable[..., WitnessCertificate]] = {
    "heisenberg": lambda p: heisenberg_witness(int(p)),
    "pgl-unipotent": lambda n, q: pgl_unipotent_witness(int(n), int(q)),
    "psl2": lambda q: psl2_witness(int(q)),
    "psl3-f3": lambda: psl3_f3_witness(),
    "suzuki": lambda n=1, large=False: suzuki_witness(int(n), bool(large)),
    "alternating": lambda n: alternating_witness(int(n)),
    "pgl-independent": lambda n, q: pgl_independent_set(int(n), int(q)),
    "psl-independent": lambda n, q: psl_independent_set(int(n), int(q)),
    "unipotent": lambda q, special=False: unipotent_support(int(q), bool(special)),
    "pgroup": lambda **params: _pgroup_from_params(params),
}


def build_witness(name: str, params: dict | None = None) -> WitnessCertificate:
    if name not in WITNESSES:
        raise KeyError(f"unknown witness {name!r}; known: {', '.join(sorted(WITNESSES))}")
    try:
        return WITNESSES[name](**(params or {}))
    except TypeError as exc:
        raise GroupError(f"bad parameters for witness {name!r}: {exc}") from None
