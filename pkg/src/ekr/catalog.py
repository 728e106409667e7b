"""Named group families and their concrete generators."""
from __future__ import annotations

import hashlib
import json
import logging
import math
import os
from pathlib import Path

import numpy as np

from .finfield import FieldElement, FiniteField, is_prime, make_field, suzuki_twist
from .groupcore import (DEFAULT_ORDER_CAP, Group, GroupError, MatrixRep, PermRep, Subgroup,
                        enumerate_group, group_from_spec, subgroup_generate)

logger = logging.getLogger(__name__)

FAMILIES = ("symmetric", "alternating", "cyclic", "dihedral", "quaternion8", "abelian",
            "modular", "heisenberg", "extraspecial", "GL", "SL", "PGL", "PSL", "suzuki")


def prime_power(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if q % p == 0:
            if not is_prime(p):
                break
            k, r = 0, q
            while r % p == 0:
                r //= p
                k += 1
            if r == 1:
                return p, k
            break
    raise GroupError(f"{q} is not a prime power")


def _cycle(n: int, points: list[int]) -> list[int]:
    img = list(range(n))
    for a, b in zip(points, points[1:] + points[:1]):
        img[a] = b
    return img


def _perm_gens(name: str, params: dict) -> tuple[int, list[list[int]]]:
    if name == "symmetric":
        n = int(params["n"])
        if n < 1:
            raise GroupError("symmetric needs n >= 1")
        gens = [] if n == 1 else [_cycle(n, [0, 1]), _cycle(n, list(range(n)))]
        return n, gens
    if name == "alternating":
        n = int(params["n"])
        if n < 3:
            raise GroupError("alternating needs n >= 3")
        return n, [_cycle(n, [0, 1, i]) for i in range(2, n)]
    if name == "cyclic":
        n = int(params["n"])
        if n < 1:
            raise GroupError("cyclic needs n >= 1")
        return n, [_cycle(n, list(range(n)))] if n > 1 else []
    if name == "dihedral":
        n = int(params["n"])
        if n < 3:
            raise GroupError("dihedral needs n >= 3 (order 2n)")
        return n, [_cycle(n, list(range(n))), [(-i) % n for i in range(n)]]
    if name == "abelian":
        orders = [int(m) for m in params["orders"]]
        if not orders or min(orders) < 1:
            raise GroupError("abelian needs a nonempty list of cyclic orders")
        d = sum(orders)
        gens, off = [], 0
        for m in orders:
            if m > 1:
                gens.append(_cycle(d, list(range(off, off + m))))
            off += m
        return d, gens
    if name == "modular":
        # M_{2^n} = <a, b | a^(2^(n-1)), b^2, b a b = a^(1 + 2^(n-2))>
        n = int(params["n"])
        if n < 4:
            raise GroupError("modular needs n >= 4 (order 2^n)")
        m = 2 ** (n - 1)
        return m, [_cycle(m, list(range(m))), [(x * (1 + m // 2)) % m for x in range(m)]]
    if name == "extraspecial":
        p = int(params["p"])
        exponent = int(params.get("exponent", p))
        if exponent == p * p:
            # C_{p^2} x| C_p acting affinely on Z/p^2
            m = p * p
            return m, [_cycle(m, list(range(m))), [(x * (1 + p)) % m for x in range(m)]]
    raise GroupError(f"unknown permutation family {name!r}")


def _matrix(F: FiniteField, rows) -> list[int]:
    return [int(x) if not isinstance(x, FieldElement) else x.value for r in rows for x in r]


def _elementary(F: FiniteField, n: int, i: int, j: int, a: int) -> list[int]:
    M = np.eye(n, dtype=np.int64)
    M[i, j] = a
    return M.reshape(-1).tolist()


def _diag(n: int, entries: dict[int, int]) -> list[int]:
    M = np.eye(n, dtype=np.int64)
    for i, v in entries.items():
        M[i, i] = v
    return M.reshape(-1).tolist()


def linear_generators(F: FiniteField, n: int, special: bool) -> list[list[int]]:
    """Elementary transvections plus diagonal generators of SL_n or GL_n."""
    gens = [_elementary(F, n, i, j, 1) for i in range(n) for j in range(n) if i != j]
    z = F.zeta.value
    if F.q > 2:
        zi = F.inv(z)
        for i in range(n - 1):
            gens.append(_diag(n, {i: z, i + 1: zi}))
        if not special:
            gens.append(_diag(n, {0: z}))
    return gens


def linear_group_order(kind: str, n: int, q: int) -> int:
    gl = math.prod(q**n - q**i for i in range(n))
    if kind == "GL":
        return gl
    if kind in ("SL", "PGL"):
        return gl // (q - 1)
    return gl // (q - 1) // math.gcd(n, q - 1)


def heisenberg_element(p: int, x: int, y: int, z: int) -> np.ndarray:
    """The unitriangular matrix with entries x (1,2), y (2,3), z (1,3), mod p."""
    return np.array([1, x % p, z % p, 0, 1, y % p, 0, 0, 1], dtype=np.int64)


# -- Suzuki --------------------------------------------------------------------

def suzuki_field(n: int) -> FiniteField:
    if n < 1:
        raise GroupError("suzuki needs n >= 1 (q = 2^(2n+1))")
    return make_field(2, 2 * n + 1)


def suzuki_u(F: FiniteField, alpha, a, beta, b) -> list[int]:
    alpha, a, beta, b = (F(x) for x in (alpha, a, beta, b))
    rows = [[1, 0, 0, 0],
            [alpha, 1, 0, 0],
            [alpha * a + beta, a, 1, 0],
            [alpha * alpha * a + alpha * beta + b, beta, alpha, 1]]
    return _matrix(F, rows)


def suzuki_v(F: FiniteField, alpha, beta) -> list[int]:
    alpha, beta = F(alpha), F(beta)
    return suzuki_u(F, alpha, suzuki_twist(alpha), beta, suzuki_twist(beta))


def suzuki_h(F: FiniteField, gamma, c) -> list[int]:
    gamma, c = F(gamma), F(c)
    return _diag(4, {0: (gamma * c).value, 1: gamma.value,
                     2: gamma.inverse().value, 3: (gamma * c).inverse().value})


def suzuki_k(F: FiniteField, gamma) -> list[int]:
    gamma = F(gamma)
    if not gamma:
        raise GroupError("k(gamma) needs gamma != 0")
    return suzuki_h(F, gamma, suzuki_twist(gamma))


def suzuki_tau() -> list[int]:
    M = np.zeros((4, 4), dtype=np.int64)
    for i in range(4):
        M[i, 3 - i] = 1
    return M.reshape(-1).tolist()


# -- builders ------------------------------------------------------------------

def _build(name: str, params: dict, cap: int) -> tuple[Group, int | None]:
    spec = {"kind": "named", "name": name, "params": params}
    if name == "quaternion8":
        F = make_field(3)
        rep = MatrixRep(F, 2)
        return enumerate_group(rep, [[0, 2, 1, 0], [1, 1, 1, 2]], cap, spec), 8
    if name == "heisenberg" or (name == "extraspecial" and
                                int(params.get("exponent", params.get("p", 0))) == int(params["p"])):
        p = int(params["p"])
        if not is_prime(p) or p == 2:
            raise GroupError("heisenberg needs an odd prime p")
        rep = MatrixRep(make_field(p), 3)
        gens = [heisenberg_element(p, 1, 0, 0), heisenberg_element(p, 0, 1, 0)]
        return enumerate_group(rep, gens, cap, spec), p**3
    if name in ("GL", "SL", "PGL", "PSL"):
        n, q = int(params["n"]), int(params["q"])
        if n < 1:
            raise GroupError("matrix dimension must be >= 1")
        p, k = prime_power(q)
        F = make_field(p, k)
        special = name in ("SL", "PSL")
        rep = MatrixRep(F, n, projective=name.startswith("P"), determinant_one=special)
        return (enumerate_group(rep, linear_generators(F, n, special), cap, spec),
                linear_group_order(name, n, q))
    if name == "suzuki":
        n = int(params["n"])
        F = suzuki_field(n)
        q = F.q
        rep = MatrixRep(F, 4)
        gens = [suzuki_v(F, 1, 0), suzuki_k(F, F.zeta), suzuki_tau()]
        return enumerate_group(rep, gens, cap, spec), q * q * (q * q + 1) * (q - 1)
    degree, gens = _perm_gens(name, params)
    G = enumerate_group(PermRep(degree), gens, cap, spec)
    expected = None
    if name == "symmetric":
        expected = math.factorial(degree)
    elif name == "alternating":
        expected = math.factorial(degree) // 2
    elif name == "cyclic":
        expected = degree
    elif name == "dihedral":
        expected = 2 * degree
    elif name == "abelian":
        expected = math.prod(int(m) for m in params["orders"])
    elif name == "modular":
        expected = 2 ** int(params["n"])
    elif name == "extraspecial":
        expected = int(params["p"]) ** 3
    return G, expected


def build_named(name: str, params: dict | None = None, cap: int = DEFAULT_ORDER_CAP) -> Group:
    params = dict(params or {})
    if name not in FAMILIES:
        raise GroupError(f"unknown group family {name!r}")
    if name == "suzuki" and int(params.get("n", 0)) >= 2 and not params.get("large"):
        raise GroupError("Sz(q) for q >= 32 needs params.large = true")
    G, expected = _build(name, params, cap)
    if expected is not None and G.order != expected:
        raise GroupError(f"{name}{params}: enumerated order {G.order} != {expected}")
    G.name = name + "(" + ",".join(f"{k}={v}" for k, v in sorted(params.items())) + ")"
    return G


def spec_hash(spec: dict) -> str:
    return hashlib.sha256(json.dumps(spec, sort_keys=True).encode()).hexdigest()[:24]


def load_group(spec: dict, cap: int = DEFAULT_ORDER_CAP) -> Group:
    """Build from any group spec; memoized on disk under ``EKR_CACHE_DIR``."""
    cache_dir = os.environ.get("EKR_CACHE_DIR")
    path = Path(cache_dir) / f"group-{spec_hash(spec)}.npz" if cache_dir else None
    if path is not None and path.exists():
        G = _load_cached(spec, path)
        if G is not None:
            return G
    if spec.get("kind") == "named":
        G = build_named(spec["name"], spec.get("params", {}), cap)
    else:
        G = group_from_spec(spec, cap)
        G.name = spec.get("name")
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        arrays = {"elements": G.elements, "generators": np.array(G.generators, dtype=np.int64)}
        if G.mul_table is not None:
            arrays["mul_table"] = G.mul_table.astype(np.int32)
        tmp = path.with_suffix(".tmp.npz")
        np.savez_compressed(tmp, **arrays)
        os.replace(tmp, path)
    return G


def _load_cached(spec: dict, path: Path) -> Group | None:
    from .groupcore import rep_from_spec
    try:
        data = np.load(path)
        if spec.get("kind") == "named":
            rep = _named_rep(spec["name"], spec.get("params", {}))
        else:
            rep = rep_from_spec(spec)
        table = data["mul_table"].astype(np.int64) if "mul_table" in data else None
        G = Group(rep, data["elements"], data["generators"].tolist(), mul_table=table, spec=spec)
    except Exception as exc:  # corrupt cache entries are rebuilt
        logger.warning("ignoring cache entry %s: %s", path, exc)
        return None
    params = spec.get("params", {})
    G.name = spec.get("name", "") + "(" + ",".join(f"{k}={v}" for k, v in sorted(params.items())) + ")"
    return G


def _named_rep(name: str, params: dict):
    if name == "quaternion8":
        return MatrixRep(make_field(3), 2)
    if name == "heisenberg" or (name == "extraspecial" and
                                int(params.get("exponent", params.get("p", 0))) == int(params["p"])):
        return MatrixRep(make_field(int(params["p"])), 3)
    if name in ("GL", "SL", "PGL", "PSL"):
        p, k = prime_power(int(params["q"]))
        return MatrixRep(make_field(p, k), int(params["n"]), projective=name.startswith("P"),
                         determinant_one=name in ("SL", "PSL"))
    if name == "suzuki":
        return MatrixRep(suzuki_field(int(params["n"])), 4)
    return PermRep(_perm_gens(name, params)[0])


def heisenberg_conjugate_check(p: int) -> bool:
    """Exhaustively confirm the conjugation and quotient formulas in G_p."""
    if not is_prime(p) or p == 2 or p > 13:
        raise GroupError("check needs an odd prime p <= 13")
    G = build_named("heisenberg", {"p": p})

    def idx(x, y, z):
        x, y, z = np.broadcast_arrays(x, y, z)
        rows = np.stack([np.ones_like(x), x % p, z % p, np.zeros_like(x), np.ones_like(x),
                         y % p, np.zeros_like(x), np.zeros_like(x), np.ones_like(x)], axis=-1)
        return G.index_many(rows.reshape(-1, 9)).reshape(x.shape)

    r = np.arange(p)
    x, a, b, c = np.meshgrid(r, r, r, r, indexing="ij")
    lhs = G.conj_many(idx(x, 0, 0), idx(a, b, c))
    if not np.array_equal(lhs, idx(x, 0, b * x)):
        return False
    aj, bj, cj = np.meshgrid(r, r, r, indexing="ij")
    gj = idx(aj, bj, cj)
    for ai in range(p):
        for bi in range(p):
            for ci in range(p):
                gi = idx(np.int64(ai), np.int64(bi), np.int64(ci))
                lhs = G.mul_many(G.inverses[gi], gj)
                rhs = idx(aj - ai, bj - bi, cj - ci + ai * bi - ai * bj)
                if not np.array_equal(lhs, rhs):
                    return False
    return True


def suzuki_parts(G: Group, n: int) -> tuple[Subgroup, Subgroup, Subgroup]:
    """(B, B0, H) inside ``G`` = Sz(2^(2n+1)) as enumerated by :func:`build_named`."""
    F = suzuki_field(n)
    q = F.q
    vs = [G.index_of(suzuki_v(F, a, b)) for a in range(q) for b in range(q)]
    B = Subgroup(G, np.array(vs))
    B0 = Subgroup(G, np.array([G.index_of(suzuki_v(F, a, b)) for a in (0, 1) for b in range(q)]))
    H = subgroup_generate(G, [G.index_of(suzuki_k(F, F.zeta))])
    from .groupcore import is_closed
    for S, size in ((B, q * q), (B0, 2 * q), (H, q - 1)):
        if S.order != size or not is_closed(G, S.members):
            raise GroupError("Suzuki subgroup has the wrong shape")
    return B, B0, H
