"""Exact arithmetic in GF(p^k).

Elements are addressed by their canonical integer ``sum(c[i] * p**i)`` where
``c`` is the coefficient vector in the polynomial basis ``1, x, ..., x^(k-1)``.
Every ordering in the package (element tables, tie-breaking) goes through this
integer, so it is the only identity a field element has.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field
from itertools import product

import numpy as np

MAX_FIELD_ORDER = 2**32
# exp/log tables are only materialized up to this order
_TABLE_LIMIT = 2**16
# dense q x q add/mul tables for the numpy matrix kernels
DENSE_TABLE_LIMIT = 256


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    r = 3
    while r * r <= n:
        if n % r == 0:
            return False
        r += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomials over GF(p), coefficient lists low-degree-first ----------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymod(a: list[int], m: list[int], p: int) -> list[int]:
    """Remainder of ``a`` modulo the monic polynomial ``m``."""
    a = list(a)
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i]
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return _trim(a[:dm])


def _polymulmod(a: list[int], b: list[int], m: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _polymod(out, m, p)


def _polypowmod(a: list[int], e: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = _polymod(a, m, p)
    while e:
        if e & 1:
            result = _polymulmod(result, base, m, p)
        base = _polymulmod(base, base, m, p)
        e >>= 1
    return _trim(result)


def _is_irreducible(m: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg(m)//2."""
    k = len(m) - 1
    for d in range(1, k // 2 + 1):
        for low in product(range(p), repeat=d):
            if not _polymod(m, list(low) + [1], p):
                return False
    return True


def _x_has_full_order(m: list[int], p: int) -> bool:
    q = p ** (len(m) - 1)
    if _polypowmod([0, 1], q - 1, m, p) != [1]:
        return False
    return all(_polypowmod([0, 1], (q - 1) // r, m, p) != [1]
               for r in prime_factors(q - 1))


def smallest_primitive_root(p: int) -> int:
    if p == 2:
        return 1
    fs = prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // r, p) != 1 for r in fs):
            return g
    raise FieldError(f"no primitive root mod {p}")


def primitive_polynomial(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically smallest (low degree first) monic primitive polynomial."""
    if k == 1:
        return ((-smallest_primitive_root(p)) % p, 1)
    for low in product(range(p), repeat=k):
        # product() varies the last slot fastest, so the constant term is
        # the most significant key
        coeffs = list(low) + [1]
        if coeffs[0] == 0:
            continue
        if _x_has_full_order(coeffs, p):
            return tuple(coeffs)
    raise FieldError(f"no primitive polynomial of degree {k} over GF({p})")


# -- field ---------------------------------------------------------------------

class FiniteField:
    """GF(p^k) with a fixed primitive modulus and designated generator ``zeta``.

    Integer-level operations (``add``, ``mul``, ...) take and return canonical
    integers; :class:`FieldElement` wraps them for operator syntax.
    """

    def __init__(self, p: int, k: int = 1):
        if not is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if k < 1:
            raise FieldError("extension degree must be >= 1")
        if p**k > MAX_FIELD_ORDER:
            raise FieldError(f"GF({p}^{k}) exceeds the 2^32 size cap")
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = primitive_polynomial(p, k)
        if k > 1 and not _is_irreducible(list(self.modulus), p):
            raise FieldError("selected modulus is reducible")  # pragma: no cover
        self._zeta = smallest_primitive_root(p) if k == 1 else p
        self._exp: list[int] | None = None
        self._log: list[int] | None = None
        if self.q <= _TABLE_LIMIT:
            self._build_tables()

    def __repr__(self):
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, FiniteField) and (self.p, self.k) == (other.p, other.k)

    def __hash__(self):
        return hash((self.p, self.k))

    # conversions
    def to_coeffs(self, a: int) -> list[int]:
        out = []
        for _ in range(self.k):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def from_coeffs(self, coeffs) -> int:
        v = 0
        for c in reversed(list(coeffs)):
            v = v * self.p + (c % self.p)
        return v

    def _poly_mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        r = _polymulmod(_trim(self.to_coeffs(a)), _trim(self.to_coeffs(b)),
                        list(self.modulus), self.p)
        return self.from_coeffs(r)

    def _build_tables(self):
        q = self.q
        exp = [0] * (2 * (q - 1))
        log = [0] * q
        x = 1
        for i in range(q - 1):
            exp[i] = x
            log[x] = i
            x = self._poly_mul(x, self._zeta)
        if x != 1 or len(set(exp[: q - 1])) != q - 1:
            raise FieldError("designated zeta is not primitive")  # pragma: no cover
        for i in range(q - 1, 2 * (q - 1)):
            exp[i] = exp[i - (q - 1)]
        self._exp, self._log = exp, log

    # integer-level arithmetic
    def add(self, a: int, b: int) -> int:
        p = self.p
        if p == 2:
            return a ^ b
        if self.k == 1:
            return (a + b) % p
        out, scale = 0, 1
        while a or b:
            out += ((a % p + b % p) % p) * scale
            a //= p
            b //= p
            scale *= p
        return out

    def neg(self, a: int) -> int:
        p = self.p
        if p == 2:
            return a
        if self.k == 1:
            return (-a) % p
        out, scale = 0, 1
        while a:
            out += ((-(a % p)) % p) * scale
            a //= p
            scale *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self._exp is not None:
            return self._exp[self._log[a] + self._log[b]]
        return self._poly_mul(a, b)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        if e == 0:
            return 1
        if a == 0:
            return 0
        if self._exp is not None:
            return self._exp[(self._log[a] * e) % (self.q - 1)]
        result = 1
        while e:
            if e & 1:
                result = self._poly_mul(result, a)
            a = self._poly_mul(a, a)
            e >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        if self._exp is not None:
            return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]
        return self.pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def log(self, a: int) -> int:
        """Exponent ``i`` with ``zeta**i == a`` (table lookup, small fields only)."""
        if self._log is None:
            raise FieldError("discrete logs are only tabulated for q <= 2^16")
        if a == 0:
            raise ZeroDivisionError("log of zero")
        return self._log[a]

    def zeta_power(self, i: int) -> int:
        return self.pow(self._zeta, i)

    # element views
    def __call__(self, value) -> FieldElement:
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldError("element belongs to another field")
            return value
        if isinstance(value, (list, tuple)):
            value = self.from_coeffs(value)
        if not 0 <= value < self.q:
            value = self.from_coeffs(self.to_coeffs(value % self.q))
        return FieldElement(self, int(value))

    @property
    def zeta(self) -> FieldElement:
        return FieldElement(self, self._zeta)

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, 1)

    def elements(self) -> list[FieldElement]:
        return [FieldElement(self, v) for v in range(self.q)]

    def embed_int(self, n: int) -> int:
        """Image of the integer ``n`` under Z -> GF(p)."""
        return n % self.p

    @functools.cached_property
    def tables(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Dense (add, mul, inv) tables for vectorized matrix arithmetic."""
        q = self.q
        if q > DENSE_TABLE_LIMIT:
            raise FieldError(f"dense tables need q <= {DENSE_TABLE_LIMIT}")
        add = np.empty((q, q), dtype=np.int64)
        mul = np.empty((q, q), dtype=np.int64)
        for a in range(q):
            for b in range(q):
                add[a, b] = self.add(a, b)
                mul[a, b] = self.mul(a, b)
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv[a] = self.inv(a)
        return add, mul, inv


@functools.lru_cache(maxsize=None)
def make_field(p: int, k: int = 1) -> FiniteField:
    return FiniteField(p, k)


@functools.total_ordering
@dataclass(frozen=True, eq=False)
class FieldElement:
    field: FiniteField
    value: int

    @property
    def coeffs(self) -> list[int]:
        return self.field.to_coeffs(self.value)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError("mixed-field operands")
            return other.value
        if isinstance(other, int):
            return self.field.embed_int(other)
        return NotImplemented

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return FieldElement(self.field, self.field.sub(self._other(other), self.value))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.value, self._other(other)))

    def __rtruediv__(self, other):
        return FieldElement(self.field, self.field.div(self._other(other), self.value))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def inverse(self) -> FieldElement:
        return FieldElement(self.field, self.field.inv(self.value))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == self.field.embed_int(other) and 0 <= other < self.field.p
        return NotImplemented

    def __lt__(self, other):
        return self.value < other.value

    def __hash__(self):
        return hash((self.field.p, self.field.k, self.value))

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"{self.field!r}({self.value})"


def field_arith(a: FieldElement, b: FieldElement | None, op: str) -> FieldElement:
    """Dispatch ``op`` in {add, sub, mul, div, inv, neg}; unary ops ignore ``b``."""
    if op == "inv":
        return a.inverse()
    if op == "neg":
        return -a
    if b is None:
        raise FieldError(f"{op} needs two operands")
    if a.field != b.field:
        raise FieldError("mixed-field operands")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise FieldError(f"unknown field operation {op!r}")


def frobenius_power(a: FieldElement, e: int) -> FieldElement:
    """``a ** (p ** e)``."""
    if e < 0:
        raise FieldError("Frobenius exponent must be >= 0")
    F = a.field
    return FieldElement(F, F.pow(a.value, pow(F.p, e % F.k if F.k else e)))


def suzuki_twist(a: FieldElement) -> FieldElement:
    """The square root of Frobenius on GF(2^(2n+1)): ``a -> a^(2^(n+1))``."""
    F = a.field
    if F.p != 2 or F.k % 2 == 0 or F.k < 3:
        raise FieldError("twist needs q = 2^(2n+1) with n >= 1")
    return frobenius_power(a, (F.k - 1) // 2 + 1)


def is_square(a: FieldElement) -> bool:
    F = a.field
    if F.p == 2 or a.value == 0:
        return True
    return F.pow(a.value, (F.q - 1) // 2) == 1


def sum_of_two_squares(a: FieldElement) -> tuple[FieldElement, FieldElement]:
    F = a.field
    roots: dict[int, int] = {}
    for s in range(F.q - 1, -1, -1):
        roots[F.mul(s, s)] = s  # keeps the smallest root per square
    for s1 in range(F.q):
        rest = F.sub(a.value, F.mul(s1, s1))
        if rest in roots:
            return FieldElement(F, s1), FieldElement(F, roots[rest])
    raise FieldError("no representation as a sum of two squares")  # pragma: no cover


# -- extensions GF(q^n) over an arbitrary base GF(q) --------------------------

@dataclass
class ExtensionField:
    """GF(q^n) as ``base[x]/(f)`` with ``f`` primitive, so ``x`` is a generator.

    Elements are tuples of ``n`` base-field canonical integers (power basis
    ``1, zeta, ..., zeta^(n-1)``). ``f`` is the lexicographically smallest
    monic primitive polynomial, constant term compared first.
    """

    base: FiniteField
    n: int
    poly: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        if self.n < 1:
            raise FieldError("extension degree must be >= 1")
        if self.base.q ** self.n > MAX_FIELD_ORDER:
            raise FieldError("extension exceeds the 2^32 size cap")
        self.order = self.base.q ** self.n
        self.poly = self._find_poly()

    def _find_poly(self) -> tuple[int, ...]:
        B, n = self.base, self.n
        if n == 1:
            return (B.neg(B._zeta), 1)
        fs = prime_factors(self.order - 1)
        for low in product(range(B.q), repeat=n):
            f = tuple(low) + (1,)
            if f[0] == 0:
                continue
            self.poly = f
            x = self.gen()
            if self.pow(x, self.order - 1) != self.one():
                continue
            if all(self.pow(x, (self.order - 1) // r) != self.one() for r in fs):
                return f
        raise FieldError("no primitive polynomial found")  # pragma: no cover

    def one(self) -> tuple[int, ...]:
        return (1,) + (0,) * (self.n - 1)

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.n

    def gen(self) -> tuple[int, ...]:
        if self.n == 1:
            return (self.base._zeta,)
        return (0, 1) + (0,) * (self.n - 2)

    def scalar(self, c: int) -> tuple[int, ...]:
        return (c,) + (0,) * (self.n - 1)

    def add(self, a, b):
        B = self.base
        return tuple(B.add(x, y) for x, y in zip(a, b))

    def mul(self, a, b):
        B, n, f = self.base, self.n, self.poly
        if n == 1:
            return (B.mul(a[0], b[0]),)
        prod_ = [0] * (2 * n - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod_[i + j] = B.add(prod_[i + j], B.mul(x, y))
        for i in range(2 * n - 2, n - 1, -1):
            c = prod_[i]
            if c:
                for j in range(n):
                    prod_[i - n + j] = B.sub(prod_[i - n + j], B.mul(c, f[j]))
        return tuple(prod_[:n])

    def pow(self, a, e: int):
        result = self.one()
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def in_base(self, a) -> bool:
        return all(c == 0 for c in a[1:])

    def companion_matrix(self) -> list[list[int]]:
        """Matrix of multiplication by the generator in the power basis."""
        B, n = self.base, self.n
        M = [[0] * n for _ in range(n)]
        for i in range(1, n):
            M[i][i - 1] = 1
        for i in range(n):
            M[i][n - 1] = B.neg(self.poly[i])
        return M

    def multiplication_matrix(self, x) -> list[list[int]]:
        """Column ``j`` holds the coordinates of ``x * zeta^j``."""
        n = self.n
        cols = []
        basis = self.one()
        for _ in range(n):
            cols.append(self.mul(x, basis))
            basis = self.mul(basis, self.gen()) if n > 1 else basis
        return [[cols[j][i] for j in range(n)] for i in range(n)]

    def encode(self, a) -> int:
        v = 0
        for c in reversed(a):
            v = v * self.base.q + c
        return v
