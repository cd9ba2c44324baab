"""Finite fields GF(p^n) and the factorial tower GF(p^1!) < GF(p^2!) < ...

Elements are stored as integer codes: the coefficient vector
(c_0, ..., c_{n-1}) of c_0 + c_1 g + ... + c_{n-1} g^{n-1} is encoded
little-endian in base p, so code = c_0 + c_1 p + ... .  The natural
order on codes is the enumeration order used everywhere in the package.

Arithmetic goes through precomputed tables (fields here have at most a
few thousand elements), so ``FieldDesc.mul(a, b)`` is a table lookup.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

__all__ = [
    "BudgetExceeded",
    "FieldDesc",
    "FieldElem",
    "FieldTower",
    "field_make",
    "tower_make",
    "frobenius_fixed",
    "is_prime",
    "prime_power",
]

MAX_FIELD_ORDER = 1 << 12


class BudgetExceeded(ValueError):
    """A computation would exceed a configured size budget."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


def prime_power(q: int):
    """Return ``(p, m)`` with ``q == p**m`` and p prime, or None."""
    if q < 2:
        return None
    for p in range(2, q + 1):
        if q % p == 0:
            m = 0
            while q % p == 0:
                q //= p
                m += 1
            return (p, m) if q == 1 else None
    return None


# -- polynomials over GF(p), lists of ints, little-endian ------------------

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymod(a, m, p):
    a = _trim(a)
    m = _trim(m)
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) >= len(m):
        c = a[-1] * inv_lead % p
        shift = len(a) - len(m)
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        a = _trim(a)
    return a


def _polymul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _polys_of_degree(d, p):
    """Monic polynomials of degree d in code order of the lower coefficients."""
    for r in range(p ** d):
        low = [(r // p ** i) % p for i in range(d)]
        yield low + [1]


def _is_irreducible(f, p):
    n = len(f) - 1
    if n == 1:
        return True
    for d in range(1, n // 2 + 1):
        for g in _polys_of_degree(d, p):
            if not _polymod(f, g, p):
                return False
    return True


@lru_cache(maxsize=None)
def _least_irreducible(p, n):
    for f in _polys_of_degree(n, p):
        if _is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("unreachable: irreducibles exist in every degree")


@dataclass(frozen=True)
class FieldDesc:
    """The field GF(p)[x]/(modulus), of order p**n."""

    p: int
    n: int
    modulus: tuple

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.n < 1 or len(self.modulus) != self.n + 1 or self.modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree n")
        if self.p ** self.n > MAX_FIELD_ORDER:
            raise BudgetExceeded(f"field order {self.p}^{self.n} exceeds budget")
        if not _is_irreducible(list(self.modulus), self.p):
            raise ValueError(f"modulus {self.modulus} is reducible over GF({self.p})")

    @property
    def order(self) -> int:
        return self.p ** self.n

    def __repr__(self):
        return f"GF({self.p}^{self.n})"

    # code <-> coefficients
    def coeffs(self, a: int) -> tuple:
        p = self.p
        return tuple((a // p ** i) % p for i in range(self.n))

    def code(self, coeffs) -> int:
        coeffs = list(coeffs)
        if len(coeffs) > self.n:
            raise ValueError("too many coefficients")
        return sum((c % self.p) * self.p ** i for i, c in enumerate(coeffs))

    @cached_property
    def _tables(self):
        q, p, n = self.order, self.p, self.n
        digits = np.array([self.coeffs(a) for a in range(q)], dtype=np.int64).reshape(q, n)
        weights = p ** np.arange(n, dtype=np.int64)
        add = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
        neg = ((-digits) % p) @ weights
        # multiplication by g is the companion matrix; by a, a polynomial in it
        comp = np.zeros((n, n), dtype=np.int64)
        comp[1:, :-1] = np.eye(n - 1, dtype=np.int64)
        comp[:, -1] = [(-c) % p for c in self.modulus[:-1]]
        powers = [np.eye(n, dtype=np.int64)]
        for _ in range(n - 1):
            powers.append(comp @ powers[-1] % p)
        mats = np.einsum("ai,ijk->ajk", digits, np.stack(powers)) % p
        prod = np.einsum("ajk,bk->abj", mats, digits) % p
        mul = prod @ weights
        inv = np.zeros(q, dtype=np.int64)
        rows, cols = np.nonzero(mul == 1)
        inv[rows] = cols
        return add, neg, mul, inv

    @property
    def add_table(self):
        return self._tables[0]

    @property
    def mul_table(self):
        return self._tables[2]

    def add(self, a: int, b: int) -> int:
        return int(self._tables[0][a, b])

    def neg(self, a: int) -> int:
        return int(self._tables[1][a])

    def sub(self, a: int, b: int) -> int:
        return int(self._tables[0][a, self._tables[1][b]])

    def mul(self, a: int, b: int) -> int:
        return int(self._tables[2][a, b])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return int(self._tables[3][a])

    def power(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def from_int(self, k: int) -> int:
        """Image of the integer k under Z -> GF(p^n)."""
        return k % self.p

    def elements(self):
        return range(self.order)

    def elem(self, x) -> "FieldElem":
        if isinstance(x, int):
            return FieldElem(self, x)
        return FieldElem(self, self.code(x))

    def to_json(self):
        return {"p": self.p, "n": self.n, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, d):
        return cls(d["p"], d["n"], tuple(d["modulus"]))


@dataclass(frozen=True)
class FieldElem:
    """A field element with operator overloading; thin wrapper over a code."""

    desc: FieldDesc
    code: int

    @property
    def coeffs(self):
        return self.desc.coeffs(self.code)

    def _check(self, other):
        if not isinstance(other, FieldElem):
            return NotImplemented
        if other.desc != self.desc:
            raise ValueError(f"field mismatch: {self.desc} vs {other.desc}")
        return other

    def __add__(self, other):
        other = self._check(other)
        return FieldElem(self.desc, self.desc.add(self.code, other.code))

    def __sub__(self, other):
        other = self._check(other)
        return FieldElem(self.desc, self.desc.sub(self.code, other.code))

    def __mul__(self, other):
        other = self._check(other)
        return FieldElem(self.desc, self.desc.mul(self.code, other.code))

    def __neg__(self):
        return FieldElem(self.desc, self.desc.neg(self.code))

    def inv(self):
        return FieldElem(self.desc, self.desc.inv(self.code))

    def __truediv__(self, other):
        return self * self._check(other).inv()

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        return FieldElem(self.desc, self.desc.power(self.code, e))

    def __bool__(self):
        return self.code != 0

    def __repr__(self):
        return f"{self.desc!r}[{self.code}]"


def field_make(p: int, n: int) -> FieldDesc:
    """GF(p^n) with the least irreducible monic modulus (code order)."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if n < 1:
        raise ValueError("degree must be at least 1")
    return FieldDesc(p, n, _least_irreducible(p, n))


def _embed_generator(lower: FieldDesc, upper: FieldDesc) -> int:
    """Least root (by code) of the lower modulus inside the upper field."""
    for r in upper.elements():
        acc = 0
        for c in reversed(lower.modulus):
            acc = upper.add(upper.mul(acc, r), upper.from_int(c))
        if acc == 0:
            return r
    raise ValueError(f"{lower} does not embed into {upper}")


@dataclass(frozen=True)
class FieldTower:
    """Fields of degree 1!, 2!, ..., K! over GF(p) with chosen embeddings.

    ``xi`` lists top-level codes; its first p**(m!) entries are the image
    of level m (levels are numbered from 1).
    """

    p: int
    levels: tuple
    embeds: tuple  # embeds[i]: image of the level-(i+1) generator in level i+2
    xi: tuple = field(repr=False)

    @property
    def depth(self) -> int:
        return len(self.levels)

    @property
    def top(self) -> FieldDesc:
        return self.levels[-1]

    def level(self, m: int) -> FieldDesc:
        if not 1 <= m <= self.depth:
            raise ValueError(f"level {m} not in tower of depth {self.depth}")
        return self.levels[m - 1]

    def order(self, m: int) -> int:
        return self.level(m).order

    def level_of_order(self, q: int) -> int:
        for m, f in enumerate(self.levels, 1):
            if f.order == q:
                return m
        raise ValueError(f"no level of order {q} in tower")

    def _step(self, a: int, m: int) -> int:
        lower, upper = self.level(m), self.level(m + 1)
        g = self.embeds[m - 1]
        acc = 0
        for c in reversed(lower.coeffs(a)):
            acc = upper.add(upper.mul(acc, g), upper.from_int(c))
        return acc

    def embed(self, a: int, src: int, dst: int) -> int:
        """Map a level-``src`` code into level ``dst`` (src <= dst)."""
        if src > dst:
            raise ValueError("can only embed upwards")
        self.level(src), self.level(dst)
        for m in range(src, dst):
            a = self._step(a, m)
        return a

    def lower(self, a: int, src: int, dst: int) -> int:
        """Inverse of ``embed``; raises if ``a`` is not in the subfield."""
        return self._lower_maps(src, dst)[a]

    @lru_cache(maxsize=None)
    def _lower_maps(self, src, dst):
        table = {self.embed(b, dst, src): b for b in self.level(dst).elements()}
        return _MissingRaises(table, f"element not in level {dst}")

    @cached_property
    def xi_index(self) -> dict:
        """Top-level code -> 1-based enumeration index."""
        return {c: k for k, c in enumerate(self.xi, 1)}

    def xi_at_level(self, m: int) -> list:
        """xi_1..xi_{p^(m!)} as level-m codes."""
        q = self.order(m)
        return [self.lower(c, self.depth, m) for c in self.xi[:q]]

    def index_of(self, a: int, m: int) -> int:
        """Enumeration index of a level-m code."""
        return self.xi_index[self.embed(a, m, self.depth)]


class _MissingRaises(dict):
    def __init__(self, data, msg):
        super().__init__(data)
        self.msg = msg

    def __missing__(self, key):
        raise ValueError(self.msg)


def tower_make(p: int, K: int = 3) -> FieldTower:
    if K < 1:
        raise ValueError("tower needs at least one level")
    levels = tuple(field_make(p, math.factorial(k)) for k in range(1, K + 1))
    embeds = tuple(_embed_generator(levels[i], levels[i + 1]) for i in range(K - 1))
    tower = FieldTower(p, levels, embeds, ())
    xi, seen = [], set()
    for m in range(1, K + 1):
        for a in levels[m - 1].elements():
            c = tower.embed(a, m, K)
            if c not in seen:
                seen.add(c)
                xi.append(c)
    object.__setattr__(tower, "xi", tuple(xi))
    return tower


def frobenius_fixed(tower: FieldTower, q: int) -> set:
    """Top-level codes x with x**q == x: the subfield of order q."""
    pm = prime_power(q)
    if pm is None or pm[0] != tower.p or tower.top.n % pm[1]:
        raise ValueError(f"{q} is not a subfield order of {tower.top}")
    top = tower.top
    return {x for x in top.elements() if top.power(x, q) == x}
