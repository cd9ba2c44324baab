"""Finite regular rings and their lattices of principal right ideals.

Four kinds of ring are supported:

* ``MatrixRing(n, F)``: n x n matrices over a finite field;
* ``ProductRing(factors)``: direct products, componentwise;
* ``TableRing(add, mul)``: arbitrary finite rings given by Cayley tables;
* ``AlmostConstantRing(p, tower)``: families of 2x2 matrices indexed by the
  orders p^(k!) of the tower levels, constant from some level on.

Ring methods work on raw payloads (tuples, ints); ``RingElem`` wraps a
payload with its ring for operator syntax.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from itertools import product
from typing import Callable

import numpy as np

from . import linalg
from .gfield import BudgetExceeded, FieldDesc, FieldTower, tower_make
from .lattice import FiniteLattice

__all__ = [
    "FiniteRing", "MatrixRing", "ProductRing", "TableRing", "AlmostConstantRing", "ACElem",
    "RingElem", "PrincipalIdeal", "RingHom", "CentralAlgebra", "CARRIER_BUDGET",
    "quasi_inverse", "idempotent_generator", "ideal_join", "ideal_meet", "l_of_r",
    "center", "central_idempotents", "c_p", "c_p_solutions", "ring_homs", "hom_factorize",
    "l_functor", "entrywise_hom", "almost_constant_ring", "reduced_product_ring",
    "ring_from_json", "matrix_unit",
]

CARRIER_BUDGET = 1 << 16


class FiniteRing:
    kind = "abstract"

    @property
    def size(self):
        raise NotImplementedError

    def elements(self):
        raise NotImplementedError

    def check_budget(self, budget=CARRIER_BUDGET):
        if self.size is None or self.size > budget:
            raise BudgetExceeded(f"{self!r} exceeds the carrier budget {budget}")

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul_int(self, a, k):
        """k * a for an integer k >= 0 (repeated doubling)."""
        out, acc = self.zero(), a
        while k:
            if k & 1:
                out = self.add(out, acc)
            acc = self.add(acc, acc)
            k >>= 1
        return out

    def is_idempotent(self, e):
        return self.mul(e, e) == e

    def elem(self, payload):
        return RingElem(self, payload)

    def center(self):
        self.check_budget()
        elems = list(self.elements())
        return [z for z in elems if all(self.mul(z, x) == self.mul(x, z) for x in elems)]

    def idempotent_ideals(self):
        """One idempotent generator per principal right ideal."""
        self.check_budget()
        seen = {}
        for x in self.elements():
            e = self.mul(x, self.qinv(x))
            seen.setdefault(self.ideal_key(e), e)
        return list(seen.values())


class MatrixRing(FiniteRing):
    kind = "matrix"

    def __init__(self, n: int, F: FieldDesc):
        if n < 1:
            raise ValueError("matrix size must be positive")
        self.n, self.F = n, F

    def __repr__(self):
        return f"Mat{self.n}({self.F!r})"

    def __eq__(self, other):
        return isinstance(other, MatrixRing) and (self.n, self.F) == (other.n, other.F)

    def __hash__(self):
        return hash(("matrix", self.n, self.F))

    @property
    def size(self):
        return self.F.order ** (self.n * self.n)

    def elements(self):
        self.check_budget()
        n = self.n
        for flat in product(range(self.F.order), repeat=n * n):
            yield tuple(flat[i * n:(i + 1) * n] for i in range(n))

    def zero(self):
        return linalg.zero(self.F, self.n)

    def one(self):
        return linalg.identity(self.F, self.n)

    def add(self, a, b):
        return linalg.mat_add(self.F, a, b)

    def neg(self, a):
        return linalg.mat_neg(self.F, a)

    def sub(self, a, b):
        return linalg.mat_sub(self.F, a, b)

    def mul(self, a, b):
        return linalg.mat_mul(self.F, a, b)

    def mul_int(self, a, k):
        return linalg.mat_scale(self.F, self.F.from_int(k), a)

    def scalar(self, c):
        return linalg.mat_scale(self.F, c, self.one())

    def qinv(self, a):
        return linalg.quasi_inverse(self.F, a)

    def ideal_key(self, e):
        return linalg.column_space(self.F, e)

    def idempotent_ideals(self):
        return [linalg.projection(self.F, b, self.n) for b in linalg.subspaces(self.F, self.n)]

    def center(self):
        # scalar matrices; the commutation check is left to the tests
        return [self.scalar(c) for c in self.F.elements()]

    def to_json(self):
        return {"kind": "matrix", "n": self.n, "field": self.F.to_json()}

    def element_to_json(self, a):
        return [[list(self.F.coeffs(x)) for x in row] for row in a]

    def element_from_json(self, d):
        return tuple(tuple(self.F.code(x) for x in row) for row in d)


class ProductRing(FiniteRing):
    kind = "product"

    def __init__(self, factors):
        self.factors = tuple(factors)
        if not self.factors:
            raise ValueError("empty product")

    def __repr__(self):
        return " x ".join(map(repr, self.factors))

    def __eq__(self, other):
        return isinstance(other, ProductRing) and self.factors == other.factors

    def __hash__(self):
        return hash(("product", self.factors))

    @property
    def size(self):
        sizes = [f.size for f in self.factors]
        return None if None in sizes else int(np.prod(sizes, dtype=object))

    def elements(self):
        self.check_budget()
        return product(*[f.elements() for f in self.factors])

    def _each(self, name, *args):
        return tuple(getattr(f, name)(*xs) for f, *xs in zip(self.factors, *args))

    def zero(self):
        return tuple(f.zero() for f in self.factors)

    def one(self):
        return tuple(f.one() for f in self.factors)

    def add(self, a, b):
        return self._each("add", a, b)

    def neg(self, a):
        return self._each("neg", a)

    def sub(self, a, b):
        return self._each("sub", a, b)

    def mul(self, a, b):
        return self._each("mul", a, b)

    def mul_int(self, a, k):
        return tuple(f.mul_int(x, k) for f, x in zip(self.factors, a))

    def qinv(self, a):
        return self._each("qinv", a)

    def ideal_key(self, e):
        return self._each("ideal_key", e)

    def idempotent_ideals(self):
        return list(product(*[f.idempotent_ideals() for f in self.factors]))

    def center(self):
        return list(product(*[f.center() for f in self.factors]))

    def to_json(self):
        return {"kind": "product", "factors": [f.to_json() for f in self.factors]}

    def element_to_json(self, a):
        return [f.element_to_json(x) for f, x in zip(self.factors, a)]

    def element_from_json(self, d):
        return tuple(f.element_from_json(x) for f, x in zip(self.factors, d))


class TableRing(FiniteRing):
    kind = "table"

    def __init__(self, add, mul, check=True):
        self.add_table = np.asarray(add, dtype=np.int64)
        self.mul_table = np.asarray(mul, dtype=np.int64)
        n = len(self.add_table)
        if self.add_table.shape != (n, n) or self.mul_table.shape != (n, n):
            raise ValueError("tables must be square and of equal size")
        idx = np.arange(n)
        zeros = [z for z in range(n) if (self.add_table[z] == idx).all()]
        ones = [u for u in range(n) if (self.mul_table[u] == idx).all() and (self.mul_table[:, u] == idx).all()]
        if not zeros or not ones:
            raise ValueError("table ring lacks 0 or 1")
        self._zero, self._one = zeros[0], ones[0]
        self._neg = [int(np.nonzero(self.add_table[a] == self._zero)[0][0]) for a in range(n)]
        if check:
            self._check_axioms()

    def _check_axioms(self):
        A, M = self.add_table, self.mul_table
        x, y, z = np.ix_(*[range(len(A))] * 3)
        if not (A == A.T).all() or not (A[A[x, y], z] == A[x, A[y, z]]).all():
            raise ValueError("addition is not a commutative associative operation")
        if not (M[M[x, y], z] == M[x, M[y, z]]).all():
            raise ValueError("multiplication is not associative")
        if not ((M[x, A[y, z]] == A[M[x, y], M[x, z]]).all() and (M[A[x, y], z] == A[M[x, z], M[y, z]]).all()):
            raise ValueError("distributivity fails")

    def __repr__(self):
        return f"<TableRing of order {self.size}>"

    @property
    def size(self):
        return len(self.add_table)

    def elements(self):
        return range(self.size)

    def zero(self):
        return self._zero

    def one(self):
        return self._one

    def add(self, a, b):
        return int(self.add_table[a, b])

    def neg(self, a):
        return self._neg[a]

    def mul(self, a, b):
        return int(self.mul_table[a, b])

    def qinv(self, a):
        M = self.mul_table
        hits = np.nonzero(M[M[a], a] == a)[0]
        if not len(hits):
            raise ValueError(f"element {a} has no quasi-inverse; ring is not regular")
        return int(hits[0])

    def ideal_key(self, e):
        return frozenset(int(x) for x in self.mul_table[e])

    def to_json(self):
        return {"kind": "table", "add": self.add_table.tolist(), "mul": self.mul_table.tolist()}

    def element_to_json(self, a):
        return int(a)

    def element_from_json(self, d):
        return int(d)


@dataclass(frozen=True)
class ACElem:
    """Almost-constant family: one 2x2 matrix per tower level, plus the limit.

    ``vals[k]`` lives in level k+1 (position p^((k+1)!)); ``lim`` is a matrix
    over the top level and is the value at every position beyond the tower.
    """

    vals: tuple
    lim: tuple


class AlmostConstantRing(FiniteRing):
    kind = "almost_constant"

    def __init__(self, p: int, tower: FieldTower):
        self.p, self.tower = p, tower
        self.stalks = tuple(MatrixRing(2, tower.level(k)) for k in range(1, tower.depth + 1))
        self.top = self.stalks[-1]

    def __repr__(self):
        return f"R_{self.p}[levels={self.tower.depth}]"

    @property
    def size(self):
        return None

    @property
    def positions(self):
        return [self.tower.order(k) for k in range(1, self.tower.depth + 1)]

    def elements(self):
        raise ValueError("almost-constant rings are infinite")

    def _lift(self, a, k):
        """Matrix over level k+1 embedded into the top level."""
        return tuple(tuple(self.tower.embed(x, k + 1, self.tower.depth) for x in row) for row in a)

    def _lower(self, a, k):
        return tuple(tuple(self.tower.lower(x, self.tower.depth, k + 1) for x in row) for row in a)

    def limit_level(self, e: ACElem):
        """Least level whose field contains every entry of the limit."""
        for k in range(self.tower.depth):
            try:
                if self._lift(self._lower(e.lim, k), k) == e.lim:
                    return k + 1
            except ValueError:
                pass
        return self.tower.depth

    def exceptions(self, e: ACElem):
        """Tower positions where the value differs from the limit."""
        return {self.tower.order(k + 1): v for k, v in enumerate(e.vals) if self._lift(v, k) != e.lim}

    def make(self, limit, exceptions=None):
        """Element with the given limit (top-level matrix) and exceptions.

        ``exceptions`` maps positions q = p^(k!) to matrices over F_q.
        Positions whose field does not contain the limit must be listed.
        """
        exceptions = dict(exceptions or {})
        bad = set(exceptions) - set(self.positions)
        if bad:
            raise ValueError(f"exception keys {sorted(bad)} are not tower positions")
        vals = []
        for k, q in enumerate(self.positions):
            if q in exceptions:
                vals.append(tuple(map(tuple, exceptions[q])))
                continue
            try:
                low = self._lower(limit, k)
            except ValueError:
                low = None
            if low is None or self._lift(low, k) != tuple(map(tuple, limit)):
                raise ValueError(f"limit does not lie in F_{q}; position {q} needs an exception")
            vals.append(low)
        return ACElem(tuple(vals), tuple(map(tuple, limit)))

    def constant(self, a, level):
        """The constant family with value a (a matrix over the given level)."""
        return self.make(self._lift(a, level - 1))

    def _map(self, name, *args):
        vals = tuple(getattr(s, name)(*xs) for s, *xs in zip(self.stalks, *[a.vals for a in args]))
        return ACElem(vals, getattr(self.top, name)(*[a.lim for a in args]))

    def zero(self):
        return ACElem(tuple(s.zero() for s in self.stalks), self.top.zero())

    def one(self):
        return ACElem(tuple(s.one() for s in self.stalks), self.top.one())

    def add(self, a, b):
        return self._map("add", a, b)

    def neg(self, a):
        return self._map("neg", a)

    def sub(self, a, b):
        return self._map("sub", a, b)

    def mul(self, a, b):
        return self._map("mul", a, b)

    def mul_int(self, a, k):
        return ACElem(tuple(s.mul_int(v, k) for s, v in zip(self.stalks, a.vals)), self.top.mul_int(a.lim, k))

    def qinv(self, a):
        return self._map("qinv", a)

    def ideal_key(self, e):
        return tuple(s.ideal_key(v) for s, v in zip(self.stalks, e.vals)) + (self.top.ideal_key(e.lim),)

    def idempotent_ideals(self):
        raise ValueError("almost-constant rings have infinitely many principal ideals")

    def center(self):
        raise ValueError("the center of an almost-constant ring is infinite; use c_p")

    def to_json(self):
        return {"kind": "almost_constant", "p": self.p, "levels": self.tower.depth}

    def element_to_json(self, a):
        exc = {str(q): self.stalks[self.positions.index(q)].element_to_json(v)
               for q, v in self.exceptions(a).items()}
        return {"exc": exc, "lim": self.top.element_to_json(a.lim)}

    def element_from_json(self, d):
        exc = {int(q): self.stalks[self.positions.index(int(q))].element_from_json(v)
               for q, v in d.get("exc", {}).items()}
        return self.make(self.top.element_from_json(d["lim"]), exc)


def almost_constant_ring(p: int, tower: FieldTower | None = None, levels: int = 3) -> AlmostConstantRing:
    return AlmostConstantRing(p, tower if tower is not None else tower_make(p, levels))


def ring_from_json(d) -> FiniteRing:
    kind = d.get("kind")
    if kind == "matrix":
        return MatrixRing(int(d["n"]), FieldDesc.from_json(d["field"]))
    if kind == "product":
        return ProductRing([ring_from_json(f) for f in d["factors"]])
    if kind == "table":
        return TableRing(d["add"], d["mul"])
    if kind == "almost_constant":
        return almost_constant_ring(int(d["p"]), levels=int(d["levels"]))
    raise ValueError(f"unknown ring kind {kind!r}")


@dataclass(frozen=True)
class RingElem:
    ring: FiniteRing = field(compare=False)
    payload: object

    def _other(self, other):
        if isinstance(other, RingElem):
            if other.ring is not self.ring and other.ring != self.ring:
                raise ValueError("elements of different rings")
            return other.payload
        raise TypeError("expected a RingElem")

    def __add__(self, other):
        return RingElem(self.ring, self.ring.add(self.payload, self._other(other)))

    def __sub__(self, other):
        return RingElem(self.ring, self.ring.sub(self.payload, self._other(other)))

    def __mul__(self, other):
        return RingElem(self.ring, self.ring.mul(self.payload, self._other(other)))

    def __neg__(self):
        return RingElem(self.ring, self.ring.neg(self.payload))

    def __rmul__(self, k):
        if isinstance(k, int):
            return RingElem(self.ring, self.ring.mul_int(self.payload, k))
        return NotImplemented

    def is_idempotent(self):
        return self.ring.is_idempotent(self.payload)

    def is_zero(self):
        return self.payload == self.ring.zero()


def matrix_unit(R: MatrixRing, i: int, j: int):
    return tuple(tuple(1 if (r, c) == (i, j) else 0 for c in range(R.n)) for r in range(R.n))


# -- principal right ideals ----------------------------------------------------

class PrincipalIdeal:
    """eR for an idempotent e."""

    def __init__(self, ring: FiniteRing, gen):
        if isinstance(gen, RingElem):
            gen = gen.payload
        if not ring.is_idempotent(gen):
            raise ValueError("ideal generator must be idempotent")
        self.ring, self.gen = ring, gen

    def __repr__(self):
        return f"PrincipalIdeal({self.gen!r})"

    def __eq__(self, other):
        if not isinstance(other, PrincipalIdeal):
            return NotImplemented
        R = self.ring
        return R.mul(self.gen, other.gen) == other.gen and R.mul(other.gen, self.gen) == self.gen

    def __hash__(self):
        return hash(self.ring.ideal_key(self.gen))

    def __le__(self, other):
        return self.ring.mul(other.gen, self.gen) == self.gen

    def contains(self, x):
        if isinstance(x, RingElem):
            x = x.payload
        return self.ring.mul(self.gen, x) == x

    def elements(self):
        R = self.ring
        return {R.mul(self.gen, r) for r in R.elements()}

    @property
    def key(self):
        return self.ring.ideal_key(self.gen)


def quasi_inverse(a: RingElem) -> RingElem:
    return a.ring.elem(a.ring.qinv(a.payload))


def idempotent_generator(x) -> PrincipalIdeal:
    R, x = x.ring, x.payload
    return PrincipalIdeal(R, R.mul(x, R.qinv(x)))


def _same_ring(I, J):
    if I.ring is not J.ring and I.ring != J.ring:
        raise ValueError("ideals of different rings")
    return I.ring


def ideal_join(I: PrincipalIdeal, J: PrincipalIdeal) -> PrincipalIdeal:
    R = _same_ring(I, J)
    a, b = I.gen, J.gen
    w = R.sub(b, R.mul(a, b))
    c = R.mul(w, R.qinv(w))
    return idempotent_generator(R.elem(R.add(a, c)))


def ideal_meet(I: PrincipalIdeal, J: PrincipalIdeal) -> PrincipalIdeal:
    R = _same_ring(I, J)
    a, b = I.gen, J.gen
    w = R.sub(b, R.mul(a, b))
    d = R.mul(R.qinv(w), w)
    return idempotent_generator(R.elem(R.sub(b, R.mul(b, d))))


def l_of_r(R: FiniteRing):
    """(L(R), ideals) where ideals[i] is the PrincipalIdeal at lattice index i."""
    cached = getattr(R, "_lattice", None)
    if cached is not None:
        return cached
    gens = R.idempotent_ideals()
    ideals = [PrincipalIdeal(R, e) for e in gens]
    if isinstance(R, ProductRing):
        leq = np.ones((len(gens), len(gens)), dtype=bool)
        sub_lats = [l_of_r(f)[0] for f in R.factors]
        # idempotent_ideals of a product is the product of the factor lists, in order
        comps = np.array(list(product(*[range(len(L)) for L in sub_lats])))
        for k, L in enumerate(sub_lats):
            leq &= L.leq[np.ix_(comps[:, k], comps[:, k])]
    else:
        leq = np.array([[R.mul(f, e) == e for f in gens] for e in gens], dtype=bool)
    L = FiniteLattice(leq, [f"I{i}" for i in range(len(gens))])
    L.ideal_index = {I.key: i for i, I in enumerate(ideals)}
    R._lattice = (L, ideals)
    return L, ideals


def lattice_index(R: FiniteRing, e) -> int:
    """Position in l_of_r(R) of the principal ideal eR (e idempotent)."""
    L, _ = l_of_r(R)
    return L.ideal_index[R.ideal_key(e)]


# -- centers and c_p ----------------------------------------------------------------

def center(R: FiniteRing):
    return [R.elem(z) for z in R.center()]


@dataclass
class CentralAlgebra:
    """Central idempotents with a v b = a + b - ab, a ^ b = ab, -a = 1 - a."""

    ring: FiniteRing
    elements: list

    def join(self, a, b):
        R = self.ring
        return R.sub(R.add(a, b), R.mul(a, b))

    def meet(self, a, b):
        return self.ring.mul(a, b)

    def complement(self, a):
        return self.ring.sub(self.ring.one(), a)

    def check(self):
        S = set(self.elements)
        R = self.ring
        for a in self.elements:
            if self.complement(a) not in S:
                return False
            for b in self.elements:
                if self.join(a, b) not in S or self.meet(a, b) not in S:
                    return False
                if self.meet(a, self.join(a, b)) != a:
                    return False
        return R.zero() in S and R.one() in S


def central_idempotents(R: FiniteRing) -> CentralAlgebra:
    return CentralAlgebra(R, [z for z in R.center() if R.is_idempotent(z)])


def c_p_solutions(R: FiniteRing, p: int):
    """All central a with p^2 a = p 1."""
    target = R.mul_int(R.one(), p)
    return [a for a in R.center() if R.mul_int(a, p * p) == target]


def c_p(R: FiniteRing, p: int, a=None) -> RingElem:
    """c_p = 1 - p a_p for a central solution a_p of p^2 a_p = p 1."""
    if isinstance(R, AlmostConstantRing):
        vals = tuple(c_p(s, p).payload for s in R.stalks)
        return R.elem(ACElem(vals, c_p(R.top, p).payload))
    if a is None:
        sols = c_p_solutions(R, p)
        if not sols:
            raise ValueError(f"no central solution of {p}^2 a = {p} in {R!r}")
        a = sols[0]
    return R.elem(R.sub(R.one(), R.mul_int(a, p)))


# -- homomorphisms ----------------------------------------------------------------------

@dataclass
class RingHom:
    source: FiniteRing
    target: FiniteRing
    fn: Callable

    def __call__(self, x):
        if isinstance(x, RingElem):
            return self.target.elem(self.fn(x.payload))
        return self.fn(x)

    def table(self):
        return {x: self.fn(x) for x in self.source.elements()}


def _closure(R, gens):
    seen = {R.one()}
    seen.update(gens)
    frontier = list(seen)
    while frontier:
        new = []
        for x in frontier:
            for y in list(seen):
                for z in (R.add(x, y), R.mul(x, y), R.mul(y, x)):
                    if z not in seen:
                        seen.add(z)
                        new.append(z)
        frontier = new
    return seen


def _extend(R, S, mapping):
    """Close a partial map under +, *; None on conflict."""
    m = dict(mapping)
    m[R.one()] = S.one()
    frontier = list(m)
    while frontier:
        new = []
        for x in frontier:
            fx = m[x]
            for y in list(m):
                fy = m[y]
                for z, fz in ((R.add(x, y), S.add(fx, fy)), (R.mul(x, y), S.mul(fx, fy)),
                              (R.mul(y, x), S.mul(fy, fx))):
                    old = m.get(z)
                    if old is None:
                        m[z] = fz
                        new.append(z)
                    elif old != fz:
                        return None
        frontier = new
    return m


def _generators(R):
    gens, span = [], _closure(R, [])
    for x in R.elements():
        if x not in span:
            gens.append(x)
            span = _closure(R, gens)
    return gens


def ring_homs(R: FiniteRing, S: FiniteRing, budget=CARRIER_BUDGET):
    """All unital ring homomorphisms R -> S, as table-backed RingHoms."""
    R.check_budget(budget)
    S.check_budget(budget)
    gens = _generators(R)
    targets = list(S.elements())
    cands = [[s for s in targets if _extend(R, S, {g: s}) is not None] for g in gens]
    out = []

    def search(k, mapping):
        if k == len(gens):
            full = _extend(R, S, mapping)
            if full is not None:
                out.append(RingHom(R, S, full.__getitem__))
            return
        for s in cands[k]:
            trial = dict(mapping)
            trial[gens[k]] = s
            if _extend(R, S, trial) is not None:
                search(k + 1, trial)

    search(0, {})
    return out


def entrywise_hom(R: MatrixRing, S: MatrixRing, sigma: Callable) -> RingHom:
    """Mat_n(E) -> Mat_n(F) applying a field map entrywise."""
    return RingHom(R, S, lambda a: tuple(tuple(sigma(x) for x in row) for row in a))


def hom_factorize(phi: RingHom):
    """Write phi(x) = a sigma(x) a^-1; returns (sigma as a dict on codes, a).

    Raises ValueError when phi does not factor this way (e.g. it is not a
    unital homomorphism between full matrix rings of the same size).
    """
    R, S = phi.source, phi.target
    if not (isinstance(R, MatrixRing) and isinstance(S, MatrixRing) and R.n == S.n):
        raise ValueError("factorization needs Mat_n(E) -> Mat_n(F)")
    n, E, F = R.n, R.F, S.F
    e11 = phi(matrix_unit(R, 0, 0))
    col = next((j for j in range(n) if any(e11[i][j] for i in range(n))), None)
    if col is None:
        raise ValueError("phi(e11) = 0")
    v = tuple((e11[i][col],) for i in range(n))
    cols = [linalg.mat_mul(F, phi(matrix_unit(R, j, 0)), v) for j in range(n)]
    a = tuple(tuple(cols[j][i][0] for j in range(n)) for i in range(n))
    try:
        a_inv = linalg.mat_inverse(F, a)
    except ZeroDivisionError:
        raise ValueError("recovered conjugator is singular") from None
    sigma = {}
    for x in E.elements():
        img = linalg.mat_mul(F, linalg.mat_mul(F, a_inv, phi(R.scalar(x))), a)
        if img != S.scalar(img[0][0]):
            raise ValueError("phi does not map scalars to scalars after conjugation")
        sigma[x] = img[0][0]
    for x in E.elements():
        for y in E.elements():
            if sigma[E.add(x, y)] != F.add(sigma[x], sigma[y]) or sigma[E.mul(x, y)] != F.mul(sigma[x], sigma[y]):
                raise ValueError("recovered sigma is not a field homomorphism")
    if sigma[1] != 1:
        raise ValueError("recovered sigma is not unital")
    for i in range(n):
        for j in range(n):
            u = matrix_unit(R, i, j)
            if linalg.mat_mul(F, linalg.mat_mul(F, a_inv, phi(u)), a) != u:
                raise ValueError("phi does not factor through conjugation")
    return sigma, a


def l_functor(phi: RingHom):
    """The induced map L(R) -> L(S), as a list of lattice indices."""
    R, S = phi.source, phi.target
    LR, ideals = l_of_r(R)
    l_of_r(S)
    return [lattice_index(S, phi.fn(I.gen)) for I in ideals]


# -- reduced products -----------------------------------------------------------------------

def reduced_product_ring(rings, filter_sets):
    """prod R_i / (filter-null ideal) over a finite index set.

    On a finite set every filter is principal, generated by the
    intersection G of its members, and the quotient is prod_{i in G} R_i.
    Returns ``(ring, G)``.
    """
    n = len(rings)
    fam = {frozenset(s) for s in filter_sets}
    if not fam:
        raise ValueError("filter must be nonempty")
    full = frozenset(range(n))
    if any(not s <= full for s in fam):
        raise ValueError("filter member outside the index set")
    gen = reduce(frozenset.__and__, fam)
    if not gen:
        raise ValueError("filter contains the empty set (improper)")
    for s in fam:
        for t in fam:
            if s & t not in fam:
                raise ValueError("filter not closed under intersection")
    for mask in range(1 << n):
        sup = frozenset(i for i in range(n) if mask >> i & 1)
        if (gen <= sup) != (sup in fam):
            raise ValueError("filter not closed under supersets")
    idx = sorted(gen)
    ring = rings[idx[0]] if len(idx) == 1 else ProductRing([rings[i] for i in idx])
    return ring, idx
