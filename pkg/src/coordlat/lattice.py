"""Finite lattices as order tables, plus the length-two lattices M_kappa.

A ``FiniteLattice`` stores the order as a boolean matrix and derives
meet/join tables from it.  Elements are the indices ``0..n-1``; ``names``
is for display only.  Predicates return a ``Check`` that is truthy on
success and carries a witness (a counterexample, or the found object).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, reduce
from itertools import combinations, product

import numpy as np

from . import linalg
from .gfield import BudgetExceeded, field_make

__all__ = [
    "Check", "FiniteLattice", "MLattice", "BOT", "TOP", "OMEGA",
    "m_lattice", "m_omega", "chain", "boolean_lattice", "pentagon", "product_lattice",
    "submodule_lattice", "is_modular", "is_2distributive", "is_complemented",
    "is_sectionally_complemented", "oplus", "perspective", "subperspective",
    "perspectivity_table", "subperspectivity_table", "is_independent",
    "is_neutral_element", "is_ideal", "is_neutral_ideal", "center_of",
    "is_boolean_sublattice", "quotient_by_neutral_ideal", "homogeneous_sequences",
    "spanning_mx", "has_large_partial_3frame", "check_3frame", "lattice_isomorphic",
    "is_lattice_hom",
]


@dataclass(frozen=True)
class Check:
    ok: bool
    witness: object = None

    def __bool__(self):
        return self.ok


class FiniteLattice:
    def __init__(self, leq, names=None, check=True):
        leq = np.asarray(leq, dtype=bool)
        n = leq.shape[0]
        if n == 0 or leq.shape != (n, n):
            raise ValueError("order table must be a non-empty square matrix")
        self.leq = leq
        self.names = list(names) if names is not None else [str(i) for i in range(n)]
        if check:
            self._check_order()
        self.meet_table = self._bounds(leq)
        self.join_table = self._bounds(leq.T)
        below = leq.sum(axis=0)
        self.bot = int(np.argmin(below))
        self.top = int(np.argmax(below))
        if check and not (leq[self.bot].all() and leq[:, self.top].all()):
            raise ValueError("lattice has no bounds")

    def _check_order(self):
        leq = self.leq
        if not leq.diagonal().all():
            raise ValueError("order is not reflexive")
        if (leq & leq.T & ~np.eye(len(leq), dtype=bool)).any():
            raise ValueError("order is not antisymmetric")
        li = leq.astype(np.int32)
        if ((li @ li > 0) & ~leq).any():
            raise ValueError("order is not transitive")

    @staticmethod
    def _bounds(leq):
        # meet[a, b] = the common lower bound with the most elements below it
        n = len(leq)
        below = leq.sum(axis=0)
        out = np.empty((n, n), dtype=np.int32)
        for a in range(n):
            common = leq[:, a][:, None] & leq  # [c, b]: c <= a and c <= b
            score = np.where(common, below[:, None], -1)
            m = score.argmax(axis=0)
            if not common[m, np.arange(n)].all():
                raise ValueError("some pair has no lower bound")
            if (common & ~leq[:, m]).any():
                raise ValueError(f"element {a} lacks a greatest lower bound with some b")
            out[a] = m
        return out

    @classmethod
    def from_order(cls, elements, le, names=None, check=True):
        elements = list(elements)
        leq = [[bool(le(x, y)) for y in elements] for x in elements]
        if names is None:
            names = [str(x) for x in elements]
        return cls(leq, names, check)

    def __len__(self):
        return len(self.leq)

    def __repr__(self):
        return f"<FiniteLattice with {len(self)} elements>"

    def meet(self, a, b):
        return int(self.meet_table[a, b])

    def join(self, a, b):
        return int(self.join_table[a, b])

    def le(self, a, b):
        return bool(self.leq[a, b])

    def meet_all(self, xs):
        return reduce(self.meet, xs, self.top)

    def join_all(self, xs):
        return reduce(self.join, xs, self.bot)

    def index(self, name):
        return self.names.index(name)

    def down(self, a):
        return [int(i) for i in np.nonzero(self.leq[:, a])[0]]

    def up(self, a):
        return [int(i) for i in np.nonzero(self.leq[a])[0]]

    @cached_property
    def covers(self):
        """covers[a] = elements covering a."""
        lt = self.leq & ~np.eye(len(self), dtype=bool)
        li = lt.astype(np.int32)
        cov = lt & ~(li @ li > 0)
        return [list(map(int, np.nonzero(cov[a])[0])) for a in range(len(self))]

    @cached_property
    def height(self):
        h = [0] * len(self)
        for a in sorted(range(len(self)), key=lambda x: self.leq[:, x].sum()):
            for b in self.covers[a]:
                h[b] = max(h[b], h[a] + 1)
        return h

    def restrict(self, a):
        """The principal ideal L|a and the list of its elements in L."""
        idx = self.down(a)
        return FiniteLattice(self.leq[np.ix_(idx, idx)], [self.names[i] for i in idx], check=False), idx

    def to_json(self):
        return {"names": self.names, "leq": self.leq.astype(int).tolist()}

    @classmethod
    def from_json(cls, d):
        return cls(np.array(d["leq"], dtype=bool), d.get("names"))


# -- constructions ---------------------------------------------------------

def m_lattice(n):
    """M_n: bottom (index 0), atoms a0..a{n-1} (indices 1..n), top (n+1)."""
    if n < 1:
        raise ValueError("M_n needs at least one atom")
    size = n + 2
    leq = np.eye(size, dtype=bool)
    leq[0, :] = True
    leq[:, -1] = True
    names = ["0"] + [f"a{i}" for i in range(n)] + ["1"]
    return FiniteLattice(leq, names, check=False)


def chain(n):
    leq = np.triu(np.ones((n, n), dtype=bool))
    return FiniteLattice(leq, [str(i) for i in range(n)], check=False)


def boolean_lattice(k):
    elems = range(1 << k)
    return FiniteLattice.from_order(elems, lambda x, y: x & ~y == 0,
                                    [format(x, f"0{k}b") if k else "0" for x in elems], check=False)


def pentagon():
    # 0 < a < b < 1, 0 < c < 1
    names = ["0", "a", "b", "c", "1"]
    rel = {(0, i) for i in range(5)} | {(i, 4) for i in range(5)} | {(i, i) for i in range(5)} | {(1, 2)}
    return FiniteLattice([[(i, j) in rel for j in range(5)] for i in range(5)], names)


def product_lattice(*lats):
    """Direct product; element index is the mixed-radix tuple (first factor slowest)."""
    sizes = [len(L) for L in lats]
    tuples = list(product(*[range(s) for s in sizes]))
    leq = np.ones((len(tuples), len(tuples)), dtype=bool)
    for k, L in enumerate(lats):
        comp = np.array([t[k] for t in tuples])
        leq &= L.leq[np.ix_(comp, comp)]
    names = ["(" + ",".join(L.names[i] for L, i in zip(lats, t)) + ")" for t in tuples]
    out = FiniteLattice(leq, names, check=False)
    out.components = tuples
    return out


def submodule_lattice(p, n, d, budget=1 << 16):
    """Subspace lattice of GF(p^n)^d."""
    if (p ** n) ** d > budget:
        raise BudgetExceeded("vector space exceeds enumeration budget")
    F = field_make(p, n)
    subs = linalg.subspaces(F, d)
    L = FiniteLattice.from_order(subs, lambda u, w: linalg.is_subspace_of(F, u, w),
                                 [str(s) for s in subs], check=False)
    L.subspaces = subs
    L.field = F
    return L


# -- the symbolic M_kappa ---------------------------------------------------

BOT = -1
TOP = -2
OMEGA = "omega"


@dataclass(frozen=True)
class MLattice:
    """M_kappa with atoms named 0, 1, 2, ...; kappa an int or OMEGA."""

    kappa: object = OMEGA

    def __post_init__(self):
        if self.kappa != OMEGA and (not isinstance(self.kappa, int) or self.kappa < 1):
            raise ValueError("kappa must be a positive integer or OMEGA")

    @property
    def finite(self):
        return self.kappa != OMEGA

    def contains(self, x):
        return x in (BOT, TOP) or (isinstance(x, int) and x >= 0 and (not self.finite or x < self.kappa))

    @staticmethod
    def meet(a, b):
        if a == b or b == TOP:
            return a
        if a == TOP:
            return b
        return BOT

    @staticmethod
    def join(a, b):
        if a == b or b == BOT:
            return a
        if a == BOT:
            return b
        return TOP

    @staticmethod
    def le(a, b):
        return a == b or a == BOT or b == TOP

    @staticmethod
    def complement(a, bound=None):
        """Least atom index complementing a (atoms below ``bound`` if given)."""
        if a == BOT:
            return TOP
        if a == TOP:
            return BOT
        c = 0 if a != 0 else 1
        if bound is not None and c >= bound:
            raise ValueError("no complement within the atom bound")
        return c

    def elements(self):
        if not self.finite:
            raise ValueError("M_omega is infinite")
        return [BOT] + list(range(self.kappa)) + [TOP]

    def to_finite(self):
        """(m_lattice(kappa), element -> index)."""
        L = m_lattice(self.kappa)
        index = {BOT: 0, TOP: self.kappa + 1}
        index.update({i: i + 1 for i in range(self.kappa)})
        return L, index


def m_omega():
    return MLattice(OMEGA)


def m_name(x):
    return "0" if x == BOT else "1" if x == TOP else f"A{x}"


def m_parse(s):
    s = str(s)
    if s == "0":
        return BOT
    if s == "1":
        return TOP
    if s[0] in "Aa" and s[1:].isdigit():
        return int(s[1:])
    raise ValueError(f"bad M-lattice element {s!r}")


# -- predicates -------------------------------------------------------------

def is_modular(L):
    m, j = L.meet_table, L.join_table
    n = len(L)
    y = np.arange(n)[:, None]
    z = np.arange(n)[None, :]
    for x in range(n):
        xz = m[x, z]
        lhs = m[x, j[y, xz]]
        rhs = j[m[x, y], xz]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            return Check(False, (x, int(bad[0][0]), int(bad[0][1])))
    return Check(True)


def is_2distributive(L, budget=3 * 10 ** 8):
    """x v (y0^y1^y2) = (x v (y0^y1)) ^ (x v (y0^y2)) ^ (x v (y1^y2))."""
    n = len(L)
    if n ** 4 > budget:
        raise BudgetExceeded(f"2-distributivity check on {n} elements exceeds budget")
    m, j = L.meet_table, L.join_table
    y0 = np.arange(n)[:, None, None]
    y1 = np.arange(n)[None, :, None]
    y2 = np.arange(n)[None, None, :]
    m01, m02, m12 = m[y0, y1], m[y0, y2], m[y1, y2]
    m012 = m[m01, y2]
    for x in range(n):
        lhs = j[x, m012]
        rhs = m[m[j[x, m01], j[x, m02]], j[x, m12]]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            return Check(False, (x,) + tuple(int(v) for v in bad[0]))
    return Check(True)


def _complemented_in(L, a):
    idx = np.array(L.down(a))
    M = L.meet_table[np.ix_(idx, idx)]
    J = L.join_table[np.ix_(idx, idx)]
    ok = ((M == L.bot) & (J == a)).any(axis=1)
    if ok.all():
        return None
    return int(idx[np.argmin(ok)])


def is_complemented(L):
    bad = _complemented_in(L, L.top)
    return Check(bad is None, bad)


def is_sectionally_complemented(L):
    for a in range(len(L)):
        bad = _complemented_in(L, a)
        if bad is not None:
            return Check(False, (a, bad))
    return Check(True)


def oplus(L, *xs):
    """Iterated independent join x0 + x1 + ...; None when some meet is nonzero."""
    s = L.bot
    for x in xs:
        if L.meet(s, x) != L.bot:
            return None
        s = L.join(s, x)
    return s


def _persp_tables(L):
    if not hasattr(L, "_persp"):
        n = len(L)
        persp = np.full((n, n), -1, dtype=np.int32)
        sub = np.full((n, n), -1, dtype=np.int32)
        for z in range(n - 1, -1, -1):
            A = L.meet_table[:, z] == L.bot
            J = L.join_table[:, z]
            AA = A[:, None] & A[None, :]
            persp[AA & (J[:, None] == J[None, :])] = z
            sub[AA & L.leq[np.ix_(J, J)]] = z
        L._persp = (persp, sub)
    return L._persp


def perspectivity_table(L):
    return _persp_tables(L)[0] >= 0


def subperspectivity_table(L):
    return _persp_tables(L)[1] >= 0


def perspective(L, x, y):
    z = int(_persp_tables(L)[0][x, y])
    return Check(z >= 0, z if z >= 0 else None)


def subperspective(L, x, y):
    z = int(_persp_tables(L)[1][x, y])
    return Check(z >= 0, z if z >= 0 else None)


def is_independent(L, seq):
    seq = list(seq)
    for i, a in enumerate(seq):
        rest = L.join_all(seq[:i] + seq[i + 1:])
        if L.meet(a, rest) != L.bot:
            return False
    return True


def _is_scm(L):
    if not hasattr(L, "_scm"):
        L._scm = bool(is_sectionally_complemented(L)) and bool(is_modular(L))
    return L._scm


def _neutral_median(L, u):
    m, j = L.meet_table, L.join_table
    n = len(L)
    x = np.arange(n)[:, None]
    y = np.arange(n)[None, :]
    lhs = j[j[m[u, x], m[x, y]], m[y, u]]
    rhs = m[m[j[u, x], j[x, y]], j[y, u]]
    bad = np.argwhere(lhs != rhs)
    return Check(not len(bad), tuple(int(v) for v in bad[0]) if len(bad) else None)


def is_neutral_element(L, u, method="auto"):
    """Neutrality of u.

    For sectionally complemented modular lattices: no nonzero x with
    x <~ u and x ^ u = 0.  Otherwise the median identity
    (u^x) v (x^y) v (y^u) = (u v x) ^ (x v y) ^ (y v u) for all x, y.
    """
    if method == "auto":
        method = "subperspective" if _is_scm(L) else "median"
    if method == "median":
        return _neutral_median(L, u)
    sub = subperspectivity_table(L)
    for x in range(len(L)):
        if x != L.bot and sub[x, u] and L.meet(x, u) == L.bot:
            return Check(False, x)
    return Check(True)


def is_ideal(L, I):
    I = set(I)
    if not I:
        return False
    if any(not set(L.down(a)) <= I for a in I):
        return False
    return all(L.join(a, b) in I for a in I for b in I)


def is_neutral_ideal(L, I, method="auto"):
    I = set(I)
    if not is_ideal(L, I):
        raise ValueError("not an ideal")
    if method == "auto":
        method = "perspective" if _is_scm(L) else "median"
    if method == "perspective":
        persp = perspectivity_table(L)
        for x in range(len(L)):
            if x not in I:
                for y in I:
                    if persp[x, y]:
                        return Check(False, (x, y))
        return Check(True)
    top = L.join_all(I)
    return is_neutral_element(L, top, method="median")


def center_of(L):
    """Complemented neutral elements of L, sorted."""
    comp = ((L.meet_table == L.bot) & (L.join_table == L.top)).any(axis=1)
    return [u for u in range(len(L)) if comp[u] and is_neutral_element(L, u)]


def is_boolean_sublattice(L, S):
    S = set(S)
    if L.bot not in S or L.top not in S:
        return False
    for a in S:
        for b in S:
            if L.meet(a, b) not in S or L.join(a, b) not in S:
                return False
        if not any(L.meet(a, c) == L.bot and L.join(a, c) == L.top for c in S):
            return False
    idx = sorted(S)
    sub = FiniteLattice(L.leq[np.ix_(idx, idx)], check=False)
    m, j = sub.meet_table, sub.join_table
    k = len(idx)
    x, y, z = np.ix_(range(k), range(k), range(k))
    return bool((m[x, j[y, z]] == j[m[x, y], m[x, z]]).all())


def quotient_by_neutral_ideal(L, I):
    """L / ==_I with x ==_I y iff x v u = y v u for some u in I.

    Returns ``(Q, proj)`` where ``proj[x]`` is the class index of x.
    """
    I = sorted(set(I))
    if not is_ideal(L, I):
        raise ValueError("not an ideal")
    J = L.join_table
    rel = np.zeros((len(L), len(L)), dtype=bool)
    for u in I:
        col = J[:, u]
        rel |= col[:, None] == col[None, :]
    ri = rel.astype(np.int32)
    if ((ri @ ri > 0) & ~rel).any():
        raise ValueError("relation is not transitive: ideal is not neutral")
    proj, reps = [-1] * len(L), []
    for x in range(len(L)):
        if proj[x] < 0:
            for y in np.nonzero(rel[x])[0]:
                proj[int(y)] = len(reps)
            reps.append(x)
    proj_a = np.array(proj)
    for table in (L.meet_table, L.join_table):
        img = proj_a[table]
        for c in range(len(reps)):
            members = np.nonzero(proj_a == c)[0]
            if (img[members] != img[members[0]]).any():
                raise ValueError("not a congruence: ideal is not neutral")
    names = ["[" + L.names[r] + "]" for r in reps]
    Q = FiniteLattice([[proj[L.join(r, s)] == proj[s] for s in reps] for r in reps], names)
    return Q, proj


def homogeneous_sequences(L, n, nonzero=False, cap=100000):
    """Independent n-tuples of pairwise perspective elements."""
    persp = perspectivity_table(L)
    cands = [a for a in range(len(L)) if not (nonzero and a == L.bot)]
    out = []

    def extend(seq, acc):
        if len(seq) == n:
            out.append(tuple(seq))
            if len(out) > cap:
                raise ValueError("homogeneous sequence enumeration cap exceeded")
            return
        for a in cands:
            if L.meet(acc, a) != L.bot or not all(persp[a, b] for b in seq):
                continue
            if is_independent(L, seq + [a]):
                extend(seq + [a], L.join(acc, a))

    extend([], L.bot)
    return out


def spanning_mx(L, n):
    """Images of the n atoms under a 0,1-embedding of M_n, or None."""
    if L.bot == L.top:
        return None
    cands = [a for a in range(len(L)) if a not in (L.bot, L.top)] if n >= 2 else list(range(len(L)))
    if n == 1:
        return (cands[0],) if cands else None

    def complementary(a, b):
        return L.meet(a, b) == L.bot and L.join(a, b) == L.top

    def extend(seq):
        if len(seq) == n:
            return tuple(seq)
        start = seq[-1] + 1 if seq else 0
        for a in cands:
            if a >= start and all(complementary(a, b) for b in seq):
                r = extend(seq + [a])
                if r:
                    return r
        return None

    return extend([])


def check_3frame(L, w):
    a0, a1, a2, b = w
    s = oplus(L, a0, a1, a2, b)
    if s != L.top:
        return Check(False, "a0+a1+a2+b != 1")
    for x, y in combinations((a0, a1, a2), 2):
        if not perspective(L, x, y):
            return Check(False, f"{x} not perspective to {y}")
    if not subperspective(L, b, oplus(L, a0, a1)):
        return Check(False, "b not subperspective to a0+a1")
    return Check(True, w)


def has_large_partial_3frame(L):
    """(a0, a1, a2, b) with a0+a1+a2+b = 1, a_i ~ a_j, b <~ a0+a1; or None."""
    persp = perspectivity_table(L)
    sub = subperspectivity_table(L)
    n, bot, top = len(L), L.bot, L.top
    m, j = L.meet_table, L.join_table
    for a0 in range(n):
        for a1 in np.nonzero(persp[a0])[0]:
            a1 = int(a1)
            if m[a0, a1] != bot:
                continue
            s1 = int(j[a0, a1])
            for a2 in np.nonzero(persp[a0] & persp[a1])[0]:
                a2 = int(a2)
                if m[s1, a2] != bot:
                    continue
                s2 = int(j[s1, a2])
                comps = np.nonzero((m[s2] == bot) & (j[s2] == top) & sub[:, s1])[0]
                if len(comps):
                    return (a0, a1, a2, int(comps[0]))
    return None


def is_lattice_hom(A, B, f, bounds=False):
    f = np.asarray(f)
    ok = (f[A.meet_table] == B.meet_table[np.ix_(f, f)]).all() and \
        (f[A.join_table] == B.join_table[np.ix_(f, f)]).all()
    if bounds:
        ok = ok and f[A.bot] == B.bot and f[A.top] == B.top
    return bool(ok)


def lattice_isomorphic(A, B):
    """An order isomorphism A -> B as a list, or None."""
    n = len(A)
    if n != len(B):
        return None

    def sig(L):
        down = L.leq.sum(axis=0)
        up = L.leq.sum(axis=1)
        return [(L.height[x], len(L.covers[x]), int(down[x]), int(up[x])) for x in range(len(L))]

    sa, sb = sig(A), sig(B)
    if sorted(sa) != sorted(sb):
        return None
    order = sorted(range(n), key=lambda x: (sa[x][0], sa[x]))
    cands = {x: [y for y in range(n) if sb[y] == sa[x]] for x in range(n)}
    f = [-1] * n
    used = [False] * n

    def ok(x, y):
        for x2 in order:
            y2 = f[x2]
            if y2 < 0:
                break
            if A.leq[x, x2] != B.leq[y, y2] or A.leq[x2, x] != B.leq[y2, y]:
                return False
        return True

    def search(k):
        if k == n:
            return True
        x = order[k]
        for y in cands[x]:
            if not used[y] and ok(x, y):
                f[x], used[y] = y, True
                if search(k + 1):
                    return True
                f[x], used[y] = -1, False
        return False

    return list(f) if search(0) else None
