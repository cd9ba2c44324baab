"""Atomic Boolean algebras: evaluation, EF equivalence and atom-count invariants.

A finite Boolean algebra with k atoms is the lattice of k-bit masks.  A
finite/cofinite algebra with parameters is described by *region counts*:
the parameters cut the atoms into regions (one per membership pattern),
and each region has a finite number of atoms or ``INF``.
"""

from __future__ import annotations

from functools import lru_cache

from ..gfield import BudgetExceeded
from ..lattice import boolean_lattice
from .evaluate import eval_finite
from .syntax import quantifier_rank

__all__ = [
    "INF", "FiniteBA", "ef_equivalent", "count_equivalent", "rank_threshold", "ba_equiv_rank",
    "ba_eval", "ba_eval_regions", "region_counts", "hintikka_type",
]

INF = float("inf")


class FiniteBA:
    def __init__(self, k: int):
        self.k = k
        self.lattice = _ba_lattice(k)

    @property
    def size(self):
        return 1 << self.k


@lru_cache(maxsize=None)
def _ba_lattice(k):
    return boolean_lattice(k)


def _atomic_type(k, tup):
    """Which membership patterns of the tuple occur among the k atoms."""
    return frozenset(tuple(x >> a & 1 for x in tup) for a in range(k))


@lru_cache(maxsize=None)
def hintikka_type(k: int, r: int, tup: tuple = ()):
    """Rank-r type of a tuple in the BA with k atoms (brute force)."""
    if r == 0:
        return _atomic_type(k, tup)
    return frozenset(hintikka_type(k, r - 1, tup + (b,)) for b in range(1 << k))


def ef_equivalent(k1: int, k2: int, r: int) -> bool:
    """Brute-force rank-r elementary equivalence of 2^k1 and 2^k2."""
    return hintikka_type(k1, r) == hintikka_type(k2, r)


@lru_cache(maxsize=None)
def count_equivalent(a, b, r: int) -> bool:
    """EF game on atom counts (INF allowed).

    Choosing an element splits the atoms in two; the pair of algebras cut
    by the choice is equivalent iff both halves are, so the game recurses
    on the split counts.
    """
    if (a == 0) != (b == 0):
        return False
    if r == 0:
        return True

    def splits(n):
        if n == INF:
            # finitely many atoms on one side, or infinitely many on both
            return [(i, INF) for i in range(r + 2 ** r + 1)] + [(INF, i) for i in range(r + 2 ** r + 1)] + [(INF, INF)]
        return [(i, n - i) for i in range(n + 1)]

    def answered(src, dst):
        return all(any(count_equivalent(s1, d1, r - 1) and count_equivalent(s2, d2, r - 1)
                       for d1, d2 in splits(dst)) for s1, s2 in splits(src))

    return answered(a, b) and answered(b, a)


@lru_cache(maxsize=None)
def rank_threshold(r: int) -> int:
    """N(r): least N with N and N+1 atoms rank-r equivalent (then all larger counts are)."""
    n = 0
    while not count_equivalent(n, n + 1, r):
        n += 1
    return n


def ba_equiv_rank(a, b, r: int) -> bool:
    """Rank-r equivalence of atomic BAs with a and b atoms (INF for infinitely many)."""
    N = rank_threshold(r)
    return min(a, N) == min(b, N)


def ba_eval(B: FiniteBA, f, env=None) -> bool:
    return eval_finite(B.lattice, f, env or {})


def region_counts(members, universe_count=None):
    """Region counts for parameters given as sets of atoms of a finite BA."""
    atoms = set().union(*members) if universe_count is None else range(universe_count)
    counts = {}
    for a in atoms:
        pat = tuple(int(a in m) for m in members)
        counts[pat] = counts.get(pat, 0) + 1
    return counts


def ba_eval_regions(counts: dict, f, names, budget_atoms=16) -> bool:
    """Evaluate f(params) in an atomic BA given by region counts.

    Counts are capped at N(rank f), which leaves the rank-(rank f) type of
    the parameter tuple unchanged; the capped algebra is then searched.
    """
    N = rank_threshold(quantifier_rank(f))
    capped = {pat: int(min(c, N)) for pat, c in counts.items() if c}
    total = sum(capped.values())
    if total > budget_atoms:
        raise BudgetExceeded(f"capped algebra has {total} atoms, over the budget {budget_atoms}")
    env = {v: 0 for v in names}
    atom = 0
    for pat, c in sorted(capped.items()):
        for _ in range(c):
            for v, bit in zip(names, pat):
                if bit:
                    env[v] |= 1 << atom
            atom += 1
    return eval_finite(_ba_lattice(total), f, env)
