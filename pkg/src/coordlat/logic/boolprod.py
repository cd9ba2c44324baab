"""Boolean products: finite explicit ones and the symbolic section lattices.

For a finite product the index space is discrete, every subset is clopen
and Boolean values are frozensets of indices.  For a SectionLattice the
Boolean value of a formula is a ``Clopen``: its explicit positions, a flag
per class tail and a flag per limit point.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from ..gfield import BudgetExceeded
from ..lattice import BOT, TOP, FiniteLattice, MLattice
from ..seqlat import IndexSpace, Section, SectionLattice
from .ba import INF
from .evaluate import eval_finite, eval_m_lattice, truth_table
from .fv import DeterminingSequence, determining_sequence, phi_eval
from .syntax import Exists, free_vars, quantifier_rank

__all__ = [
    "FiniteProduct", "Clopen", "boolean_value", "check_boolean_product", "finite_color_model",
    "clopen_color_model", "validate_determining_sequence", "canonical_embedding_eps",
    "elementary_submodel_report", "random_section", "to_split",
]


class FiniteProduct:
    """A sublattice A of prod A_p over a finite discrete index set.

    ``elements`` are tuples of stalk indices; None means the full product.
    """

    def __init__(self, stalks, elements=None):
        self.stalks = list(stalks)
        if elements is None:
            self.elements = list(product(*[range(len(L)) for L in self.stalks]))
        else:
            self.elements = [tuple(e) for e in elements]
        self.index = {e: i for i, e in enumerate(self.elements)}
        self._lattice = None

    def __len__(self):
        return len(self.elements)

    @property
    def points(self):
        return range(len(self.stalks))

    def lattice(self) -> FiniteLattice:
        if self._lattice is None:
            E = np.array(self.elements)
            leq = np.ones((len(E), len(E)), dtype=bool)
            for p, L in enumerate(self.stalks):
                leq &= L.leq[np.ix_(E[:, p], E[:, p])]
            self._lattice = FiniteLattice(leq, [str(e) for e in self.elements])
        return self._lattice


def boolean_value_finite(B: FiniteProduct, f, env):
    """{p : A_p |= f(env(p))} for env mapping variables to element tuples."""
    return frozenset(p for p in B.points
                     if eval_finite(B.stalks[p], f, {v: a[p] for v, a in env.items()}))


def _is_sublattice(B):
    S = set(B.elements)
    for a in B.elements:
        for b in B.elements:
            m = tuple(L.meet(x, y) for L, x, y in zip(B.stalks, a, b))
            j = tuple(L.join(x, y) for L, x, y in zip(B.stalks, a, b))
            if m not in S or j not in S:
                return False, (a, b)
    return True, None


def check_boolean_product(B, corpus=None, samples=20, seed=0):
    """Report on the Boolean-product conditions.

    Finite products are checked exhaustively (patchwork over all pairs and
    all subsets; maximality for every existential corpus formula and every
    parameter tuple).  Section lattices are checked on seeded samples.
    """
    if isinstance(B, SectionLattice):
        return _check_symbolic(B, corpus or [], samples, seed)
    report = {}
    ok, wit = _is_sublattice(B)
    report["sublattice"] = {"ok": ok, "witness": wit}
    sub = all({e[p] for e in B.elements} == set(range(len(L))) for p, L in enumerate(B.stalks))
    report["subdirect"] = {"ok": sub, "witness": None}
    S = set(B.elements)
    patch = None
    n = len(B.stalks)
    for a in B.elements:
        for b in B.elements:
            for mask in range(1 << n):
                c = tuple(a[p] if mask >> p & 1 else b[p] for p in range(n))
                if c not in S:
                    patch = (a, b, mask)
                    break
            if patch:
                break
        if patch:
            break
    report["patchwork"] = {"ok": patch is None, "witness": patch}
    report["atomic_clopen"] = {"ok": True, "witness": "discrete index space"}
    report["strong"] = {"ok": True, "witness": "discrete index space"}
    maxi = None
    for f in corpus or []:
        if not isinstance(f, Exists):
            continue
        ps = [v for v in free_vars(f)]
        for params in product(range(len(B)), repeat=len(ps)):
            env = {v: B.elements[i] for v, i in zip(ps, params)}
            target = boolean_value_finite(B, f, env)
            if not any(boolean_value_finite(B, f.body, {**env, f.var: a}) == target for a in B.elements):
                maxi = (f, params)
                break
        if maxi:
            break
    report["maximality"] = {"ok": maxi is None, "witness": None if maxi is None else str(maxi)}
    return report


# -- determining-sequence validation on finite products -------------------------------

def finite_color_model(bits_per_point):
    return [(c, 1) for c in bits_per_point]


def validate_determining_sequence(ds: DeterminingSequence, B: FiniteProduct, formula=None, params=None):
    """Compare A |= f(params) with Phi(Boolean values of the parts).

    With ``params`` None every parameter tuple is tried.  Returns
    (number of tuples checked, list of failing tuples).
    """
    free = list(ds.free)
    k = len(free)
    A = B.lattice()
    # colors per stalk and stalk tuple, one bit per part
    colors = []
    for L in B.stalks:
        col = np.zeros((len(L),) * k, dtype=np.int64)
        for j, part in enumerate(ds.parts):
            col |= truth_table(L, part, free).astype(np.int64) << j
        colors.append(col)
    direct = truth_table(A, formula, free) if formula is not None else None
    tuples = [tuple(params)] if params is not None else list(product(range(len(A)), repeat=k))
    E = B.elements
    fails = []
    for t in tuples:
        bits = [int(colors[p][tuple(E[i][p] for i in t)]) for p in B.points]
        via = phi_eval(ds, finite_color_model(bits))
        want = bool(direct[t]) if direct is not None else eval_finite(A, formula, dict(zip(free, t)))
        if via != want:
            fails.append(t)
    return len(tuples), fails


# -- symbolic Boolean values -------------------------------------------------------------

@dataclass(frozen=True)
class Clopen:
    space: IndexSpace = field(compare=False, repr=False)
    members: frozenset  # explicit position keys
    tails: frozenset  # class ids whose tail lies in the set
    limits: frozenset  # limit names in the set

    @property
    def clopen(self):
        """Each class tail is in the set iff its limit point is."""
        sp = self.space
        return all((c.cid in self.tails) == (sp.limit_of[c.cid] in self.limits) for c in sp.classes)

    def union(self, o):
        return Clopen(self.space, self.members | o.members, self.tails | o.tails, self.limits | o.limits)

    def intersection(self, o):
        return Clopen(self.space, self.members & o.members, self.tails & o.tails, self.limits & o.limits)

    def complement(self):
        sp = self.space
        return Clopen(sp, frozenset(p.key for p in sp.positions) - self.members,
                      frozenset(c.cid for c in sp.classes) - self.tails,
                      frozenset(sp.limit_names) - self.limits)

    def to_json(self):
        return {"members": sorted(self.members), "tails": sorted(self.tails), "limits": sorted(self.limits)}


def _named(env):
    return len({v for v in env.values() if v >= 0})


def boolean_value(KL, f, params, check_tails=True):
    """Boolean value of f at the given parameters.

    ``KL`` is a SectionLattice (params map variables to Sections) or a
    FiniteProduct (params map variables to element tuples).
    """
    if isinstance(KL, FiniteProduct):
        return boolean_value_finite(KL, f, params)
    sp = KL.space
    members = set()
    for pos in sp.positions:
        env = {v: KL.value(x, pos.key) for v, x in params.items()}
        if eval_m_lattice(MLattice(1 + pos.q), f, env):
            members.add(pos.key)
    tails = set()
    for c in sp.classes:
        env = {v: KL.tail(x, c.cid) for v, x in params.items()}
        if _named(env) + quantifier_rank(f) > c.tail_q:
            raise ValueError("tail stalk too small for the symmetry argument")
        if eval_m_lattice(MLattice(1 + c.tail_q), f, env):
            tails.add(c.cid)
    limits = set()
    for n in sp.limit_names:
        env = {v: x.limit(n) for v, x in params.items()}
        val = eval_m_lattice(KL.limit_stalk, f, env)
        if val:
            limits.add(n)
    return Clopen(sp, frozenset(members), frozenset(tails), frozenset(limits))


def clopen_color_model(values):
    """Color model of a tuple of clopens (one bit per clopen).

    Explicit positions count once; each limit point stands for its
    infinite tail group.
    """
    sp = values[0].space
    model = []
    for pos in sp.positions:
        model.append((sum(1 << j for j, X in enumerate(values) if pos.key in X.members), 1))
    for n in sp.limit_names:
        model.append((sum(1 << j for j, X in enumerate(values) if n in X.limits), INF))
    return model


def _check_symbolic(KL, corpus, samples, seed):
    rng = random.Random(seed)
    bad = None
    for f in corpus:
        for _ in range(samples):
            env = {v: random_section(KL, rng) for v in free_vars(f)}
            X = boolean_value(KL, f, env)
            if not X.clopen:
                bad = (str(f), {v: KL.section_to_json(x) for v, x in env.items()})
                break
        if bad:
            break
    patch = None
    for _ in range(samples):
        a, b = random_section(KL, rng), random_section(KL, rng)
        for n in KL.space.limit_names:
            # Y = the clopen tail group of limit n plus a random finite set
            keys = [p.key for p in KL.space.positions]
            fin = {k for k in keys if rng.random() < 0.5}
            exc = {}
            for pos in KL.space.positions:
                inY = KL.space.limit_of[pos.cid] == n if pos.key not in fin else True
                exc[pos.key] = KL.value(a if inY else b, pos.key)
            lim = {m: (a if m == n else b).limit(m) for m in KL.space.limit_names}
            try:
                KL.section(exc, lim)
            except ValueError as err:
                patch = str(err)
    return {
        "subdirect": {"ok": True, "witness": "every stalk value occurs as an exception"},
        "atomic_clopen": {"ok": bad is None, "witness": bad},
        "strong": {"ok": bad is None, "witness": bad},
        "patchwork": {"ok": patch is None, "witness": patch},
        "maximality": {"ok": bad is None, "witness": "follows from strong"},
    }


# -- K versus L -------------------------------------------------------------------------

def random_section(KL, rng, max_exc=2):
    sp = KL.space
    atoms = 3 if KL.limit_atoms is None else KL.limit_atoms

    def pick(bound):
        return rng.choice([BOT, TOP] + list(range(min(bound, 4))))

    lim = {n: pick(atoms) for n in sp.limit_names}
    exc = {}
    for pos in rng.sample(sp.positions, min(max_exc, len(sp.positions))):
        if rng.random() < 0.7:
            exc[pos.key] = pick(pos.q + 1)
    return KL.section(exc, lim)


def to_split(K: SectionLattice, L: SectionLattice, x: Section) -> Section:
    """The same family of values, read as an element of L."""
    exc = dict(x.exc)
    v = x.limit("inf")
    return L.section(exc, {n: v for n in L.space.limit_names})


def canonical_embedding_eps(U: IndexSpace, V: IndexSpace):
    """X -> e^{-1}[X] from clopens of U to clopens of V."""
    if [(c.p, c.levels, c.stalk_q) for c in U.classes] != [(c.p, c.levels, c.stalk_q) for c in V.classes]:
        raise ValueError("spaces have different classes")
    if U.limit_names != ["inf"]:
        raise ValueError("source space must have a single limit point")

    def eps(X: Clopen) -> Clopen:
        lim = frozenset(V.limit_names) if "inf" in X.limits else frozenset()
        return Clopen(V, X.members, X.tails, lim)

    return eps


def _region_counts(values):
    """Atom counts of the regions cut out by a tuple of clopens (INF for tails)."""
    counts = {}
    for c, n in clopen_color_model(values):
        pat = tuple(c >> j & 1 for j in range(len(values)))
        counts[pat] = counts.get(pat, 0) + n
    return counts


def elementarity_report(U: IndexSpace, V: IndexSpace, rank, samples=20, seed=0, nparams=2):
    """Compare capped region counts of random clopen tuples X and eps(X)."""
    from .ba import ba_equiv_rank

    eps = canonical_embedding_eps(U, V)
    rng = random.Random(seed)
    rows = []
    keys = [p.key for p in U.positions]
    for _ in range(samples):
        xs = []
        for _ in range(nparams):
            cof = rng.random() < 0.5
            mem = frozenset(k for k in keys if rng.random() < 0.5)
            xs.append(Clopen(U, mem, frozenset(c.cid for c in U.classes) if cof else frozenset(),
                             frozenset({"inf"}) if cof else frozenset()))
        cu, cv = _region_counts(xs), _region_counts([eps(x) for x in xs])
        pats = set(cu) | set(cv)
        ok = all(ba_equiv_rank(cu.get(p, 0), cv.get(p, 0), rank) for p in pats)
        rows.append({"params": [x.to_json() for x in xs], "ok": ok})
    return rows


def elementary_submodel_report(K: SectionLattice, L: SectionLattice, corpus, rank=2, samples=10, seed=0):
    """Per formula: K |= f versus L |= f through Phi, and the eps check on parts."""
    eps = canonical_embedding_eps(K.space, L.space)
    rng = random.Random(seed)
    rows = []
    for f in corpus:
        r = quantifier_rank(f)
        if r > rank:
            raise BudgetExceeded(f"formula of rank {r} exceeds the rank budget {rank}")
        ds = determining_sequence(f)
        for _ in range(samples):
            env = {v: random_section(K, rng) for v in ds.free}
            env_l = {v: to_split(K, L, x) for v, x in env.items()}
            vk = [boolean_value(K, part, env) for part in ds.parts]
            vl = [boolean_value(L, part, env_l) for part in ds.parts]
            eps_ok = all(eps(a) == b for a, b in zip(vk, vl))
            clopen_ok = all(X.clopen for X in vk + vl)
            k_sat = phi_eval(ds, clopen_color_model(vk))
            l_sat = phi_eval(ds, clopen_color_model(vl))
            rows.append({
                "formula": f, "params": {v: K.section_to_json(x) for v, x in env.items()},
                "K": k_sat, "L": l_sat, "agree": k_sat == l_sat, "eps": eps_ok, "clopen": clopen_ok,
            })
    return rows
