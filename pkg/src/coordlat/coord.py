"""Coordinatization bridge: explicit isomorphisms between ideal lattices of
regular rings and the lattices they coordinatize."""

from __future__ import annotations

import math
from itertools import combinations, product
from dataclasses import dataclass, field

import numpy as np

from .gfield import BudgetExceeded, FieldDesc, _embed_generator, field_make, prime_power, tower_make
from .lattice import (BOT, TOP, FiniteLattice, is_lattice_hom, lattice_isomorphic, m_lattice,
                      product_lattice, submodule_lattice)
from .ring import (MatrixRing, ProductRing, RingHom, almost_constant_ring, c_p, entrywise_hom,
                   l_functor, l_of_r)
from .seqlat import IndexSpace, SectionLattice, StalkClass, coordinatization_obstruction, make_dirunion_L

__all__ = [
    "Eta", "eta_q", "eta_field", "CoordWitness", "Verdict", "coordinatizable_mn",
    "Epsilon", "epsilon_p", "semisimple_pipeline", "directed_union_demo",
    "field_embedding", "image_complement_count", "entrywise_embedding",
]


# -- eta_q ----------------------------------------------------------------------------

class Eta:
    """L(Mat_2(F)) -> M_{1+q}, given an enumeration xi_1..xi_q of F.

    Atom 0 is the ideal of diag(0, 1); atom k >= 1 is the ideal of the
    matrix with rows (1, 0), (xi_k, 0), i.e. the column line through (1, xi_k).
    """

    def __init__(self, F: FieldDesc, xi):
        xi = list(xi)
        if sorted(xi) != list(F.elements()):
            raise ValueError("xi must enumerate the field")
        self.F, self.xi = F, xi
        self.q = F.order
        self.ring = MatrixRing(2, F)
        self.index = {x: k for k, x in enumerate(xi, 1)}
        self.target = m_lattice(1 + self.q)

    def alpha(self, k):
        if k == 0:
            return ((0, 0), (0, 1))
        return ((1, 0), (self.xi[k - 1], 0))

    def value_of_key(self, key):
        if len(key) == 0:
            return BOT
        if len(key) == 2:
            return TOP
        (v,) = key
        return 0 if v[0] == 0 else self.index[v[1]]

    def __call__(self, e):
        """M-value (BOT, TOP or an atom number) of the ideal eS."""
        return self.value_of_key(self.ring.ideal_key(e))

    def table(self):
        """Lattice indices l_of_r(ring) -> target (index 0 bottom, atom k at k+1)."""
        L, ideals = l_of_r(self.ring)
        out = []
        for I in ideals:
            v = self(I.gen)
            out.append(0 if v == BOT else len(self.target) - 1 if v == TOP else v + 1)
        return out

    def check(self):
        """(ok, problems): bijective, order-preserving both ways, atoms from alpha_k."""
        L, _ = l_of_r(self.ring)
        f = self.table()
        problems = []
        if sorted(f) != list(range(len(self.target))):
            problems.append("not a bijection onto M_{1+q}")
        elif not np.array_equal(L.leq, self.target.leq[np.ix_(f, f)]):
            problems.append("order not preserved and reflected")
        for k in range(self.q + 1):
            if self(self.alpha(k)) != k:
                problems.append(f"alpha_{k} does not map to atom {k}")
        return not problems, problems


def eta_field(F: FieldDesc, xi=None) -> Eta:
    """Eta for any field; xi defaults to code order (so xi_1 = 0)."""
    return Eta(F, list(F.elements()) if xi is None else xi)


def _tower_level(q):
    pm = prime_power(q)
    if pm is None:
        raise ValueError(f"{q} is not a prime power")
    p, n = pm
    m = 1
    while math.factorial(m) < n:
        m += 1
    if math.factorial(m) != n:
        raise ValueError(f"{q} is not of the form {p}^(k!), so it is not a tower level")
    return p, m


def eta_q(q: int) -> Eta:
    """Eta using the tower enumeration, so atoms agree across levels."""
    p, m = _tower_level(q)
    tower = tower_make(p, m)
    return Eta(tower.level(m), tower.xi_at_level(m))


# -- witnesses and verdicts ---------------------------------------------------------

@dataclass
class CoordWitness:
    ring: object
    iso: list  # l_of_r(ring) index -> target index
    target: FiniteLattice = field(repr=False)

    def replay(self):
        """Recompute L(ring) and check iso is an order isomorphism onto target."""
        L, _ = l_of_r(self.ring)
        f = list(self.iso)
        if sorted(f) != list(range(len(self.target))) or len(f) != len(L):
            return False
        return bool(np.array_equal(L.leq, self.target.leq[np.ix_(f, f)]))

    def to_json(self):
        return {"ring": self.ring.to_json(), "iso": list(map(int, self.iso)),
                "target": self.target.to_json()}


@dataclass
class Verdict:
    status: str  # coordinatizable | not_coordinatizable | unknown
    reason: str | None = None
    witness: CoordWitness | None = None
    checks: list = field(default_factory=list)

    def to_json(self):
        return {"status": self.status, "reason": self.reason,
                "witness": self.witness.to_json() if self.witness else None, "checks": self.checks}


def coordinatizable_mn(n: int) -> Verdict:
    """Is M_n isomorphic to L(R) for a regular ring R?

    Exactly when n - 1 is a prime power q, with R = Mat_2(F_q).  The
    negative direction rests on the classification of length-two
    coordinatizable lattices (finite division rings being fields), so no
    search over rings is done.
    """
    if n < 3:
        raise ValueError("M_n is only considered for n >= 3")
    q = n - 1
    pm = prime_power(q)
    if pm is None:
        return Verdict("not_coordinatizable", f"{q} is not a prime power",
                       checks=[{"name": "prime_power", "ok": False, "q": q}])
    try:
        F = field_make(*pm)
    except ValueError as err:
        return Verdict("unknown", f"F_{q} is outside the field budget ({err})")
    try:
        eta = eta_q(q)
    except ValueError:
        eta = eta_field(F)
    w = CoordWitness(eta.ring, eta.table(), eta.target)
    ok = w.replay()
    checks = [{"name": "prime_power", "ok": True, "q": q}, {"name": "witness_replay", "ok": ok}]
    if not ok:
        return Verdict("unknown", "witness failed to replay", checks=checks)
    return Verdict("coordinatizable", f"Mat_2(F_{q})", w, checks)


# -- epsilon_p ------------------------------------------------------------------------

class Epsilon:
    """L(R_p) -> L_p: an almost-constant idempotent goes to its stalkwise eta values."""

    def __init__(self, p: int, levels: int = 3):
        self.R = almost_constant_ring(p, levels=levels)
        tower = self.R.tower
        self.etas = [Eta(tower.level(m), tower.xi_at_level(m)) for m in range(1, levels + 1)]
        self.L = SectionLattice(IndexSpace([StalkClass(0, p, levels)], "shared"), name=f"L_{p}")
        self.keys = [str(q) for q in self.R.positions]

    def __call__(self, e):
        exc = {k: eta(v) for k, eta, v in zip(self.keys, self.etas, e.vals)}
        return self.L.section(exc, {"inf": self.etas[-1](e.lim)})

    def elements(self, max_exc=2):
        """Idempotent generators (one per ideal) with at most max_exc exceptions.

        Values are canonical projections, so equal ideals give equal matrices.
        """
        R, etas = self.R, self.etas
        stalk_ideals = [s.idempotent_ideals() for s in R.stalks]
        top = len(R.stalks) - 1
        for lim in stalk_ideals[top]:
            lowered = []
            for k in range(len(R.stalks)):
                try:
                    low = R._lower(lim, k)
                    lowered.append(low if R._lift(low, k) == lim else None)
                except ValueError:
                    lowered.append(None)
            forced = [k for k, low in enumerate(lowered) if low is None]
            free = [k for k in range(len(R.stalks)) if k not in forced]
            for extra in range(max_exc - len(forced) + 1):
                for chosen in combinations(free, extra):
                    ks = sorted(forced + list(chosen))
                    options = [[v for v in stalk_ideals[k]
                                if lowered[k] is None or etas[k](v) != etas[k](lowered[k])] for k in ks]
                    for vals in product(*options):
                        yield R.make(lim, {R.positions[k]: v for k, v in zip(ks, vals)})

    def sections(self, max_exc=2):
        """Sections of L_p with limit inside the top level and at most max_exc exceptions."""
        L, q_top = self.L, self.R.positions[-1]
        atoms = [BOT, TOP] + list(range(q_top + 1))
        positions = L.space.positions
        for lim in atoms:
            forced = [pos for pos in positions if not L.legal_at(pos, lim)]
            free = [pos for pos in positions if pos not in forced]
            for extra in range(max_exc - len(forced) + 1):
                for chosen in combinations(free, extra):
                    ps = sorted(forced + list(chosen), key=positions.index)
                    options = [[v for v in [BOT, TOP] + list(range(pos.q + 1)) if v != lim] for pos in ps]
                    for vals in product(*options):
                        yield L.section({pos.key: v for pos, v in zip(ps, vals)}, {"inf": lim})

    def verify(self, max_exc=2):
        """Injective, onto the sections with the same support, order-preserving both ways."""
        R, L = self.R, self.L
        elems = list(self.elements(max_exc))
        images = [self(e) for e in elems]
        checks = []
        checks.append({"name": "injective", "ok": len(set(images)) == len(images), "count": len(elems)})
        target = set(self.sections(max_exc))
        checks.append({"name": "surjective", "ok": set(images) == target, "sections": len(target)})
        checks.append({"name": "unit_to_top", "ok": self(R.one()) == L.top})
        checks.append({"name": "zero_to_bottom", "ok": self(R.zero()) == L.bot})
        # order: multiplication in R_p is coordinatewise, so eR <= fR iff fe = e at
        # every stored coordinate; stalk orders come from actual products
        coords = list(R.stalks) + [R.top]
        tables, idx = [], []
        for ring in coords:
            ideals = ring.idempotent_ideals()
            where = {ring.ideal_key(e): i for i, e in enumerate(ideals)}
            tables.append(np.array([[ring.mul(f, e) == e for f in ideals] for e in ideals]))
            idx.append(where)
        ring_vec = np.array([[idx[k][coords[k].ideal_key(v)] for k, v in enumerate(list(e.vals) + [e.lim])]
                             for e in elems])
        sec_vals = np.array([L.values(x) for x in images])
        n = len(elems)
        ok = True
        for start in range(0, n, 512):
            block = slice(start, min(n, start + 512))
            ring_le = np.ones((block.stop - block.start, n), dtype=bool)
            sec_le = np.ones_like(ring_le)
            for k, t in enumerate(tables):
                ring_le &= t[np.ix_(ring_vec[block, k], ring_vec[:, k])]
                a, b = sec_vals[block, k][:, None], sec_vals[:, k][None, :]
                sec_le &= (a == BOT) | (b == TOP) | (a == b)
            if not np.array_equal(ring_le, sec_le):
                ok = False
                break
        checks.append({"name": "order_iso", "ok": ok, "pairs": n * n})
        return all(c["ok"] for c in checks), checks


def epsilon_p(p: int, levels: int = 3) -> Epsilon:
    return Epsilon(p, levels)



# -- semisimple modules ---------------------------------------------------------------

def semisimple_pipeline(p: int, n: int, d: int, budget: int = 1 << 16):
    """Sub E versus L(End E) for E = GF(p^n)^d, built from function tables.

    Endomorphisms are stored as their value tables on all of E, so the ring
    End E here is independent of the matrix code.
    """
    F = field_make(p, n)
    q = F.order
    if q ** (d * d) > budget:
        raise BudgetExceeded(f"End E has {q ** (d * d)} elements, over the budget {budget}")
    vecs = list(product(range(q), repeat=d))
    vidx = {v: i for i, v in enumerate(vecs)}
    zero_v = vidx[(0,) * d]

    def add(u, v):
        return tuple(F.add(a, b) for a, b in zip(u, v))

    def scale(c, u):
        return tuple(F.mul(c, a) for a in u)

    def from_images(imgs):
        out = []
        for v in vecs:
            acc = (0,) * d
            for c, img in zip(v, imgs):
                acc = add(acc, scale(c, vecs[img]))
            out.append(vidx[acc])
        return tuple(out)

    def compose(f, g):
        return tuple(f[x] for x in g)

    def plus(f, g):
        return tuple(vidx[add(vecs[a], vecs[b])] for a, b in zip(f, g))

    End = [from_images(imgs) for imgs in product(range(len(vecs)), repeat=d)]
    checks = []
    regular = all(any(compose(compose(f, g), f) == f for g in End) for f in End)
    checks.append({"name": "regular", "ok": regular})

    principal = {f: frozenset(compose(f, g) for g in End) for f in End}
    ideals = sorted(set(principal.values()), key=lambda s: (len(s), sorted(s)))
    ideal_pos = {I: i for i, I in enumerate(ideals)}
    L_S = FiniteLattice(np.array([[a <= b for b in ideals] for a in ideals]), [f"I{i}" for i in range(len(ideals))])

    sub = submodule_lattice(p, n, d)
    spaces = []
    for basis in sub.subspaces:
        pts = {zero_v}
        for cs in product(range(q), repeat=len(basis)):
            acc = (0,) * d
            for c, b in zip(cs, basis):
                acc = add(acc, scale(c, b))
            pts.add(vidx[acc])
        spaces.append(frozenset(pts))
    I_of = [frozenset(f for f in End if set(f) <= X) for X in spaces]
    principal_ok = all(I in ideal_pos for I in I_of)
    checks.append({"name": "I(X)_principal", "ok": principal_ok})
    iso = [ideal_pos.get(I, -1) for I in I_of]
    bij = sorted(iso) == list(range(len(ideals)))
    order_ok = bij and bool(np.array_equal(sub.leq, L_S.leq[np.ix_(iso, iso)]))
    checks.append({"name": "I_lattice_iso", "ok": order_ok, "sub_size": len(sub), "l_size": len(ideals)})
    membership = all((f in I) == (set(f) <= X) for X, I in zip(spaces, I_of) for f in End)
    checks.append({"name": "membership_replay", "ok": membership})
    inverse = all(frozenset(f) in set(spaces) and I_of[spaces.index(frozenset(f))] == principal[f] for f in End)
    checks.append({"name": "inverse_im", "ok": inverse, "endomorphisms": len(End)})
    checks.append({"name": "matches_matrix_ring",
                   "ok": lattice_isomorphic(sub, l_of_r(MatrixRing(d, F))[0]) is not None})

    # E = E_1^d with E_1 = F: f -> (pi_i f iota_j), entries read off at 1
    basis = [vidx[tuple(int(i == j) for i in range(d))] for j in range(d)]
    M = MatrixRing(d, F)

    def as_matrix(f):
        return tuple(tuple(vecs[f[basis[j]]][i] for j in range(d)) for i in range(d))

    mats = {f: as_matrix(f) for f in End}
    pairs = list(product(End, repeat=2))
    decomp = len(set(mats.values())) == M.size and all(
        mats[compose(f, g)] == M.mul(mats[f], mats[g]) and mats[plus(f, g)] == M.add(mats[f], mats[g])
        for f, g in pairs)
    checks.append({"name": "matrix_decomposition", "ok": decomp})

    # Schur: End E_1 for the simple module E_1 = F
    end1 = [tuple(F.mul(c, x) for x in F.elements()) for c in F.elements()]
    comm = all(tuple(f[x] for x in g) == tuple(g[x] for x in f) for f in end1 for g in end1)
    ident = tuple(F.elements())
    invertible = all(any(tuple(f[x] for x in g) == ident for g in end1) for f in end1 if any(f))
    checks.append({"name": "schur_field", "ok": comm and invertible, "order": len(end1)})
    ok = all(c["ok"] for c in checks)
    return {"status": "ok" if ok else "failed", "p": p, "deg": n, "dim": d,
            "sizes": {"End": len(End), "Sub": len(sub), "L": len(ideals)}, "checks": checks}


# -- directed unions ---------------------------------------------------------------

def _union_stage(n):
    lat = product_lattice(*([m_lattice(4)] * n + [m_lattice(3)]))
    ring = ProductRing([MatrixRing(2, field_make(3, 1))] * n + [MatrixRing(2, field_make(2, 1))])
    return lat, ring


def _union_embedding(lat_n, lat_next):
    """(x_1..x_n, y) -> (x_1..x_n, iota(y), y) with iota: M_3 -> M_4 fixing the first atoms."""
    iota = [0, 1, 2, 3, 5]
    where = {t: i for i, t in enumerate(lat_next.components)}
    return [where[t[:-1] + (iota[t[-1]], t[-1])] for t in lat_n.components]


def directed_union_demo(levels: int = 2):
    """Each L_n = M_4^n x M_3 is coordinatizable, but their union is not.

    c_2 is 0 on the characteristic-3 factors and 1 on the characteristic-2
    factor; in the union the M_3 factor survives only as the limit, where
    the required central pattern cannot be realized.
    """
    if levels < 1:
        raise ValueError("levels must be at least 1")
    checks, prev = [], None
    for n in range(1, levels + 1):
        lat, ring = _union_stage(n)
        iso = lattice_isomorphic(l_of_r(ring)[0], lat)
        c2 = c_p(ring, 2).payload
        pattern = [int(c == f.one()) if c in (f.one(), f.zero()) else None for c, f in zip(c2, ring.factors)]
        checks.append({"name": f"coordinatize_L{n}", "ok": iso is not None, "size": len(lat),
                       "ring": repr(ring), "c2": pattern})
        if prev is not None:
            f = _union_embedding(prev, lat)
            ok = len(set(f)) == len(f) and is_lattice_hom(prev, lat, f, bounds=True)
            checks.append({"name": f"f_{n - 1}_embedding", "ok": ok})
        prev = lat
    ob = coordinatization_obstruction(make_dirunion_L(levels), 2)
    checks.append({"name": "union_obstructed", "ok": ob.obstructed, "witness": ob.witness})
    ok = all(c["ok"] for c in checks)
    return {"status": "ok" if ok else "failed", "union": ob.status, "levels": levels, "checks": checks}


# -- image complements -------------------------------------------------------------

def field_embedding(E: FieldDesc, F: FieldDesc) -> dict:
    """A field embedding E -> F as a dict on codes (generator to the least root)."""
    g = _embed_generator(E, F)
    out = {}
    for a in E.elements():
        acc = 0
        for c in reversed(E.coeffs(a)):
            acc = F.add(F.mul(acc, g), F.from_int(c))
        out[a] = acc
    return out


def image_complement_count(phi: RingHom) -> dict:
    """|L(Mat_2(F)) minus the image of L(phi)|, next to the lower bound |E|."""
    LS, _ = l_of_r(phi.target)
    image = set(l_functor(phi))
    count = len(LS) - len(image)
    E = phi.source.F.order
    onto = count == 0
    return {"count": count, "bound": E, "onto": onto, "ok": onto or count >= E}


def entrywise_embedding(p: int, n: int, m: int) -> RingHom:
    """Mat_2(GF(p^n)) -> Mat_2(GF(p^m)) applying a field embedding entrywise."""
    E, F = field_make(p, n), field_make(p, m)
    sigma = field_embedding(E, F)
    return entrywise_hom(MatrixRing(2, E), MatrixRing(2, F), sigma.__getitem__)
