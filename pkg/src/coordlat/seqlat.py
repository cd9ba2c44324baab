"""Almost-constant section lattices over countable index spaces.

An index space is a disjoint union of *classes* of positions.  A tower
class for the prime p has positions p^(k!) (k = 1, 2, ...) with stalk
M_{1+q} at position q; a constant class has positions 0, 1, 2, ... all
carrying the same stalk M_{1+stalk_q}.  Only the first ``levels``
positions of a class are stored; every later position takes the value of
the class's limit point.  Limit points are shared by all classes
("shared", the space U) or one per class ("split", the space V).

A section is stored as its exceptions at explicit positions plus one value
per limit point.  Values are M-lattice elements: ``BOT``, ``TOP`` or an
atom index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

from .gfield import field_make, prime_power
from .lattice import BOT, TOP, MLattice, m_lattice, m_name, m_parse, product_lattice

__all__ = [
    "StalkClass", "IndexSpace", "Section", "SectionLattice", "CentralPattern", "Obstruction",
    "make_K", "make_L", "make_dirunion_L", "sec_join", "sec_meet", "sec_complement",
    "center_of_sections", "required_central_pattern", "coordinatization_obstruction",
    "projection", "neutral_kernel", "truncate", "section_lattice_from_json",
]


@dataclass(frozen=True)
class StalkClass:
    cid: int
    p: int
    levels: int
    stalk_q: int | None = None  # None: tower class with q = p^(k!)

    def q_at(self, k):
        """Stalk parameter q (stalk M_{1+q}) at the k-th position, k >= 1."""
        return self.stalk_q if self.stalk_q is not None else self.p ** math.factorial(k)

    def key(self, k):
        return f"{self.cid}:{k - 1}" if self.stalk_q is not None else str(self.q_at(k))

    @property
    def tail_q(self):
        """q at the first position beyond the stored ones (the least tail stalk)."""
        return self.q_at(self.levels + 1)


@dataclass(frozen=True)
class Position:
    key: str
    cid: int
    k: int
    q: int


class IndexSpace:
    def __init__(self, classes, limits="shared"):
        self.classes = tuple(classes)
        if limits not in ("shared", "split"):
            raise ValueError("limits must be 'shared' or 'split'")
        self.limits = limits
        self.positions = [Position(c.key(k), c.cid, k, c.q_at(k))
                          for c in self.classes for k in range(1, c.levels + 1)]
        keys = [pos.key for pos in self.positions]
        if len(set(keys)) != len(keys):
            raise ValueError("two classes produce the same position label")
        self.position = {pos.key: pos for pos in self.positions}
        if limits == "shared":
            self.limit_of = {c.cid: "inf" for c in self.classes}
        else:
            ps = [c.p for c in self.classes]
            self.limit_of = {c.cid: f"inf{c.p}" if ps.count(c.p) == 1 else f"inf_{c.cid}" for c in self.classes}
        self.limit_names = list(dict.fromkeys(self.limit_of.values()))
        self.cls = {c.cid: c for c in self.classes}

    def classes_at(self, limit):
        return [c for c in self.classes if self.limit_of[c.cid] == limit]

    def collapse(self, limit):
        """The canonical map V -> U on limit points (identity on positions)."""
        return "inf"

    def to_json(self):
        cl = []
        for c in self.classes:
            d = {"p": c.p, "levels": c.levels}
            if c.stalk_q is not None:
                d["stalk_q"] = c.stalk_q
            cl.append(d)
        return {"classes": cl, "limits": self.limits}

    @classmethod
    def from_json(cls, d):
        classes = [StalkClass(i, int(c["p"]), int(c["levels"]), c.get("stalk_q")) for i, c in enumerate(d["classes"])]
        return cls(classes, d.get("limits", "shared"))


@dataclass(frozen=True)
class Section:
    exc: tuple  # sorted (position key, value) pairs, values differing from the limit
    lim: tuple  # (limit name, value) pairs in space order

    def limit(self, name):
        return dict(self.lim)[name]


class SectionLattice:
    """Almost-constant sections of an IndexSpace, optionally with the
    limit values restricted to the first ``limit_atoms`` atoms."""

    def __init__(self, space: IndexSpace, limit_atoms: int | None = None, name=""):
        self.space, self.limit_atoms, self.name = space, limit_atoms, name
        self.limit_stalk = MLattice(limit_atoms) if limit_atoms else MLattice()

    def __repr__(self):
        return f"<SectionLattice {self.name or self.space.to_json()}>"

    # -- construction --

    def legal_at(self, pos: Position, v):
        return v in (BOT, TOP) or 0 <= v <= pos.q

    def legal_limit(self, name, v):
        if v in (BOT, TOP):
            return True
        if self.limit_atoms is not None and v >= self.limit_atoms:
            return False
        return all(v <= c.tail_q for c in self.space.classes_at(name))

    def section(self, exceptions=None, limits=None):
        """Build a section; ``limits`` maps limit names to values (default BOT)."""
        sp = self.space
        lim = {n: BOT for n in sp.limit_names}
        for n, v in (limits or {}).items():
            if n not in lim:
                raise ValueError(f"unknown limit point {n!r}")
            lim[n] = v
        for n, v in lim.items():
            if not self.legal_limit(n, v):
                raise ValueError(f"limit value {m_name(v)} illegal at {n}")
        exc = {}
        for key, v in (exceptions or {}).items():
            key = str(key)
            pos = sp.position.get(key)
            if pos is None:
                raise ValueError(f"{key!r} is not an explicit position")
            if not self.legal_at(pos, v):
                raise ValueError(f"value {m_name(v)} illegal in M_{1 + pos.q} at {key}")
            if v != lim[sp.limit_of[pos.cid]]:
                exc[key] = v
        return Section(tuple(sorted(exc.items())), tuple((n, lim[n]) for n in sp.limit_names))

    def constant(self, v):
        return self.section(limits={n: v for n in self.space.limit_names})

    @property
    def bot(self):
        return self.constant(BOT)

    @property
    def top(self):
        return self.constant(TOP)

    def value(self, x: Section, key):
        """x at an explicit position or at a limit point."""
        if key in self.space.position:
            d = dict(x.exc)
            if key in d:
                return d[key]
            return x.limit(self.space.limit_of[self.space.position[key].cid])
        return x.limit(key)

    def tail(self, x: Section, cid):
        """Eventual value of x on a class."""
        return x.limit(self.space.limit_of[cid])

    def values(self, x):
        """All stored coordinates: explicit positions, then limit points."""
        return [self.value(x, p.key) for p in self.space.positions] + [v for _, v in x.lim]

    def _apply(self, op, xs):
        sp = self.space
        lim = {n: op(*[x.limit(n) for x in xs]) for n in sp.limit_names}
        exc = {p.key: op(*[self.value(x, p.key) for x in xs]) for p in sp.positions}
        return self.section(exc, lim)

    def join(self, x, y):
        return self._apply(MLattice.join, (x, y))

    def meet(self, x, y):
        return self._apply(MLattice.meet, (x, y))

    def le(self, x, y):
        return all(MLattice.le(a, b) for a, b in zip(self.values(x), self.values(y)))

    def complement(self, x):
        sp = self.space
        lim = {n: MLattice.complement(v, self.limit_atoms) for n, v in x.lim}
        exc = {p.key: MLattice.complement(self.value(x, p.key)) for p in sp.positions}
        return self.section(exc, lim)

    # -- serialization --

    def section_to_json(self, x):
        return {"exc": {k: m_name(v) for k, v in x.exc}, "lim": {n: m_name(v) for n, v in x.lim}}

    def section_from_json(self, d):
        return self.section({k: m_parse(v) for k, v in d.get("exc", {}).items()},
                            {n: m_parse(v) for n, v in d.get("lim", {}).items()})

    def to_json(self):
        out = {"space": self.space.to_json()}
        if self.limit_atoms:
            out["constraint"] = {"limit_atoms": self.limit_atoms}
        return out


def section_lattice_from_json(d) -> SectionLattice:
    space = IndexSpace.from_json(d["space"])
    return SectionLattice(space, (d.get("constraint") or {}).get("limit_atoms"))


def make_K(levels=3):
    sp = IndexSpace([StalkClass(0, 2, levels), StalkClass(1, 3, levels)], "shared")
    return SectionLattice(sp, name="K")


def make_L(levels=3):
    sp = IndexSpace([StalkClass(0, 2, levels), StalkClass(1, 3, levels)], "split")
    return SectionLattice(sp, name="L")


def make_dirunion_L(levels=3):
    """Almost-constant sequences in M_4 whose limit lies in M_3."""
    sp = IndexSpace([StalkClass(0, 3, levels, stalk_q=3)], "shared")
    return SectionLattice(sp, limit_atoms=3, name="dirunion")


def sec_join(KL, x, y):
    return KL.join(x, y)


def sec_meet(KL, x, y):
    return KL.meet(x, y)


def sec_complement(KL, x):
    return KL.complement(x)


# -- center and the c_p obstruction ------------------------------------------------

@dataclass(frozen=True)
class CentralPattern:
    """0/1 requirements: per explicit position, per class tail, per limit point.

    A limit entry of None means the limit stalk imposes nothing by itself.
    """

    positions: dict
    tails: dict
    limits: dict


class SectionCenter:
    """cen KL: the sections with all values in {0, 1}."""

    def __init__(self, KL: SectionLattice):
        self.KL = KL

    def contains(self, x: Section):
        return all(v in (BOT, TOP) for v in self.KL.values(x))

    def realize(self, pattern: CentralPattern):
        """The central section with the given pattern, or (None, conflict)."""
        sp = self.KL.space
        lim = {}
        for name in sp.limit_names:
            wanted = {("tail", c.cid): pattern.tails[c.cid] for c in sp.classes_at(name)}
            if pattern.limits.get(name) is not None:
                wanted[("limit", name)] = pattern.limits[name]
            vals = set(wanted.values())
            if len(vals) > 1:
                return None, {"limit": name, "required": {f"{k[0]}:{k[1]}": v for k, v in wanted.items()}}
            lim[name] = TOP if vals.pop() else BOT
        exc = {k: TOP if v else BOT for k, v in pattern.positions.items()}
        return self.KL.section(exc, lim), None

    def indicator(self, class_values: dict):
        """The section equal to class_values[cid] on the whole class, if it exists."""
        sp = self.KL.space
        pattern = CentralPattern({p.key: class_values[p.cid] for p in sp.positions},
                                 dict(class_values), {n: None for n in sp.limit_names})
        return self.realize(pattern)[0]

    def join(self, x, y):
        return self.KL.join(x, y)

    def meet(self, x, y):
        return self.KL.meet(x, y)

    def complement(self, x):
        return self.KL.complement(x)


def center_of_sections(KL) -> SectionCenter:
    return SectionCenter(KL)


@lru_cache(maxsize=None)
def _c_p_is_one(p: int, q: int) -> int:
    """1 if c_p = 1 in Mat_2(F_q), 0 if c_p = 0."""
    from .ring import MatrixRing, c_p

    pp = prime_power(q)
    if pp is None:
        raise ValueError(f"{q} is not a prime power")
    R = MatrixRing(2, field_make(*pp))
    c = c_p(R, p).payload
    if c == R.one():
        return 1
    if c == R.zero():
        return 0
    raise AssertionError("c_p in a simple ring must be 0 or 1")


def _char_field_q(c: StalkClass, k):
    # c_p in Mat_2(F_q) depends only on the characteristic; very large tower
    # stalks are evaluated in a field of the same characteristic
    q = c.q_at(k)
    return q if q <= 4096 else c.p


def required_central_pattern(KL: SectionLattice, p: int) -> CentralPattern:
    """Values forced on the lattice image of c_p by a coordinatizing ring."""
    sp = KL.space
    positions = {pos.key: _c_p_is_one(p, _char_field_q(sp.cls[pos.cid], pos.k)) for pos in sp.positions}
    tails = {c.cid: _c_p_is_one(p, _char_field_q(c, c.levels + 1)) for c in sp.classes}
    limits = {}
    for name in sp.limit_names:
        if KL.limit_atoms is not None:
            limits[name] = _c_p_is_one(p, KL.limit_atoms - 1)
        else:
            limits[name] = None
    return CentralPattern(positions, tails, limits)


@dataclass(frozen=True)
class Obstruction:
    obstructed: bool
    prime: int
    pattern: CentralPattern
    witness: object = None

    @property
    def status(self):
        return "obstructed" if self.obstructed else "unobstructed"


def coordinatization_obstruction(KL: SectionLattice, p: int) -> Obstruction:
    pattern = required_central_pattern(KL, p)
    section, conflict = center_of_sections(KL).realize(pattern)
    if section is None:
        return Obstruction(True, p, pattern, conflict)
    return Obstruction(False, p, pattern, KL.section_to_json(section))


# -- projections and truncations ------------------------------------------------------

def projection(KL: SectionLattice, index):
    """(pi, stalk): pi(x) is x at ``index`` (a position key or limit name)."""
    sp = KL.space
    if index in sp.position:
        stalk = MLattice(1 + sp.position[index].q)
    elif index in sp.limit_names:
        stalk = KL.limit_stalk
    else:
        raise ValueError(f"unknown index {index!r}")
    return (lambda x: KL.value(x, index)), stalk


@dataclass(frozen=True)
class KernelIdeal:
    """{x : x(index) = 0}, the kernel of a projection."""

    KL: SectionLattice = field(repr=False)
    index: str

    def contains(self, x):
        return self.KL.value(x, self.index) == BOT


def neutral_kernel(KL, index):
    projection(KL, index)
    return KernelIdeal(KL, index)


def _truncation_stalks(KL, m):
    sp = KL.space
    pos = [p for p in sp.positions if p.k <= m]
    lim_atoms = KL.limit_atoms if KL.limit_atoms else 3
    return pos, lim_atoms


def truncate(KL: SectionLattice, m: int):
    """Finite sublattice of sections that are constant beyond the first m
    positions of every class, with limit atoms below min(limit_atoms, 3).

    Returns ``(F, sections)`` with ``sections[i]`` the section of element i;
    ``i -> sections[i]`` is a lattice embedding.
    """
    sp = KL.space
    if m < 0 or any(m > c.levels for c in sp.classes):
        raise ValueError("truncation level exceeds the stored levels")
    pos, lim_atoms = _truncation_stalks(KL, m)
    factors = [m_lattice(1 + p.q) for p in pos] + [m_lattice(lim_atoms) for _ in sp.limit_names]
    F = product_lattice(*factors) if len(factors) > 1 else factors[0]
    comps = F.components if len(factors) > 1 else [(i,) for i in range(len(F))]

    def decode(i, n):
        return BOT if i == 0 else TOP if i == n + 1 else i - 1

    sections = []
    for t in comps:
        vals = [decode(i, len(L) - 2) for i, L in zip(t, factors)]
        exc = {p.key: v for p, v in zip(pos, vals)}
        lim = dict(zip(sp.limit_names, vals[len(pos):]))
        sections.append(KL.section(exc, lim))
    return F, sections
