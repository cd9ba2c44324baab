"""Determining sequences: reducing satisfaction in a Boolean product to a
statement about the Boolean values of finitely many formulas.

``Phi`` is a tree of nodes over *slots* (indices into ``parts``):

* ``BTop(s)``: the value in slot s is the top element;
* ``BAnd``/``BOr``: conjunction/disjunction;
* ``BNot(inner)``: not inner(complements of the slots); inner reads the
  same slot positions, whose parts are the negations of ours;
* ``BPart(inner, types)``: there are pairwise disjoint z_S below the slot
  of each type S (a nonempty set of inner slots) such that inner holds of
  y_i = join of the z_S with i in S.  Inner slots are local to ``inner``.

Every node is isotone, so Phi is.  Phi is evaluated on *color models*: a
tuple of slot values in a Boolean algebra with atoms is described by the
multiset of atom colors (the set of slots containing the atom).  Counts
above ``cap(node)`` do not change the truth value and are clipped.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product
from math import comb

from ..gfield import BudgetExceeded
from .syntax import (And, Const, Eq, Exists, Forall, Implies, Join, Meet, Not, Or, Var,
                     free_vars, le)

__all__ = [
    "BTop", "BAnd", "BOr", "BNot", "BPart", "DeterminingSequence", "determining_sequence",
    "phi_eval", "phi_cap", "make_model", "isotonicity_check", "render_phi", "PART_BUDGET",
]

PART_BUDGET = 16


@dataclass(frozen=True)
class BTop:
    slot: int


@dataclass(frozen=True)
class BAnd:
    left: object
    right: object


@dataclass(frozen=True)
class BOr:
    left: object
    right: object


@dataclass(frozen=True)
class BNot:
    inner: object


@dataclass(frozen=True)
class BPart:
    inner: object
    width: int  # number of inner slots
    types: tuple  # (mask over inner slots, outer slot)


@dataclass(frozen=True)
class DeterminingSequence:
    phi: object
    parts: tuple
    free: tuple = field(default=())

    @property
    def width(self):
        return len(self.parts)


def _shift(node, k):
    if k == 0:
        return node
    if isinstance(node, BTop):
        return BTop(node.slot + k)
    if isinstance(node, (BAnd, BOr)):
        return type(node)(_shift(node.left, k), _shift(node.right, k))
    if isinstance(node, BNot):
        return BNot(_shift(node.inner, k))
    return BPart(node.inner, node.width, tuple((m, s + k) for m, s in node.types))


def _neg(f):
    return f.body if isinstance(f, Not) else Not(f)


def _conj(fs):
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


def _push(f):
    """One step of negation pushing, exposing a top-level conjunction or disjunction."""
    if isinstance(f, Implies):
        return Or(Not(f.left), f.right)
    if isinstance(f, Not):
        b = f.body
        if isinstance(b, Not):
            return _push(b.body)
        if isinstance(b, Or):
            return And(Not(b.left), Not(b.right))
        if isinstance(b, Implies):
            return And(b.left, Not(b.right))
        if isinstance(b, And):
            return Or(Not(b.left), Not(b.right))
    return f


def _flatten(f, op):
    f = _push(f)
    if isinstance(f, op):
        return _flatten(f.left, op) + _flatten(f.right, op)
    return [f]


def _chain(fs, op):
    out = fs[0]
    for f in fs[1:]:
        out = op(out, f)
    return out


def _required(node):
    """Slots that must hold the top element whenever node is true."""
    if isinstance(node, BTop):
        return {node.slot}
    if isinstance(node, BAnd):
        return _required(node.left) | _required(node.right)
    if isinstance(node, BOr):
        return _required(node.left) & _required(node.right)
    return set()


def _is_nonzero_test(node):
    return isinstance(node, BNot) and isinstance(node.inner, BTop)


def _combine(built, op):
    """Join built (node, parts) pairs with BAnd/BOr, merging what merges.

    Top-tests merge under conjunction (the value of a conjunction is the
    meet of the values); nonzero-tests merge under disjunction.
    """
    node_cls = BAnd if op is And else BOr
    mergeable = (lambda n: isinstance(n, BTop)) if op is And else _is_nonzero_test
    merged = [p[0] for n, p in built if mergeable(n)]
    rest = [(n, p) for n, p in built if not mergeable(n)]
    items = []
    if merged:
        items.append(((BTop(0) if op is And else BNot(BTop(0))), [_chain(merged, op)]))
    items += rest
    node, parts = items[0][0], list(items[0][1])
    for n, p in items[1:]:
        node = node_cls(node, _shift(n, len(parts)))
        parts += p
    return node, parts


def _build(f):
    if isinstance(f, Eq):
        return BTop(0), [f]
    if isinstance(f, Forall):
        return _build(Not(Exists(f.var, Not(f.body))))
    if isinstance(f, Exists):
        return _build_exists(f)
    g = _push(f)
    if isinstance(g, (And, Or)):
        op = type(g)
        return _combine([_build(h) for h in _flatten(g, op)], op)
    # a negated atom or negated quantifier
    node, parts = _build(g.body)
    parts = [_neg(p) for p in parts]
    return (node.inner if isinstance(node, BNot) else BNot(node)), parts


def _build_exists(f):
    x = f.var
    disj = _flatten(f.body, Or)
    if len(disj) > 1:
        return _build(_chain([Exists(x, d) for d in disj], Or))
    conj = _flatten(f.body, And)
    outside = [c for c in conj if x not in free_vars(c)]
    inside = [c for c in conj if x in free_vars(c)]
    if outside:
        rest = outside + ([Exists(x, _chain(inside, And))] if inside else [])
        return _build(_chain(rest, And))
    node, parts = _build(_chain(inside, And))
    if isinstance(node, BTop):
        return BTop(0), [Exists(x, parts[0])]
    k = len(parts)
    req = sum(1 << s for s in _required(node))
    masks = [m for m in range(1, 1 << k) if m & req == req]
    if len(masks) > PART_BUDGET:
        raise BudgetExceeded(f"existential step needs {len(masks)} parts, over the budget of {PART_BUDGET}")
    types, new_parts = [], []
    for mask in masks:
        types.append((mask, len(new_parts)))
        new_parts.append(Exists(x, _conj([parts[i] for i in range(k) if mask >> i & 1])))
    return BPart(node, k, tuple(types)), new_parts


def determining_sequence(f) -> DeterminingSequence:
    node, parts = _build(f)
    return DeterminingSequence(node, tuple(parts), tuple(free_vars(f)))


# -- evaluation on color models -------------------------------------------------------

def _sperner(k):
    return comb(k, k // 2)


@lru_cache(maxsize=None)
def phi_cap(node) -> int:
    if isinstance(node, BTop):
        return 1
    if isinstance(node, (BAnd, BOr)):
        return max(phi_cap(node.left), phi_cap(node.right))
    if isinstance(node, BNot):
        return phi_cap(node.inner)
    return _sperner(node.width) * phi_cap(node.inner) + 1


def make_model(colors_counts, cap):
    """Canonical model: sorted (color, clipped count), zero counts dropped."""
    acc = {}
    for c, n in colors_counts:
        if n:
            acc[c] = acc.get(c, 0) + n
    return tuple(sorted((c, int(min(n, cap))) for c, n in acc.items()))


def _maximal(masks):
    return [m for m in masks if not any(o != m and o & m == m for o in masks)]


@lru_cache(maxsize=None)
def _splits(n, m, c):
    """Clipped count vectors reachable by distributing n points over m choices."""
    if m == 1:
        return ((min(n, c),),)
    if n > m * c:
        return tuple(v for v in product(range(c + 1), repeat=m) if c in v)
    out = set()
    for first in range(n + 1):
        for rest in _splits(n - first, m - 1, c):
            out.add((min(first, c),) + rest)
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def _eval(node, model, width):
    if isinstance(node, BTop):
        return all(c >> node.slot & 1 for c, _ in model)
    if isinstance(node, BAnd):
        return _eval(node.left, model, width) and _eval(node.right, model, width)
    if isinstance(node, BOr):
        return _eval(node.left, model, width) or _eval(node.right, model, width)
    if isinstance(node, BNot):
        full = (1 << width) - 1
        comp = make_model(((c ^ full, n) for c, n in model), phi_cap(node.inner))
        return not _eval(node.inner, comp, width)
    inner_cap = phi_cap(node.inner)
    options = []
    for c, n in model:
        allowed = [m for m, s in node.types if c >> s & 1]
        choices = _maximal(allowed) or [0]
        options.append([tuple(zip(choices, v)) for v in _splits(n, len(choices), inner_cap)])
    seen = set()
    for combo in product(*options):
        inner = make_model((pair for part in combo for pair in part), inner_cap)
        if inner in seen:
            continue
        seen.add(inner)
        if _eval(node.inner, inner, node.width):
            return True
    return False


def phi_eval(ds_or_node, model, width=None) -> bool:
    """Truth of Phi on a color model given as (color, count) pairs."""
    node = ds_or_node.phi if isinstance(ds_or_node, DeterminingSequence) else ds_or_node
    if width is None:
        width = ds_or_node.width
    return _eval(node, make_model(model, phi_cap(node)), width)


def isotonicity_check(ds: DeterminingSequence, max_points=4):
    """Phi(y) and y <= y' imply Phi(y') on every BA with at most max_points atoms.

    Single-bit raises suffice: any y <= y' is reached by a chain of them.
    Returns (ok, counterexample).
    """
    k = ds.width
    colors = range(1 << k)
    for n in range(max_points + 1):
        for pts in _multisets(colors, n):
            base = phi_eval(ds, [(c, 1) for c in pts])
            if not base:
                continue
            for i, c in enumerate(pts):
                for s in range(k):
                    if not c >> s & 1:
                        raised = list(pts)
                        raised[i] = c | 1 << s
                        if not phi_eval(ds, [(x, 1) for x in raised]):
                            return False, (pts, i, s)
    return True, None


def _multisets(items, n):
    items = list(items)

    def rec(start, left):
        if left == 0:
            yield ()
            return
        for j in range(start, len(items)):
            for rest in rec(j, left - 1):
                yield (items[j],) + rest

    return rec(0, n)


# -- rendering Phi as a first-order formula of Boolean algebras ------------------------------

def _slots_read(node):
    if isinstance(node, BTop):
        return {node.slot}
    if isinstance(node, (BAnd, BOr)):
        return _slots_read(node.left) | _slots_read(node.right)
    if isinstance(node, BNot):
        return _slots_read(node.inner)
    return {s for _, s in node.types}


def _join_terms(ts):
    if not ts:
        return Const(0)
    out = ts[0]
    for t in ts[1:]:
        out = Join(out, t)
    return out


def render_phi(node, slot_terms, fresh=None):
    """A BA formula equivalent to node applied to the given slot terms."""
    if fresh is None:
        counter = iter(range(10 ** 9))
        fresh = lambda: f"v{next(counter)}"
    if isinstance(node, BTop):
        return Eq(slot_terms[node.slot], Const(1))
    if isinstance(node, (BAnd, BOr)):
        op = And if isinstance(node, BAnd) else Or
        return op(render_phi(node.left, slot_terms, fresh), render_phi(node.right, slot_terms, fresh))
    if isinstance(node, BNot):
        used = sorted(_slots_read(node.inner))
        names = {s: fresh() for s in used}
        comp = list(slot_terms)
        for s, v in names.items():
            comp[s] = Var(v)
        cond = _conj([And(Eq(Meet(Var(v), slot_terms[s]), Const(0)), Eq(Join(Var(v), slot_terms[s]), Const(1)))
                      for s, v in names.items()]) if names else None
        body = Not(render_phi(node.inner, comp, fresh))
        f = Implies(cond, body) if cond is not None else body
        for v in reversed(list(names.values())):
            f = Forall(v, f)
        return f
    zs = [(mask, slot, fresh()) for mask, slot in node.types]
    conds = [le(Var(z), slot_terms[slot]) for _, slot, z in zs]
    conds += [Eq(Meet(Var(z1), Var(z2)), Const(0)) for (_, _, z1), (_, _, z2) in combinations(zs, 2)]
    ys = [_join_terms([Var(z) for mask, _, z in zs if mask >> i & 1]) for i in range(node.width)]
    f = _conj(conds + [render_phi(node.inner, ys, fresh)])
    for _, _, z in reversed(zs):
        f = Exists(z, f)
    return f
