import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coordlat.lattice import BOT, TOP, MLattice, boolean_lattice, chain, m_lattice, pentagon
from coordlat.logic.ba import FiniteBA, ba_equiv_rank, ba_eval, ba_eval_regions, ef_equivalent, rank_threshold, region_counts
from coordlat.logic.boolprod import FiniteProduct, elementary_submodel_report, validate_determining_sequence
from coordlat.logic.corpus import CORPUS
from coordlat.logic.evaluate import eval_finite, eval_m_lattice
from coordlat.logic.fv import BNot, DeterminingSequence, determining_sequence, isotonicity_check, phi_eval, render_phi
from coordlat.logic.syntax import (And, Const, Eq, Exists, Implies, Join, Meet, Not, Or, ParseError, Var,
                                   free_vars, parse, quantifier_rank, to_text)
from coordlat.seqlat import make_K, make_L


def naive_term(L, t, env):
    if isinstance(t, Var):
        return env[t.name]
    if isinstance(t, Const):
        return L.top if t.value else L.bot
    a, b = naive_term(L, t.left, env), naive_term(L, t.right, env)
    return L.join(a, b) if isinstance(t, Join) else L.meet(a, b)


def naive(L, f, env):
    """Textbook Tarski semantics, one element at a time."""
    if isinstance(f, Eq):
        return naive_term(L, f.left, env) == naive_term(L, f.right, env)
    if isinstance(f, Not):
        return not naive(L, f.body, env)
    if isinstance(f, And):
        return naive(L, f.left, env) and naive(L, f.right, env)
    if isinstance(f, Or):
        return naive(L, f.left, env) or naive(L, f.right, env)
    if isinstance(f, Implies):
        return not naive(L, f.left, env) or naive(L, f.right, env)
    q = any if isinstance(f, Exists) else all
    return q(naive(L, f.body, {**env, f.var: x}) for x in range(len(L)))


SMALL = {"M3": m_lattice(3), "N5": pentagon(), "B2": boolean_lattice(2), "C3": chain(3)}


def test_parse_round_trip():
    for f in CORPUS:
        assert parse(to_text(f)) == f


def test_parse_precedence():
    f = parse("a = b && b = c || ~(c = 0) -> a = 0")
    assert isinstance(f, Implies) and isinstance(f.left, Or) and isinstance(f.left.left, And)
    t = parse("a \\/ b /\\ c = 1").left
    assert t == Join(Var("a"), Meet(Var("b"), Var("c")))
    assert parse("a <= b") == Eq(Meet(Var("a"), Var("b")), Var("a"))


@pytest.mark.parametrize("bad", ["a =", "E . a = b", "(a = b", "a = b)", "a # b", "a = 2"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse(bad)


def test_free_vars_and_rank():
    f = parse("E x. A y. x /\\ y = 0 -> y <= a")
    assert free_vars(f) == ["a"]
    assert quantifier_rank(f) == 2


@pytest.mark.parametrize("name", sorted(SMALL))
def test_eval_finite_matches_naive(name):
    L = SMALL[name]
    for f in CORPUS:
        fv = free_vars(f)
        for vals in product(range(len(L)), repeat=len(fv)):
            env = dict(zip(fv, vals))
            assert eval_finite(L, f, env) == naive(L, f, env), (name, to_text(f), env)


def _to_m(i, n):
    return BOT if i == 0 else TOP if i == n + 1 else i - 1


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_eval_m_matches_finite(n):
    L, M = m_lattice(n), MLattice(n)
    for f in CORPUS:
        fv = free_vars(f)
        for vals in product(range(n + 2), repeat=len(fv)):
            env = dict(zip(fv, vals))
            menv = {v: _to_m(i, n) for v, i in env.items()}
            assert eval_m_lattice(M, f, menv) == eval_finite(L, f, env)


def test_eval_m_omega_is_large_finite():
    f = parse("A x. ~(x = 0) && ~(x = 1) -> E y. ~(y = x) && x /\\ y = 0 && ~(y = 0)")
    assert eval_m_lattice(MLattice("omega"), f) and eval_m_lattice(MLattice(6), f)
    assert eval_m_lattice(MLattice(2), f) and not eval_m_lattice(MLattice(1), f)
    with pytest.raises(ValueError):
        eval_m_lattice(MLattice(2), f, {"a": 5})


def test_rank_thresholds_match_brute_force():
    assert [rank_threshold(r) for r in range(4)] == [1, 2, 4, 8]
    for r in range(3):
        for a in range(6):
            for b in range(6):
                assert ba_equiv_rank(a, b, r) == ef_equivalent(a, b, r)


def test_region_evaluation():
    f = parse("E x. x <= a && ~(x = 0) && ~(x = a)")
    B = FiniteBA(4)
    for a in range(16):
        counts = region_counts([{i for i in range(4) if a >> i & 1}], 4)
        assert ba_eval_regions(counts, f, ["a"]) == ba_eval(B, f, {"a": a})


def test_validation_on_small_product():
    B = FiniteProduct([m_lattice(2), chain(2), boolean_lattice(1)])
    for f in CORPUS:
        if len(free_vars(f)) <= 2:
            checked, fails = validate_determining_sequence(determining_sequence(f), B, f)
            assert checked and not fails, to_text(f)


def test_phi_is_isotone():
    for f in CORPUS:
        ok, cex = isotonicity_check(determining_sequence(f), max_points=3)
        assert ok, (to_text(f), cex)


def test_mutated_phi_is_caught():
    f = parse("a \\/ b = 1 -> E x. x <= a && x \\/ b = 1 && x /\\ b = 0")
    ds = determining_sequence(f)
    bad = DeterminingSequence(BNot(ds.phi), ds.parts, ds.free)
    B = FiniteProduct([m_lattice(2), chain(2)])
    assert validate_determining_sequence(bad, B, f)[1]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(range(len(CORPUS))), st.integers(0, 10 ** 6))
def test_render_phi_agrees(idx, seed):
    ds = determining_sequence(CORPUS[idx])
    k = ds.width
    rng = random.Random(seed)
    B = FiniteBA(3)
    slots = [rng.randrange(8) for _ in range(k)]
    names = [f"s{i}" for i in range(k)]
    g = render_phi(ds.phi, [Var(n) for n in names])
    # atom j carries the color made of bit j of each slot
    model = [(sum((slots[s] >> j & 1) << s for s in range(k)), 1) for j in range(3)]
    assert ba_eval(B, g, dict(zip(names, slots))) == phi_eval(ds, model)


def test_elementary_submodel_report():
    rows = elementary_submodel_report(make_K(2), make_L(2), CORPUS[:12], samples=3, seed=1)
    assert rows and all(r["agree"] and r["eps"] and r["clopen"] for r in rows)
