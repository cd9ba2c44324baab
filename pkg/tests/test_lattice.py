from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coordlat.gfield import BudgetExceeded
from coordlat.lattice import (BOT, TOP, FiniteLattice, MLattice, boolean_lattice, center_of, chain,
                              check_3frame, has_large_partial_3frame, homogeneous_sequences, is_2distributive,
                              is_complemented, is_independent, is_lattice_hom, is_modular, is_neutral_element,
                              is_neutral_ideal, is_sectionally_complemented, lattice_isomorphic, m_lattice,
                              m_name, m_parse, pentagon, perspective, product_lattice,
                              quotient_by_neutral_ideal, spanning_mx, submodule_lattice, subperspective)


def naive_modular(L):
    n = len(L)
    for x, y, z in product(range(n), repeat=3):
        if L.le(x, z) and L.join(x, L.meet(y, z)) != L.meet(L.join(x, y), z):
            return False
    return True


def naive_perspective(L, x, y):
    return any(L.meet(x, z) == L.bot and L.meet(y, z) == L.bot and L.join(x, z) == L.join(y, z)
               for z in range(len(L)))


SMALL = {
    "M3": m_lattice(3), "M4": m_lattice(4), "N5": pentagon(), "B3": boolean_lattice(3),
    "chain4": chain(4), "M3xchain2": product_lattice(m_lattice(3), chain(2)),
    "Sub(F2^3)": submodule_lattice(2, 1, 3),
}


@pytest.mark.parametrize("name", sorted(SMALL))
def test_modularity_matches_naive(name):
    L = SMALL[name]
    assert bool(is_modular(L)) == naive_modular(L)


def test_pentagon_witness():
    L = pentagon()
    c = is_modular(L)
    assert not c
    x, y, z = c.witness
    m, j = L.meet_table, L.join_table
    assert m[x, j[y, m[x, z]]] != j[m[x, y], m[x, z]]


def test_m_lattices():
    for n in (3, 4, 7):
        L = m_lattice(n)
        assert len(L) == n + 2
        assert is_modular(L) and is_complemented(L) and is_2distributive(L)
    assert not is_complemented(chain(3))


def test_2distributive_fails_on_sub_f2_3():
    # Sub(F_2^3) contains 4 points in general position, failing the identity
    assert not is_2distributive(submodule_lattice(2, 1, 3))
    assert is_2distributive(boolean_lattice(3))


def test_2distributive_budget():
    with pytest.raises(BudgetExceeded):
        is_2distributive(m_lattice(200), budget=10 ** 6)


def test_sub_f2_4():
    L = submodule_lattice(2, 1, 4)
    assert len(L) == 67
    assert is_modular(L) and is_complemented(L) and is_sectionally_complemented(L)
    assert center_of(L) == [L.bot, L.top]


def test_perspectivity_matches_naive():
    L = SMALL["Sub(F2^3)"]
    for x, y in product(range(len(L)), repeat=2):
        c = perspective(L, x, y)
        assert bool(c) == naive_perspective(L, x, y)
        if c:
            z = c.witness
            assert L.meet(x, z) == L.bot and L.join(x, z) == L.join(y, z)


def test_subperspective_in_m3():
    L = m_lattice(3)
    assert subperspective(L, 1, 2)
    assert not subperspective(L, L.top, 1)


def test_center_of_products():
    # center of a product is the product of centers; M_n and chains of length 1 are directly indecomposable
    L = product_lattice(m_lattice(3), chain(2))
    assert len(center_of(L)) == 4
    L = product_lattice(m_lattice(3), m_lattice(4), chain(2))
    assert len(center_of(L)) == 8


def test_neutral_methods_agree_on_scm():
    L = product_lattice(m_lattice(3), chain(2))
    for u in range(len(L)):
        assert bool(is_neutral_element(L, u, "median")) == bool(is_neutral_element(L, u, "subperspective"))


def test_neutral_ideal_and_quotient():
    L = product_lattice(m_lattice(3), chain(2))
    # ideal generated by the central element (1, 0)
    u = L.components.index((4, 0))
    I = L.down(u)
    assert is_neutral_ideal(L, I)
    Q, proj = quotient_by_neutral_ideal(L, I)
    assert len(Q) == 2
    assert lattice_isomorphic(Q, chain(2)) is not None
    atom = L.components.index((1, 0))
    assert not is_neutral_ideal(L, L.down(atom))


def test_independence_and_homogeneous():
    L = m_lattice(3)
    assert is_independent(L, [1, 2])
    assert not is_independent(L, [1, 2, 3])
    seqs = homogeneous_sequences(L, 2, nonzero=True)
    assert len(seqs) == 6


def test_spanning_mx():
    assert spanning_mx(m_lattice(4), 3) is not None
    assert spanning_mx(boolean_lattice(2), 3) is None


def test_three_frames():
    L = submodule_lattice(2, 1, 4)
    w = has_large_partial_3frame(L)
    assert w is not None and check_3frame(L, w)
    assert has_large_partial_3frame(m_lattice(3)) is None
    assert has_large_partial_3frame(boolean_lattice(3)) is None


def test_json_round_trip_and_validation():
    L = pentagon()
    L2 = FiniteLattice.from_json(L.to_json())
    assert np.array_equal(L.leq, L2.leq)
    # two maximal elements: not a lattice
    bad = {"names": ["a", "b", "c"], "leq": [[1, 1, 1], [0, 1, 0], [0, 0, 1]]}
    with pytest.raises(ValueError):
        FiniteLattice.from_json(bad)


def test_isomorphism_and_homs():
    A = product_lattice(chain(2), chain(2))
    f = lattice_isomorphic(A, boolean_lattice(2))
    assert f is not None and is_lattice_hom(A, boolean_lattice(2), f, bounds=True)
    assert lattice_isomorphic(m_lattice(3), pentagon()) is None


def test_m_lattice_symbolic():
    M = MLattice(5)
    assert M.join(1, 2) == TOP and M.meet(1, 2) == BOT and M.join(1, 1) == 1
    assert M.le(BOT, 3) and not M.le(3, 4)
    assert m_parse(m_name(3)) == 3 and m_parse("0") == BOT and m_parse("1") == TOP
    L, index = M.to_finite()
    for a, b in product(M.elements(), repeat=2):
        assert index[M.join(a, b)] == L.join(index[a], index[b])
        assert index[M.meet(a, b)] == L.meet(index[a], index[b])


@st.composite
def small_products(draw):
    parts = draw(st.lists(st.sampled_from(["m2", "m3", "c2", "c3"]), min_size=1, max_size=3))
    build = {"m2": lambda: m_lattice(2), "m3": lambda: m_lattice(3), "c2": lambda: chain(2), "c3": lambda: chain(3)}
    return product_lattice(*[build[p]() for p in parts])


@settings(max_examples=25, deadline=None)
@given(small_products(), st.data())
def test_lattice_laws(L, data):
    n = len(L)
    x, y, z = (data.draw(st.integers(0, n - 1)) for _ in range(3))
    assert L.meet(x, L.join(x, y)) == x
    assert L.join(x, L.meet(x, y)) == x
    assert L.meet(L.meet(x, y), z) == L.meet(x, L.meet(y, z))
    assert L.le(x, y) == (L.meet(x, y) == x)
    # products of modular lattices are modular
    assert is_modular(L)
