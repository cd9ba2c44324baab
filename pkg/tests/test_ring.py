from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coordlat import linalg
from coordlat.gfield import BudgetExceeded, field_make
from coordlat.lattice import is_modular, is_sectionally_complemented, lattice_isomorphic, m_lattice
from coordlat.ring import (MatrixRing, PrincipalIdeal, ProductRing, TableRing, almost_constant_ring,
                           c_p, c_p_solutions, central_idempotents, entrywise_hom, hom_factorize,
                           ideal_join, ideal_meet, l_functor, l_of_r, matrix_unit, quasi_inverse,
                           reduced_product_ring, ring_from_json, ring_homs)


def mat2(p, n=1):
    return MatrixRing(2, field_make(p, n))


def ideal_set(R, e):
    return frozenset(R.mul(e, r) for r in R.elements())


@pytest.mark.parametrize("p,n", [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)])
def test_l_of_mat2_is_m_q_plus_one(p, n):
    # q+1 lines of F_q^2 plus the two trivial ideals
    q = p ** n
    L, ideals = l_of_r(mat2(p, n))
    assert len(L) == q + 3
    assert lattice_isomorphic(L, m_lattice(q + 1)) is not None


def test_regular_exhaustive():
    R = mat2(3)
    for x in R.elements():
        assert R.mul(R.mul(x, R.qinv(x)), x) == x
    assert quasi_inverse(R.elem(((1, 1), (1, 1)))) * R.elem(((1, 1), (1, 1))) is not None


def test_join_meet_against_sets():
    R = mat2(2)
    idems = [e for e in R.elements() if R.is_idempotent(e)]
    assert len(idems) == 8
    sets = {e: ideal_set(R, e) for e in idems}
    for a, b in product(idems, repeat=2):
        I, J = PrincipalIdeal(R, a), PrincipalIdeal(R, b)
        assert ideal_set(R, ideal_join(I, J).gen) == frozenset(R.add(x, y) for x in sets[a] for y in sets[b])
        assert ideal_set(R, ideal_meet(I, J).gen) == sets[a] & sets[b]


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_join_is_least_upper_bound_mat2_f5(data):
    R = mat2(5)
    L, ideals = l_of_r(R)
    i = data.draw(st.integers(0, len(ideals) - 1))
    j = data.draw(st.integers(0, len(ideals) - 1))
    J = ideal_join(ideals[i], ideals[j])
    M = ideal_meet(ideals[i], ideals[j])
    assert L.ideal_index[J.key] == L.join(i, j)
    assert L.ideal_index[M.key] == L.meet(i, j)


def test_ideal_equality_and_order():
    R = mat2(2)
    e = ((1, 0), (0, 0))
    f = ((1, 1), (0, 0))  # same column space, different idempotent
    assert PrincipalIdeal(R, e) == PrincipalIdeal(R, f)
    assert PrincipalIdeal(R, R.zero()) <= PrincipalIdeal(R, e) <= PrincipalIdeal(R, R.one())
    with pytest.raises(ValueError):
        PrincipalIdeal(R, ((0, 1), (0, 0)))


def test_l_of_r_lattices_modular_sc():
    for R in (mat2(2), MatrixRing(3, field_make(2, 1)), ProductRing([mat2(2), mat2(3)])):
        L, _ = l_of_r(R)
        assert is_modular(L) and is_sectionally_complemented(L)


def test_product_ring_ideal_count():
    R = ProductRing([mat2(2), mat2(3), mat2(2, 2)])
    assert len(l_of_r(R)[0]) == 5 * 6 * 7


def z6():
    return TableRing([[(a + b) % 6 for b in range(6)] for a in range(6)],
                     [[(a * b) % 6 for b in range(6)] for a in range(6)])


def test_table_ring_z6():
    R = z6()
    L, _ = l_of_r(R)
    assert len(L) == 4  # Z/6 = F_2 x F_3
    assert sorted(R.center()) == list(range(6))
    assert sorted(z for z in central_idempotents(R).elements) == [0, 1, 3, 4]


def test_table_ring_rejects_bad_tables():
    with pytest.raises(ValueError):
        TableRing([[0, 1], [1, 0]], [[0, 0], [0, 0]])


def test_c_p_on_product():
    R = ProductRing([mat2(2), mat2(3), mat2(2, 2)])
    values = {c_p(R, 2, a).payload for a in c_p_solutions(R, 2)}
    assert len(values) == 1
    c2 = values.pop()
    assert c2 == (R.factors[0].one(), R.factors[1].zero(), R.factors[2].one())
    c3 = c_p(R, 3).payload
    assert R.mul(c2, c3) == R.zero()
    assert len(c_p_solutions(R, 2)) == 8 and len(c_p_solutions(R, 3)) == 3


def test_c_p_almost_constant():
    R = almost_constant_ring(2, levels=2)
    assert c_p(R, 2).payload == R.one()
    assert c_p(R, 3).payload == R.zero()


def test_almost_constant_make():
    R = almost_constant_ring(2, levels=3)
    top = R.top
    # a limit outside F_2 needs exceptions at the F_2 and F_4 positions
    gen = R.tower.xi[10]
    lim = ((1, 0), (gen, 0))
    with pytest.raises(ValueError):
        R.make(lim)
    e = R.make(lim, {2: ((0, 0), (0, 0)), 4: ((1, 0), (0, 0))})
    assert R.is_idempotent(e)
    assert sorted(R.exceptions(e)) == [2, 4]
    assert R.element_from_json(R.element_to_json(e)) == e
    assert top.is_idempotent(lim)


def conjugation_maps(R, S):
    """All x -> a x a^-1 (entrywise embedding) for invertible a; an independent oracle."""
    F = S.F
    elems = list(R.elements())
    maps = set()
    for a in S.elements():
        try:
            ainv = linalg.mat_inverse(F, a)
        except ZeroDivisionError:
            continue
        maps.add(tuple(linalg.mat_mul(F, linalg.mat_mul(F, a, x), ainv) for x in elems))
    return maps


def test_homs_mat2_f2_to_itself():
    R = mat2(2)
    homs = ring_homs(R, R)
    assert {tuple(h(x) for x in R.elements()) for h in homs} == conjugation_maps(R, R)
    assert len(homs) == 6


def test_no_homs_f4_to_f2():
    E, F = MatrixRing(1, field_make(2, 2)), MatrixRing(1, field_make(2, 1))
    assert ring_homs(E, F) == []


def test_factorize_frobenius():
    R = mat2(2, 2)
    F = R.F
    phi = entrywise_hom(R, R, lambda x: F.mul(x, x))
    sigma, a = hom_factorize(phi)
    assert all(sigma[x] == F.mul(x, x) for x in F.elements())
    for i, j in product(range(2), repeat=2):
        u = matrix_unit(R, i, j)
        assert phi(u) == linalg.mat_mul(F, linalg.mat_mul(F, a, u), linalg.mat_inverse(F, a))


def test_l_functor_of_identity():
    R = mat2(3)
    phi = entrywise_hom(R, R, lambda x: x)
    assert l_functor(phi) == list(range(len(l_of_r(R)[0])))


def test_reduced_product():
    rings = [mat2(2), mat2(3), mat2(5)]
    R, gen = reduced_product_ring(rings, [{0, 1}, {0, 1, 2}])
    assert gen == [0, 1] and len(R.factors) == 2
    with pytest.raises(ValueError):
        reduced_product_ring(rings, [{0}, {1}])


def test_json_round_trip():
    R = ProductRing([mat2(2), mat2(3)])
    assert ring_from_json(R.to_json()) == R
    x = (((1, 0), (1, 1)), ((2, 0), (0, 1)))
    assert R.element_from_json(R.element_to_json(x)) == x


def test_budget():
    with pytest.raises(BudgetExceeded):
        list(MatrixRing(3, field_make(5, 1)).elements())


def test_center_of_mat2_is_scalars():
    R = mat2(3)
    brute = sorted(z for z in R.elements() if all(R.mul(z, x) == R.mul(x, z) for x in R.elements()))
    assert brute == sorted(R.center())


def test_lattice_leq_matches_set_inclusion():
    R = mat2(2)
    L, ideals = l_of_r(R)
    sets = [ideal_set(R, I.gen) for I in ideals]
    assert np.array_equal(L.leq, np.array([[a <= b for b in sets] for a in sets]))
