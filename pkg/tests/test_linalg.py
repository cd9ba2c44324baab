from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coordlat import linalg
from coordlat.gfield import field_make


def gaussian_total(q, d):
    """Number of subspaces of F_q^d, from Gaussian binomials."""
    def binom(n, k):
        num = den = 1
        for i in range(k):
            num *= q ** (n - i) - 1
            den *= q ** (i + 1) - 1
        return num // den
    return sum(binom(d, k) for k in range(d + 1))


@pytest.mark.parametrize("p,n,d", [(2, 1, 2), (2, 1, 3), (2, 1, 4), (3, 1, 2), (2, 2, 2), (3, 1, 3)])
def test_subspace_counts(p, n, d):
    F = field_make(p, n)
    assert len(linalg.subspaces(F, d)) == gaussian_total(F.order, d)


def test_small_counts_frozen():
    F = field_make(2, 1)
    assert [len(linalg.subspaces(F, d)) for d in (2, 3, 4)] == [5, 16, 67]


def test_quasi_inverse_exhaustive_mat2_f3():
    F = field_make(3, 1)
    for flat in product(range(3), repeat=4):
        a = (flat[:2], flat[2:])
        b = linalg.quasi_inverse(F, a)
        assert linalg.mat_mul(F, linalg.mat_mul(F, a, b), a) == a


@settings(max_examples=100)
@given(st.lists(st.integers(0, 4), min_size=9, max_size=9))
def test_quasi_inverse_mat3_f5(flat):
    F = field_make(5, 1)
    a = tuple(tuple(flat[3 * i:3 * i + 3]) for i in range(3))
    b = linalg.quasi_inverse(F, a)
    assert linalg.mat_mul(F, linalg.mat_mul(F, a, b), a) == a


@settings(max_examples=100)
@given(st.lists(st.integers(0, 3), min_size=4, max_size=4))
def test_rank_matches_column_space(flat):
    F = field_make(2, 2)
    a = (tuple(flat[:2]), tuple(flat[2:]))
    assert linalg.rank(F, a) == len(linalg.column_space(F, a))


def test_projection_of_line():
    F = field_make(3, 1)
    p = linalg.projection(F, ((1, 2),), 2)
    assert p == ((1, 0), (2, 0))
    assert linalg.mat_mul(F, p, p) == p
    assert linalg.column_space(F, p) == ((1, 2),)


def test_inverse():
    F = field_make(2, 2)
    a = ((1, 2), (0, 3))
    ainv = linalg.mat_inverse(F, a)
    assert linalg.mat_mul(F, a, ainv) == linalg.identity(F, 2)
    with pytest.raises(ZeroDivisionError):
        linalg.mat_inverse(F, ((1, 1), (1, 1)))
