from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coordlat.gfield import (BudgetExceeded, FieldDesc, field_make, frobenius_fixed, is_prime,
                             prime_power, tower_make)


def poly_mulmod(a, b, mod, p):
    """Schoolbook product of little-endian coefficient lists, reduced by a monic mod."""
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    n = len(mod) - 1
    for k in range(len(out) - 1, n - 1, -1):
        c = out[k]
        if c:
            for i in range(n + 1):
                out[k - n + i] = (out[k - n + i] - c * mod[i]) % p
    return (out + [0] * n)[:n]


def decode(code, p, n):
    return [(code // p ** i) % p for i in range(n)]


def encode(coeffs, p):
    return sum(c * p ** i for i, c in enumerate(coeffs))


@pytest.mark.parametrize("p,n", [(2, 2), (2, 3), (3, 2), (5, 1), (2, 4)])
def test_multiplication_matches_polynomial_oracle(p, n):
    F = field_make(p, n)
    mod = list(F.modulus)
    for a, b in product(range(F.order), repeat=2):
        want = encode(poly_mulmod(decode(a, p, n), decode(b, p, n), mod, p), p)
        assert F.mul(a, b) == want
        assert F.add(a, b) == encode([(x + y) % p for x, y in zip(decode(a, p, n), decode(b, p, n))], p)


@pytest.mark.parametrize("p,n", [(2, 2), (2, 3), (3, 2), (7, 1)])
def test_inverses_and_distributivity(p, n):
    F = field_make(p, n)
    for a in range(1, F.order):
        assert F.mul(a, F.inv(a)) == 1
    els = range(F.order)
    for a, b, c in product(els, repeat=3):
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))


def test_least_irreducible_moduli():
    # little-endian: x^2+x+1, x^3+x+1, x^2+1 over GF(3)
    assert field_make(2, 2).modulus == (1, 1, 1)
    assert field_make(2, 3).modulus == (1, 1, 0, 1)
    assert field_make(3, 2).modulus == (1, 0, 1)


def test_reducible_modulus_rejected():
    with pytest.raises(ValueError):
        FieldDesc(2, 2, (1, 0, 1))  # x^2+1 = (x+1)^2


def test_budget():
    with pytest.raises(BudgetExceeded):
        field_make(2, 13)


def test_prime_power_oracle():
    def brute(q):
        for p in range(2, q + 1):
            if all(p % d for d in range(2, p)):
                k, r = 0, q
                while r % p == 0:
                    r //= p
                    k += 1
                if r == 1 and k:
                    return p, k
                if k:
                    return None
        return None

    for q in range(1, 300):
        assert prime_power(q) == brute(q), q
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]


@pytest.mark.parametrize("p,K", [(2, 3), (3, 2), (5, 1)])
def test_tower_embeddings_are_homomorphisms(p, K):
    t = tower_make(p, K)
    for m in range(1, K):
        lo, hi = t.level(m), t.level(m + 1)
        for a, b in product(lo.elements(), repeat=2):
            assert t.embed(lo.add(a, b), m, m + 1) == hi.add(t.embed(a, m, m + 1), t.embed(b, m, m + 1))
            assert t.embed(lo.mul(a, b), m, m + 1) == hi.mul(t.embed(a, m, m + 1), t.embed(b, m, m + 1))


def test_tower_enumeration_prefix():
    t = tower_make(2, 3)
    assert [f.order for f in t.levels] == [2, 4, 64]
    assert t.xi[0] == 0 and len(set(t.xi)) == 64
    for m in (1, 2, 3):
        q = t.order(m)
        sub = frobenius_fixed(t, q)
        assert set(t.xi[:q]) == sub
        assert [t.index_of(a, m) for a in t.xi_at_level(m)] == list(range(1, q + 1))


def test_lower_inverts_embed():
    t = tower_make(3, 2)
    for a in t.level(1).elements():
        assert t.lower(t.embed(a, 1, 2), 2, 1) == a
    outside = next(x for x in t.level(2).elements() if x not in frobenius_fixed(t, 3))
    with pytest.raises(ValueError):
        t.lower(outside, 2, 1)


def test_json_round_trip():
    F = field_make(3, 2)
    assert FieldDesc.from_json(F.to_json()) == F


@settings(max_examples=200)
@given(st.sampled_from([(2, 3), (3, 2), (2, 4)]), st.data())
def test_field_laws_random(pn, data):
    F = field_make(*pn)
    a, b, c = (data.draw(st.integers(0, F.order - 1)) for _ in range(3))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.add(a, F.neg(a)) == 0
    assert F.power(a, F.order) == a
