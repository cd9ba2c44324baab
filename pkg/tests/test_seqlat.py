import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coordlat.lattice import BOT, TOP, MLattice, is_complemented, is_modular
from coordlat.logic.boolprod import random_section
from coordlat.seqlat import (IndexSpace, StalkClass, center_of_sections, coordinatization_obstruction,
                             make_dirunion_L, make_K, make_L, neutral_kernel, projection,
                             required_central_pattern, section_lattice_from_json, truncate)


@pytest.mark.parametrize("maker,p,want", [
    (make_K, 2, True), (make_dirunion_L, 2, True), (make_L, 2, False), (make_L, 3, False), (make_K, 3, True),
])
def test_obstruction_anchors(maker, p, want):
    assert coordinatization_obstruction(maker(), p).obstructed is want


def test_k_conflict_is_at_the_shared_limit():
    ob = coordinatization_obstruction(make_K(), 2)
    assert ob.witness["limit"] == "inf"
    assert sorted(ob.witness["required"].values()) == [0, 1]


def test_required_pattern_k():
    pat = required_central_pattern(make_K(), 2)
    # c_2 is 1 in characteristic 2 and 0 in characteristic 3
    assert pat.positions == {"2": 1, "4": 1, "64": 1, "3": 0, "9": 0, "729": 0}
    assert pat.tails == {0: 1, 1: 0}


def test_l_witness_is_central():
    L = make_L()
    ob = coordinatization_obstruction(L, 2)
    x = L.section_from_json(ob.witness)
    assert center_of_sections(L).contains(x)
    assert L.value(x, "inf2") == TOP and L.value(x, "inf3") == BOT


def test_class_indicators():
    assert center_of_sections(make_K()).indicator({0: 1, 1: 0}) is None
    assert center_of_sections(make_L()).indicator({0: 1, 1: 0}) is not None


def test_illegal_values():
    K = make_K()
    with pytest.raises(ValueError):
        K.section({"2": 5})
    with pytest.raises(ValueError):
        K.section({"17": 0})
    D = make_dirunion_L()
    with pytest.raises(ValueError):
        D.section(limits={"inf": 3})


def test_truncation_is_embedding():
    D = make_dirunion_L(2)
    F, secs = truncate(D, 2)
    assert len(F) == 6 * 6 * 5
    assert is_modular(F) and is_complemented(F)
    for i, j in product(range(len(F)), repeat=2):
        assert D.join(secs[i], secs[j]) == secs[F.join(i, j)]
        assert D.meet(secs[i], secs[j]) == secs[F.meet(i, j)]


def test_truncation_of_k():
    F, secs = truncate(make_K(), 1)
    assert len(F) == 5 * 6 * 5
    assert len(set(secs)) == len(F)


def test_json_round_trip():
    K = make_K()
    K2 = section_lattice_from_json(K.to_json())
    assert K2.space.to_json() == K.space.to_json()
    x = K.section({"4": 2, "9": TOP}, {"inf": 1})
    assert K2.section_from_json(K.section_to_json(x)) == x
    D = make_dirunion_L()
    assert section_lattice_from_json(D.to_json()).limit_atoms == 3


def test_space_validation():
    with pytest.raises(ValueError):
        IndexSpace([StalkClass(0, 2, 2), StalkClass(1, 2, 2)], "shared")  # duplicate labels
    with pytest.raises(ValueError):
        IndexSpace([StalkClass(0, 2, 2)], "mixed")


def test_projection_and_kernel():
    K = make_K()
    pi, stalk = projection(K, "4")
    rng = random.Random(3)
    for _ in range(50):
        x, y = random_section(K, rng), random_section(K, rng)
        assert pi(K.join(x, y)) == MLattice.join(pi(x), pi(y))
        assert pi(K.meet(x, y)) == MLattice.meet(pi(x), pi(y))
        assert stalk.contains(pi(x))
    ker = neutral_kernel(K, "4")
    assert ker.contains(K.bot) and not ker.contains(K.top)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(["K", "L", "D"]), st.integers(0, 10 ** 6))
def test_section_lattice_laws(which, seed):
    KL = {"K": make_K, "L": make_L, "D": make_dirunion_L}[which]()
    rng = random.Random(seed)
    x, y, z = (random_section(KL, rng) for _ in range(3))
    assert KL.meet(x, KL.join(x, y)) == x
    assert KL.join(KL.join(x, y), z) == KL.join(x, KL.join(y, z))
    assert KL.le(x, y) == (KL.meet(x, y) == x)
    c = KL.complement(x)
    assert KL.join(x, c) == KL.top and KL.meet(x, c) == KL.bot
    # modular law
    if KL.le(x, z):
        assert KL.join(x, KL.meet(y, z)) == KL.meet(KL.join(x, y), z)
