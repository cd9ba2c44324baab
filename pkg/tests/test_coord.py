import pytest

from coordlat.coord import (coordinatizable_mn, directed_union_demo, entrywise_embedding, epsilon_p, eta_field,
                            eta_q, image_complement_count, semisimple_pipeline)
from coordlat.gfield import field_make
from coordlat.lattice import BOT, TOP


@pytest.mark.parametrize("q", [2, 4, 3, 9])
def test_eta_is_isomorphism(q):
    eta = eta_q(q)
    ok, problems = eta.check()
    assert ok, problems
    assert eta(((0, 0), (0, 0))) == BOT
    assert eta(((1, 0), (0, 1))) == TOP


def test_eta_atoms():
    eta = eta_q(4)
    assert eta(((0, 0), (0, 1))) == 0
    # xi_1 = 0, so the first column line is through (1, 0)
    assert eta(((1, 0), (0, 0))) == 1
    assert [eta(eta.alpha(k)) for k in range(5)] == [0, 1, 2, 3, 4]


def test_eta_q_rejects_non_tower_orders():
    with pytest.raises(ValueError):
        eta_q(8)
    with pytest.raises(ValueError):
        eta_q(6)
    assert eta_field(field_make(2, 3)).check()[0]


@pytest.mark.parametrize("n,status", [(3, "coordinatizable"), (5, "coordinatizable"), (9, "coordinatizable"),
                                      (7, "not_coordinatizable"), (11, "not_coordinatizable")])
def test_mn_verdicts(n, status):
    v = coordinatizable_mn(n)
    assert v.status == status
    if v.witness is not None:
        assert v.witness.replay()
        assert len(v.witness.target) == n + 2


def test_mn_reason_and_small_n():
    assert coordinatizable_mn(7).reason == "6 is not a prime power"
    with pytest.raises(ValueError):
        coordinatizable_mn(2)


def test_mn_tampered_witness_fails():
    w = coordinatizable_mn(4).witness
    w.iso = list(reversed(w.iso))
    assert not w.replay()


def test_epsilon_examples():
    e = epsilon_p(2, 2)
    R = e.R
    assert e(R.one()) == e.L.top and e(R.zero()) == e.L.bot
    x = R.constant(e.etas[0].alpha(2), 1)
    assert e.L.section_to_json(e(x)) == {"exc": {}, "lim": {"inf": "A2"}}
    y = R.make(e.etas[1].alpha(3), {2: ((1, 0), (0, 0))})
    assert e.L.section_to_json(e(y)) == {"exc": {"2": "A1"}, "lim": {"inf": "A3"}}


@pytest.mark.parametrize("p", [2, 3])
def test_epsilon_verify_small(p):
    ok, checks = epsilon_p(p, 2).verify(max_exc=1)
    assert ok, checks


@pytest.mark.parametrize("p,n,d", [(2, 1, 2), (3, 1, 1), (2, 2, 2), (3, 1, 2)])
def test_semisimple(p, n, d):
    out = semisimple_pipeline(p, n, d)
    assert out["status"] == "ok", [c for c in out["checks"] if not c["ok"]]


def test_directed_union():
    out = directed_union_demo(2)
    assert out["status"] == "ok" and out["union"] == "obstructed"
    assert out["checks"][0]["c2"] == [0, 1]


@pytest.mark.parametrize("p,n,m,count", [(2, 1, 2, 2), (2, 1, 3, 6), (3, 1, 2, 6), (2, 2, 4, 12), (2, 1, 1, 0)])
def test_image_complements(p, n, m, count):
    out = image_complement_count(entrywise_embedding(p, n, m))
    assert out["count"] == count
    assert out["ok"] and out["onto"] == (count == 0)
