"""Named check suites: the acceptance matrix, a quick smoke subset and the
logic corpus checks.  Each case returns a JSON-ready dict with ``ok``."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from itertools import product

from .coord import coordinatizable_mn, epsilon_p, image_complement_count, semisimple_pipeline
from .gfield import field_make, prime_power
from .lattice import (boolean_lattice, check_3frame, has_large_partial_3frame, is_modular,
                      is_sectionally_complemented, lattice_isomorphic, m_lattice, submodule_lattice)
from .linalg import mat_inverse, mat_mul
from .logic import CORPUS, FiniteProduct, determining_sequence, elementary_submodel_report, \
    isotonicity_check, validate_determining_sequence
from .logic.ba import ba_equiv_rank, ef_equivalent
from .logic.evaluate import eval_finite, eval_m_lattice
from .logic.syntax import free_vars, quantifier_rank
from .lattice import BOT, TOP, MLattice
from .ring import (MatrixRing, PrincipalIdeal, ProductRing, c_p, c_p_solutions, hom_factorize,
                   ideal_join, ideal_meet, l_of_r, ring_homs)
from .seqlat import coordinatization_obstruction, make_dirunion_L, make_K, make_L

__all__ = ["CRITERIA", "SUITES", "run_case", "run_suite"]


def _mat2(q):
    p, n = prime_power(q)
    return MatrixRing(2, field_make(p, n))


def criterion_1():
    """L(Mat_2(F_q)) is M_{1+q} with q+3 elements; M_7 and M_11 are not coordinatizable."""
    start = time.perf_counter()
    rows = []
    for q in (2, 3, 4, 5, 7, 8, 9):
        L, _ = l_of_r(_mat2(q))
        rows.append({"q": q, "size": len(L), "iso": lattice_isomorphic(L, m_lattice(1 + q)) is not None})
    elapsed = time.perf_counter() - start
    verdicts = {n: coordinatizable_mn(n) for n in (7, 11)}
    ok = all(r["size"] == r["q"] + 3 and r["iso"] for r in rows) and elapsed < 10 and \
        all(v.status == "not_coordinatizable" for v in verdicts.values())
    return ok, {"rows": rows, "seconds": round(elapsed, 3),
                "verdicts": {n: [v.status, v.reason] for n, v in verdicts.items()}}


def _ideal_set(R, e):
    return frozenset(R.mul(e, r) for r in R.elements())


def criterion_2():
    """Join/meet formulas agree with set-level sum and intersection, all idempotent pairs."""
    details = {}
    ok = True
    for q in (2, 3):
        R = _mat2(q)
        elems = list(R.elements())
        idems = [e for e in elems if R.is_idempotent(e)]
        sets = {e: _ideal_set(R, e) for e in idems}
        bad = 0
        for a, b in product(idems, repeat=2):
            I, J = PrincipalIdeal(R, a), PrincipalIdeal(R, b)
            total = frozenset(R.add(x, y) for x in sets[a] for y in sets[b])
            inter = sets[a] & sets[b]
            if _ideal_set(R, ideal_join(I, J).gen) != total or _ideal_set(R, ideal_meet(I, J).gen) != inter:
                bad += 1
        details[f"Mat2(F{q})"] = {"idempotents": len(idems), "pairs": len(idems) ** 2, "failures": bad}
        ok = ok and bad == 0
    return ok, details


def criterion_3():
    """c_2 = (1,0,1), c_3 = (0,1,0) on Mat_2(F_2) x Mat_2(F_3) x Mat_2(F_4), for every a_p."""
    R = ProductRing([_mat2(2), _mat2(3), _mat2(4)])
    expected = {2: (1, 0, 1), 3: (0, 1, 0)}
    details, ok = {}, True
    central = {tuple(z) for z in R.center()}
    values = {}
    for p, want in expected.items():
        sols = c_p_solutions(R, p)
        cs = {c_p(R, p, a).payload for a in sols}
        c = next(iter(cs))
        pattern = tuple(int(x == f.one()) if x in (f.one(), f.zero()) else None for x, f in zip(c, R.factors))
        good = len(cs) == 1 and pattern == want and R.is_idempotent(c) and tuple(c) in central
        details[f"c{p}"] = {"solutions": len(sols), "distinct_values": len(cs), "pattern": pattern}
        values[p] = c
        ok = ok and good
    prod_zero = R.mul(values[2], values[3]) == R.zero()
    details["c2c3_zero"] = prod_zero
    return ok and prod_zero, details


def criterion_4():
    """Obstructed for K and the directed union (p=2); unobstructed for L (p=2, 3)."""
    cases = [("K", make_K(), 2, True), ("dirunion", make_dirunion_L(), 2, True),
             ("L", make_L(), 2, False), ("L", make_L(), 3, False)]
    rows, ok = [], True
    for name, KL, p, want in cases:
        start = time.perf_counter()
        ob = coordinatization_obstruction(KL, p)
        t = time.perf_counter() - start
        rows.append({"lattice": name, "p": p, "status": ob.status, "seconds": round(t, 4)})
        ok = ok and ob.obstructed == want and t < 1
    return ok, {"rows": rows}


def criterion_5():
    """epsilon_2 at three levels is an order isomorphism (<= 2 exceptions), under 60 s."""
    start = time.perf_counter()
    good, checks = epsilon_p(2, 3).verify(max_exc=2)
    t = time.perf_counter() - start
    return good and t < 60, {"checks": checks, "seconds": round(t, 2)}


FV_PRODUCTS = ((3, 4), (3, 3, 5), (4, 4))


def criterion_6():
    """Determining sequences validate on three finite products; Phi is isotone."""
    corpus_ok = len(CORPUS) >= 20 and all(quantifier_rank(f) <= 2 for f in CORPUS)
    products = [FiniteProduct([m_lattice(n) for n in ns]) for ns in FV_PRODUCTS]
    checked, fails, iso_fails = 0, [], []
    for i, f in enumerate(CORPUS):
        ds = determining_sequence(f)
        for ns, B in zip(FV_PRODUCTS, products):
            n, bad = validate_determining_sequence(ds, B, f)
            checked += n
            if bad:
                fails.append({"formula": i, "product": ns, "tuples": bad[:3]})
        iso, cex = isotonicity_check(ds, max_points=4)
        if not iso:
            iso_fails.append({"formula": i, "counterexample": cex})
    ok = corpus_ok and not fails and not iso_fails
    return ok, {"corpus": len(CORPUS), "tuples_checked": checked, "failures": fails, "isotonicity_failures": iso_fails}


def criterion_7():
    """K and L agree on the corpus; L-values are eps of K-values; under 5 minutes."""
    start = time.perf_counter()
    rows = elementary_submodel_report(make_K(), make_L(), CORPUS, rank=2, samples=10, seed=0)
    t = time.perf_counter() - start
    per = {}
    for r in rows:
        per[id(r["formula"])] = per.get(id(r["formula"]), 0) + 1
    disagree = sum(not r["agree"] for r in rows)
    eps_bad = sum(not r["eps"] for r in rows)
    ok = disagree == 0 and eps_bad == 0 and min(per.values()) >= 10 and t < 300
    return ok, {"rows": len(rows), "disagreements": disagree, "eps_failures": eps_bad, "seconds": round(t, 2)}


def _conjugation_oracle(R, S):
    """Maps x -> a sigma(x) a^-1 over all invertible a and field embeddings sigma."""
    E, F = R.F, S.F
    sigmas = []
    for g in F.elements():
        # sigma determined by the image of the generator of E
        try:
            sig = {}
            for x in E.elements():
                acc = 0
                for c in reversed(E.coeffs(x)):
                    acc = F.add(F.mul(acc, g), F.from_int(c))
                sig[x] = acc
        except ValueError:
            continue
        if all(sig[E.mul(x, y)] == F.mul(sig[x], sig[y]) and sig[E.add(x, y)] == F.add(sig[x], sig[y])
               for x in E.elements() for y in E.elements()) and len(set(sig.values())) == E.order:
            sigmas.append(sig)
    maps = set()
    elems = list(R.elements())
    for a in S.elements():
        try:
            ainv = mat_inverse(F, a)
        except ZeroDivisionError:
            continue
        for sig in sigmas:
            maps.add(tuple(mat_mul(F, mat_mul(F, a, tuple(tuple(sig[v] for v in row) for row in x)), ainv)
                           for x in elems))
    return maps


def criterion_8():
    """60 homs Mat_2(F_2) -> Mat_2(F_4); all factor; image complements have size 2."""
    R, S = _mat2(2), _mat2(4)
    homs = ring_homs(R, S)
    elems = list(R.elements())
    found = {tuple(h(x) for x in elems) for h in homs}
    oracle = _conjugation_oracle(R, S)
    factor_ok, counts = True, []
    for h in homs:
        try:
            sigma, a = hom_factorize(h)
            ainv = mat_inverse(S.F, a)
            replay = all(h(x) == mat_mul(S.F, mat_mul(S.F, a, tuple(tuple(sigma[v] for v in row) for row in x)), ainv)
                         for x in elems)
            factor_ok = factor_ok and replay
        except ValueError:
            factor_ok = False
        counts.append(image_complement_count(h))
    complement_ok = all(not c["onto"] and c["count"] == 2 and c["count"] >= c["bound"] for c in counts)
    ok = len(homs) == 60 and found == oracle and factor_ok and complement_ok
    return ok, {"homs": len(homs), "oracle": len(oracle), "all_factor": factor_ok,
                "complement_counts": sorted({c["count"] for c in counts})}


def criterion_9():
    """Large partial 3-frame in Sub(F_2^4); none in M_3 or the Boolean lattice 2^3."""
    start = time.perf_counter()
    sub = submodule_lattice(2, 1, 4)
    w = has_large_partial_3frame(sub)
    replay = bool(check_3frame(sub, w)) if w else False
    none_m3 = has_large_partial_3frame(m_lattice(3)) is None
    none_b3 = has_large_partial_3frame(boolean_lattice(3)) is None
    t = time.perf_counter() - start
    ok = w is not None and replay and none_m3 and none_b3 and t < 120
    return ok, {"witness": w, "replay": replay, "M3_none": none_m3, "B3_none": none_b3, "seconds": round(t, 2)}


def criterion_10():
    """Sub(F_2^2) = L(End F_2^2) through I(X); Schur for 1-dimensional modules."""
    rep = semisimple_pipeline(2, 1, 2)
    ok = rep["status"] == "ok" and rep["sizes"]["End"] == 16
    schur = {}
    for p, n in ((2, 1), (3, 1), (2, 2)):
        r = semisimple_pipeline(p, n, 1)
        good = next(c for c in r["checks"] if c["name"] == "schur_field")["ok"]
        schur[f"F{p ** n}"] = good
        ok = ok and good
    return ok, {"pipeline": rep["checks"], "schur": schur}


def _eval_all_m(n):
    M, L = MLattice(n), m_lattice(n)
    # index i of m_lattice <-> symbolic value
    sym = [BOT] + list(range(n)) + [TOP]
    bad = 0
    for f in CORPUS:
        vs = free_vars(f)
        for t in product(range(len(L)), repeat=len(vs)):
            env = dict(zip(vs, t))
            if eval_finite(L, f, env) != eval_m_lattice(M, f, {v: sym[i] for v, i in env.items()}):
                bad += 1
    return bad


def criterion_11():
    """Cross-validation: L(R) modular and sectionally complemented; two evaluators agree; BA ranks."""
    rings = [_mat2(q) for q in (2, 3, 4, 5)] + [MatrixRing(3, field_make(2, 1)),
                                                  ProductRing([_mat2(2), _mat2(3)])]
    lat_ok = {}
    for R in rings:
        L, _ = l_of_r(R)
        lat_ok[repr(R)] = bool(is_modular(L)) and bool(is_sectionally_complemented(L))
    eval_bad = {n: _eval_all_m(n) for n in range(1, 7)}
    ba_bad = [(a, b, r) for r in range(4) for a in range(6) for b in range(6)
              if ba_equiv_rank(a, b, r) != ef_equivalent(a, b, r)]
    ok = all(lat_ok.values()) and not any(eval_bad.values()) and not ba_bad
    return ok, {"lattices": lat_ok, "eval_failures": eval_bad, "ba_failures": ba_bad}


CRITERIA = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5, 6: criterion_6,
    7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10, 11: criterion_11,
}

SUITES = {
    "acceptance": list(CRITERIA),
    "smoke": [1, 2, 3, 4, 9, 10],
    "fv": [6, 7],
}


def run_case(cid):
    start = time.perf_counter()
    fn = CRITERIA[cid]
    try:
        ok, details = fn()
    except Exception as err:  # a crashing case is a failing case
        ok, details = False, {"error": f"{type(err).__name__}: {err}"}
    return {"id": cid, "title": fn.__doc__.strip().splitlines()[0], "ok": bool(ok),
            "seconds": round(time.perf_counter() - start, 3), "details": details}


def run_suite(name, jobs=1):
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; known: {sorted(SUITES)}")
    ids = SUITES[name]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            cases = list(pool.map(run_case, ids))
    else:
        cases = [run_case(i) for i in ids]
    return {"suite": name, "ok": all(c["ok"] for c in cases), "cases": cases}
