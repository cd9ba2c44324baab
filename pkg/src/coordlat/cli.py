"""Command-line front end.

Every command builds a JSON report (schema ``coordlat/1``); text output is
rendered from that report.  Exit codes: 0 when a verdict was computed
(whatever it says), 1 on input errors or failing suites, 2 when a budget
is exhausted.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from .gfield import BudgetExceeded, prime_power
from .lattice import (FiniteLattice, boolean_lattice, center_of, chain, check_3frame, has_large_partial_3frame,
                      is_2distributive, is_complemented, is_modular, is_sectionally_complemented, m_lattice,
                      m_name, m_parse, pentagon, submodule_lattice, MLattice, OMEGA)
from .logic import CORPUS, FiniteProduct, determining_sequence, isotonicity_check, validate_determining_sequence
from .logic.boolprod import elementary_submodel_report
from .logic.evaluate import eval_finite, eval_m_lattice
from .logic.fv import PART_BUDGET
from .logic.syntax import ParseError, free_vars, parse, parse_formula_file, quantifier_rank, to_text
from .ring import l_of_r, ring_from_json

SCHEMA = "coordlat/1"
DEFAULT_BUDGETS = {"carrier": 1 << 16, "rank": 2, "levels": 3}
PROPS = ("modular", "2distributive", "complemented", "sectionally_complemented", "center", "3frame")


class InputError(Exception):
    pass


class _ArgParser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(f"{self.prog}: {message}")


# -- helpers --------------------------------------------------------------------------

def _budgets(args):
    budgets = dict(DEFAULT_BUDGETS)
    env = os.environ.get("COORDLAT_BUDGET_OVERRIDE")
    if env:
        try:
            override = json.loads(env)
        except json.JSONDecodeError as err:
            raise InputError(f"COORDLAT_BUDGET_OVERRIDE is not JSON: {err}") from None
        unknown = set(override) - set(budgets)
        if unknown:
            raise InputError(f"unknown budgets in COORDLAT_BUDGET_OVERRIDE: {sorted(unknown)}")
        budgets.update(override)
    for key in budgets:
        flag = getattr(args, f"budget_{key}", None)
        if flag is not None:
            budgets[key] = flag
    for key, v in budgets.items():
        if not isinstance(v, int) or v <= 0:
            raise InputError(f"budget {key} must be a positive integer")
    return budgets


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as err:
        raise InputError(f"cannot read {path}: {err.strerror}") from None
    except json.JSONDecodeError as err:
        raise InputError(f"{path} is not valid JSON: {err}") from None


def _builtin_lattice(name):
    name = name.lower()
    if name.startswith("m") and name[1:].isdigit():
        return m_lattice(int(name[1:]))
    if name.startswith("b") and name[1:].isdigit():
        return boolean_lattice(int(name[1:]))
    if name.startswith("chain") and name[5:].isdigit():
        return chain(int(name[5:]))
    if name in ("n5", "pentagon"):
        return pentagon()
    if name.startswith("sub:"):
        try:
            p, n, d = map(int, name[4:].split(":"))
        except ValueError:
            raise InputError("sub lattices are written sub:p:n:d") from None
        return submodule_lattice(p, n, d)
    raise InputError(f"unknown builtin lattice {name!r}")


def _lattice_from_json(d):
    if "ring" in d:
        return l_of_r(ring_from_json(d["ring"]))[0]
    if "builtin" in d:
        return _builtin_lattice(d["builtin"])
    if d.get("kind") == "m":
        return m_lattice(int(d["n"]))
    if "leq" not in d:
        raise InputError("lattice JSON needs 'leq' (or 'ring', 'builtin', or kind 'm')")
    try:
        return FiniteLattice.from_json(d)
    except (ValueError, TypeError) as err:
        raise InputError(f"not a lattice: {err}") from None


def _load_lattice(args, budgets):
    if getattr(args, "builtin", None):
        L = _builtin_lattice(args.builtin)
    elif getattr(args, "input", None):
        L = _lattice_from_json(_read_json(args.input))
    else:
        raise InputError("give --input FILE or --builtin NAME")
    if len(L) > budgets["carrier"]:
        raise BudgetExceeded(f"lattice has {len(L)} elements, over the carrier budget")
    return L


def _jsonable(x):
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if hasattr(x, "item"):
        return x.item()
    return x


# -- lattice ----------------------------------------------------------------------------

def cmd_lattice_check(args, budgets):
    L = _load_lattice(args, budgets)
    props = [p.strip() for p in args.props.split(",") if p.strip()]
    unknown = set(props) - set(PROPS)
    if unknown:
        raise InputError(f"unknown properties {sorted(unknown)}; known: {', '.join(PROPS)}")
    out = {}
    for prop in props:
        if prop == "modular":
            c = is_modular(L)
        elif prop == "2distributive":
            c = is_2distributive(L)
        elif prop == "complemented":
            c = is_complemented(L)
        elif prop == "sectionally_complemented":
            c = is_sectionally_complemented(L)
        elif prop == "center":
            cen = center_of(L)
            out[prop] = {"value": [L.names[u] for u in cen], "indices": cen}
            continue
        else:
            w = has_large_partial_3frame(L)
            out[prop] = {"value": w is not None, "witness": list(w) if w else None}
            continue
        out[prop] = {"value": bool(c), "witness": _jsonable(c.witness)}
    return "computed", {"size": len(L), "properties": out, "lattice": L.to_json()}


# -- seqlat ------------------------------------------------------------------------------

def _load_sections(args, budgets):
    from .seqlat import make_K, make_L, make_dirunion_L, section_lattice_from_json
    if args.builtin:
        makers = {"k": make_K, "l": make_L, "dirunion": make_dirunion_L}
        if args.builtin.lower() not in makers:
            raise InputError(f"unknown builtin section lattice {args.builtin!r} (K, L, dirunion)")
        return makers[args.builtin.lower()](budgets["levels"])
    if not args.space:
        raise InputError("give --space FILE or --builtin K|L|dirunion")
    d = _read_json(args.space)
    try:
        KL = section_lattice_from_json(d)
    except (KeyError, ValueError, TypeError) as err:
        raise InputError(f"bad space descriptor: {err}") from None
    if any(c.levels > budgets["levels"] for c in KL.space.classes):
        raise BudgetExceeded("space has more levels than the level budget")
    return KL


def cmd_seqlat_obstruction(args, budgets):
    from .seqlat import coordinatization_obstruction
    KL = _load_sections(args, budgets)
    if not prime_power(args.prime) or prime_power(args.prime)[1] != 1:
        raise InputError(f"{args.prime} is not prime")
    ob = coordinatization_obstruction(KL, args.prime)
    pat = ob.pattern
    pattern = {"positions": pat.positions, "tails": {str(k): v for k, v in pat.tails.items()},
               "limits": pat.limits}
    return ob.status, {"prime": args.prime, "pattern": pattern, "witness": _jsonable(ob.witness),
                       "lattice": KL.to_json()}


# -- logic -------------------------------------------------------------------------------

def _formulas(arg):
    """A formula file (one per line) or a literal formula."""
    if os.path.isfile(arg):
        with open(arg, encoding="utf-8") as fh:
            return parse_formula_file(fh.read())
    return [parse(arg)]


def _parse_env(text, decode):
    env = {}
    for item in filter(None, (text or "").split(",")):
        if "=" not in item:
            raise InputError(f"parameter {item!r} is not name=value")
        k, v = item.split("=", 1)
        env[k.strip()] = decode(v.strip())
    return env


def cmd_logic_eval(args, budgets):
    fs = _formulas(args.formula)
    d = _read_json(args.structure) if args.structure else {"kind": "m", "n": 3}
    rows = []
    for f in fs:
        if quantifier_rank(f) > budgets["rank"] + 1:
            raise BudgetExceeded(f"formula rank {quantifier_rank(f)} is over the rank budget")
        if d.get("kind") == "m" and "kappa" in d:
            kappa = OMEGA if d["kappa"] == "omega" else int(d["kappa"])
            M = MLattice(kappa)
            env = _parse_env(args.env, m_parse)
            value = eval_m_lattice(M, f, env)
            env_out = {k: m_name(v) for k, v in env.items()}
        else:
            L = _lattice_from_json(d)
            if len(L) > budgets["carrier"]:
                raise BudgetExceeded("structure exceeds the carrier budget")
            where = {n: i for i, n in enumerate(L.names)}

            def decode(v):
                if v in where:
                    return where[v]
                if v.isdigit() and int(v) < len(L):
                    return int(v)
                raise InputError(f"{v!r} is not an element")

            env = _parse_env(args.env, decode)
            missing = [v for v in free_vars(f) if v not in env]
            if missing:
                raise InputError(f"no values for free variables {missing}")
            value = eval_finite(L, f, env)
            env_out = {k: L.names[v] for k, v in env.items()}
        rows.append({"formula": to_text(f), "env": env_out, "value": value})
    return "computed", {"rows": rows}


def _product_from_json(d):
    stalks = d.get("stalks")
    if not stalks:
        raise InputError("product JSON needs a nonempty 'stalks' list")
    return FiniteProduct([_lattice_from_json(s) for s in stalks])


def cmd_logic_fv(args, budgets):
    fs = _formulas(args.formula) if args.formula else list(CORPUS)
    B = _product_from_json(_read_json(args.validate_on)) if args.validate_on else None
    if B is not None and len(B.lattice()) > budgets["carrier"]:
        raise BudgetExceeded("product exceeds the carrier budget")
    rows = []
    for f in fs:
        if quantifier_rank(f) > budgets["rank"]:
            raise BudgetExceeded(f"formula rank {quantifier_rank(f)} is over the rank budget {budgets['rank']}")
        ds = determining_sequence(f)
        row = {"formula": to_text(f), "width": ds.width, "parts": [to_text(p) for p in ds.parts]}
        if B is not None:
            n, fails = validate_determining_sequence(ds, B, f)
            row.update(checked=n, failures=[list(t) for t in fails[:10]])
        if args.isotonicity:
            ok, cex = isotonicity_check(ds, max_points=4)
            row["isotone"] = ok
        rows.append(row)
    bad = any(r.get("failures") for r in rows) or any(r.get("isotone") is False for r in rows)
    return ("failed" if bad else "ok"), {"rows": rows, "part_budget": PART_BUDGET}


def cmd_logic_submodel(args, budgets):
    from .seqlat import make_K, make_L
    corpus = _formulas(args.corpus) if args.corpus else list(CORPUS)
    rows = elementary_submodel_report(make_K(budgets["levels"]), make_L(budgets["levels"]), corpus,
                                      rank=args.rank or budgets["rank"], samples=args.samples, seed=args.seed)
    out = [{**r, "formula": to_text(r["formula"])} for r in rows]
    ok = all(r["agree"] and r["eps"] for r in rows)
    return ("agree" if ok else "disagree"), {"rows": out}


# -- coord -------------------------------------------------------------------------------

def cmd_coord_mn(args, budgets):
    from .coord import coordinatizable_mn
    if args.n < 3:
        raise InputError("n must be at least 3")
    if (args.n + 3) ** 2 > budgets["carrier"]:
        raise BudgetExceeded("M_n exceeds the carrier budget")
    v = coordinatizable_mn(args.n)
    return v.status, {"n": args.n, **v.to_json()}


def cmd_coord_eta(args, budgets):
    from .coord import eta_q
    try:
        eta = eta_q(args.q)
    except ValueError as err:
        raise InputError(str(err)) from None
    ok, problems = eta.check()
    atoms = {f"alpha_{k}": m_name(eta(eta.alpha(k))) for k in range(args.q + 1)}
    return ("verified" if ok else "failed"), {"q": args.q, "table": eta.table(), "atoms": atoms,
                                               "problems": problems}


def cmd_coord_epsilon(args, budgets):
    from .coord import epsilon_p
    if args.levels > budgets["levels"]:
        raise BudgetExceeded("levels over the level budget")
    ok, checks = epsilon_p(args.p, args.levels).verify(max_exc=args.max_exceptions)
    return ("verified" if ok else "failed"), {"p": args.p, "levels": args.levels, "checks": checks}


def cmd_coord_semisimple(args, budgets):
    from .coord import semisimple_pipeline
    rep = semisimple_pipeline(args.p, args.deg, args.dim, budget=budgets["carrier"])
    return rep.pop("status"), rep


def cmd_coord_demo(args, budgets):
    from .coord import directed_union_demo
    if args.name != "directed-union":
        raise InputError(f"unknown demo {args.name!r}")
    if args.levels > budgets["levels"]:
        raise BudgetExceeded("levels over the level budget")
    rep = directed_union_demo(args.levels)
    return rep.pop("status"), rep


# -- suites and replay -----------------------------------------------------------------

def cmd_suite(args, budgets):
    from .suites import SUITES, run_suite
    if args.name not in SUITES:
        raise InputError(f"unknown suite {args.name!r}; known: {', '.join(sorted(SUITES))}")
    rep = run_suite(args.name, jobs=args.jobs)
    if args.no_timings:
        rep = _strip_timings(rep)
    return ("passed" if rep["ok"] else "failed"), rep


def _strip_timings(x):
    if isinstance(x, dict):
        return {k: _strip_timings(v) for k, v in x.items() if k != "seconds"}
    if isinstance(x, list):
        return [_strip_timings(v) for v in x]
    return x


def _replay_mn(report):
    """Independent check of a coord mn verdict."""
    res = report["result"]
    n = res["n"]
    if report["status"] == "not_coordinatizable":
        q = n - 1
        factors = [d for d in range(2, q + 1) if q % d == 0 and all(d % e for e in range(2, d))]
        return len(factors) > 1, f"{q} has prime factors {factors}"
    w = res["witness"]
    L, _ = l_of_r(ring_from_json(w["ring"]))
    target = FiniteLattice.from_json(w["target"])
    f = w["iso"]
    import numpy as np
    ok = sorted(f) == list(range(len(target))) and len(L) == len(target) and \
        bool(np.array_equal(L.leq, target.leq[np.ix_(f, f)])) and \
        sorted(target.leq.sum(axis=0).tolist()) == sorted(m_lattice(n).leq.sum(axis=0).tolist())
    return ok, "witness order isomorphism recomputed"


def _replay_lattice(report):
    L = FiniteLattice.from_json(report["result"]["lattice"])
    notes = []
    ok = True
    for prop, r in report["result"]["properties"].items():
        if prop == "modular" and not r["value"]:
            x, y, z = r["witness"]
            m, j = L.meet_table, L.join_table
            good = m[x, j[y, m[x, z]]] != j[m[x, y], m[x, z]]
        elif prop == "3frame" and r["value"]:
            good = bool(check_3frame(L, tuple(r["witness"])))
        else:
            continue
        notes.append(f"{prop} witness {'replays' if good else 'does not replay'}")
        ok = ok and good
    return ok, "; ".join(notes) or "no witnesses to replay"


def cmd_replay(args, budgets):
    report = _read_json(args.input)
    if report.get("schema") != SCHEMA:
        raise InputError(f"not a {SCHEMA} report")
    argv = report.get("argv")
    if not argv:
        raise InputError("report has no argv to replay")
    special = {"coord mn": _replay_mn, "lattice check": _replay_lattice}.get(report.get("command"))
    notes = []
    ok = True
    if special and report["status"] != "error":
        good, note = special(report)
        ok, notes = ok and good, [note]
    again = build_report(argv)[0]
    same = _strip_timings(again["result"]) == _strip_timings(report["result"]) and again["status"] == report["status"]
    notes.append("rerun matches" if same else "rerun differs")
    return ("replayed" if ok and same else "mismatch"), {"command": report.get("command"), "notes": notes}


# -- parser --------------------------------------------------------------------------------

def _parser():
    common = _ArgParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--out", help="write the report here as well")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget-carrier", type=int, dest="budget_carrier")
    common.add_argument("--budget-rank", type=int, dest="budget_rank")
    common.add_argument("--budget-levels", type=int, dest="budget_levels")

    ap = _ArgParser(prog="coordlat", description="Exact checks for coordinatizable lattices.")
    top = ap.add_subparsers(dest="group", required=True)

    def leaf(sub, name, fn, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(fn=fn)
        return p

    g = top.add_parser("lattice", help="properties of finite lattices").add_subparsers(dest="cmd", required=True)
    p = leaf(g, "check", cmd_lattice_check, "check lattice properties")
    p.add_argument("--input")
    p.add_argument("--builtin", help="M3, B3, N5, chain4, sub:2:1:3, ...")
    p.add_argument("--props", default="modular")

    g = top.add_parser("seqlat", help="sequence lattices and the central obstruction").add_subparsers(dest="cmd", required=True)
    p = leaf(g, "obstruction", cmd_seqlat_obstruction, "central c_p obstruction")
    p.add_argument("--space")
    p.add_argument("--builtin", help="K, L or dirunion")
    p.add_argument("--prime", type=int, required=True)

    g = top.add_parser("logic", help="formulas, evaluation and determining sequences").add_subparsers(dest="cmd", required=True)
    p = leaf(g, "eval", cmd_logic_eval, "evaluate formulas")
    p.add_argument("--structure")
    p.add_argument("--formula", required=True)
    p.add_argument("--env", help="a=1,b=a0")
    p = leaf(g, "fv", cmd_logic_fv, "determining sequences")
    p.add_argument("--formula")
    p.add_argument("--validate-on", dest="validate_on")
    p.add_argument("--isotonicity", action="store_true")
    p = leaf(g, "submodel", cmd_logic_submodel, "K versus L on a corpus")
    p.add_argument("--rank", type=int)
    p.add_argument("--corpus")
    p.add_argument("--samples", type=int, default=10)

    g = top.add_parser("coord", help="coordinatizing rings and the maps eta and epsilon").add_subparsers(dest="cmd", required=True)
    p = leaf(g, "mn", cmd_coord_mn, "is M_n coordinatizable")
    p.add_argument("--n", type=int, required=True)
    p = leaf(g, "eta", cmd_coord_eta, "the isomorphism eta_q")
    p.add_argument("--q", type=int, required=True)
    p = leaf(g, "epsilon", cmd_coord_epsilon, "verify epsilon_p")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--levels", type=int, default=3)
    p.add_argument("--max-exceptions", type=int, default=2, dest="max_exceptions")
    p = leaf(g, "semisimple", cmd_coord_semisimple, "Sub E versus L(End E)")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--deg", type=int, default=1)
    p.add_argument("--dim", type=int, default=2)
    p = leaf(g, "demo", cmd_coord_demo, "narrative pipelines")
    p.add_argument("name", choices=("directed-union",))
    p.add_argument("--levels", type=int, default=2)

    p = leaf(top, "suite", cmd_suite, "run a named suite")
    p.add_argument("name")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--no-timings", action="store_true", dest="no_timings")

    p = leaf(top, "replay", cmd_replay, "re-check a saved report")
    p.add_argument("--input", required=True)
    return ap


def build_report(argv):
    """(report, exit code, parsed args or None) for an argument list."""
    report = {"schema": SCHEMA, "argv": list(argv)}
    try:
        args = _parser().parse_args(argv)
    except InputError as err:
        report.update(command=None, status="error", error={"code": "input_error", "message": str(err)})
        return report, 1, None
    report["command"] = " ".join(x for x in (args.group, getattr(args, "cmd", None)) if x)
    random.seed(args.seed)
    try:
        budgets = report["budgets"] = _budgets(args)
        status, result = args.fn(args, budgets)
        report.update(status=status, result=_jsonable(result))
        code = 1 if (args.group == "suite" and status == "failed") else 0
    except BudgetExceeded as err:
        report.update(status="error", error={"code": "budget_exhausted", "message": str(err)})
        code = 2
    except (InputError, ParseError, ValueError, KeyError) as err:
        report.update(status="error", error={"code": "input_error", "message": str(err)})
        code = 1
    return report, code, args


def render_text(report, indent=0):
    """Plain-text view of a report."""
    lines = []

    def walk(x, pad):
        if isinstance(x, dict):
            for k, v in x.items():
                if isinstance(v, (dict, list)) and v:
                    lines.append(f"{pad}{k}:")
                    walk(v, pad + "  ")
                else:
                    lines.append(f"{pad}{k}: {json.dumps(v)}")
        elif isinstance(x, list):
            if all(not isinstance(v, (dict, list)) for v in x):
                lines.append(f"{pad}{json.dumps(x)}")
            else:
                for v in x:
                    lines.append(f"{pad}-")
                    walk(v, pad + "  ")

    head = {k: report[k] for k in ("command", "status") if k in report}
    walk(head, " " * indent)
    if "error" in report:
        walk({"error": report["error"]}, " " * indent)
    if report.get("command") == "suite" and "result" in report:
        for c in report["result"]["cases"]:
            t = f" ({c['seconds']:.2f}s)" if "seconds" in c else ""
            lines.append(f"criterion {c['id']:>2}: {'PASS' if c['ok'] else 'FAIL'}  {c['title']}{t}")
    elif "result" in report:
        walk({k: v for k, v in report["result"].items() if k not in ("lattice", "status")}, " " * indent)
    return "\n".join(lines)


def _raw_format(argv):
    # usage errors leave args unset, so look for the flag by hand
    for i, a in enumerate(argv):
        if a == "--format" and i + 1 < len(argv):
            return argv[i + 1]
        if a.startswith("--format="):
            return a.split("=", 1)[1]
    return "text"


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    report, code, args = build_report(argv)
    as_json = json.dumps(report, indent=2, sort_keys=True)
    fmt = args.format if args is not None else _raw_format(argv)
    print(as_json if fmt == "json" else render_text(report))
    if args is not None and args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(as_json + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
