"""First-order syntax for the language of lattices.

Grammar (ASCII)::

    formula := ('E' | 'A') ident '.' formula
             | disj ('->' formula)?
    disj    := conj ('||' conj)*
    conj    := unary ('&&' unary)*
    unary   := '~' unary | quantified | atom | '(' formula ')'
    atom    := term ('=' | '<=') term
    term    := meet ('\\/' meet)*
    meet    := prim ('/\\' prim)*
    prim    := ident | '0' | '1' | '(' term ')'

``s <= t`` is read as ``s /\\ t = s``.  ``E`` and ``A`` are reserved.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

__all__ = [
    "Var", "Const", "Join", "Meet", "Eq", "Not", "And", "Or", "Implies", "Exists", "Forall",
    "Term", "Formula", "ParseError", "parse", "to_text", "free_vars", "quantifier_rank",
    "parse_formula_file", "le", "substitute",
]


# -- terms --

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    value: int  # 0 or 1


@dataclass(frozen=True)
class Join:
    left: object
    right: object


@dataclass(frozen=True)
class Meet:
    left: object
    right: object


Term = Var | Const | Join | Meet


# -- formulas --

@dataclass(frozen=True)
class Eq:
    left: object
    right: object


@dataclass(frozen=True)
class Not:
    body: object


@dataclass(frozen=True)
class And:
    left: object
    right: object


@dataclass(frozen=True)
class Or:
    left: object
    right: object


@dataclass(frozen=True)
class Implies:
    left: object
    right: object


@dataclass(frozen=True)
class Exists:
    var: str
    body: object


@dataclass(frozen=True)
class Forall:
    var: str
    body: object


Formula = Eq | Not | And | Or | Implies | Exists | Forall


def le(s, t):
    return Eq(Meet(s, t), s)


class ParseError(ValueError):
    def __init__(self, msg, pos):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:(->|\|\||&&|\\/|/\\|<=|[~=().])|([A-Za-z_][A-Za-z0-9_']*)|([01])(?![0-9]))")


def _tokenize(text):
    toks, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos:].lstrip()[:1]!r}", pos)
        sym, ident, const = m.groups()
        start = m.start(m.lastindex)
        if sym:
            toks.append(("sym", sym, start))
        elif ident:
            toks.append(("kw" if ident in ("E", "A") else "id", ident, start))
        else:
            toks.append(("const", int(const), start))
        pos = m.end()
    toks.append(("end", None, len(text)))
    return toks


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None, value=None):
        tok = self.toks[self.i]
        if (kind and tok[0] != kind) or (value is not None and tok[1] != value):
            want = value if value is not None else kind
            raise ParseError(f"expected {want!r}, found {tok[1]!r}", tok[2])
        self.i += 1
        return tok

    def at(self, value):
        tok = self.peek()
        return tok[0] == "sym" and tok[1] == value

    def formula(self):
        if self.peek()[0] == "kw":
            return self.quantified()
        left = self.disj()
        if self.at("->"):
            self.take()
            return Implies(left, self.formula())
        return left

    def quantified(self):
        q = self.take("kw")[1]
        var = self.take("id")[1]
        self.take("sym", ".")
        body = self.formula()
        return Exists(var, body) if q == "E" else Forall(var, body)

    def disj(self):
        f = self.conj()
        while self.at("||"):
            self.take()
            f = Or(f, self.conj())
        return f

    def conj(self):
        f = self.unary()
        while self.at("&&"):
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self):
        if self.at("~"):
            self.take()
            return Not(self.unary())
        if self.peek()[0] == "kw":
            return self.quantified()
        save = self.i
        try:
            return self.atom()
        except ParseError as err:
            if not self.toks[save][1] == "(":
                raise
            first = err
        self.i = save
        self.take("sym", "(")
        try:
            f = self.formula()
            self.take("sym", ")")
        except ParseError as err:
            raise (first if first.pos > err.pos else err) from None
        return f

    def atom(self):
        s = self.term()
        tok = self.peek()
        if self.at("="):
            self.take()
            return Eq(s, self.term())
        if self.at("<="):
            self.take()
            return le(s, self.term())
        raise ParseError(f"expected '=' or '<=', found {tok[1]!r}", tok[2])

    def term(self):
        t = self.meet()
        while self.at("\\/"):
            self.take()
            t = Join(t, self.meet())
        return t

    def meet(self):
        t = self.prim()
        while self.at("/\\"):
            self.take()
            t = Meet(t, self.prim())
        return t

    def prim(self):
        kind, val, pos = self.peek()
        if kind == "id":
            self.take()
            return Var(val)
        if kind == "const":
            self.take()
            return Const(val)
        if self.at("("):
            self.take()
            t = self.term()
            self.take("sym", ")")
            return t
        raise ParseError(f"expected a term, found {val!r}", pos)


def parse(text: str):
    p = _Parser(text)
    f = p.formula()
    p.take("end")
    return f


def _term_text(t, top=True):
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Const):
        return str(t.value)
    op = " \\/ " if isinstance(t, Join) else " /\\ "
    s = _term_text(t.left, False) + op + _term_text(t.right, False)
    return s if top else f"({s})"


def to_text(f) -> str:
    """Fully parenthesized text; ``parse(to_text(f)) == f``."""
    if isinstance(f, Eq):
        return f"{_term_text(f.left)} = {_term_text(f.right)}"
    if isinstance(f, Not):
        return f"~({to_text(f.body)})"
    if isinstance(f, (And, Or, Implies)):
        op = {And: "&&", Or: "||", Implies: "->"}[type(f)]
        return f"({to_text(f.left)} {op} {to_text(f.right)})"
    if isinstance(f, (Exists, Forall)):
        q = "E" if isinstance(f, Exists) else "A"
        return f"({q} {f.var}. {to_text(f.body)})"
    raise TypeError(f"not a formula: {f!r}")


def _term_vars(t, out):
    if isinstance(t, Var):
        out.setdefault(t.name, None)
    elif isinstance(t, (Join, Meet)):
        _term_vars(t.left, out)
        _term_vars(t.right, out)


def _free(f, bound, out):
    if isinstance(f, Eq):
        found = {}
        _term_vars(f.left, found)
        _term_vars(f.right, found)
        for v in found:
            if v not in bound:
                out.setdefault(v, None)
    elif isinstance(f, Not):
        _free(f.body, bound, out)
    elif isinstance(f, (And, Or, Implies)):
        _free(f.left, bound, out)
        _free(f.right, bound, out)
    else:
        _free(f.body, bound | {f.var}, out)


def free_vars(f) -> list:
    """Free variables in order of first occurrence."""
    out = {}
    _free(f, frozenset(), out)
    return list(out)


def quantifier_rank(f) -> int:
    if isinstance(f, Eq):
        return 0
    if isinstance(f, Not):
        return quantifier_rank(f.body)
    if isinstance(f, (And, Or, Implies)):
        return max(quantifier_rank(f.left), quantifier_rank(f.right))
    return 1 + quantifier_rank(f.body)


def _subst_term(t, m):
    if isinstance(t, Var):
        return m.get(t.name, t)
    if isinstance(t, Const):
        return t
    return type(t)(_subst_term(t.left, m), _subst_term(t.right, m))


def substitute(f, m: dict):
    """Replace free variables by terms (no capture check: callers use fresh names)."""
    if isinstance(f, Eq):
        return Eq(_subst_term(f.left, m), _subst_term(f.right, m))
    if isinstance(f, Not):
        return Not(substitute(f.body, m))
    if isinstance(f, (And, Or, Implies)):
        return type(f)(substitute(f.left, m), substitute(f.right, m))
    inner = {k: v for k, v in m.items() if k != f.var}
    return type(f)(f.var, substitute(f.body, inner))


def parse_formula_file(text: str) -> list:
    """One formula per line; blank lines and '#' comments skipped."""
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(parse(line))
    return out
