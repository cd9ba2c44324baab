"""Satisfaction in finite lattices (vectorized) and in the symbolic M_kappa."""

from __future__ import annotations

import numpy as np

from ..lattice import BOT, TOP, MLattice
from .syntax import And, Const, Eq, Exists, Implies, Join, Not, Or, Var, free_vars

__all__ = ["eval_finite", "truth_table", "eval_m_lattice", "eval_term_m"]


class _Vec:
    """Evaluate over all values of the bound variables at once.

    Each subformula becomes a boolean array with one axis per variable in
    scope; unused axes have length one and broadcast.
    """

    def __init__(self, L, env):
        self.L = L
        self.meet, self.join = L.meet_table, L.join_table
        self.n = len(L)
        self.env = env

    def term(self, t, axes, ndim):
        if isinstance(t, Var):
            if t.name in axes:
                shape = [1] * ndim
                shape[axes[t.name]] = self.n
                return np.arange(self.n).reshape(shape)
            if t.name not in self.env:
                raise KeyError(f"unbound variable {t.name!r}")
            return np.full((1,) * ndim, self.env[t.name])
        if isinstance(t, Const):
            return np.full((1,) * ndim, self.L.top if t.value else self.L.bot)
        table = self.join if isinstance(t, Join) else self.meet
        return table[self.term(t.left, axes, ndim), self.term(t.right, axes, ndim)]

    def formula(self, f, axes, ndim):
        if isinstance(f, Eq):
            return self.term(f.left, axes, ndim) == self.term(f.right, axes, ndim)
        if isinstance(f, Not):
            return ~self.formula(f.body, axes, ndim)
        if isinstance(f, And):
            return self.formula(f.left, axes, ndim) & self.formula(f.right, axes, ndim)
        if isinstance(f, Or):
            return self.formula(f.left, axes, ndim) | self.formula(f.right, axes, ndim)
        if isinstance(f, Implies):
            return ~self.formula(f.left, axes, ndim) | self.formula(f.right, axes, ndim)
        inner = dict(axes)
        inner[f.var] = ndim
        body = self.formula(f.body, inner, ndim + 1)
        red = np.any if isinstance(f, Exists) else np.all
        return red(body, axis=ndim)


def eval_finite(L, f, env=None) -> bool:
    env = dict(env or {})
    missing = [v for v in free_vars(f) if v not in env]
    if missing:
        raise KeyError(f"unbound variables {missing}")
    return bool(np.asarray(_Vec(L, env).formula(f, {}, 0)).item())


def truth_table(L, f, variables=None):
    """Boolean array T with T[a0, a1, ...] = L |= f(a0, a1, ...)."""
    variables = list(variables) if variables is not None else free_vars(f)
    axes = {v: i for i, v in enumerate(variables)}
    k = len(variables)
    out = _Vec(L, {}).formula(f, axes, k)
    return np.broadcast_to(out, (len(L),) * k).copy()


def eval_term_m(t, env):
    if isinstance(t, Var):
        if t.name not in env:
            raise KeyError(f"unbound variable {t.name!r}")
        return env[t.name]
    if isinstance(t, Const):
        return TOP if t.value else BOT
    op = MLattice.join if isinstance(t, Join) else MLattice.meet
    return op(eval_term_m(t.left, env), eval_term_m(t.right, env))


def _candidates(M, env):
    named = sorted({v for v in env.values() if v >= 0})
    out = [BOT, TOP] + named
    fresh = next(i for i in range(len(named) + 1) if i not in named)
    if not M.finite or fresh < M.kappa:
        out.append(fresh)
    return out


def eval_m_lattice(M: MLattice, f, env=None) -> bool:
    """Satisfaction in M_kappa.

    Any permutation of atoms fixing the named ones is an automorphism, so a
    quantifier only needs to try 0, 1, the atoms already named and the
    least unnamed atom (when one exists).
    """
    env = dict(env or {})
    for v in env.values():
        if not M.contains(v):
            raise ValueError(f"{v} is not an element of M_{M.kappa}")
    return _eval_m(M, f, env)


def _eval_m(M, f, env):
    if isinstance(f, Eq):
        return eval_term_m(f.left, env) == eval_term_m(f.right, env)
    if isinstance(f, Not):
        return not _eval_m(M, f.body, env)
    if isinstance(f, And):
        return _eval_m(M, f.left, env) and _eval_m(M, f.right, env)
    if isinstance(f, Or):
        return _eval_m(M, f.left, env) or _eval_m(M, f.right, env)
    if isinstance(f, Implies):
        return (not _eval_m(M, f.left, env)) or _eval_m(M, f.right, env)
    outer = {k: v for k, v in env.items() if k != f.var}
    results = (_eval_m(M, f.body, {**outer, f.var: c}) for c in _candidates(M, outer))
    return any(results) if isinstance(f, Exists) else all(results)
