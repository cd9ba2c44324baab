"""Dense matrices over a FieldDesc, as tuples of tuples of element codes."""

from __future__ import annotations

from itertools import combinations, product

__all__ = [
    "zero", "identity", "mat_add", "mat_sub", "mat_neg", "mat_mul", "mat_scale",
    "transpose", "rref", "rank", "mat_inverse", "quasi_inverse",
    "column_space", "subspaces", "projection", "is_subspace_of", "span",
]


def zero(F, n, m=None):
    return tuple((0,) * (n if m is None else m) for _ in range(n))


def identity(F, n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_add(F, a, b):
    return tuple(tuple(F.add(x, y) for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_sub(F, a, b):
    return tuple(tuple(F.sub(x, y) for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_neg(F, a):
    return tuple(tuple(F.neg(x) for x in r) for r in a)


def mat_scale(F, c, a):
    return tuple(tuple(F.mul(c, x) for x in r) for r in a)


def mat_mul(F, a, b):
    mul, add = F.mul_table, F.add_table
    cols = list(zip(*b))
    out = []
    for r in a:
        row = []
        for c in cols:
            acc = 0
            for x, y in zip(r, c):
                if x and y:
                    acc = add[acc, mul[x, y]]
            row.append(int(acc))
        out.append(tuple(row))
    return tuple(out)


def transpose(a):
    return tuple(zip(*a)) if a else ()


def rref(F, a):
    """Reduced row echelon form.

    Returns ``(r, e, pivots)`` with ``e`` invertible and ``e @ a == r``.
    """
    rows = [list(r) for r in a]
    n = len(rows)
    m = len(rows[0]) if rows else 0
    e = [list(r) for r in identity(F, n)]
    pivots = []
    top = 0
    for col in range(m):
        piv = next((i for i in range(top, n) if rows[i][col]), None)
        if piv is None:
            continue
        rows[top], rows[piv] = rows[piv], rows[top]
        e[top], e[piv] = e[piv], e[top]
        inv = F.inv(rows[top][col])
        rows[top] = [F.mul(inv, x) for x in rows[top]]
        e[top] = [F.mul(inv, x) for x in e[top]]
        for i in range(n):
            if i != top and rows[i][col]:
                c = rows[i][col]
                rows[i] = [F.sub(x, F.mul(c, y)) for x, y in zip(rows[i], rows[top])]
                e[i] = [F.sub(x, F.mul(c, y)) for x, y in zip(e[i], e[top])]
        pivots.append(col)
        top += 1
        if top == n:
            break
    return tuple(map(tuple, rows)), tuple(map(tuple, e)), tuple(pivots)


def rank(F, a):
    return len(rref(F, a)[2])


def mat_inverse(F, a):
    r, e, piv = rref(F, a)
    if len(piv) != len(a):
        raise ZeroDivisionError("singular matrix")
    return e


def quasi_inverse(F, a):
    """A matrix b with a b a == a, read off the reduced row echelon form."""
    r, e, piv = rref(F, a)
    n = len(a)
    bp = [[0] * n for _ in range(n)]
    for i, c in enumerate(piv):
        bp[c][i] = 1
    return mat_mul(F, tuple(map(tuple, bp)), e)


def span(F, vectors, d):
    """Canonical basis (rref rows) of the span of the given vectors."""
    vectors = [tuple(v) for v in vectors]
    if not vectors:
        return ()
    r, _, piv = rref(F, vectors)
    return r[: len(piv)]


def column_space(F, a):
    return span(F, transpose(a), len(a))


def is_subspace_of(F, u, w):
    """u, w canonical bases; True iff span(u) <= span(w)."""
    return len(span(F, list(u) + list(w), 0)) == len(w)


def subspaces(F, d, dim=None):
    """All subspaces of F^d as canonical rref bases, ordered by dimension."""
    q = F.order
    dims = range(d + 1) if dim is None else [dim]
    out = []
    for r in dims:
        for piv in combinations(range(d), r):
            free = [(i, j) for i in range(r) for j in range(piv[i] + 1, d) if j not in piv]
            for vals in product(range(q), repeat=len(free)):
                rows = [[0] * d for _ in range(r)]
                for i, c in enumerate(piv):
                    rows[i][c] = 1
                for (i, j), v in zip(free, vals):
                    rows[i][j] = v
                out.append(tuple(map(tuple, rows)))
    return out


def projection(F, basis, d):
    """Idempotent matrix whose column space is span(basis) (basis in rref)."""
    p = [[0] * d for _ in range(d)]
    for b in basis:
        c = next(j for j, x in enumerate(b) if x)
        for i in range(d):
            p[i][c] = b[i]
    return tuple(map(tuple, p))
