"""A fixed corpus of lattice formulas (quantifier rank <= 2, free + rank <= 3)."""

from .syntax import parse

CORPUS_TEXT = r"""
a = b
a <= b
a /\ b = 0
a \/ b = 1
~(a = 0) && ~(a = 1)
a /\ b = 0 && a \/ b = 1
a = 0 || a = 1
~(a /\ b = 0) -> a = b
E x. x /\ a = 0 && x \/ a = 1
E x. ~(x = a) && x /\ a = 0 && x \/ a = 1
E x. x \/ a = 1 && ~(x = 1) && x /\ a = 0
E x. ~(x = 0) && ~(x = a) && x <= a
E z. a \/ z = b \/ z && a /\ z = 0 && b /\ z = 0
E x. a /\ x = 0 && ~(x = 0) && x <= b
a \/ b = 1 -> E x. x <= a && x \/ b = 1 && x /\ b = 0
A x. x <= a || x /\ a = 0
A x. x /\ a = 0 -> x \/ a = 1 || x = 0
A x. E y. x <= y && ~(y = 1)
A x. E y. x /\ y = 0 && x \/ y = 1
E x. A y. y <= x
A x. A y. x /\ (y \/ (x /\ a)) = (x /\ y) \/ (x /\ a)
A x. E y. ~(y = x) && x /\ y = 0
E x. A y. x /\ y = 0 -> y <= a
"""

CORPUS = [parse(line) for line in CORPUS_TEXT.strip().splitlines()]
