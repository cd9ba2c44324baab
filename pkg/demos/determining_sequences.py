"""
Determining sequences
=====================

A formula f over a Boolean product is decided by the Boolean values of
finitely many parts, combined by a formula Phi of Boolean algebras.
"""

from coordlat.lattice import boolean_lattice, chain, m_lattice
from coordlat.logic.boolprod import FiniteProduct, elementary_submodel_report, validate_determining_sequence
from coordlat.logic.corpus import CORPUS
from coordlat.logic.fv import determining_sequence, isotonicity_check, render_phi
from coordlat.logic.syntax import Var, parse, to_text
from coordlat.seqlat import make_K, make_L

f = parse("a \\/ b = 1 -> E x. x <= a && x \\/ b = 1 && x /\\ b = 0")
ds = determining_sequence(f)
for i, part in enumerate(ds.parts):
    print(f"part {i}: {to_text(part)}")
print("Phi:", to_text(render_phi(ds.phi, [Var(f"s{i}") for i in range(ds.width)])))

# check it against brute force on a small product
B = FiniteProduct([m_lattice(2), chain(3), boolean_lattice(1)])
n, fails = validate_determining_sequence(ds, B, f)
print(f"{n} parameter tuples, {len(fails)} disagreements")
print("isotone:", isotonicity_check(ds)[0])

# K and L agree on every corpus formula
rows = elementary_submodel_report(make_K(2), make_L(2), CORPUS, samples=2)
print(sum(r["agree"] for r in rows), "of", len(rows), "samples agree")
