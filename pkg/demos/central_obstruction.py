"""
Sequence lattices and the central obstruction
=============================================

K, L and the directed union are lattices of almost-constant sections over
stalks M_{1+q}.  A coordinatizing ring of characteristic pattern c_p would
force a central element with a prescribed value at every position; when
the stalks of two characteristics share a limit no section realizes it.
"""

from coordlat.coord import directed_union_demo
from coordlat.seqlat import coordinatization_obstruction, make_dirunion_L, make_K, make_L, truncate
from coordlat.lattice import is_complemented, is_modular

for name, KL in [("K", make_K()), ("L", make_L()), ("union", make_dirunion_L())]:
    for p in (2, 3):
        ob = coordinatization_obstruction(KL, p)
        print(f"{name:6s} p={p}: {ob.status}")

# the witness for K: the two classes need different limit values
print(coordinatization_obstruction(make_K(), 2).witness)

# finite truncations are still complemented modular
F, _ = truncate(make_dirunion_L(2), 2)
print(len(F), "elements;", "modular" if is_modular(F) else "not modular",
      "and", "complemented" if is_complemented(F) else "not complemented")

# each stage of the union is coordinatizable, the union is not
out = directed_union_demo(2)
for c in out["checks"]:
    print(c["name"], c["ok"])
print("union:", out["union"])
