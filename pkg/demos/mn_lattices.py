"""
Which M_n come from a regular ring?
===================================

M_n is the lattice with n atoms of length two.  It is L(R) for a regular
ring exactly when n - 1 is a prime power q, and then R = Mat_2(F_q).
"""

from coordlat.coord import coordinatizable_mn, eta_q
from coordlat.lattice import m_name
from coordlat.ring import MatrixRing, l_of_r
from coordlat.gfield import field_make

# the principal right ideals of Mat_2(F_2): 0, three lines, everything
R = MatrixRing(2, field_make(2, 1))
L, ideals = l_of_r(R)
print(len(L), "ideals in Mat_2(F_2)")

# eta sends each ideal to an element of M_3
eta = eta_q(2)
for I in ideals:
    print(I.gen, "->", m_name(eta(I.gen)))
print("eta is an isomorphism:", eta.check()[0])

# verdicts for small n
for n in range(3, 13):
    v = coordinatizable_mn(n)
    print(f"M_{n:<2} {v.status:20s} {v.reason}")

# witnesses replay from scratch
w = coordinatizable_mn(5).witness
print("M_5 witness replays:", w.replay())
