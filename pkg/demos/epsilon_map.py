"""
epsilon_p: from idempotents of R_p to sections of L_p
=====================================================

R_p is the ring of almost-constant sequences of 2 x 2 matrices over the
tower F_{p^1!} < F_{p^2!} < ...  Each idempotent generates a principal
right ideal; applying eta stalkwise gives a section of L_p.
"""

import time

from coordlat.coord import epsilon_p

eps = epsilon_p(2, levels=2)
R = eps.R
print("positions:", R.positions)

x = R.constant(eps.etas[0].alpha(2), 1)
print("constant alpha_2 ->", eps.L.section_to_json(eps(x)))

y = R.make(eps.etas[1].alpha(3), {2: ((1, 0), (0, 0))})
print("one exception     ->", eps.L.section_to_json(eps(y)))

# the full check at three levels takes a few seconds
t = time.perf_counter()
ok, checks = epsilon_p(2, levels=3).verify(max_exc=2)
for c in checks:
    print(c)
print(f"verified={ok} in {time.perf_counter() - t:.1f}s")
