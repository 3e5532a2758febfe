"""Float checks: the s = 2 limit and the growth of S(m, n)."""

import math

from lsum.catalog import asympt_limit_m1, asympt_table, numeric_limit_eq4

rep = numeric_limit_eq4(2.0, 10**6, 1e-5)
print(f"partial {rep.partial:.12f}  target {rep.target:.12f}  gap {rep.gap:.2e}")

for m in (1, 2, 3):
    print("m =", m)
    for row in asympt_table(m, [10**2, 10**3, 10**4, 10**5]):
        print(f"  n={row.n:<7d} diff={row.diff:+.6f}  diff/ln^m n={row.ratio:+.6f}")

# for m = 1 the difference settles at -(pi^2/12 + gamma^2/2)
print(asympt_limit_m1(), -(math.pi**2 / 12 + 0.5772156649015329**2 / 2))
