"""H_n^3 rearranged shell by shell, in exact rationals and as printed identities."""

from fractions import Fraction

from lsum import ArraySpec, verify_rearrangement
from lsum.catalog import check_eq4, check_harmonic_cube
from lsum.render import identity_report

spec = ArraySpec.build("1/(a*b*c)", 3)
rep = identity_report(spec)
for line in rep.structural:
    print(line)
print(rep.closed_form)

# every L_k is 3 H_k^2/k - 3 H_k/k^2 + 1/k^3
H = lambda n: sum(Fraction(1, j) for j in range(1, n + 1))
report = verify_rearrangement(spec, 20)
for k, lk in enumerate(report.l_elements[:5], 1):
    print(k, lk, lk == 3 * H(k) ** 2 / k - 3 * H(k) / k**2 + Fraction(1, k**3))

# the same with 1/k^s, and the cube identity solved for the cross terms
for s in (1, 2, 3):
    out = check_eq4(s, 50)
    print("s =", s, "holds to n = 50:", out.passed)
print("harmonic form:", check_harmonic_cube(50).passed)
