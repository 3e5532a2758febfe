"""Shell sums of f(a) for ln, tan, factorial and an unspecified f."""

from lsum import ArraySpec, verify_rearrangement
from lsum.catalog import check_generic_f, check_prop_factorial, check_prop_ln, check_prop_tan
from lsum.render import identity_report

# f(a) only depends on the first index, so the other two axes just count
for text in ("f(a)", "ln(a)", "tan(a)", "a!"):
    print(identity_report(ArraySpec.build(text, 3)).closed_form)

# ln(j) and tan(j) stay symbolic; the rearrangement is exact over those atoms
rep = verify_rearrangement(ArraySpec.build("tan(a)", 3), 6, backend="formal")
print(rep.l_elements[2])
print("passes:", rep.passed)

for check in (check_prop_ln, check_prop_tan, check_generic_f):
    print(check.__name__, check(40).passed)

# (k+1)! h(1, k+2) is kept as H0 - (1! + ... + k!) with H0 opaque
printed, corrected = check_prop_factorial(30)
print("factorial, printed sign:", printed.first_fail_n, printed.residual)
print("factorial, corrected sign holds:", corrected.passed)
