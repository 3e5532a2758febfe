"""Identities in psi(k) = H_{k-1} - gamma, checked as polynomials in gamma and zeta(2)."""

from lsum.catalog import check_corollary1, check_eq8, check_theorem1
from lsum.exact import poly_eval_numeric
from lsum.specfun import S_mn, digamma_at

print(digamma_at(4))  # 11/6 - gamma
print(S_mn(2, 2))  # 1/2 - gamma + 3/2*gamma^2

# S(1,n) in closed form: gamma and zeta(2) drop out on both sides
print("S(1,n) identity to n = 100:", check_eq8(100).passed)

# the published form of the next identity leaves a residual already at n = 1
printed, corrected = check_theorem1(40)
print("printed form first fails at n =", printed.first_fail_n)
print("residual:", printed.residual, "~", poly_eval_numeric(printed.residual))
print("corrected form holds to n = 40:", corrected.passed)

printed, corrected = check_corollary1(40)
print("S(2,n): printed residual", printed.residual, "| corrected holds:", corrected.passed)
