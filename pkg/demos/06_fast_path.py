"""Products of one-variable factors are summed through per-axis prefix sums."""

import time

from lsum import ArraySpec, LSumEngine, print_canonical

spec = ArraySpec.build("(a*b*c)^(-2)", 3)
print([print_canonical(f) for f in LSumEngine(spec).factors])

start = time.perf_counter()
fast = LSumEngine(spec).total_sum(500)
print(f"n = 500 via prefix sums: {time.perf_counter() - start:.3f} s")

small = LSumEngine(spec)
start = time.perf_counter()
brute = small.total_sum_brute(25)
print(f"n = 25 via the triple loop: {time.perf_counter() - start:.3f} s")
print(brute == small.total_sum_fast(25))

print(LSumEngine(ArraySpec.build("a + b*c", 3)).separable)  # sums are not separable
