"""Acceptance checks, one per criterion, each printing a PASS/FAIL line.

Run directly (``python tests/test_acceptance.py``) for the summary alone.
"""

import itertools
import math
import random
import time
from fractions import Fraction

import pytest

from lsum import catalog as cat
from lsum.cli import main
from lsum.engine import LSumEngine, LSumMethod
from lsum.errors import ParseError
from lsum.exact import GAMMA, FormalPoly
from lsum.expr import BinOp, Call, Factorial, Index, Neg, Num, Param, ArraySpec, parse, print_canonical


RESULTS = []


def report(number, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, detail


def timed(fn):
    start = time.perf_counter()
    value = fn()
    return value, time.perf_counter() - start


def test_01_multiplication_table():
    def work():
        e = LSumEngine(ArraySpec.build("a*b", 2))
        rep = e.verify(500, LSumMethod.GeneralT)
        cubes = all(lk == k**3 for k, lk in enumerate(rep.l_elements, 1))
        closed = all(e.total_sum(n) == (n * (n + 1) // 2) ** 2 for n in range(1, 501))
        return rep.passed and cubes and closed

    ok, secs = timed(work)
    report(1, ok and secs < 1.0, f"sum k^3 = (n(n+1)/2)^2 exactly for n <= 500 in {secs:.3f} s (limit 1 s)")


SPECS_3D = [("1/(a*b*c)", "exact"), ("a*b*c", "exact"), ("(a*b*c)^(-2)", "exact"), ("ln(a)", "formal"),
            ("tan(a)", "formal"), ("a!", "exact"), ("f(a)", "formal"), ("1", "exact")]


def _triple_loop(entry, n, zero):
    total = zero
    for idx in itertools.product(range(1, n + 1), repeat=3):
        total = total + entry(idx)
    return total


def test_02_rearrangement_oracle_equivalence():
    def work():
        bad = []
        for text, backend in SPECS_3D:
            e = LSumEngine(ArraySpec.build(text, 3), backend)
            running = e.zero
            for k in range(1, 13):
                values = [e.l_element_3d(k), e.l_element_general(k), e.l_element_general(k, fast=False),
                          e.l_element_strong(k)]
                if e.is_symmetric():
                    values.append(e.l_element_symmetric(k))
                if any(v != values[0] for v in values):
                    bad.append((text, k, "methods disagree"))
                running = running + values[0]
                if running != _triple_loop(e.entry, k, e.zero):
                    bad.append((text, k, "sum of L_k differs from the triple loop"))
        return bad

    bad, secs = timed(work)
    report(2, not bad and secs < 30, f"{len(SPECS_3D)} arrays, n <= 12, all four L_k forms agree with the "
           f"brute-force triple loop; {secs:.2f} s (limit 30 s){'; ' + str(bad[:3]) if bad else ''}")


def test_03_power_cube_identity():
    def work():
        return [cat.check_eq4(s, 100) for s in (-1, 1, 2, 3)]

    outs, secs = timed(work)
    ok = all(o.passed and o.n_max == 100 for o in outs)
    report(3, ok and secs < 10, f"zeta_k(s) cube identity, s in {{-1,1,2,3}}, n <= 100, zero residual; "
           f"{secs:.2f} s (limit 10 s)")


def test_04_gamma_polynomial_identity():
    out = cat.check_eq7_appendix(100)
    report(4, out.passed and out.n_max == 100, "psi(k+1)+gamma cube identity (and its H_k-shaped twin): "
           "residual is the zero polynomial for n <= 100")


def test_05_S1_formal_identity():
    out = cat.check_eq8(100)
    report(5, out.passed and out.n_max == 100, "S(1,n) closed form: gamma and zeta(2) cancel, zero residual for n <= 100")


# fixed from an independent sympy expansion of the printed right-hand side at n = 1
PRINTED_RESIDUAL_N1 = 2 * (FormalPoly.atom(GAMMA) - 1) ** 2


def test_06_theorem_and_corollary_dual():
    thm_stated, thm_fixed = cat.check_theorem1(100)
    cor_stated, cor_fixed = cat.check_corollary1(100)
    ok = (thm_stated.first_fail_n == 1 and thm_stated.residual == PRINTED_RESIDUAL_N1
          and cor_stated.first_fail_n == 1 and cor_stated.residual == PRINTED_RESIDUAL_N1
          and thm_fixed.passed and cor_fixed.passed and thm_fixed.n_max == cor_fixed.n_max == 100)
    report(6, ok, f"printed forms leave residual {thm_stated.residual} at n = 1; "
           "corrected forms have zero residual for n <= 100")


def test_07_linear_atom_propositions():
    def work():
        outs = {name: getattr(cat, f"check_{name.replace('-', '_')}")(50)
                for name in ("prop-ln", "cor-ln", "prop-tan", "generic-f")}
        stated, corrected = cat.check_prop_factorial(30)
        return outs, stated, corrected

    (outs, stated, corrected), secs = timed(work)
    for name, out in outs.items():
        print(f"  {name}: {'zero residual' if out.passed else f'fails at n={out.first_fail_n}'} for n <= 50")
    print(f"  prop-factorial as published: "
          f"{'zero residual' if stated.passed else f'fails at n={stated.first_fail_n}, residual {stated.residual}'}")
    print(f"  prop-factorial with the H0 term sign corrected: "
          f"{'zero residual' if corrected.passed else 'fails'} for n <= 30")
    ok = all(o.passed for o in outs.values()) and stated.passed and secs < 10
    report(7, ok, f"ln, ln corollary, tan, factorial (H0 form) and generic-f identities; {secs:.2f} s (limit 10 s)")


def test_08_power_identities_any_dimension():
    def work():
        bad = []
        for t in (2, 3, 4, 5):
            n = 12 if t == 5 else 30
            for s in (1, 2, 3):
                if not cat.check_tdim_power(t, s, n).passed:
                    bad.append(("tdim", t, s))
                if not cat.check_strong_power(t, s, n).passed:
                    bad.append(("strong", t, s))
                names = [f"x{i}" for i in range(1, t + 1)]
                e = LSumEngine(ArraySpec.build("*".join(f"{x}^(-s)" for x in names), t, {"s": s}))
                if t <= 4 and not e.verify(n, LSumMethod.GeneralT).passed:
                    bad.append(("engine", t, s))
        return bad

    bad, secs = timed(work)
    report(8, not bad and secs < 60, f"power identity and per-shell form, t in 2..5, s in 1..3, n <= 30 "
           f"(12 at t = 5); {secs:.2f} s (limit 60 s){'; ' + str(bad) if bad else ''}")


def test_09_numeric_limit():
    rep, secs = timed(lambda: cat.numeric_limit_eq4(2.0, 10**6, 1e-5))
    closed = (math.pi**6 / 216 - math.pi**6 / 945) / 3
    ok = rep.gap <= 1e-5 and abs(rep.target - closed) < 1e-13 and secs < 5
    report(9, ok, f"|partial(10^6) - (zeta(2)^3 - zeta(6))/3| = {rep.gap:.3e} (tol 1e-5); {secs:.2f} s (limit 5 s)")


def test_10_asymptotics():
    worst = 0.0
    for m in (1, 2, 3):
        for row in cat.asympt_table(m, cat.ASYMPT_POINTS):
            worst = max(worst, abs(row.ratio))
    last = cat.asympt_table(1, [10**5])[0]
    limit = -(math.pi**2 / 12 + 0.5772156649015329**2 / 2)
    gap = abs(last.diff - limit)
    report(10, worst <= cat.ASYMPT_BOUND and gap <= 0.01,
           f"max |S(m,n) - psi(n+1)^(m+1)/(m+1)|/ln^m n = {worst:.4f} (advisory bound 10); "
           f"m = 1 difference at 10^5 is {last.diff:.6f}, {gap:.2e} from -(pi^2/12 + gamma^2/2)")


CATALOG_EXPRESSIONS = ["1/(a*b*c)", "a*b*c", "(a*b*c)^(-2)", "(a*b*c)^(-s)", "ln(a)", "tan(a)", "a!", "f(a)",
                       "1", "a*b", "x1^(-s)*x2^(-s)*x3^(-s)*x4^(-s)*x5^(-s)"]


def _random_ast(rng, depth=0):
    if depth > 4 or rng.random() < 0.3:
        kind = rng.randrange(3)
        if kind == 0:
            return Num(rng.randrange(100))
        if kind == 1:
            return Index(rng.choice(["a", "b", "c", "x1", "x9"]))
        return Param(rng.choice(["s", "p", "r2"]))
    kind = rng.randrange(4)
    if kind == 0:
        return BinOp(rng.choice("+-*/^"), _random_ast(rng, depth + 1), _random_ast(rng, depth + 1))
    if kind == 1:
        return Neg(_random_ast(rng, depth + 1))
    if kind == 2:
        return Factorial(_random_ast(rng, depth + 1))
    return Call(rng.choice(["ln", "tan", "f"]), _random_ast(rng, depth + 1))


MALFORMED = [("1/(a*b", 6), ("a +* b", 3), ("a $ b", 2), ("(a))", 3), ("ln(", 3)]


def test_11_parser(capsys):
    rng = random.Random(20240611)
    trees = [parse(t) for t in CATALOG_EXPRESSIONS] + [_random_ast(rng) for _ in range(200)]
    round_trips = sum(parse(print_canonical(tree)) == tree for tree in trees)
    offsets_ok = True
    for text, offset in MALFORMED:
        try:
            parse(text)
            offsets_ok = False
        except ParseError as exc:
            offsets_ok &= exc.offset == offset
    codes = [main(["verify", "--expr", text]) for text, _ in MALFORMED]
    err = capsys.readouterr().err
    ok = round_trips == len(trees) and offsets_ok and all(c == 2 for c in codes) and err.count("offset") == len(MALFORMED)
    report(11, ok, f"{round_trips}/{len(trees)} round trips; {len(MALFORMED)} malformed inputs give "
           "offset-bearing errors and exit code 2")


SEPARABLE_FACTORS = ["{x}", "{x}^2", "1/{x}", "{x}!", "({x}+3)", "5", "{x}^(-2)", "(2*{x}-1)", "(-{x})"]


def _direct_brute(spec, n):
    """Nested loop over the lattice with a fresh evaluator: no prefix sums."""
    e = LSumEngine(spec)
    total = Fraction(0)
    for idx in itertools.product(range(1, n + 1), repeat=spec.t):
        total += e.entry(idx)
    return total


def test_12_separable_fast_path():
    rng = random.Random(7)
    mismatches = 0
    cases = 0
    for _ in range(25):
        t = rng.randint(1, 4)
        text = "*".join(rng.choice(SEPARABLE_FACTORS).format(x=f"x{i + 1}") for i in range(t))
        spec = ArraySpec.build(text, t)
        e = LSumEngine(spec)
        n_values = [1, 5, 15] if t <= 3 else [1, 5, 9]
        for n in n_values:
            cases += 1
            if not e.separable or e.total_sum_fast(n) != _direct_brute(spec, n):
                mismatches += 1
    print(f"  random separable specs: {cases - mismatches}/{cases} fast sums equal the brute force")

    spec = ArraySpec.build("1/(a*b*c)", 3)
    fast_value, fast_secs = timed(lambda: LSumEngine(spec).total_sum(500))
    harmonic = sum(Fraction(1, k) for k in range(1, 501))
    _, loop_secs = timed(lambda: _direct_brute(spec, 30))
    projected = loop_secs * (500 / 30) ** 3
    ok = mismatches == 0 and fast_value == harmonic**3 and fast_secs < 1.0 and projected > 1.0
    report(12, ok, f"fast total at n = 500, t = 3 in {fast_secs:.3f} s (limit 1 s); nested loop "
           f"projected at {projected:.0f} s from {loop_secs:.3f} s at n = 30; {mismatches} mismatches")


if __name__ == "__main__":
    raise SystemExit(pytest.main(["-q", "-s", __file__]))
