"""Partial sums of special functions, in exact or formal form.

Digamma and polygamma never appear as standalone transcendentals.  At
integer points they are rewritten through harmonic numbers and the atoms
gamma, zeta2 and zeta3::

    psi(n + 1)     = H_n - gamma
    psi(m, n + 1)  = (-1)^m m! (zeta_n(m + 1) - zeta(m + 1))

which turns each identity about them into a polynomial identity over Q.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from typing import Dict, List

import numpy as np

from .errors import DomainError, NumericError, UnsupportedOrder
from .exact import EULER_GAMMA, GAMMA, H0, ZETA2, ZETA3_ATOM, Atom, FormalPoly

_lock = threading.Lock()
_zeta_tables: Dict[int, List[Fraction]] = {}
_factorial_sums: List[int] = [0]


def _check_n(n: int):
    if n < 0:
        raise DomainError(f"n must be non-negative, got {n}")


def zeta_partial(s: int, n: int) -> Fraction:
    """Exact ``sum_{k=1}^n k^(-s)`` for any integer ``s`` (memoized)."""
    _check_n(n)
    table = _zeta_tables.get(s)
    if table is None or len(table) <= n:
        with _lock:
            table = _zeta_tables.setdefault(s, [Fraction(0)])
            k = len(table)
            total = table[-1]
            while k <= n:
                total += Fraction(1, k**s) if s >= 0 else Fraction(k ** (-s))
                table.append(total)
                k += 1
    return table[n]


def harmonic(n: int) -> Fraction:
    """H_n, with H_0 = 0."""
    return zeta_partial(1, n)


def zeta_partial_float(s: float, n: int) -> float:
    """Forward double-precision sum of ``k^(-s)`` for k = 1..n."""
    _check_n(n)
    total = 0.0
    try:
        for k in range(1, n + 1):
            total += k ** (-s)
    except OverflowError as exc:
        raise NumericError("partial zeta overflows a double") from exc
    if not math.isfinite(total):
        raise NumericError("partial zeta overflows a double")
    return total


def digamma_formal(n: int) -> FormalPoly:
    """psi(n + 1) = H_n - gamma."""
    return harmonic(n) - FormalPoly.atom(GAMMA)


def digamma_at(k: int) -> FormalPoly:
    """psi(k) for k >= 1."""
    if k < 1:
        raise DomainError("digamma is only tabulated at positive integers")
    return digamma_formal(k - 1)


_ZETA_ATOMS = {2: ZETA2, 3: ZETA3_ATOM}


def polygamma_partial_formal(m: int, n: int) -> FormalPoly:
    """psi(m, n + 1) for m in {1, 2} as a linear polynomial in zeta(m + 1)."""
    if m not in (1, 2):
        raise UnsupportedOrder(f"polygamma order {m} not supported (only 1 and 2)")
    _check_n(n)
    scale = (-1) ** m * math.factorial(m)
    return scale * (zeta_partial(m + 1, n) - FormalPoly.atom(_ZETA_ATOMS[m + 1]))


def factorial_partial(n: int) -> int:
    """Sum of a! for a = 1..n."""
    _check_n(n)
    if len(_factorial_sums) <= n:
        with _lock:
            a = len(_factorial_sums)
            fact = math.factorial(a - 1) if a > 1 else 1
            while a <= n:
                fact *= a
                _factorial_sums.append(_factorial_sums[-1] + fact)
                a += 1
    return _factorial_sums[n]


def hyp_expand(k: int) -> FormalPoly:
    """(k + 1)! * 2F0(1, k + 2; ; 1) expressed as ``H0 - sum_{a<=k} a!``.

    H0 stands for 2F0(1, 2; ; 1).  The divergent series itself is never summed.
    """
    _check_n(k)
    return FormalPoly.atom(H0) - factorial_partial(k)


def hyp2f0_partial(a1, a2, terms: int) -> Fraction:
    """First ``terms`` terms of 2F0(a1, a2; ; 1), built from the term ratio
    ``t_{k+1}/t_k = (k + a1)(k + a2)/(k + 1)``."""
    total = Fraction(0)
    term = Fraction(1)
    for k in range(terms):
        total += term
        term = term * (k + a1) * (k + a2) / (k + 1)
    return total


def S_mn(m: int, n: int, backend: str = "formal"):
    """sum_{k=1}^n psi(k)^m / k.

    The formal result is a degree-m polynomial in gamma; the float result
    substitutes gamma numerically.
    """
    if m < 1:
        raise DomainError("m must be at least 1")
    _check_n(n)
    if backend == "formal":
        total = FormalPoly()
        for k in range(1, n + 1):
            total = total + digamma_at(k) ** m / k
        return total
    if backend == "float":
        return float(S_mn_float_table(m, n)[-1]) if n else 0.0
    raise ValueError(f"S_mn supports the formal and float backends, not {backend!r}")


def harmonic_float_table(n: int) -> np.ndarray:
    """Array whose entry k is H_k, for k = 0..n, in double precision."""
    out = np.zeros(n + 1)
    if n:
        out[1:] = np.cumsum(1.0 / np.arange(1, n + 1, dtype=float))
    return out


def S_mn_float_table(m: int, n: int) -> np.ndarray:
    """Float values of S(m, k) for k = 1..n."""
    k = np.arange(1, n + 1, dtype=float)
    psi = harmonic_float_table(n)[:-1] - EULER_GAMMA  # psi(k) = H_{k-1} - gamma
    return np.cumsum(psi**m / k)


def digamma_float(n: int) -> float:
    """psi(n + 1) in double precision via H_n - gamma."""
    return float(harmonic_float_table(n)[-1]) - EULER_GAMMA


def tan_partial_formal(n: int) -> FormalPoly:
    """sum_{k=1}^n tan k, over the tan atoms."""
    _check_n(n)
    return FormalPoly({((Atom("tan", k), 1),): 1 for k in range(1, n + 1)})


def lngamma_partial_formal(n: int) -> FormalPoly:
    """ln Gamma(n + 1) = sum_{j=2}^n ln j, over the ln atoms."""
    _check_n(n)
    return FormalPoly({((Atom("ln", j), 1),): 1 for j in range(2, n + 1)})


def f_partial_formal(n: int) -> FormalPoly:
    """sum_{a=1}^n f(a) for an unspecified f."""
    _check_n(n)
    return FormalPoly({((Atom("f", a), 1),): 1 for a in range(1, n + 1)})


def ln_atom(j: int) -> FormalPoly:
    return FormalPoly() if j == 1 else FormalPoly.atom(Atom("ln", j))


def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n (B_1 = -1/2)."""
    b = [Fraction(0)] * (n + 1)
    for m in range(n + 1):
        b[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            b[j - 1] = j * (b[j - 1] - b[j])
    return b[0] if n != 1 else Fraction(-1, 2)


def zeta_even_closed_form(s: int) -> float:
    """zeta(s) for even s >= 2 from the Bernoulli-number formula."""
    if s < 2 or s % 2:
        raise DomainError("closed form only for even s >= 2")
    half = s // 2
    coeff = (-1) ** (half + 1) * bernoulli(s) / (2 * math.factorial(s))
    return float(coeff) * (2 * math.pi) ** s


def zeta_float(s: float, n_terms: int = 10**6) -> float:
    """zeta(s) for real s > 1: closed form at even integers, otherwise a
    partial sum plus the integral tail n^(1-s)/(s-1)."""
    if s <= 1:
        raise DomainError("zeta(s) series needs s > 1")
    if float(s).is_integer() and int(s) % 2 == 0:
        return zeta_even_closed_form(int(s))
    k = np.arange(1, n_terms + 1, dtype=float)
    partial = math.fsum(k ** (-float(s)))
    return partial + n_terms ** (1 - s) / (s - 1)
