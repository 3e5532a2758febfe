"""Exact scalars: rationals, formal polynomials in symbolic constants, floats.

Rationals are :class:`fractions.Fraction`.  Transcendental quantities that
show up in L-summing identities (Euler's constant, zeta(2), zeta(3), ln j,
tan j, values of an unspecified f, and the hypergeometric constant H0) are
adjoined as opaque atoms, so identities between them become identities in
a polynomial ring over Q and can be decided coefficient by coefficient.

A *scalar* is one of ``Fraction``, :class:`FormalPoly` or ``float``.
Fraction and FormalPoly mix freely (the result is a FormalPoly); floats
never mix with either.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple, Union

from .errors import DomainError, MixedScalarError, NumericError, UnboundAtomError

Rational = Fraction

ATOM_NAMES = ("H0", "f", "gamma", "ln", "tan", "zeta2", "zeta3")
INDEXED_ATOMS = frozenset({"ln", "tan", "f"})
MAX_ATOM_ARG = 2**31 - 1

EULER_GAMMA = 0.57721566490153286
ZETA3 = 1.2020569031595943


def rational_pow(base, e: int) -> Fraction:
    """Exact integer power of a rational.

    >>> rational_pow(Fraction(2, 3), 2)
    Fraction(4, 9)
    >>> rational_pow(Fraction(2), -3)
    Fraction(1, 8)
    """
    base = Fraction(base)
    if e < 0 and base == 0:
        raise DomainError("zero raised to a negative power")
    return base**e


@dataclass(frozen=True)
class Atom:
    """A symbolic constant. ``arg`` is required for ln, tan and f only."""

    name: str
    arg: int | None = None

    def __post_init__(self):
        if self.name not in ATOM_NAMES:
            raise DomainError(f"unknown atom name {self.name!r}")
        if self.name in INDEXED_ATOMS:
            if not isinstance(self.arg, int) or isinstance(self.arg, bool):
                raise DomainError(f"atom {self.name} needs an integer argument")
            if not 1 <= self.arg <= MAX_ATOM_ARG:
                raise DomainError(f"atom argument {self.arg} out of range")
        elif self.arg is not None:
            raise DomainError(f"atom {self.name} takes no argument")

    @property
    def sort_key(self):
        return (self.name, self.arg or 0)

    def __lt__(self, other):
        return self.sort_key < other.sort_key

    def __str__(self):
        if self.arg is None:
            return self.name
        return f"{self.name}({self.arg})"


GAMMA = Atom("gamma")
ZETA2 = Atom("zeta2")
ZETA3_ATOM = Atom("zeta3")
H0 = Atom("H0")

# A monomial is a tuple of (atom, exponent) pairs sorted by atom, exponents > 0.
Monomial = Tuple[Tuple[Atom, int], ...]
ONE: Monomial = ()


def monomial(*factors) -> Monomial:
    """Build a monomial from atoms or ``(atom, exponent)`` pairs.

    Repeated atoms have their exponents added.
    """
    exps: Dict[Atom, int] = {}
    for item in factors:
        atom, e = (item, 1) if isinstance(item, Atom) else item
        if e < 0:
            raise DomainError("negative exponent in monomial")
        if e:
            exps[atom] = exps.get(atom, 0) + e
    return tuple(sorted(exps.items(), key=lambda p: p[0].sort_key))


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    return monomial(*m1, *m2)


def _mono_key(m: Monomial):
    return (sum(e for _, e in m), [(a.sort_key, e) for a, e in m])


class FormalPoly:
    """Immutable sparse polynomial over Q in :class:`Atom` variables."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None):
        clean = {}
        for mono, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[mono] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def const(cls, value) -> "FormalPoly":
        if isinstance(value, FormalPoly):
            return value
        if isinstance(value, float):
            raise MixedScalarError("cannot embed a float into the formal ring")
        return cls({ONE: Fraction(value)})

    @classmethod
    def atom(cls, atom: Atom, coeff=1) -> "FormalPoly":
        return cls({((atom, 1),): Fraction(coeff)})

    @classmethod
    def zero(cls) -> "FormalPoly":
        return cls()

    @property
    def terms(self) -> Dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items(), key=lambda kv: _mono_key(kv[0]))

    def coefficient(self, mono) -> Fraction:
        """Stored coefficient of ``mono`` (a Monomial, an Atom, or 1), else 0."""
        if isinstance(mono, Atom):
            mono = ((mono, 1),)
        elif mono == 1:
            mono = ONE
        return self._terms.get(tuple(mono), Fraction(0))

    def atoms(self) -> set:
        return {a for mono in self._terms for a, _ in mono}

    def degree(self) -> int:
        return max((sum(e for _, e in m) for m in self._terms), default=0)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(m == ONE for m in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise DomainError(f"{self} is not a constant")
        return self._terms.get(ONE, Fraction(0))

    # -- ring operations -------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, FormalPoly):
            return other
        if isinstance(other, float):
            raise MixedScalarError("float mixed with a formal polynomial")
        if isinstance(other, (int, Fraction)):
            return FormalPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for mono, c in other._terms.items():
            out[mono] = out.get(mono, 0) + c
        return FormalPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return FormalPoly({m: -c for m, c in self._terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self._terms or not other._terms:
            return FormalPoly()
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return FormalPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        d = other.constant_value() if other.is_constant() else None
        if d is None:
            raise DomainError("division by a non-constant polynomial")
        if d == 0:
            raise DomainError("division by zero")
        return FormalPoly({m: c / d for m, c in self._terms.items()})

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, e: int):
        if not isinstance(e, int):
            raise DomainError("polynomial exponent must be an integer")
        if e < 0:
            if not self.is_constant():
                raise DomainError("negative power of a non-constant polynomial")
            return FormalPoly.const(rational_pow(self.constant_value(), e))
        result = FormalPoly.const(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = FormalPoly.const(other)
        if not isinstance(other, FormalPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    # -- numeric evaluation ---------------------------------------------

    def evaluate(self, bindings: Mapping[Atom, float] | None = None) -> float:
        return poly_eval_numeric(self, bindings)

    def __repr__(self):
        return f"FormalPoly({str(self)!r})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for mono, c in self.items():
            factors = [str(a) if e == 1 else f"{a}^{e}" for a, e in mono]
            if not factors:
                body = str(abs(c))
            elif abs(c) == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(abs(c))] + factors)
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        head_sign, head = parts[0]
        text = ("-" if head_sign == "-" else "") + head
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


def poly_mul(a: FormalPoly, b: FormalPoly) -> FormalPoly:
    return a * b


def poly_coefficient(p: FormalPoly, mono) -> Fraction:
    return p.coefficient(mono)


def default_binding(atom: Atom) -> float:
    """Numeric value of an atom; ``f`` and ``H0`` have none."""
    if atom.name == "gamma":
        return EULER_GAMMA
    if atom.name == "zeta2":
        return math.pi**2 / 6
    if atom.name == "zeta3":
        return ZETA3
    if atom.name == "ln":
        return math.log(atom.arg)
    if atom.name == "tan":
        return math.tan(atom.arg)
    raise UnboundAtomError(str(atom))


def poly_eval_numeric(p: FormalPoly, bindings: Mapping[Atom, float] | None = None) -> float:
    """Substitute float values for atoms.

    Atoms missing from ``bindings`` fall back to :func:`default_binding`;
    ``f(j)`` and ``H0`` must be bound explicitly.
    """
    bindings = bindings or {}
    values: Dict[Atom, float] = {}
    for atom in p.atoms():
        if atom in bindings:
            values[atom] = float(bindings[atom])
        else:
            values[atom] = default_binding(atom)
    total = 0.0
    try:
        for mono, c in p.items():
            term = float(c)
            for atom, e in mono:
                term *= values[atom] ** e
            total += term
    except OverflowError as exc:
        raise NumericError(f"overflow evaluating {p}") from exc
    if not math.isfinite(total):
        raise NumericError(f"non-finite value evaluating {p}")
    return total


# -- scalar plumbing ---------------------------------------------------------

Scalar = Union[Fraction, FormalPoly, float]
BACKENDS = ("exact", "formal", "float")


def kind(x) -> str:
    if isinstance(x, FormalPoly):
        return "formal"
    if isinstance(x, float):
        return "float"
    if isinstance(x, (int, Fraction)):
        return "exact"
    raise TypeError(f"not a scalar: {x!r}")


def zero(backend: str) -> Scalar:
    if backend == "exact":
        return Fraction(0)
    if backend == "formal":
        return FormalPoly()
    if backend == "float":
        return 0.0
    raise ValueError(f"unknown backend {backend!r}")


def as_backend(x, backend: str) -> Scalar:
    """Coerce ``x`` to the canonical type of ``backend``."""
    k = kind(x)
    if backend == "float":
        if k == "formal":
            return poly_eval_numeric(x)
        value = float(x)
        if not math.isfinite(value):
            raise NumericError("non-finite float")
        return value
    if k == "float":
        raise MixedScalarError("float cannot be promoted to an exact scalar")
    if backend == "formal":
        return FormalPoly.const(x)
    if k == "formal":
        if not x.is_constant():
            raise DomainError(f"formal value {x} has no rational form")
        return x.constant_value()
    return Fraction(x)


def _check_mix(a, b):
    ka, kb = kind(a), kind(b)
    if (ka == "float") != (kb == "float"):
        raise MixedScalarError(f"cannot combine {ka} with {kb}")


def scalar_add(a, b):
    _check_mix(a, b)
    return a + b


def scalar_sub(a, b):
    _check_mix(a, b)
    return a - b


def scalar_mul(a, b):
    _check_mix(a, b)
    return a * b


def scalar_sum(values: Iterable, backend: str):
    total = zero(backend)
    for v in values:
        total = scalar_add(total, v)
    return total


def is_zero(x) -> bool:
    if isinstance(x, FormalPoly):
        return x.is_zero()
    return x == 0
