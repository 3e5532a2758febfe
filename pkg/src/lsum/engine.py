"""L-summing rearrangement of cubic lattice sums.

For an array A over [1, n]^t the k-th L-element is the sum of A over the
shell of cells whose largest index equals k, so the L-elements for
k = 1..n add up to the full sum.  Four ways of computing the shell sum are
provided:

* ``General3D``: three faces minus three edges plus the corner (t = 3).
* ``Symmetric3D``: the same, folded by symmetry into one face and one edge.
* ``GeneralT``: inclusion-exclusion over the non-empty sets of positions
  pinned to k, any t.
* ``Strong``: total(k) - total(k - 1).

The strong form is the oracle for the other three.
"""

from __future__ import annotations

import enum
import itertools
import math
import threading
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Optional

from .errors import DimensionError, DomainError, MethodNotApplicable, NumericError
from .exact import Scalar, is_zero, zero
from .expr import ArraySpec, check_backend, compile_entry, detect_separable, detect_symmetry

FLOAT_RTOL = 1e-9


class LSumMethod(enum.Enum):
    General3D = "general"
    Symmetric3D = "symmetric"
    GeneralT = "tdim"
    Strong = "strong"


def _finite(value):
    if isinstance(value, float) and not math.isfinite(value):
        raise NumericError("float overflow in lattice sum")
    return value


class LSumEngine:
    """Cached evaluator for one (spec, backend) pair.

    Prefix sums and totals are filled lazily; a fill recomputes the same pure
    values, so concurrent callers see identical results.
    """

    def __init__(self, spec: ArraySpec, backend: str = "exact"):
        check_backend(spec, backend)
        self.spec = spec
        self.backend = backend
        self.entry = compile_entry(spec, backend)
        self.factors = detect_separable(spec)
        self._factor_fns = None
        if self.factors is not None:
            self._factor_fns = [compile_entry(spec, backend, f) for f in self.factors]
            self._values: List[List[Scalar]] = [[] for _ in range(spec.t)]
            self._prefix: List[List[Scalar]] = [[zero(backend)] for _ in range(spec.t)]
        self._brute_totals = {0: zero(backend)}
        self._symmetric: Optional[bool] = None
        self._lock = threading.Lock()

    @property
    def zero(self):
        return zero(self.backend)

    @property
    def separable(self) -> bool:
        return self.factors is not None

    # -- per-axis prefix sums ------------------------------------------------

    def _extend(self, n: int):
        with self._lock:
            for axis, fn in enumerate(self._factor_fns):
                values, prefix = self._values[axis], self._prefix[axis]
                while len(prefix) <= n:
                    x = len(prefix)
                    idx = (1,) * axis + (x,) + (1,) * (self.spec.t - axis - 1)
                    v = fn(idx)
                    values.append(v)
                    prefix.append(_finite(prefix[-1] + v))

    def factor_value(self, axis: int, x: int):
        self._extend(x)
        return self._values[axis][x - 1]

    def prefix_sum(self, axis: int, n: int):
        self._extend(n)
        return self._prefix[axis][n]

    # -- totals ---------------------------------------------------------------

    def total_sum_brute(self, n: int):
        if n < 0:
            raise DomainError("n must be non-negative")
        cached = self._brute_totals.get(n)
        if cached is not None:
            return cached
        total = self.zero
        for idx in itertools.product(range(1, n + 1), repeat=self.spec.t):
            total = total + self.entry(idx)
        total = _finite(total)
        self._brute_totals[n] = total
        return total

    def total_sum_fast(self, n: int):
        if not self.separable:
            raise MethodNotApplicable("array is not separable")
        if n < 0:
            raise DomainError("n must be non-negative")
        if n == 0:
            return self.zero
        out = self.prefix_sum(0, n)
        for axis in range(1, self.spec.t):
            out = out * self.prefix_sum(axis, n)
        return _finite(out)

    def total_sum(self, n: int):
        if self.separable:
            return self.total_sum_fast(n)
        return self.total_sum_brute(n)

    # -- L-elements -------------------------------------------------------

    def _check_k(self, k: int):
        if k < 1:
            raise DomainError(f"k must be at least 1, got {k}")

    def l_element_3d(self, k: int):
        if self.spec.t != 3:
            raise DimensionError(f"three-face form needs t = 3, not t = {self.spec.t}")
        self._check_k(k)
        A = self.entry
        r = range(1, k + 1)
        faces = self.zero
        for u in r:
            for v in r:
                faces = faces + A((k, u, v)) + A((u, k, v)) + A((u, v, k))
        edges = self.zero
        for u in r:
            edges = edges + A((u, k, k)) + A((k, u, k)) + A((k, k, u))
        return _finite(faces - edges + A((k, k, k)))

    def is_symmetric(self) -> bool:
        if self._symmetric is None:
            self._symmetric = detect_symmetry(self.spec, 4)
        return self._symmetric

    def l_element_symmetric(self, k: int):
        if self.spec.t != 3:
            raise MethodNotApplicable("symmetric form needs t = 3")
        if not self.is_symmetric():
            raise MethodNotApplicable(f"{self.spec.canonical} failed the symmetry probe")
        self._check_k(k)
        A = self.entry
        r = range(1, k + 1)
        face = self.zero
        for b in r:
            for c in r:
                face = face + A((k, b, c))
        edge = self.zero
        for a in r:
            edge = edge + A((a, k, k))
        return _finite(3 * face - 3 * edge + A((k, k, k)))

    def pinned_subsets(self):
        """Non-empty pinned-position sets, in increasing bitmask order."""
        t = self.spec.t
        for mask in range(1, 1 << t):
            yield tuple(i for i in range(t) if mask >> i & 1)

    def l_element_general(self, k: int, fast: bool = True):
        self._check_k(k)
        t = self.spec.t
        total = self.zero
        if fast and self.separable:
            for pinned in self.pinned_subsets():
                term = None
                for axis in range(t):
                    v = self.factor_value(axis, k) if axis in pinned else self.prefix_sum(axis, k)
                    term = v if term is None else term * v
                total = total + term if len(pinned) % 2 else total - term
            return _finite(total)
        A = self.entry
        for pinned in self.pinned_subsets():
            free = [i for i in range(t) if i not in pinned]
            part = self.zero
            idx = [k] * t
            for values in itertools.product(range(1, k + 1), repeat=len(free)):
                for i, v in zip(free, values):
                    idx[i] = v
                part = part + A(tuple(idx))
            total = total + part if len(pinned) % 2 else total - part
        return _finite(total)

    def l_element_strong(self, k: int):
        self._check_k(k)
        return _finite(self.total_sum(k) - self.total_sum(k - 1))

    def l_element(self, k: int, method: LSumMethod):
        if method is LSumMethod.General3D:
            return self.l_element_3d(k)
        if method is LSumMethod.Symmetric3D:
            return self.l_element_symmetric(k)
        if method is LSumMethod.GeneralT:
            return self.l_element_general(k)
        return self.l_element_strong(k)

    # -- verification -------------------------------------------------------

    def agrees(self, lhs, rhs) -> bool:
        if self.backend == "float":
            return abs(lhs - rhs) <= FLOAT_RTOL * max(abs(rhs), abs(lhs), 1e-300)
        return is_zero(lhs - rhs)

    def verify(self, n_max: int, method: LSumMethod) -> "LSumReport":
        if n_max < 1:
            raise DomainError("n_max must be at least 1")
        if method in (LSumMethod.General3D, LSumMethod.Symmetric3D) and self.spec.t != 3:
            raise MethodNotApplicable(f"{method.name} needs t = 3")
        if method is LSumMethod.Symmetric3D and not self.is_symmetric():
            raise MethodNotApplicable(f"{self.spec.canonical} failed the symmetry probe")
        start = time.perf_counter()
        report = LSumReport(
            expr=self.spec.canonical,
            t=self.spec.t,
            params=self.spec.param_map,
            method=method,
            backend=self.backend,
            n_max=n_max,
        )
        running = self.zero
        for n in range(1, n_max + 1):
            lk = self.l_element(n, method)
            if method is LSumMethod.Symmetric3D and report.symmetry_violation_k is None:
                if not self.agrees(lk, self.l_element_strong(n)):
                    report.symmetry_violation_k = n
            report.l_elements.append(lk)
            running = running + lk
            total = self.total_sum(n)
            ok = self.agrees(running, total) and report.symmetry_violation_k is None
            report.verdicts.append(ok)
            if not ok and report.first_fail_n is None:
                report.first_fail_n = n
                report.residual = running - total
        report.wall_ms = (time.perf_counter() - start) * 1000
        return report


@dataclass
class LSumReport:
    expr: str
    t: int
    params: dict
    method: LSumMethod
    backend: str
    n_max: int
    l_elements: list = field(default_factory=list)
    verdicts: List[bool] = field(default_factory=list)
    first_fail_n: Optional[int] = None
    residual: Optional[Scalar] = None
    symmetry_violation_k: Optional[int] = None
    wall_ms: float = 0.0

    @property
    def passed(self) -> bool:
        return self.first_fail_n is None and all(self.verdicts)


@lru_cache(maxsize=256)
def engine_for(spec: ArraySpec, backend: str = "exact") -> LSumEngine:
    return LSumEngine(spec, backend)


def total_sum(spec: ArraySpec, n: int, backend: str = "exact"):
    return engine_for(spec, backend).total_sum(n)


def l_element_3d(spec: ArraySpec, k: int, backend: str = "exact"):
    return engine_for(spec, backend).l_element_3d(k)


def l_element_symmetric(spec: ArraySpec, k: int, backend: str = "exact"):
    return engine_for(spec, backend).l_element_symmetric(k)


def l_element_general(spec: ArraySpec, k: int, backend: str = "exact", fast: bool = True):
    return engine_for(spec, backend).l_element_general(k, fast=fast)


def l_element_strong(spec: ArraySpec, k: int, backend: str = "exact"):
    return engine_for(spec, backend).l_element_strong(k)


def default_method(t: int) -> LSumMethod:
    return LSumMethod.General3D if t == 3 else LSumMethod.GeneralT


def verify_rearrangement(
    spec: ArraySpec, n_max: int, backend: str = "exact", method: Optional[LSumMethod] = None
) -> LSumReport:
    """Check sum_{k<=n} L_k == total(n) for every n <= n_max."""
    method = method or default_method(spec.t)
    return engine_for(spec, backend).verify(n_max, method)

