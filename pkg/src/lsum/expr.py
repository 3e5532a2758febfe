"""The array-entry expression language.

Grammar::

    expr    := term { ("+" | "-") term } ;
    term    := unary { ("*" | "/") unary } ;
    unary   := "-" unary | postfix ;
    postfix := atom { "!" } ;
    atom    := base [ "^" unary ] ;
    base    := INTEGER | IDENT | IDENT "(" expr ")" | "(" expr ")" ;

Identifiers ``a``, ``b``, ``c`` and ``x1`` ... ``x9`` are index variables;
any other identifier not followed by ``(`` is a parameter.  Functions are
``ln``, ``tan`` and ``f``; the last is an unspecified function that exists
only in the formal backend.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Tuple, Union

from .errors import DimensionError, DomainError, EvaluationError, NumericError, ParseError
from .exact import MAX_ATOM_ARG, Atom, FormalPoly, rational_pow

FUNCTIONS = ("ln", "tan", "f")
ABC = ("a", "b", "c")
_X_INDEX = re.compile(r"x[1-9]\Z")


# -- AST --------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Index:
    name: str


@dataclass(frozen=True)
class Param:
    name: str


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class Factorial:
    operand: "Expr"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"


Expr = Union[Num, Index, Param, BinOp, Neg, Factorial, Call]


def is_index_name(name: str) -> bool:
    return name in ABC or bool(_X_INDEX.match(name))


def children(node: Expr) -> Tuple[Expr, ...]:
    if isinstance(node, BinOp):
        return (node.left, node.right)
    if isinstance(node, (Neg, Factorial)):
        return (node.operand,)
    if isinstance(node, Call):
        return (node.arg,)
    return ()


def walk(node: Expr):
    yield node
    for child in children(node):
        yield from walk(child)


def free_indices(node: Expr) -> set:
    return {n.name for n in walk(node) if isinstance(n, Index)}


def free_params(node: Expr) -> set:
    return {n.name for n in walk(node) if isinstance(n, Param)}


def functions_used(node: Expr) -> set:
    return {n.func for n in walk(node) if isinstance(n, Call)}


# -- lexer ------------------------------------------------------------------


@dataclass
class Token:
    kind: str  # INT, IDENT, OP, END
    text: str
    offset: int


_SINGLE = set("+-*/^!()")


def tokenize(text: str) -> List[Token]:
    tokens = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(Token("INT", text[i:j], i))
            i = j
        elif c.isascii() and c.isalpha():
            j = i
            while j < len(text) and text[j].isascii() and text[j].isalnum():
                j += 1
            tokens.append(Token("IDENT", text[i:j], i))
            i = j
        elif c in _SINGLE:
            tokens.append(Token("OP", c, i))
            i += 1
        else:
            raise ParseError(f"unexpected character {c!r}", i)
    tokens.append(Token("END", "", len(text)))
    return tokens


# -- parser -----------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def accept(self, op: str) -> bool:
        if self.tok.kind == "OP" and self.tok.text == op:
            self.pos += 1
            return True
        return False

    def expect(self, op: str):
        if not self.accept(op):
            found = self.tok.text or "end of input"
            raise ParseError(f"expected {op!r}, found {found!r}", self.tok.offset)

    def parse(self) -> Expr:
        node = self.expr()
        if self.tok.kind != "END":
            raise ParseError(f"unexpected token {self.tok.text!r}", self.tok.offset)
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.tok.kind == "OP" and self.tok.text in "+-":
            op = self.tok.text
            self.pos += 1
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.tok.kind == "OP" and self.tok.text in "*/":
            op = self.tok.text
            self.pos += 1
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Expr:
        if self.accept("-"):
            return Neg(self.unary())
        return self.postfix()

    def postfix(self) -> Expr:
        node = self.atom()
        while self.accept("!"):
            node = Factorial(node)
        return node

    def atom(self) -> Expr:
        node = self.base()
        if self.accept("^"):
            node = BinOp("^", node, self.unary())
        return node

    def base(self) -> Expr:
        tok = self.tok
        if tok.kind == "INT":
            self.pos += 1
            return Num(int(tok.text))
        if tok.kind == "IDENT":
            self.pos += 1
            if self.accept("("):
                if tok.text not in FUNCTIONS:
                    raise ParseError(f"unknown function {tok.text!r}", tok.offset)
                arg = self.expr()
                self.expect(")")
                return Call(tok.text, arg)
            if tok.text in FUNCTIONS:
                raise ParseError(f"function {tok.text!r} needs an argument", tok.offset)
            return Index(tok.text) if is_index_name(tok.text) else Param(tok.text)
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        found = tok.text or "end of input"
        raise ParseError(f"unexpected {found!r}", tok.offset)


def parse(text: str) -> Expr:
    """Parse expression text into an AST; raises :class:`ParseError`."""
    return _Parser(text).parse()


def print_canonical(node: Expr) -> str:
    """Fully parenthesized rendering that :func:`parse` maps back to ``node``."""
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, (Index, Param)):
        return node.name
    if isinstance(node, BinOp):
        left = print_canonical(node.left)
        if node.op == "^" and isinstance(node.left, Factorial):
            left = f"({left})"
        return f"({left} {node.op} {print_canonical(node.right)})"
    if isinstance(node, Neg):
        return f"(-{print_canonical(node.operand)})"
    if isinstance(node, Factorial):
        return f"({print_canonical(node.operand)})!"
    if isinstance(node, Call):
        return f"{node.func}({print_canonical(node.arg)})"
    raise TypeError(f"not an expression node: {node!r}")


# -- array specs --------------------------------------------------------------


def default_index_names(t: int, used: set) -> Tuple[str, ...]:
    """Pick the index naming convention for dimension ``t``.

    a, b, c are accepted for t <= 3 and x1..x9 for any t; mixing is an error.
    """
    abc = used & set(ABC)
    xs = used - abc
    if abc and xs:
        raise DimensionError("index names a,b,c and x1..x9 cannot be mixed")
    if xs or (t > 3 and not abc):
        if t > 9:
            raise DimensionError("at most 9 indices are supported")
        names = tuple(f"x{i}" for i in range(1, t + 1))
    else:
        if t > 3:
            raise DimensionError("index names a,b,c only cover dimensions 1 to 3")
        names = ABC[:t]
    extra = used - set(names)
    if extra:
        raise DimensionError(f"indices {sorted(extra)} exceed dimension {t}")
    return names


def _check_exponents(node: Expr):
    for n in walk(node):
        if isinstance(n, BinOp) and n.op == "^" and free_indices(n.right):
            raise DomainError("index variables are not allowed in exponents")


@dataclass(frozen=True)
class ArraySpec:
    """A t-dimensional array A[x1..xt] defined by an entry expression."""

    t: int
    index_names: Tuple[str, ...]
    entry: Expr
    params: Tuple[Tuple[str, Union[Fraction, float]], ...] = ()
    text: str = field(default="", compare=False)

    @classmethod
    def build(cls, expr: Union[str, Expr], t: int, params: Optional[Dict] = None) -> "ArraySpec":
        if t < 1:
            raise DimensionError("dimension must be at least 1")
        entry = parse(expr) if isinstance(expr, str) else expr
        names = default_index_names(t, free_indices(entry))
        _check_exponents(entry)
        bound = {}
        for name, value in (params or {}).items():
            bound[name] = value if isinstance(value, float) else Fraction(value)
        missing = free_params(entry) - set(bound)
        if missing:
            raise EvaluationError(f"unbound parameters: {sorted(missing)}")
        text = expr if isinstance(expr, str) else print_canonical(entry)
        return cls(t, names, entry, tuple(sorted(bound.items())), text)

    @property
    def param_map(self) -> Dict[str, Union[Fraction, float]]:
        return dict(self.params)

    @property
    def canonical(self) -> str:
        return print_canonical(self.entry)

    @property
    def key(self):
        return (self.canonical, self.t, self.index_names, self.params)

    def needs_formal(self) -> bool:
        return bool(functions_used(self.entry))

    def with_entry(self, entry: Expr) -> "ArraySpec":
        return ArraySpec(self.t, self.index_names, entry, self.params)


# -- evaluation ---------------------------------------------------------------


def _as_int(value, what: str) -> int:
    if isinstance(value, FormalPoly):
        if not value.is_constant():
            raise EvaluationError(f"{what} must be a rational constant, got {value}")
        value = value.constant_value()
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction) and value.denominator == 1:
        return value.numerator
    raise EvaluationError(f"{what} must be an integer, got {value}")


def _compile_exact(node: Expr, pos: Dict[str, int], params: Dict, formal: bool) -> Callable:
    rec = lambda n: _compile_exact(n, pos, params, formal)  # noqa: E731
    if isinstance(node, Num):
        v = node.value
        return lambda idx: v
    if isinstance(node, Index):
        i = pos[node.name]
        return lambda idx: idx[i]
    if isinstance(node, Param):
        v = params[node.name]
        if isinstance(v, float):
            raise EvaluationError(f"parameter {node.name}={v} is a float; use the float backend")
        return lambda idx: v
    if isinstance(node, Neg):
        f = rec(node.operand)
        return lambda idx: -f(idx)
    if isinstance(node, Factorial):
        f = rec(node.operand)

        def fact(idx):
            n = _as_int(f(idx), "factorial argument")
            if n < 0:
                raise EvaluationError("factorial of a negative integer")
            return math.factorial(n)

        return fact
    if isinstance(node, Call):
        f = rec(node.arg)
        if not formal:
            raise EvaluationError(f"{node.func} needs the formal or float backend")
        name = node.func

        def call(idx):
            j = _as_int(f(idx), f"{name} argument")
            if j < 1 or j > MAX_ATOM_ARG:
                raise EvaluationError(f"{name} argument {j} must be a positive integer")
            if name == "ln" and j == 1:
                return 0
            return FormalPoly.atom(Atom(name, j))

        return call
    if isinstance(node, BinOp):
        lf, rf = rec(node.left), rec(node.right)
        op = node.op
        if op == "+":
            return lambda idx: lf(idx) + rf(idx)
        if op == "-":
            return lambda idx: lf(idx) - rf(idx)
        if op == "*":
            return lambda idx: lf(idx) * rf(idx)
        if op == "/":

            def div(idx):
                num, den = lf(idx), rf(idx)
                if isinstance(den, FormalPoly):
                    if den.is_constant() and den.constant_value() == 0:
                        raise EvaluationError("division by zero")
                elif den == 0:
                    raise EvaluationError("division by zero")
                if isinstance(num, int) and isinstance(den, int):
                    return Fraction(num, den)
                try:
                    return num / den
                except DomainError as exc:
                    raise EvaluationError(str(exc)) from exc

            return div
        if op == "^":

            def power(idx):
                base = lf(idx)
                e = _as_int(rf(idx), "exponent")
                if isinstance(base, FormalPoly):
                    try:
                        return base**e
                    except DomainError as exc:
                        raise EvaluationError(str(exc)) from exc
                if e < 0:
                    if base == 0:
                        raise EvaluationError("zero raised to a negative power")
                    return rational_pow(base, e)
                return base**e

            return power
    raise TypeError(f"not an expression node: {node!r}")


def _compile_float(node: Expr, pos: Dict[str, int], params: Dict) -> Callable:
    rec = lambda n: _compile_float(n, pos, params)  # noqa: E731
    if isinstance(node, Num):
        v = float(node.value)
        return lambda idx: v
    if isinstance(node, Index):
        i = pos[node.name]
        return lambda idx: float(idx[i])
    if isinstance(node, Param):
        v = float(params[node.name])
        return lambda idx: v
    if isinstance(node, Neg):
        f = rec(node.operand)
        return lambda idx: -f(idx)
    if isinstance(node, Factorial):
        f = rec(node.operand)

        def fact(idx):
            x = f(idx)
            if x < 0 or x != int(x):
                raise EvaluationError(f"factorial of non-natural value {x}")
            try:
                return float(math.factorial(int(x)))
            except OverflowError as exc:
                raise NumericError("factorial overflows a double") from exc

        return fact
    if isinstance(node, Call):
        f = rec(node.arg)
        if node.func == "f":
            raise EvaluationError("f has no numeric value; use the formal backend")
        if node.func == "ln":

            def ln(idx):
                x = f(idx)
                if x <= 0:
                    raise EvaluationError(f"ln of non-positive value {x}")
                return math.log(x)

            return ln
        return lambda idx: math.tan(f(idx))
    if isinstance(node, BinOp):
        lf, rf = rec(node.left), rec(node.right)
        op = node.op
        if op == "+":
            return lambda idx: lf(idx) + rf(idx)
        if op == "-":
            return lambda idx: lf(idx) - rf(idx)
        if op == "*":
            return lambda idx: lf(idx) * rf(idx)
        if op == "/":

            def div(idx):
                den = rf(idx)
                if den == 0:
                    raise EvaluationError("division by zero")
                return lf(idx) / den

            return div
        if op == "^":

            def power(idx):
                base, e = lf(idx), rf(idx)
                if base < 0 and e != int(e):
                    raise EvaluationError("negative base with a non-integer exponent")
                if base == 0 and e < 0:
                    raise EvaluationError("zero raised to a negative power")
                try:
                    return base**e
                except OverflowError as exc:
                    raise NumericError("power overflows a double") from exc

            return power
    raise TypeError(f"not an expression node: {node!r}")


@lru_cache(maxsize=512)
def compile_entry(spec: ArraySpec, backend: str, entry: Optional[Expr] = None) -> Callable:
    """Return ``fn(idx_tuple) -> scalar`` for the array's entry (or ``entry``)."""
    node = spec.entry if entry is None else entry
    pos = {name: i for i, name in enumerate(spec.index_names)}
    params = spec.param_map
    if backend == "float":
        raw = _compile_float(node, pos, params)

        def run_float(idx):
            value = raw(idx)
            if isinstance(value, complex) or not math.isfinite(value):
                raise NumericError(f"non-finite entry at {idx}")
            return value

        return run_float
    if backend not in ("exact", "formal"):
        raise ValueError(f"unknown backend {backend!r}")
    formal = backend == "formal"
    raw = _compile_exact(node, pos, params, formal)
    if formal:
        return lambda idx: FormalPoly.const(raw(idx))

    def run_exact(idx):
        value = raw(idx)
        if isinstance(value, FormalPoly):
            raise EvaluationError("exact backend produced a formal value")
        return Fraction(value)

    return run_exact


def check_backend(spec: ArraySpec, backend: str):
    """Reject combinations that can never evaluate, before any computation."""
    funcs = functions_used(spec.entry)
    if backend == "exact" and funcs:
        raise EvaluationError(f"functions {sorted(funcs)} need the formal or float backend")
    if backend == "float" and "f" in funcs:
        raise EvaluationError("f needs the formal backend")
    if backend in ("exact", "formal"):
        floats = [name for name, v in spec.params if isinstance(v, float)]
        if floats:
            raise EvaluationError(f"float parameters {floats} need the float backend")
    compile_entry(spec, backend)


def eval_entry(spec: ArraySpec, indices, backend: str = "exact"):
    """Evaluate A[indices] under ``backend`` ('exact', 'formal' or 'float')."""
    indices = tuple(indices)
    if len(indices) != spec.t:
        raise DimensionError(f"expected {spec.t} indices, got {len(indices)}")
    for i in indices:
        if not isinstance(i, int) or i < 1:
            raise DomainError(f"lattice indices start at 1, got {i}")
    return compile_entry(spec, backend)(indices)


def _probe_backend(spec: ArraySpec) -> str:
    if any(isinstance(v, float) for _, v in spec.params):
        return "float"
    return "formal" if spec.needs_formal() else "exact"


def detect_symmetry(spec: ArraySpec, probe_n: int = 4) -> bool:
    """True if the entry is invariant under every permutation of its indices
    on the probe cube ``[1, probe_n]^t``.

    Passing the probe is evidence, not proof.
    """
    if probe_n < 2:
        raise DomainError("probe_n must be at least 2")
    fn = compile_entry(spec, _probe_backend(spec))
    for idx in itertools.product(range(1, probe_n + 1), repeat=spec.t):
        value = fn(idx)
        for perm in set(itertools.permutations(idx)):
            if perm != idx and fn(perm) != value:
                return False
    return True


# -- separability -----------------------------------------------------------


def _factor_list(node: Expr):
    """Flatten into ``[(factor, sign)]`` with sign +1 (numerator) or -1.

    Returns None when a factor mentions more than one index.
    """
    if isinstance(node, BinOp) and node.op == "*":
        left, right = _factor_list(node.left), _factor_list(node.right)
        if left is None or right is None:
            return None
        return left + right
    if isinstance(node, BinOp) and node.op == "/":
        left, right = _factor_list(node.left), _factor_list(node.right)
        if left is None or right is None:
            return None
        return left + [(f, -s) for f, s in right]
    if isinstance(node, BinOp) and node.op == "^" and len(free_indices(node.left)) > 1:
        inner = _factor_list(node.left)
        if inner is None:
            return None
        return [(BinOp("^", f, node.right), s) for f, s in inner]
    if isinstance(node, Neg):
        inner = _factor_list(node.operand)
        return None if inner is None else [(Neg(Num(1)), 1)] + inner
    if len(free_indices(node)) > 1:
        return None
    return [(node, 1)]


def _product(nodes: List[Expr]) -> Optional[Expr]:
    out = None
    for n in nodes:
        out = n if out is None else BinOp("*", out, n)
    return out


def detect_separable(spec: ArraySpec) -> Optional[Tuple[Expr, ...]]:
    """Split the entry into one single-index factor per axis, if syntactically
    possible.  Constant factors are folded into the first axis."""
    factors = _factor_list(spec.entry)
    if factors is None:
        return None
    groups: Dict[Optional[str], Tuple[list, list]] = {}
    for node, sign in factors:
        idx = free_indices(node)
        key = next(iter(idx)) if idx else None
        num, den = groups.setdefault(key, ([], []))
        if not (isinstance(node, Num) and node.value == 1):
            (num if sign > 0 else den).append(node)
    const_num, const_den = groups.pop(None, ([], []))
    out = []
    for i, name in enumerate(spec.index_names):
        num, den = groups.get(name, ([], []))
        if i == 0:
            num, den = const_num + num, const_den + den
        top = _product(num) or Num(1)
        bottom = _product(den)
        out.append(top if bottom is None else BinOp("/", top, bottom))
    return tuple(out)
