"""Text, LaTeX and JSON renderings of expressions, scalars and identities."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import List, Optional

from .errors import LSumError
from .exact import FormalPoly
from .expr import (
    ArraySpec,
    compile_entry,
    BinOp,
    Call,
    Factorial,
    Index,
    Neg,
    Num,
    Param,
    detect_separable,
    free_indices,
)

# -- scalars --------------------------------------------------------------


def rational_str(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def to_jsonable(value):
    """JSON form of a scalar: "p/q" strings, monomial lists, or numbers."""
    if value is None:
        return None
    if isinstance(value, FormalPoly):
        return [
            {
                "coeff": rational_str(c),
                "atoms": [{"name": a.name, "arg": a.arg, "exp": e} for a, e in mono],
            }
            for mono, c in value.items()
        ]
    if isinstance(value, float):
        return value
    return rational_str(value)


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True)


def scalar_text(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return repr(value)
    return str(value)


_ATOM_LATEX = {"gamma": r"\gamma", "zeta2": r"\zeta(2)", "zeta3": r"\zeta(3)", "H0": r"\mathfrak{H}(1,2)"}


def _atom_latex(atom) -> str:
    if atom.name in _ATOM_LATEX:
        return _ATOM_LATEX[atom.name]
    if atom.name == "f":
        return f"f({atom.arg})"
    return rf"\{atom.name} {atom.arg}"


def _frac_latex(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return rf"\frac{{{q.numerator}}}{{{q.denominator}}}"


def scalar_latex(value) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    if not isinstance(value, FormalPoly):
        q = Fraction(value)
        return ("-" if q < 0 else "") + _frac_latex(abs(q))
    if value.is_zero():
        return "0"
    out = []
    for i, (mono, c) in enumerate(value.items()):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        factors = " ".join(_atom_latex(a) + (f"^{{{e}}}" if e > 1 else "") for a, e in mono)
        if not factors:
            body = _frac_latex(mag)
        elif mag == 1:
            body = factors
        else:
            body = f"{_frac_latex(mag)} {factors}"
        out.append(("-" if sign == "-" else "") + body if i == 0 else f" {sign} {body}")
    return "".join(out)


# -- expressions -------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}


def _prec(node) -> int:
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return 3
    if isinstance(node, Factorial):
        return 5
    return 6


def to_text(node, subst: Optional[dict] = None) -> str:
    """Readable infix with minimal parentheses; ``subst`` renames indices."""
    subst = subst or {}

    def wrap(child, limit, strict=False):
        text = to_text(child, subst)
        p = _prec(child)
        return f"({text})" if p < limit or (strict and p == limit) else text

    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Index):
        return str(subst.get(node.name, node.name))
    if isinstance(node, Param):
        return node.name
    if isinstance(node, Call):
        return f"{node.func}({to_text(node.arg, subst)})"
    if isinstance(node, Factorial):
        return wrap(node.operand, 6) + "!"
    if isinstance(node, Neg):
        return "-" + wrap(node.operand, 3)
    p = _PREC[node.op]
    if node.op == "^":
        return f"{wrap(node.left, 6)}^{wrap(node.right, 4)}"
    return f"{wrap(node.left, p)}{node.op if node.op in '*/' else ' ' + node.op + ' '}{wrap(node.right, p, strict=True)}"


def to_latex(node, subst: Optional[dict] = None) -> str:
    subst = subst or {}

    def wrap(child, limit, strict=False):
        text = to_latex(child, subst)
        p = _prec(child)
        return rf"\left({text}\right)" if p < limit or (strict and p == limit) else text

    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Index):
        return str(subst.get(node.name, node.name)).replace("x", "x_")
    if isinstance(node, Param):
        return node.name
    if isinstance(node, Call):
        name = "f" if node.func == "f" else "\\" + node.func
        return rf"{name}\left({to_latex(node.arg, subst)}\right)"
    if isinstance(node, Factorial):
        return wrap(node.operand, 6) + "!"
    if isinstance(node, Neg):
        return "-" + wrap(node.operand, 3)
    if node.op == "/":
        return rf"\frac{{{to_latex(node.left, subst)}}}{{{to_latex(node.right, subst)}}}"
    if node.op == "^":
        return f"{{{wrap(node.left, 5)}}}^{{{to_latex(node.right, subst)}}}"
    p = _PREC[node.op]
    op = r" \cdot " if node.op == "*" else f" {node.op} "
    return f"{wrap(node.left, p)}{op}{wrap(node.right, p, strict=True)}"


# -- identities ----------------------------------------------------------------


def _int_poly_text(coeffs: List[int], latex: bool = False) -> str:
    """Render sum coeffs[i] * k^i, highest degree first."""
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        if i == 0:
            power = ""
        elif i == 1:
            power = "k"
        else:
            power = f"k^{{{i}}}" if latex else f"k^{i}"
        mag = str(abs(c)) if abs(c) != 1 or not power else ""
        body = mag + ("" if latex or not (mag and power) else "*") + power
        parts.append(("-" if c < 0 else "+", body))
    if not parts:
        return "0"
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


def shell_coefficient(t: int) -> List[int]:
    """Coefficients of k^(t-1) - (k-1)^(t-1) in increasing degree."""
    coeffs = [0] * t
    coeffs[t - 1] += 1
    for i in range(t):
        coeffs[i] -= comb(t - 1, i) * (-1) ** (t - 1 - i)
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


@dataclass
class IdentityText:
    entry: str
    structural: List[str]
    closed_form: Optional[str]
    notes: List[str]


def _power_exponent(factor, spec: ArraySpec):
    """Return s if ``factor`` is x^(-s) for its own index x, else None."""

    def int_value(node):
        v = compile_entry(spec, "exact", node)((1,) * spec.t)
        return int(v) if v.denominator == 1 else None

    try:
        if isinstance(factor, Index):
            return -1
        if isinstance(factor, BinOp) and factor.op == "/" and factor.left == Num(1):
            den = factor.right
            if isinstance(den, Index):
                return 1
            if isinstance(den, BinOp) and den.op == "^" and isinstance(den.left, Index):
                return int_value(den.right)
        if isinstance(factor, BinOp) and factor.op == "^" and isinstance(factor.left, Index):
            e = int_value(factor.right)
            return None if e is None else -e
    except LSumError:
        return None
    return None


_F_NAMES = {
    "ln": ("ln Gamma(k+1)", r"\ln\Gamma(k+1)", "ln Gamma(n+1)", r"\ln\Gamma(n+1)", "ln k", r"\ln k"),
    "tan": ("T(k)", r"\mathfrak{T}(k)", "T(n)", r"\mathfrak{T}(n)", "tan k", r"\tan k"),
    "factorial": ("P(k)", r"\mathfrak{P}(k)", "P(n)", r"\mathfrak{P}(n)", "k!", "k!"),
    "f": ("F(k)", r"\mathfrak{F}(k)", "F(n)", r"\mathfrak{F}(n)", "f(k)", "f(k)"),
}


def _f_family(spec: ArraySpec):
    factors = detect_separable(spec)
    if factors is None:
        return None
    live = [(i, f) for i, f in enumerate(factors) if f != Num(1)]
    if len(live) != 1:
        return None
    _, f = live[0]
    if isinstance(f, Call) and isinstance(f.arg, Index):
        return f.func
    if isinstance(f, Factorial) and isinstance(f.operand, Index):
        return "factorial"
    return None


def _power_family(spec: ArraySpec):
    if spec.t < 2:
        return None
    factors = detect_separable(spec)
    if factors is None:
        return None
    exps = {_power_exponent(f, spec) for f in factors}
    if len(exps) != 1 or None in exps:
        return None
    return exps.pop()


def _zeta_name(s: int, at: str, latex: bool) -> str:
    if s == 1:
        return f"H_{{{at}}}" if latex else f"H_{at}"
    if latex:
        return rf"\zeta_{{{at}}}({s})"
    return f"zeta_{at}({s})"


def _power_closed_form(t: int, s: int, latex: bool) -> str:
    terms = []
    for m in range(1, t + 1):
        c = (-1) ** (m - 1) * comb(t, m)
        zk = _zeta_name(s, "k", latex)
        zpow = "" if m == t else (zk if t - m == 1 else (f"{zk}^{{{t - m}}}" if latex else f"{zk}^{t - m}"))
        e = m * s
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if latex:
            kpart = f"k^{{{e}}}" if e not in (0, 1) else ("k" if e == 1 else "1")
            if e > 0:
                num = f"{mag if mag != 1 else ''} {zpow}".strip() or "1"
                body = rf"\frac{{{num}}}{{{kpart}}}"
            else:
                kp = f"k^{{{-e}}}" if -e > 1 else ("k" if e == -1 else "")
                body = " ".join(x for x in (str(mag) if mag != 1 else "", kp, zpow) if x) or "1"
        else:
            kp = f"k^{-e}" if e != -1 else "k"
            if e == 0:
                kp = ""
            num = "*".join(x for x in (str(mag) if mag != 1 else "", zpow) if x)
            if e > 0:
                body = f"{num or '1'}/{'k' if e == 1 else f'k^{e}'}"
            else:
                body = "*".join(x for x in (num, kp) if x) or "1"
        terms.append((sign, body))
    inner = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        inner += f" {sign} {body}"
    zn = _zeta_name(s, "n", latex)
    rhs = f"{zn}^{{{t}}}" if latex else f"{zn}^{t}"
    if latex:
        return rf"\sum_{{k=1}}^{{n}} \left( {inner} \right) = {rhs}"
    return f"sum_{{k=1}}^{{n}} ( {inner} ) = {rhs}"


def _f_closed_form(t: int, family: str, latex: bool) -> str:
    Fk, Fk_l, Fn, Fn_l, fk, fk_l = _F_NAMES[family]
    if t == 1:
        return rf"\sum_{{k=1}}^{{n}} {fk_l} = {Fn_l}" if latex else f"sum_{{k=1}}^{{n}} {fk} = {Fn}"
    coeff = _int_poly_text(shell_coefficient(t), latex=latex)
    low = _int_poly_text([-1, 1], latex=latex)  # k - 1
    if latex:
        lowpow = "" if t == 1 else (f"({low})" if t == 2 else f"({low})^{{{t - 1}}}")
        npow = "" if t == 1 else ("n" if t == 2 else f"n^{{{t - 1}}}")
        c = "" if coeff == "1" else f"({coeff})"
        return rf"\sum_{{k=1}}^{{n}} \left\{{ {c}{Fk_l} + {lowpow}{fk_l} \right\}} = {npow}{Fn_l}"
    lowpow = "" if t == 1 else (f"({low})*" if t == 2 else f"({low})^{t - 1}*")
    npow = "" if t == 1 else ("n*" if t == 2 else f"n^{t - 1}*")
    c = "" if coeff == "1" else f"({coeff})*"
    return f"sum_{{k=1}}^{{n}} {{ {c}{Fk} + {lowpow}{fk} }} = {npow}{Fn}"


def identity_report(spec: ArraySpec, latex: bool = False) -> IdentityText:
    """Structural L-summing identity for ``spec`` and, for known families,
    a closed form."""
    names = spec.index_names
    t = spec.t
    lat = to_latex if latex else to_text
    entry = lat(spec.entry)
    structural = []

    loose = _prec(spec.entry) == 1 or isinstance(spec.entry, Neg)

    def cell(pinned):
        sub = {n: "k" for i, n in enumerate(names) if i in pinned}
        body = lat(spec.entry, sub)
        if not loose:
            return body
        return rf"\left( {body} \right)" if latex else f"({body})"

    pieces = []
    for m in range(1, t + 1):
        sign = "+" if m % 2 else "-"
        for pinned in _subsets_of_size(t, m):
            free = [names[i] for i in range(t) if i not in pinned]
            body = cell(pinned)
            if free:
                if latex:
                    idx = ",".join(n.replace("x", "x_") for n in free)
                    body = rf"\sum_{{{idx}=1}}^{{k}} {body}"
                else:
                    body = f"sum_{{{','.join(free)}=1..k}} {body}"
            pieces.append((sign, body))
    summand = entry
    if loose:
        summand = rf"\left( {entry} \right)" if latex else f"({entry})"
    lk = pieces[0][1] + "".join(f" {s} {b}" for s, b in pieces[1:])
    all_idx = ",".join(n.replace("x", "x_") if latex else n for n in names)
    if latex:
        structural.append(rf"L_k = {lk}")
        structural.append(rf"\sum_{{k=1}}^{{n}} L_k = \sum_{{{all_idx}=1}}^{{n}} {summand}")
    else:
        structural.append(f"L_k = {lk}")
        structural.append(f"sum_{{k=1..n}} L_k = sum_{{{all_idx}=1..n}} {summand}")

    notes = []
    unused = [n for n in names if n not in free_indices(spec.entry)]
    if unused:
        if len(unused) > 1:
            notes.append(f"indices {', '.join(unused)} do not appear; the array is constant along them")
        else:
            notes.append(f"index {unused[0]} does not appear; the array is constant along it")
    closed = None
    s = _power_family(spec)
    if s is not None:
        closed = _power_closed_form(t, s, latex)
        if s == 1:
            notes.append("H_k = psi(k+1) + gamma")
        elif s == -1:
            notes.append("zeta_k(-1) = k(k+1)/2")
    else:
        fam = _f_family(spec)
        if fam is not None:
            closed = _f_closed_form(t, fam, latex)
            if fam == "factorial":
                notes.append("P(k) = sum_{a<=k} a! = H(1,2) - (k+1)! H(1,k+2) with H(a,b) = 2F0(a,b;;1)")
    return IdentityText(entry, structural, closed, notes)


def _subsets_of_size(t: int, m: int):
    return combinations(range(t), m)


def latex_document(lines: List[str], title: Optional[str] = None) -> str:
    body = "\n".join(lines)
    head = f"\\section*{{{title}}}\n" if title else ""
    return (
        "\\documentclass{article}\n"
        "\\usepackage{amsmath,amssymb}\n"
        "\\begin{document}\n"
        f"{head}{body}\n"
        "\\end{document}\n"
    )


def latex_display(math: str) -> str:
    return f"\\[\n{math}\n\\]"
