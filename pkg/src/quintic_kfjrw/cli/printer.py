"""Canonical text for ASTs, plus DSL rendering of field elements.

Parentheses are emitted only where the grammar needs them, so printing a
parsed tree and parsing the result gives the same tree back.
"""

from fractions import Fraction

from .ast import (
    Apply, Bin, Call, ExpandAt, Indexed, Neg, Num, Omega, Pair, Pow, Program,
    Report, Sym, Verify,
)

__all__ = ["to_text", "qrat_to_dsl", "cyclo_to_dsl", "exponent_text"]

# binding strength of each node kind
_SUM, _PROD, _UNARY, _POW, _ATOM = 1, 2, 3, 4, 5


def _prec(node):
    if isinstance(node, Bin):
        return _SUM if node.op in "+-" else _PROD
    if isinstance(node, Neg):
        return _UNARY
    if isinstance(node, Pow):
        return _POW
    return _ATOM


def exponent_text(exp):
    exp = Fraction(exp)
    if exp.denominator == 1:
        return str(exp.numerator)
    return f"({exp.numerator}/{exp.denominator})"


def _wrap(node, need):
    s = _expr(node)
    return f"({s})" if _prec(node) < need else s


def _expr(node):
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Sym):
        return node.name
    if isinstance(node, Indexed):
        return f"{node.name}[{','.join(str(i) for i in node.indices)}]"
    if isinstance(node, Call):
        return f"{node.name}({', '.join(_expr(a) for a in node.args)})"
    if isinstance(node, Neg):
        return "-" + _wrap(node.arg, _UNARY)
    if isinstance(node, Pow):
        return _wrap(node.base, _ATOM) + "^" + exponent_text(node.exp)
    if isinstance(node, Bin):
        p = _prec(node)
        sep = f" {node.op} " if p == _SUM else node.op
        return _wrap(node.left, p) + sep + _wrap(node.right, p + 1)
    raise TypeError(f"not an expression node: {node!r}")


def to_text(node):
    """Canonical text of any node."""
    if isinstance(node, Program):
        return "\n".join(to_text(s) for s in node.statements)
    if isinstance(node, Apply):
        out = f"apply {_expr(node.op)} to {_expr(node.target)}"
        if node.order is not None:
            out += f" order {node.order}"
        if node.twist is not None:
            out += f" twist {_expr(node.twist)}"
        return out
    if isinstance(node, Verify):
        parts = ["verify", node.name] + [f"{k}={v}" for k, v in node.args]
        if node.order is not None:
            parts += ["order", str(node.order)]
        return " ".join(parts)
    if isinstance(node, ExpandAt):
        return f"expand-at {_expr(node.target)} point {_expr(node.point)} order {node.order}"
    if isinstance(node, Pair):
        return f"pair {_expr(node.left)}, {_expr(node.right)}"
    if isinstance(node, Omega):
        return f"omega {_expr(node.left)}, {_expr(node.right)}"
    if isinstance(node, Report):
        return f"report {node.name}"
    return _expr(node)


# field elements in DSL syntax

def _rational_text(c):
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _signed_terms(pairs):
    """[(coefficient Fraction, monomial text or '')] -> 'a + b - c'."""
    out = ""
    for c, mono in pairs:
        mag = abs(c)
        if mono and mag == 1:
            body = mono
        elif mono:
            body = f"{_rational_text(mag)}*{mono}"
        else:
            body = _rational_text(mag)
        if not out:
            out = ("-" if c < 0 else "") + body
        else:
            out += (" - " if c < 0 else " + ") + body
    return out or "0"


def cyclo_to_dsl(c):
    """Element of Q(zeta_N) as a sum of rational multiples of zeta(N)^i."""
    N = c.level
    pairs = []
    for i, v in enumerate(c.coeffs):
        if v:
            mono = "" if i == 0 else (f"zeta({N})" if i == 1 else f"zeta({N})^{i}")
            pairs.append((v, mono))
    return _signed_terms(pairs)


def _q_mono(k, e):
    exp = Fraction(k, e)
    if exp == 0:
        return ""
    if exp == 1:
        return "q"
    return "q^" + exponent_text(exp)


def _cpoly_dsl(poly, e):
    pieces = []
    for k in range(poly.degree() + 1):
        c = poly.coeff(k)
        if c.is_zero():
            continue
        mono = _q_mono(k, e)
        if c.is_rational():
            pieces.append((c.to_fraction(), mono))
        else:
            inner = cyclo_to_dsl(c)
            if not mono:
                if inner.startswith("-") and " " not in inner:
                    pieces.append((Fraction(-1), inner[1:]))
                else:
                    pieces.append((Fraction(1), inner if " " not in inner or len(pieces) == 0 else f"({inner})"))
                continue
            if " " in inner or inner.startswith("-"):
                inner = f"({inner})"
            pieces.append((Fraction(1), f"{inner}*{mono}"))
    return _signed_terms(pieces)


def qrat_to_dsl(c, wrap=False):
    """A QRat in DSL syntax; ``wrap`` parenthesizes anything that is not a single factor."""
    from ..qrat import CPoly

    num = _cpoly_dsl(c.num, c.e)
    if c.is_polynomial():
        text = num
        compound = any(ch in num[1:] for ch in "+-/") or num.startswith("-")
    else:
        den = _cpoly_dsl(CPoly.rational(c.level, c.den), c.e)
        if any(ch in num[1:] for ch in "+-"):
            num = f"({num})"
        if any(ch in den for ch in "+-*/^"):
            den = f"({den})"
        text = f"{num}/{den}"
        compound = True
    if wrap and compound:
        return f"({text})"
    return text
