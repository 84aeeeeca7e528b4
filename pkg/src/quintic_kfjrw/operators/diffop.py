"""q-difference operators  sum x^m c_{m,p}(q) S^p  with S = q^(x d/dx).

The commutation rule is S x = q x S, hence S^p x^m = q^(pm) x^m S^p.  An
optional twist character mu replaces S by mu S when the operator is applied
(this is how a q-character dressing e with S(e F) = e mu S(F) is absorbed).
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from ..cyclotomic import CycloElem
from ..errors import LevelMismatch, TruncationTooShort
from ..qrat import QRat, lift_common
from .series import XSeries

__all__ = ["Twist", "DiffOp", "diffop_mul", "diffop_apply"]


@dataclass(frozen=True)
class Twist:
    """mu = q^c0 * zeta_N^k."""

    c0: Fraction
    N: int
    k: int

    def omega(self):
        return CycloElem.root(self.N, self.k)

    def as_qrat(self, e=None, N=None):
        e = e or Fraction(self.c0).denominator
        if (Fraction(self.c0) * e).denominator != 1:
            raise LevelMismatch(f"q^{self.c0} is not a power of q^(1/{e})")
        N = N or self.N
        if N % self.N:
            raise LevelMismatch(f"twist root level {self.N} does not divide {N}")
        return QRat.q_power(self.c0, e, N, coeff=self.omega().embed(N))

    def __str__(self):
        from ..cli.printer import exponent_text

        c0 = Fraction(self.c0)
        parts = []
        if c0:
            parts.append("q" if c0 == 1 else "q^" + exponent_text(c0))
        k = self.k % self.N
        if k:
            parts.append(f"zeta({self.N})" if k == 1 else f"zeta({self.N})^{k}")
        return "*".join(parts) or "1"


def _lcm(a, b):
    return a * b // gcd(a, b)


class DiffOp:
    __slots__ = ("terms", "e", "N")

    def __init__(self, terms, e=1, N=1):
        """``terms``: {(m, p): QRat or rational}; coefficients are lifted to a common level."""
        items = {}
        for (m, p), c in terms.items():
            if m < 0:
                raise ValueError("x-powers must be nonnegative")
            if not isinstance(c, QRat):
                c = QRat.const(c, 1, c.level if isinstance(c, CycloElem) else 1)
            e = _lcm(e, c.e)
            N = _lcm(N, c.level)
            items[(m, p)] = c
        self.e, self.N = e, N
        out = {}
        for key, c in items.items():
            c = c.lift(e, N)
            if key in out:
                c = out[key] + c
            out[key] = c
        self.terms = {k: v for k, v in sorted(out.items()) if not v.is_zero()}

    # constructors
    @classmethod
    def scalar(cls, c, e=1, N=1):
        return cls({(0, 0): c}, e, N)

    @classmethod
    def shift(cls, p=1, coeff=1, e=1, N=1):
        return cls({(0, p): coeff}, e, N)

    @classmethod
    def x_power(cls, m=1, e=1, N=1):
        return cls({(m, 0): 1}, e, N)

    def lift(self, e, N):
        return DiffOp(self.terms, _lcm(e, self.e), _lcm(N, self.N))

    def _common(self, other):
        if not isinstance(other, DiffOp):
            other = DiffOp.scalar(other)
        e = _lcm(self.e, other.e)
        N = _lcm(self.N, other.N)
        return self.lift(e, N), other.lift(e, N)

    def __add__(self, other):
        a, b = self._common(other)
        out = dict(a.terms)
        for k, v in b.terms.items():
            out[k] = out[k] + v if k in out else v
        return DiffOp(out, a.e, a.N)

    __radd__ = __add__

    def __neg__(self):
        return DiffOp({k: -v for k, v in self.terms.items()}, self.e, self.N)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._common(other)
        out = {}
        e, N = a.e, a.N
        for (m1, p1), c1 in a.terms.items():
            for (m2, p2), c2 in b.terms.items():
                c = c1 * c2
                shift = p1 * m2
                if shift:
                    c = c * QRat.t_power(shift * e, e, N)
                key = (m1 + m2, p1 + p2)
                out[key] = out[key] + c if key in out else c
        return DiffOp(out, e, N)

    def __rmul__(self, other):
        return DiffOp.scalar(other) * self

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative powers of a difference operator are not defined")
        result = DiffOp.scalar(1, self.e, self.N)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        a, b = self._common(other)
        return a.terms.keys() == b.terms.keys() and all(a.terms[k] == b.terms[k] for k in a.terms)

    __hash__ = None

    def twist(self, mu):
        """Replace S by mu*S (mu a QRat or Twist)."""
        if isinstance(mu, Twist):
            mu = mu.as_qrat(_lcm(self.e, Fraction(mu.c0).denominator), _lcm(self.N, mu.N))
        e, N = _lcm(self.e, mu.e), _lcm(self.N, mu.level)
        mu = mu.lift(e, N)
        return DiffOp({(m, p): c.lift(e, N) * mu ** p for (m, p), c in self.terms.items()}, e, N)

    def invert_q(self):
        """q -> 1/q on coefficients; S = q^(x d/dx) becomes S^-1."""
        return DiffOp({(m, -p): c.invert_q() for (m, p), c in self.terms.items()}, self.e, self.N)

    def x_degree(self):
        return max((m for m, _ in self.terms), default=0)

    def is_zero(self):
        return not self.terms

    def apply(self, series, twist=None, order=None):
        """Apply to an XSeries of QRat coefficients; output is exact through ``order``."""
        if order is None:
            order = series.order
        if order > series.order:
            raise TruncationTooShort(f"series known through x^{series.order}, output asked through x^{order}")
        e, N = self.e, self.N
        for c in series.coeffs:
            if isinstance(c, QRat):
                e, N = _lcm(e, c.e), _lcm(N, c.level)
        mu = None
        if twist is not None:
            if isinstance(twist, Twist):
                e = _lcm(e, Fraction(twist.c0).denominator)
                N = _lcm(N, twist.N)
                mu = twist.as_qrat(e, N)
            else:
                e, N = _lcm(e, twist.e), _lcm(N, twist.level)
                mu = twist.lift(e, N)
        op = self.lift(e, N)
        f = [c.lift(e, N) if isinstance(c, QRat) else QRat.const(c, e, N) for c in series.coeffs]
        by_m = {}
        for (m, p), c in op.terms.items():
            by_m.setdefault(m, []).append((p, c))
        out = []
        for D in range(order + 1):
            acc = QRat.zero(e, N)
            for m, plist in by_m.items():
                d = D - m
                if d < 0 or f[d].is_zero():
                    continue
                g = QRat.zero(e, N)
                for p, c in plist:
                    factor = QRat.t_power(e * d * p, e, N)
                    if mu is not None and p:
                        factor = factor * mu ** p
                    g = g + c * factor
                acc = acc + g * f[d]
            out.append(acc)
        return XSeries(out, order)

    # text form, mirrors the DSL
    def to_text(self):
        from ..cli.printer import qrat_to_dsl

        if not self.terms:
            return "0"
        out = ""
        for (m, p), c in self.terms.items():
            negative = c.is_constant() and c.constant_value().is_rational() and c.constant_value().to_fraction() < 0
            if negative:
                c = -c
            factors = []
            if not (c == 1):
                factors.append(qrat_to_dsl(c, wrap=True))
            if m:
                factors.append("x" if m == 1 else f"x^{m}")
            if p:
                factors.append("S" if p == 1 else "S^" + (str(p) if p > 0 else f"{p}"))
            term = "*".join(factors) if factors else "1"
            if not out:
                out = ("-" if negative else "") + term
            else:
                out += (" - " if negative else " + ") + term
        return out

    def __repr__(self):
        return f"DiffOp({self.to_text()})"


def diffop_mul(A, B):
    return A * B


def diffop_apply(op, series, twist=None, order=None):
    return op.apply(series, twist, order)
