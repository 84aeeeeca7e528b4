"""Truncated power series used by the operator calculus.

* :class:`STruncSeries` is a polynomial in the auxiliary parameter ``s`` kept
  modulo ``s^(S+1)``; the coefficients are QRat, CycloElem or Fraction.
* :class:`TriSeries` is a sparse truncated series in ``(x, z, s)`` with the
  z-exponent allowed to start at -1; it carries the G-functions.
* :class:`XSeries` is a truncated series in ``x`` whose coefficients are
  scalars (QRat) or state vectors.
"""

from fractions import Fraction
from math import comb

from ..cyclotomic import CycloElem
from ..errors import LevelMismatch, TruncationTooShort

__all__ = ["STruncSeries", "TriSeries", "XSeries"]


def _is_zero(c):
    if isinstance(c, (int, Fraction)):
        return c == 0
    return c.is_zero()


class STruncSeries:
    """sum_{k<=order} c_k s^k with exact coefficients."""

    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs, order=None):
        coeffs = list(coeffs)
        if order is None:
            order = len(coeffs) - 1
        if len(coeffs) > order + 1:
            coeffs = coeffs[: order + 1]
        zero = _zero_like(coeffs[0]) if coeffs else Fraction(0)
        coeffs += [zero] * (order + 1 - len(coeffs))
        self.order = order
        self.coeffs = tuple(coeffs)

    @classmethod
    def constant(cls, c, order):
        return cls([c], order)

    @classmethod
    def from_dict(cls, d, order, zero):
        cs = [zero] * (order + 1)
        for k, v in d.items():
            if k <= order:
                cs[k] = cs[k] + v
        return cls(cs, order)

    def __getitem__(self, k):
        return self.coeffs[k]

    def __len__(self):
        return self.order + 1

    def is_zero(self):
        return all(_is_zero(c) for c in self.coeffs)

    def degree(self):
        for k in range(self.order, -1, -1):
            if not _is_zero(self.coeffs[k]):
                return k
        return -1

    def _coerce(self, other):
        if isinstance(other, STruncSeries):
            return other
        return STruncSeries.constant(other, self.order)

    def __add__(self, other):
        other = self._coerce(other)
        n = min(self.order, other.order)
        return STruncSeries([a + b for a, b in zip(self.coeffs[: n + 1], other.coeffs[: n + 1])], n)

    __radd__ = __add__

    def __neg__(self):
        return STruncSeries([-a for a in self.coeffs], self.order)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, STruncSeries):
            return STruncSeries([a * other for a in self.coeffs], self.order)
        n = min(self.order, other.order)
        zero = _zero_like(self.coeffs[0])
        out = [zero] * (n + 1)
        for i in range(n + 1):
            a = self.coeffs[i]
            if _is_zero(a):
                continue
            for j in range(n + 1 - i):
                b = other.coeffs[j]
                if not _is_zero(b):
                    out[i + j] = out[i + j] + a * b
        return STruncSeries(out, n)

    def __rmul__(self, other):
        return STruncSeries([other * a for a in self.coeffs], self.order)

    def __eq__(self, other):
        if not isinstance(other, STruncSeries):
            return NotImplemented
        n = min(self.order, other.order)
        return all(a == b for a, b in zip(self.coeffs[: n + 1], other.coeffs[: n + 1]))

    __hash__ = None

    def exp(self):
        """exp of a series with vanishing constant term (E' = L'E recurrence)."""
        if not _is_zero(self.coeffs[0]):
            raise ValueError("exp needs a zero constant term")
        one = _one_like(self.coeffs[0])
        out = [one]
        for n in range(1, self.order + 1):
            acc = None
            for k in range(1, n + 1):
                lk = self.coeffs[k]
                if _is_zero(lk) or _is_zero(out[n - k]):
                    continue
                term = lk * out[n - k] * k
                acc = term if acc is None else acc + term
            out.append(_zero_like(one) if acc is None else acc * Fraction(1, n))
        return STruncSeries(out, self.order)

    def log(self):
        """log of a series with constant term 1."""
        if self.coeffs[0] != 1:
            raise ValueError("log needs constant term 1")
        zero = _zero_like(self.coeffs[0])
        out = [zero]
        for n in range(1, self.order + 1):
            acc = self.coeffs[n] * n
            for k in range(1, n):
                if not _is_zero(out[k]) and not _is_zero(self.coeffs[n - k]):
                    acc = acc - out[k] * self.coeffs[n - k] * k
            out.append(acc * Fraction(1, n))
        return STruncSeries(out, self.order)

    def scale_s(self, c):
        """s -> c*s."""
        out = []
        acc = None
        for k, a in enumerate(self.coeffs):
            if k == 0:
                out.append(a)
                acc = c
                continue
            out.append(a * acc)
            acc = acc * c
        return STruncSeries(out, self.order)

    def adams_s(self, m):
        """s -> s^m, keeping the truncation order."""
        zero = _zero_like(self.coeffs[0])
        out = [zero] * (self.order + 1)
        for k, a in enumerate(self.coeffs):
            if k * m <= self.order:
                out[k * m] = a
        return STruncSeries(out, self.order)

    def truncate(self, order):
        return STruncSeries(self.coeffs[: order + 1], order)

    def evaluate(self, value):
        """Substitute a value for s (s=1 after assembling a polynomial)."""
        acc = _zero_like(self.coeffs[0])
        for a in reversed(self.coeffs):
            acc = acc * value + a
        return acc

    def map(self, f):
        return STruncSeries([f(a) for a in self.coeffs], self.order)

    def __repr__(self):
        terms = [f"({a})*s^{k}" for k, a in enumerate(self.coeffs) if not _is_zero(a)]
        return "STruncSeries[" + (" + ".join(terms) or "0") + f"; O(s^{self.order + 1})]"


def _zero_like(c):
    if isinstance(c, (int, Fraction)):
        return Fraction(0)
    if isinstance(c, CycloElem):
        return CycloElem.zero(c.level)
    return c * 0


def _one_like(c):
    if isinstance(c, (int, Fraction)):
        return Fraction(1)
    if isinstance(c, CycloElem):
        return CycloElem.one(c.level)
    return c * 0 + 1


class TriSeries:
    """Sparse series in x, z, s: keys (i, l, j) for x^i z^l s^j, truncated.

    ``x_max``, ``z_max`` and ``s_max`` are the highest exponents kept; z
    exponents start at -1.
    """

    __slots__ = ("x_max", "z_max", "s_max", "terms")

    def __init__(self, terms, x_max, z_max, s_max):
        self.x_max, self.z_max, self.s_max = x_max, z_max, s_max
        self.terms = {
            k: v
            for k, v in terms.items()
            if k[0] <= x_max and k[1] <= z_max and k[2] <= s_max and not _is_zero(v)
        }

    def _bounds(self, other):
        return (min(self.x_max, other.x_max), min(self.z_max, other.z_max), min(self.s_max, other.s_max))

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return TriSeries(out, *self._bounds(other))

    def __neg__(self):
        return TriSeries({k: -v for k, v in self.terms.items()}, self.x_max, self.z_max, self.s_max)

    def __sub__(self, other):
        return self + (-other)

    def truncate(self, x_max, z_max, s_max):
        return TriSeries(self.terms, x_max, z_max, s_max)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, TriSeries):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def substitute_x_shift(self, y):
        """x -> x + y*z.  Exact through x^x_max, z^(z_max - x_extra) where the input
        must carry enough x-degrees; the caller truncates."""
        out = {}
        y = Fraction(y)
        for (i, l, j), v in self.terms.items():
            for p in range(i + 1):
                c = comb(i, p) * y ** (i - p)
                if c == 0:
                    continue
                key = (p, l + i - p, j)
                out[key] = out[key] + v * c if key in out else v * c
        return TriSeries(out, self.x_max, self.z_max, self.s_max)

    def substitute_x_linear(self, c):
        """x -> c*z, giving a series in z and s only (i = 0)."""
        out = {}
        c = Fraction(c)
        for (i, l, j), v in self.terms.items():
            key = (0, l + i, j)
            w = v * c ** i
            out[key] = out[key] + w if key in out else w
        return TriSeries(out, self.x_max, self.z_max, self.s_max)

    def coeff(self, i, l, j):
        return self.terms.get((i, l, j), 0)

    def items(self):
        return sorted(self.terms.items())

    def __repr__(self):
        return f"TriSeries({len(self.terms)} terms; x<={self.x_max}, z<={self.z_max}, s<={self.s_max})"


class XSeries:
    """sum_{d<=order} c_d x^d; coefficients scalar (QRat) or StateVec."""

    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs, order=None):
        coeffs = list(coeffs)
        if order is None:
            order = len(coeffs) - 1
        if len(coeffs) != order + 1:
            raise ValueError("coefficient count must be order + 1")
        self.order = order
        self.coeffs = tuple(coeffs)

    def __getitem__(self, d):
        return self.coeffs[d]

    def __len__(self):
        return len(self.coeffs)

    def truncate(self, order):
        if order > self.order:
            raise TruncationTooShort(f"series known through x^{self.order}, asked for x^{order}")
        return XSeries(self.coeffs[: order + 1], order)

    def __add__(self, other):
        n = min(self.order, other.order)
        return XSeries([a + b for a, b in zip(self.coeffs[: n + 1], other.coeffs[: n + 1])], n)

    def __sub__(self, other):
        n = min(self.order, other.order)
        return XSeries([a - b for a, b in zip(self.coeffs[: n + 1], other.coeffs[: n + 1])], n)

    def __neg__(self):
        return XSeries([-a for a in self.coeffs], self.order)

    def scale(self, c):
        return XSeries([a * c for a in self.coeffs], self.order)

    def map(self, f):
        return XSeries([f(a) for a in self.coeffs], self.order)

    def __eq__(self, other):
        if not isinstance(other, XSeries):
            return NotImplemented
        n = min(self.order, other.order)
        return all(a == b for a, b in zip(self.coeffs[: n + 1], other.coeffs[: n + 1]))

    __hash__ = None

    def is_zero(self):
        return all(_is_zero(c) for c in self.coeffs)

    def first_nonzero(self):
        for d, c in enumerate(self.coeffs):
            if not _is_zero(c):
                return d
        return None

    def to_text(self):
        lines = []
        for d, c in enumerate(self.coeffs):
            body = c.body() if hasattr(c, "body") else str(c)
            if "\n" in body:
                body = body.replace("\n", "\n  ")
            lines.append(f"x^{d} : {body}")
        return "\n".join(lines)

    def __repr__(self):
        return f"XSeries(order={self.order})"


def check_levels(*items):
    e = {getattr(x, "e", None) for x in items} - {None}
    if len(e) > 1:
        raise LevelMismatch(f"mixed roots of q: {sorted(e)}")
