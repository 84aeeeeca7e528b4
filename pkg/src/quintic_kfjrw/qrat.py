"""Rational functions in t = q^(1/e) over a cyclotomic field Q(zeta_N).

A :class:`QRat` is stored as ``num / den`` where ``num`` is a polynomial with
coefficients in Q(zeta_N) and ``den`` is a *monic polynomial with rational
coefficients*.  Any denominator can be moved into Q[t] by multiplying with its
Galois conjugates, and the rational denominator of least degree is unique, so
the stored pair is a canonical form: two functions are equal iff their
``(e, N, num, den)`` agree.  Only gcds in Q[t] are ever needed, which keeps
the very large q-Pochhammer denominators of the I-function cheap.

Numerators are kept as one ``flint.fmpq_poly`` per power-basis coordinate of
Q(zeta_N); ``num = sum_i P_i(t) * zeta^i``.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, inf
import math

import flint

from .cyclotomic import CycloElem, _power_table, euler_phi
from .errors import DivisionByZero, LevelMismatch, NotDivisible

__all__ = [
    "CPoly",
    "QRat",
    "LaurentExpansion",
    "rebase",
    "qrat_ops",
    "adams_substitute",
    "expand_at",
    "residue_pair",
    "lift_common",
]

_ZERO = flint.fmpq_poly([])
_ONE = flint.fmpq_poly([1])


def _fq(c):
    c = Fraction(c)
    return flint.fmpq(c.numerator, c.denominator)


def _fr(c):
    return Fraction(int(c.p), int(c.q))


def _inflate(p, k):
    if k == 1 or p.degree() <= 0:
        return p
    cs = p.coeffs()
    out = [0] * (k * (len(cs) - 1) + 1)
    for i, c in enumerate(cs):
        out[i * k] = c
    return flint.fmpq_poly(out)


def _reverse(p, n):
    """t^n * p(1/t) for n >= deg p."""
    cs = p.coeffs()
    cs = cs + [0] * (n + 1 - len(cs))
    return flint.fmpq_poly(cs[::-1])


def _scale_var(p, c):
    """p(c*t) for a rational c."""
    if c == 1:
        return p
    cs = p.coeffs()
    fc = _fq(c)
    out = []
    acc = flint.fmpq(1)
    for x in cs:
        out.append(x * acc)
        acc *= fc
    return flint.fmpq_poly(out)


def _t_valuation(p):
    cs = p.coeffs()
    for i, c in enumerate(cs):
        if c != 0:
            return i
    return inf


class CPoly:
    """Polynomial in t with coefficients in Q(zeta_N): tuple of Q[t] components."""

    __slots__ = ("level", "comps")

    def __init__(self, level, comps):
        self.level = level
        self.comps = tuple(comps)

    @classmethod
    def zero(cls, N):
        return cls(N, (_ZERO,) * euler_phi(N))

    @classmethod
    def rational(cls, N, p):
        return cls(N, (p,) + (_ZERO,) * (euler_phi(N) - 1))

    @classmethod
    def from_coeffs(cls, N, coeffs):
        """From a list of CycloElem / rational coefficients, constant term first."""
        phi = euler_phi(N)
        rows = [[0] * len(coeffs) for _ in range(phi)]
        for k, c in enumerate(coeffs):
            if isinstance(c, CycloElem):
                if c.level != N:
                    raise LevelMismatch(f"coefficient level {c.level} != {N}")
                for i, v in enumerate(c.coeffs):
                    if v:
                        rows[i][k] = _fq(v)
            elif c:
                rows[0][k] = _fq(c)
        return cls(N, [flint.fmpq_poly(r) for r in rows])

    @classmethod
    def monomial(cls, N, c, k):
        coeffs = [0] * k + [c]
        return cls.from_coeffs(N, coeffs)

    def is_zero(self):
        return all(p.is_zero() for p in self.comps)

    def is_rational(self):
        return all(p.is_zero() for p in self.comps[1:])

    def degree(self):
        return max(p.degree() for p in self.comps)

    def coeff(self, k):
        vals = []
        for p in self.comps:
            vals.append(_fr(p[k]) if 0 <= k <= p.degree() else Fraction(0))
        return CycloElem._raw(self.level, tuple(vals))

    def coeff_list(self):
        return [self.coeff(k) for k in range(self.degree() + 1)]

    def __add__(self, other):
        return CPoly(self.level, [a + b for a, b in zip(self.comps, other.comps)])

    def __sub__(self, other):
        return CPoly(self.level, [a - b for a, b in zip(self.comps, other.comps)])

    def __neg__(self):
        return CPoly(self.level, [-a for a in self.comps])

    def __eq__(self, other):
        return isinstance(other, CPoly) and self.level == other.level and self.comps == other.comps

    def __hash__(self):
        return hash((self.level, tuple(str(p) for p in self.comps)))

    def mul_rational(self, p):
        return CPoly(self.level, [a * p for a in self.comps])

    def mul_scalar(self, c):
        if isinstance(c, CycloElem):
            return self * CPoly.from_coeffs(self.level, [c])
        f = _fq(c)
        return CPoly(self.level, [a * f for a in self.comps])

    def __mul__(self, other):
        N = self.level
        if other.is_rational():
            return self.mul_rational(other.comps[0])
        if self.is_rational():
            return other.mul_rational(self.comps[0])
        phi = len(self.comps)
        prods = [_ZERO] * (2 * phi - 1)
        for i, a in enumerate(self.comps):
            if a.is_zero():
                continue
            for j, b in enumerate(other.comps):
                if not b.is_zero():
                    prods[i + j] = prods[i + j] + a * b
        table = _power_table(N)
        out = [_ZERO] * phi
        for k, pk in enumerate(prods):
            if pk.is_zero():
                continue
            for i, v in enumerate(table[k % N]):
                if v:
                    out[i] = out[i] + pk * _fq(v)
        return CPoly(N, out)

    def galois(self, j):
        """Apply zeta -> zeta**j to every coefficient."""
        N = self.level
        table = _power_table(N)
        out = [_ZERO] * len(self.comps)
        for i, p in enumerate(self.comps):
            if p.is_zero():
                continue
            for k, v in enumerate(table[(i * j) % N]):
                if v:
                    out[k] = out[k] + p * _fq(v)
        return CPoly(N, out)

    def map_var(self, f):
        return CPoly(self.level, [f(p) for p in self.comps])

    def scale_var(self, c):
        """p(c*t) for c in Q(zeta_N)."""
        if isinstance(c, CycloElem) and not c.is_rational():
            coeffs = self.coeff_list()
            out = []
            acc = CycloElem.one(self.level)
            for x in coeffs:
                out.append(x * acc)
                acc = acc * c
            return CPoly.from_coeffs(self.level, out)
        c = c.to_fraction() if isinstance(c, CycloElem) else Fraction(c)
        return self.map_var(lambda p: _scale_var(p, c))

    def embed(self, M):
        if M % self.level:
            raise LevelMismatch(f"level {self.level} does not divide {M}")
        if M == self.level:
            return self
        step = M // self.level
        table = _power_table(M)
        out = [_ZERO] * euler_phi(M)
        for i, p in enumerate(self.comps):
            if p.is_zero():
                continue
            for k, v in enumerate(table[(i * step) % M]):
                if v:
                    out[k] = out[k] + p * _fq(v)
        return CPoly(M, out)

    def evaluate(self, t0):
        """Value at t = t0 (CycloElem or rational)."""
        acc = CycloElem.zero(self.level)
        for c in reversed(self.coeff_list()):
            acc = acc * t0 + c
        return acc


def _units(N):
    return [j for j in range(1, N + 1) if gcd(j, N) == 1]


def _rationalize(num, den):
    """Return (num', den') with den' in Q[t] and num'/den' == num/den.

    ``den`` is a CPoly; multiply numerator and denominator by the product of
    the nontrivial Galois conjugates of ``den``.
    """
    if den.is_rational():
        return num, den.comps[0]
    adj = None
    for j in _units(den.level):
        if j % den.level == 1 % den.level:
            continue
        g = den.galois(j)
        adj = g if adj is None else adj * g
    norm = den * adj
    assert norm.is_rational()
    return num * adj, norm.comps[0]


class QRat:
    """Element of Q(zeta_N)(t) with t = q^(1/e), in canonical form."""

    __slots__ = ("e", "level", "num", "den", "_hash")

    def __init__(self, e, level, num, den=None, _normalized=False):
        self.e = int(e)
        self.level = int(level)
        if not isinstance(num, CPoly):
            raise TypeError("num must be a CPoly")
        if den is None:
            den = _ONE
        if isinstance(den, CPoly):
            num, den = _rationalize(num, den)
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        if not _normalized:
            num, den = _normalize(num, den)
        self.num = num
        self.den = den
        self._hash = None

    # constructors
    @classmethod
    def zero(cls, e=1, N=1):
        return cls(e, N, CPoly.zero(N), _ONE, _normalized=True)

    @classmethod
    def one(cls, e=1, N=1):
        return cls.const(1, e, N)

    @classmethod
    def const(cls, c, e=1, N=1):
        if isinstance(c, CycloElem):
            N = c.level
        return cls(e, N, CPoly.from_coeffs(N, [c]), _ONE)

    @classmethod
    def t_power(cls, k, e=1, N=1, coeff=1):
        """coeff * t^k for any integer k."""
        if isinstance(coeff, CycloElem):
            N = coeff.level
        if k >= 0:
            return cls(e, N, CPoly.monomial(N, coeff, k), _ONE)
        return cls(e, N, CPoly.from_coeffs(N, [coeff]), flint.fmpq_poly([0] * (-k) + [1]))

    @classmethod
    def q_power(cls, p, e=None, N=1, coeff=1):
        """coeff * q^p for rational p; e defaults to the denominator of p."""
        p = Fraction(p)
        if e is None:
            e = p.denominator
        if (p * e).denominator != 1:
            raise NotDivisible(f"q^{p} is not a power of q^(1/{e})")
        return cls.t_power(int(p * e), e, N, coeff)

    @classmethod
    def from_poly(cls, coeffs, e=1, N=1):
        return cls(e, N, CPoly.from_coeffs(N, coeffs), _ONE)

    @classmethod
    def from_rational_polys(cls, num_coeffs, den_coeffs, e=1, N=1):
        return cls(e, N, CPoly.rational(N, flint.fmpq_poly([_fq(c) for c in num_coeffs])),
                   flint.fmpq_poly([_fq(c) for c in den_coeffs]))

    # predicates
    def is_zero(self):
        return self.num.is_zero()

    def is_polynomial(self):
        return self.den.degree() == 0

    def is_laurent(self):
        """True if the denominator is a power of t."""
        d = self.den.degree()
        return _t_valuation(self.den) == d

    def is_constant(self):
        return self.is_polynomial() and self.num.degree() <= 0

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("not a constant")
        return self.num.coeff(0)

    # levels
    def _check(self, other):
        if isinstance(other, QRat):
            if other.e != self.e or other.level != self.level:
                raise LevelMismatch(
                    f"QRat levels (e={self.e}, N={self.level}) and (e={other.e}, N={other.level}) differ"
                )
            return other
        if isinstance(other, (int, Fraction, CycloElem)):
            if isinstance(other, CycloElem) and other.level != self.level:
                raise LevelMismatch(f"cyclotomic level {other.level} != {self.level}")
            return QRat.const(other, self.e, self.level)
        return NotImplemented

    def rebase(self, e_new):
        if e_new % self.e:
            raise NotDivisible(f"e={self.e} does not divide {e_new}")
        k = e_new // self.e
        if k == 1:
            return self
        return QRat(e_new, self.level, self.num.map_var(lambda p: _inflate(p, k)),
                    _inflate(self.den, k), _normalized=True)

    def embed(self, M):
        if M == self.level:
            return self
        return QRat(self.e, M, self.num.embed(M), self.den, _normalized=True)

    def lift(self, e, N):
        return self.rebase(e).embed(N)

    def scale(self, c):
        """Multiply by a constant, embedding into a common cyclotomic level."""
        if isinstance(c, CycloElem) and c.level != self.level:
            M = self.level * c.level // gcd(self.level, c.level)
            return self.embed(M) * c.embed(M)
        return self * c

    # arithmetic
    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.den == other.den:
            return QRat(self.e, self.level, self.num + other.num, self.den)
        g = self.den.gcd(other.den)
        a = other.den / g if not g.is_one() else other.den
        b = self.den / g if not g.is_one() else self.den
        num = self.num.mul_rational(a) + other.num.mul_rational(b)
        return QRat(self.e, self.level, num, self.den * a)

    __radd__ = __add__

    def __neg__(self):
        return QRat(self.e, self.level, -self.num, self.den, _normalized=True)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return QRat.zero(self.e, self.level)
            return QRat(self.e, self.level, self.num.mul_scalar(other), self.den, _normalized=True)
        other = self._check(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return QRat.zero(self.e, self.level)
        # cross-cancel before multiplying
        return QRat(self.e, self.level, self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise DivisionByZero("inverse of the zero rational function")
        return QRat(self.e, self.level, CPoly.rational(self.level, self.den), self.num)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise DivisionByZero("division by zero")
            return self * (Fraction(1) / Fraction(other))
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = QRat.one(self.e, self.level)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, QRat):
            return (self.e, self.level) == (other.e, other.level) and self.den == other.den and self.num == other.num
        if isinstance(other, (int, Fraction, CycloElem)):
            return self.is_constant() and self.num.coeff(0) == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.e, self.level, self.num, str(self.den)))
        return self._hash

    # substitutions
    def adams(self, m):
        """q -> q^m (t -> t^m at fixed e)."""
        return QRat(self.e, self.level, self.num.map_var(lambda p: _inflate(p, m)),
                    _inflate(self.den, m), _normalized=True)

    def invert_q(self):
        """q -> q^(-1), i.e. t -> 1/t; roots of unity are left untouched."""
        dn = self.num.degree()
        dd = self.den.degree()
        n = max(dn, 0)
        num = self.num.map_var(lambda p: _reverse(p, n))
        den = _reverse(self.den, dd)
        shift = dd - n
        if shift > 0:
            num = num.mul_rational(flint.fmpq_poly([0] * shift + [1]))
        elif shift < 0:
            den = den * flint.fmpq_poly([0] * (-shift) + [1])
        return QRat(self.e, self.level, num, den)

    def galois(self, j):
        return QRat(self.e, self.level, self.num.galois(j), self.den, _normalized=True)

    def scale_var(self, c):
        """t -> c*t with c in Q(zeta_N)."""
        num = self.num.scale_var(c)
        den = CPoly.rational(self.level, self.den).scale_var(c)
        return QRat(self.e, self.level, num, den)

    def evaluate(self, t0):
        d = CPoly.rational(self.level, self.den).evaluate(t0)
        if d.is_zero():
            raise DivisionByZero("pole at evaluation point")
        return self.num.evaluate(t0) / d

    def numeric(self, t_value, precision=53):
        """Complex value at a numeric t (mpmath), zeta_N = exp(2 pi i/N)."""
        import mpmath

        with mpmath.workprec(int(precision) + 10):
            z = mpmath.expjpi(mpmath.mpf(2) / self.level)
            t = mpmath.mpmathify(t_value)

            def ev(p):
                acc = mpmath.mpc(0)
                for c in reversed(p.coeffs()):
                    acc = acc * t + mpmath.mpf(int(c.p)) / int(c.q)
                return acc

            num = sum((ev(p) * z ** i for i, p in enumerate(self.num.comps)), mpmath.mpc(0))
            return num / ev(self.den)

    # text form
    def body(self, var="t"):
        n = _cpoly_text(self.num, var)
        if self.is_polynomial():
            return n
        return f"({n}) / ({_cpoly_text(CPoly.rational(self.level, self.den), var)})"

    def to_text(self):
        return f"qrat e={self.e} N={self.level}\n{self.body()}"

    @classmethod
    def from_text(cls, text):
        import re

        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        m = re.fullmatch(r"\s*qrat\s+e=(\d+)\s+N=(\d+)\s*", lines[0])
        if not m:
            raise ValueError("missing 'qrat e=<e> N=<N>' header")
        e, N = int(m.group(1)), int(m.group(2))
        return cls.parse_body(" ".join(lines[1:]), e, N)

    @classmethod
    def parse_body(cls, body, e, N):
        body = body.strip()
        if " / " in body:
            a, b = body.split(" / ", 1)
            num = _parse_cpoly(_strip_parens(a), N)
            den = _parse_cpoly(_strip_parens(b), N)
            return cls(e, N, num, den)
        return cls(e, N, _parse_cpoly(_strip_parens(body), N))

    def __repr__(self):
        return f"QRat(e={self.e}, N={self.level}, {self.body()})"

    def __str__(self):
        return self.body()


def _strip_parens(s):
    s = s.strip()
    if s.startswith("(") and s.endswith(")"):
        depth = 0
        for i, ch in enumerate(s):
            depth += ch == "("
            depth -= ch == ")"
            if depth == 0 and i < len(s) - 1:
                return s
        return s[1:-1].strip()
    return s


def _cpoly_text(p, var):
    """Terms ``[coefficient]*t^k`` joined by `` + ``, descending powers."""
    terms = []
    for k in range(p.degree(), -1, -1):
        c = p.coeff(k)
        if c.is_zero():
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if c.is_rational():
            v = c.coeffs[0]
            sign = "-" if v < 0 else "+"
            a = abs(v)
            if mono:
                txt = mono if a == 1 else f"{_fmt(a)}*{mono}"
            else:
                txt = _fmt(a)
        else:
            sign = "+"
            txt = f"[{c.body()}]" + (f"*{mono}" if mono else "")
        terms.append((sign, txt))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, txt in terms[1:]:
        out += f" {sign} {txt}"
    return out


def _fmt(c):
    return str(c.numerator) if c.denominator == 1 else f"({c.numerator}/{c.denominator})"


def _parse_cpoly(s, N, var="t"):
    import re

    s = s.strip()
    if s == "0":
        return CPoly.zero(N)
    coeffs = {}
    pos = 0
    pat = re.compile(
        r"\s*([+-])?\s*(?:\[([^\]]*)\]|\(?(\d+(?:/\d+)?)\)?)?\s*(\*)?\s*(%s(?:\^(\d+))?)?" % var
    )
    while pos < len(s):
        m = pat.match(s, pos)
        if not m or m.end() == pos or (m.group(2) is None and m.group(3) is None and m.group(5) is None):
            raise ValueError(f"cannot parse polynomial near {s[pos:]!r}")
        sign = -1 if m.group(1) == "-" else 1
        if m.group(2) is not None:
            c = CycloElem.parse_body(N, m.group(2))
        elif m.group(3) is not None:
            c = CycloElem.rational(N, Fraction(m.group(3)))
        else:
            c = CycloElem.one(N)
        k = 0
        if m.group(5):
            k = int(m.group(6)) if m.group(6) else 1
        coeffs[k] = coeffs.get(k, CycloElem.zero(N)) + c * sign
        pos = m.end()
    dense = [CycloElem.zero(N)] * (max(coeffs) + 1)
    for k, v in coeffs.items():
        dense[k] = v
    return CPoly.from_coeffs(N, dense)


def _normalize(num, den):
    """Cancel the rational gcd and make ``den`` monic."""
    if num.is_zero():
        return num, _ONE
    g = den
    for p in num.comps:
        if not p.is_zero():
            g = g.gcd(p)
            if g.degree() == 0:
                break
    if g.degree() > 0:
        den = den / g
        num = CPoly(num.level, [p / g for p in num.comps])
    lead = den.leading_coefficient()
    if lead != 1:
        inv = 1 / lead
        den = den * inv
        num = CPoly(num.level, [p * inv for p in num.comps])
    return num, den


def lift_common(*items):
    """Lift QRat values to the common (lcm e, lcm N)."""
    e = 1
    N = 1
    for x in items:
        e = e * x.e // gcd(e, x.e)
        N = N * x.level // gcd(N, x.level)
    return [x.lift(e, N) for x in items]


def rebase(f, e_new):
    return f.rebase(e_new)


def adams_substitute(f, m):
    return f.adams(m)


def qrat_ops(op, f, g=None):
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    if op == "div":
        return f / g
    if op == "inv":
        return f.inverse()
    if op == "neg":
        return -f
    raise ValueError(f"unknown operation {op!r}")


# --- local expansions

@dataclass(frozen=True)
class LaurentExpansion:
    """Coefficients of sum_k c_k u^k, k >= order_low, u = t - t0, t or 1/t."""

    point: object
    order_low: object
    coeffs: tuple

    def coeff(self, k):
        if self.order_low == inf:
            return None
        i = k - self.order_low
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        if i < 0:
            return 0
        raise IndexError(f"order {k} beyond computed expansion")

    @property
    def order_high(self):
        return self.order_low + len(self.coeffs) - 1

    def to_dict(self):
        return {
            "point": str(self.point),
            "order_low": None if self.order_low == inf else self.order_low,
            "coeffs": [c.body() if isinstance(c, CycloElem) else str(c) for c in self.coeffs],
        }


def _series_div(a, b, n, N):
    """First n coefficients of a/b for power series lists (b[0] != 0)."""
    inv0 = b[0].inverse() if isinstance(b[0], CycloElem) else CycloElem.rational(N, 1) / b[0]
    out = []
    for k in range(n):
        acc = a[k] if k < len(a) else CycloElem.zero(N)
        for j in range(1, min(k, len(b) - 1) + 1):
            if not b[j].is_zero() and not out[k - j].is_zero():
                acc = acc - b[j] * out[k - j]
        out.append(acc * inv0)
    return out


def _taylor(p, t0, n, N):
    """First n Taylor coefficients of the CPoly p at t0 (CycloElem)."""
    if t0.is_rational():
        c = _fq(t0.to_fraction())
        shift = flint.fmpq_poly([c, 1])
        comps = [q(shift) if not q.is_zero() else q for q in p.comps]
        shifted = CPoly(N, comps)
        return [shifted.coeff(k) for k in range(n)]
    # Horner with truncation at u^n
    acc = [CycloElem.zero(N)] * n
    for c in reversed(p.coeff_list()):
        new = [CycloElem.zero(N)] * n
        for k in range(n):
            v = acc[k] * t0
            if k:
                v = v + acc[k - 1]
            new[k] = v
        new[0] = new[0] + c
        acc = new
    return acc


def _multiplicity(den, t0, N):
    """Multiplicity of (t - t0) in the rational polynomial den."""
    if t0.is_rational():
        lin = flint.fmpq_poly([-_fq(t0.to_fraction()), 1])
    else:
        # minimal polynomial of t0 = squarefree part of its characteristic polynomial
        x = CPoly.from_coeffs(N, [CycloElem.zero(N), CycloElem.one(N)])
        char = None
        for j in _units(N):
            f = x - CPoly.from_coeffs(N, [t0.galois(j)])
            char = f if char is None else char * f
        cp = char.comps[0]
        lin = cp / cp.gcd(cp.derivative())
    k = 0
    d = den
    while d.degree() >= lin.degree():
        q, r = divmod(d, lin)
        if not r.is_zero():
            break
        d = q
        k += 1
    return k


def expand_at(f, point, order):
    """Laurent expansion of f up to and including the power ``order``.

    ``point`` is ``0``, ``"inf"`` or a value of t (int, Fraction, CycloElem).
    At infinity the local variable is u = 1/t.
    """
    N = f.level
    if f.is_zero():
        return LaurentExpansion(point, inf, ())
    if point in ("inf", "infinity", inf):
        dn = f.num.degree()
        dd = f.den.degree()
        rn = f.num.map_var(lambda p: _reverse(p, dn))
        rd = _reverse(f.den, dd)
        low = dd - dn
        # rd has nonzero constant term
        nterms = order - low + 1
        if nterms <= 0:
            return LaurentExpansion("inf", low, ())
        a = [rn.coeff(k) for k in range(nterms)]
        b = [CycloElem.rational(N, _fr(rd[k])) for k in range(min(nterms, dd + 1))]
        return LaurentExpansion("inf", low, tuple(_series_div(a, b, nterms, N)))
    if not isinstance(point, CycloElem):
        point = CycloElem.rational(N, Fraction(point))
    elif point.level != N:
        raise LevelMismatch(f"point level {point.level} != {N}")
    if point.is_zero():
        v = _t_valuation(f.den)
        low = -v
        d0 = f.den.right_shift(v) if v else f.den
        nterms = order - low + 1
        if nterms <= 0:
            return LaurentExpansion(point, low, ())
        a = [f.num.coeff(k) for k in range(nterms)]
        b = [CycloElem.rational(N, _fr(d0[k])) for k in range(min(nterms, d0.degree() + 1))]
        coeffs = _series_div(a, b, nterms, N)
    else:
        k = _multiplicity(f.den, point, N)
        low = -k
        nterms = order - low + 1
        if nterms <= 0:
            return LaurentExpansion(point, low, ())
        a = _taylor(f.num, point, nterms, N)
        b = _taylor(CPoly.rational(N, f.den), point, nterms + k, N)[k:]
        coeffs = _series_div(a, b, nterms, N)
    # the leading coefficient may vanish at a regular point (zero of f)
    lead = 0
    while lead < len(coeffs) and coeffs[lead].is_zero():
        lead += 1
    if lead == len(coeffs):
        return LaurentExpansion(point, order + 1, ())
    return LaurentExpansion(point, low + lead, tuple(coeffs[lead:]))


def residue_pair(f):
    """Res_{q=0} + Res_{q=inf} of f dq/q.

    Both residues are the q^0 coefficients of the local expansions (with a
    minus sign at infinity), which does not depend on the root t = q^(1/e)
    used to write f.
    """
    N = f.level
    at0 = expand_at(f, 0, 0)
    atinf = expand_at(f, "inf", 0)
    r0 = at0.coeff(0) if at0.order_low != inf else 0
    rinf = atinf.coeff(0) if atinf.order_low != inf else 0
    return CycloElem.rational(N, 0) + r0 - rinf
