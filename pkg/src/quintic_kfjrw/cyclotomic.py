"""Exact arithmetic in the cyclotomic fields Q(zeta_N).

Elements are stored in the power basis 1, z, ..., z^(phi(N)-1) of
Q[z]/(Phi_N(z)), so equality of elements is equality of coefficient tuples.
"""

from fractions import Fraction
from functools import lru_cache
from math import gcd
import re

import mpmath

from .errors import DivisionByZero, LevelMismatch, LevelNotDivisible

__all__ = [
    "CycloElem",
    "cyclotomic_polynomial",
    "euler_phi",
    "root_of_unity",
    "field_ops",
    "embed",
    "numeric",
]


# --- integer / rational polynomial helpers (coefficient lists, low degree first)

def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(a, b):
    a = [Fraction(c) for c in a]
    b = _trim(b)
    if not b:
        raise DivisionByZero("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = Fraction(b[-1])
    for k in range(len(a) - len(b), -1, -1):
        c = a[k + len(b) - 1] / lead
        q[k] = c
        if c:
            for i, bi in enumerate(b):
                a[k + i] -= c * bi
    return _trim(q), _trim(a[: len(b) - 1])


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


@lru_cache(maxsize=None)
def cyclotomic_polynomial(N):
    """Phi_N as a tuple of integer coefficients, constant term first.

    Computed as (x^N - 1) divided exactly by Phi_d for every proper divisor d.
    """
    if N < 1:
        raise ValueError("N must be a positive integer")
    p = [-1] + [0] * (N - 1) + [1]
    for d in range(1, N):
        if N % d == 0:
            p, r = _poly_divmod(p, cyclotomic_polynomial(d))
            assert not r
    return tuple(int(c) for c in p)


@lru_cache(maxsize=None)
def euler_phi(N):
    return len(cyclotomic_polynomial(N)) - 1


@lru_cache(maxsize=None)
def _power_table(N):
    """Power-basis coordinates of z^k for 0 <= k < N."""
    phi = euler_phi(N)
    cyc = cyclotomic_polynomial(N)
    table = []
    cur = [Fraction(0)] * phi
    cur[0] = Fraction(1)
    for _ in range(N):
        table.append(tuple(cur))
        # multiply by z and reduce the overflow with Phi_N (monic)
        top = cur[-1]
        nxt = [Fraction(0)] + cur[:-1]
        if top:
            for i in range(phi):
                nxt[i] -= top * cyc[i]
        cur = nxt
    return tuple(table)


def _reduce(poly, N):
    """Reduce an arbitrary-length coefficient list modulo Phi_N."""
    phi = euler_phi(N)
    if len(poly) <= phi:
        out = [Fraction(c) for c in poly] + [Fraction(0)] * (phi - len(poly))
        return tuple(out)
    table = _power_table(N)
    out = [Fraction(0)] * phi
    for k, c in enumerate(poly):
        if c:
            row = table[k % N]
            for i, ri in enumerate(row):
                if ri:
                    out[i] += c * ri
    return tuple(out)


class CycloElem:
    """An element sum c_i zeta_N^i of Q(zeta_N), zeta_N = exp(2 pi i / N)."""

    __slots__ = ("level", "coeffs", "_hash")

    def __init__(self, level, coeffs=()):
        if level < 1:
            raise ValueError("level must be positive")
        self.level = int(level)
        self.coeffs = _reduce(list(coeffs), self.level)
        self._hash = None

    @classmethod
    def _raw(cls, level, coeffs):
        obj = cls.__new__(cls)
        obj.level = level
        obj.coeffs = coeffs
        obj._hash = None
        return obj

    # constructors
    @classmethod
    def zero(cls, N):
        return cls._raw(N, (Fraction(0),) * euler_phi(N))

    @classmethod
    def one(cls, N):
        return cls.rational(N, 1)

    @classmethod
    def rational(cls, N, c):
        phi = euler_phi(N)
        return cls._raw(N, (Fraction(c),) + (Fraction(0),) * (phi - 1))

    @classmethod
    def root(cls, N, k=1):
        """zeta_N**k."""
        return cls._raw(N, _power_table(N)[k % N])

    # predicates
    def is_zero(self):
        return not any(self.coeffs)

    def is_rational(self):
        return not any(self.coeffs[1:])

    def to_fraction(self):
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coeffs[0]

    # coercion
    def _coerce(self, other):
        if isinstance(other, CycloElem):
            if other.level != self.level:
                raise LevelMismatch(f"levels {self.level} and {other.level} differ; embed explicitly")
            return other
        if isinstance(other, (int, Fraction)):
            return CycloElem.rational(self.level, other)
        return NotImplemented

    # arithmetic
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycloElem._raw(self.level, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycloElem._raw(self.level, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycloElem._raw(self.level, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycloElem._raw(self.level, tuple(a * other for a in self.coeffs))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_rational():
            c = other.coeffs[0]
            return CycloElem._raw(self.level, tuple(a * c for a in self.coeffs))
        if self.is_rational():
            c = self.coeffs[0]
            return CycloElem._raw(self.level, tuple(c * b for b in other.coeffs))
        return CycloElem._raw(self.level, _reduce(_poly_mul(self.coeffs, other.coeffs), self.level))

    __rmul__ = __mul__

    def inverse(self):
        """Inverse via the extended Euclidean algorithm against Phi_N."""
        if self.is_zero():
            raise DivisionByZero("inverse of zero in Q(zeta_%d)" % self.level)
        if self.is_rational():
            return CycloElem.rational(self.level, 1 / self.coeffs[0])
        # maintain old_s * a == old_r (mod Phi_N)
        old_r, r = _trim(self.coeffs), list(cyclotomic_polynomial(self.level))
        old_s, s = [Fraction(1)], []
        while r:
            quo, rem = _poly_divmod(old_r, r)
            old_r, r = r, rem
            old_s, s = s, _poly_sub(old_s, _poly_mul(quo, s))
        # old_r is a nonzero constant since Phi_N is irreducible
        c = Fraction(old_r[0])
        return CycloElem(self.level, [Fraction(x) / c for x in old_s])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise DivisionByZero("division by zero")
            return CycloElem._raw(self.level, tuple(a / other for a in self.coeffs))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = CycloElem.one(self.level)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # comparison
    def __eq__(self, other):
        if isinstance(other, CycloElem):
            return self.level == other.level and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(self.coeffs[0])
            else:
                self._hash = hash((self.level, self.coeffs))
        return self._hash

    # field maps
    def embed(self, M):
        """Image under zeta_N -> zeta_M**(M/N)."""
        if M % self.level:
            raise LevelNotDivisible(f"level {self.level} does not divide {M}")
        step = M // self.level
        poly = [Fraction(0)] * (step * (len(self.coeffs) - 1) + 1)
        for i, c in enumerate(self.coeffs):
            poly[i * step] = c
        return CycloElem(M, poly)

    def galois(self, j):
        """Image under the automorphism zeta -> zeta**j (gcd(j, N) = 1)."""
        N = self.level
        if gcd(j, N) != 1:
            raise ValueError(f"{j} is not a unit modulo {N}")
        table = _power_table(N)
        out = [Fraction(0)] * len(self.coeffs)
        for i, c in enumerate(self.coeffs):
            if c:
                for k, v in enumerate(table[(i * j) % N]):
                    if v:
                        out[k] += c * v
        return CycloElem._raw(N, tuple(out))

    def conjugate(self):
        return self.galois(-1 % self.level if self.level > 1 else 1)

    def numeric(self, precision=53):
        with mpmath.workprec(int(precision) + 10):
            z = mpmath.expjpi(mpmath.mpf(2) / self.level)
            total = mpmath.mpc(0)
            for i, c in enumerate(self.coeffs):
                if c:
                    total += mpmath.mpf(c.numerator) / c.denominator * z ** i
            return +total

    # text form
    def body(self, symbol="z"):
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if i == 0:
                mono = _fmt_fraction(a)
            else:
                power = symbol if i == 1 else f"{symbol}^{i}"
                mono = power if a == 1 else f"{_fmt_fraction(a)}*{power}"
            terms.append((sign, mono))
        if not terms:
            return "0"
        out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, mono in terms[1:]:
            out += f" {sign} {mono}"
        return out

    def to_text(self):
        return f"cyclo N={self.level}\n{self.body()}"

    @classmethod
    def from_text(cls, text):
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        m = re.fullmatch(r"\s*cyclo\s+N=(\d+)\s*", lines[0])
        if not m:
            raise ValueError("missing 'cyclo N=<level>' header")
        return cls.parse_body(int(m.group(1)), " ".join(lines[1:]))

    @classmethod
    def parse_body(cls, level, body, symbol="z"):
        s = body.replace(" ", "")
        if s in ("", "0"):
            return cls.zero(level)
        term_re = re.compile(
            r"([+-]?)(?:\(?(\d+(?:/\d+)?)\)?)?(\*)?(%s(?:\^(\d+))?)?" % re.escape(symbol)
        )
        poly = {}
        pos = 0
        while pos < len(s):
            m = term_re.match(s, pos)
            if not m or m.end() == pos or (m.group(2) is None and m.group(4) is None):
                raise ValueError(f"cannot parse cyclotomic body at {s[pos:]!r}")
            sign = -1 if m.group(1) == "-" else 1
            coef = Fraction(m.group(2)) if m.group(2) else Fraction(1)
            power = 0
            if m.group(4):
                power = int(m.group(5)) if m.group(5) else 1
            poly[power] = poly.get(power, 0) + sign * coef
            pos = m.end()
        dense = [Fraction(0)] * (max(poly) + 1)
        for k, v in poly.items():
            dense[k] += v
        return cls(level, dense)

    def __repr__(self):
        return f"CycloElem({self.level}, {self.body()})"

    __str__ = body


def _fmt_fraction(c):
    c = Fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"({c.numerator}/{c.denominator})"


def root_of_unity(N, k=1):
    return CycloElem.root(N, k)


def field_ops(op, a, b=None):
    """Dispatch helper: op in {add, sub, mul, div, inv, neg}."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "inv":
        return a.inverse()
    if op == "neg":
        return -a
    raise ValueError(f"unknown field operation {op!r}")


def embed(a, M):
    return a.embed(M)


def numeric(a, precision=53):
    return a.numeric(precision)
