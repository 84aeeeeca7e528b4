"""Diagonal operators: Delta of the fake theory, the box operators, and the
transport exp(-G_{1/r}(z nabla, z)).

Every entry is stored as its logarithm, an s-series over QRat whose
coefficient of s^k is read off the closed forms.  Composition adds
logarithms; the exponential is taken only when an entry is needed.

``convention="no-r-factor"`` drops the leading factor r from every
logarithm.  It exists for auditing the choice of convention.
"""

from fractions import Fraction
from math import gcd

from ..cyclotomic import CycloElem
from ..errors import OrderMismatch
from ..qrat import QRat
from .series import STruncSeries

__all__ = [
    "DiagonalOp",
    "TransportOp",
    "delta_op",
    "delta_log",
    "box_op",
    "transport_op",
    "geometric_collapse",
    "box_chain_check",
    "box0_adams_oracle",
    "admissible_xi0",
]

CONVENTIONS = ("r-factor", "no-r-factor")


def _rr(r, convention):
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}")
    return r if convention == "r-factor" else 1


def _geom_entry(coeff, num_t, den_t, e, N, den_root=None):
    """coeff * t^num_t / (den_root * t^den_t - 1) as a QRat."""
    num = QRat.t_power(num_t, e, N, coeff=coeff)
    d = QRat.t_power(den_t, e, N, coeff=den_root if den_root is not None else 1)
    return num / (d - 1)


class DiagonalOp:
    """Diagonal operator on the basis phi_a e_xi, entries given as log series."""

    def __init__(self, modulus, S, log_fn, name="diag"):
        self.modulus = modulus
        self.S = S
        self._log_fn = log_fn
        self._logs = {}
        self._exps = {}
        self.name = name

    def log(self, a, j):
        key = (a % self.modulus, j % self.modulus)
        if key not in self._logs:
            self._logs[key] = self._log_fn(*key)
        return self._logs[key]

    def entry(self, a, j):
        key = (a % self.modulus, j % self.modulus)
        if key not in self._exps:
            self._exps[key] = self.log(*key).exp()
        return self._exps[key]

    def compose(self, other):
        """self o other (logs add, entries commute)."""
        return DiagonalOp(self.modulus, min(self.S, other.S),
                          lambda a, j: self.log(a, j) + other.log(a, j), f"{self.name}*{other.name}")

    def inverse(self):
        return DiagonalOp(self.modulus, self.S, lambda a, j: -self.log(a, j), f"{self.name}^-1")

    def apply(self, v):
        """Apply to a StateVec with QRat coefficients; the result has s-series coefficients."""
        from ..statespace import StateVec

        v = v.to_basis("idem")
        out = {}
        for (a, j), c in v.entries.items():
            E = self.entry(a, j)
            out[(a, j)] = E.map(lambda x: x * c) if not isinstance(c, STruncSeries) else E * c
        return StateVec(v.r, out, "idem")


def delta_log(r, a, xi, S, convention="r-factor", e=None, N=None):
    """log of the Delta entry at phi_a e_xi (xi a CycloElem root of unity)."""
    rr = _rr(r, convention)
    e = r if e is None else e
    N = xi.level if N is None else N
    step = e // r
    a %= r
    cs = [QRat.zero(e, N)]
    for k in range(1, S + 1):
        coeff = (xi ** k) * Fraction(rr, k)
        if N != xi.level:
            coeff = coeff.embed(N)
        num_t = k * a * step if a else k * e
        cs.append(_geom_entry(coeff, num_t, k * e, e, N))
    return STruncSeries(cs, S)


def delta_op(r, S, convention="r-factor"):
    """Delta: entry exp(r sum_k (s xi)^k/k q^(ka/r)/(q^k - 1)); broad sector q^k/(q^k - 1)."""
    return DiagonalOp(r, S, lambda a, j: delta_log(r, a, CycloElem.root(r, j), S, convention), "Delta")


def admissible_xi0(r, m):
    """Exponents j0 of zeta_{rm} with (zeta_{rm}^j0)^r of order m."""
    return [j for j in range(r * m) if gcd(j, m) == 1]


def box_op(kind, r, m, xi0, S, convention="r-factor"):
    """Box_0 or Box_xi0 on the level-rm space (indices b in Z_rm, xi = zeta_rm^j).

    Box_0 at phi_b e_xi: exp(r sum_k (s xi)^(mk)/k q^(bk/r)/(q^(km) - 1)),
    with q^(km) in place of q^(bk/r) at b = 0.
    Box_xi0 at phi_{a+rl} e_xi, 1 <= a <= r-1:
        exp(r sum_k s^k xi^k xi0^(rlk)/k q^(ka/rm)/(xi0^(-rk) q^(k/m) - 1)),
    and at phi_{rl} e_xi the numerator is q^(k/m).
    """
    from ..statespace import root_exponent

    rm = r * m
    rr = _rr(r, convention)
    e = N = rm
    if kind in ("zero", 0, "0"):
        def log_fn(b, j):
            xi = CycloElem.root(rm, j)
            cs = [QRat.zero(e, N) for _ in range(S + 1)]
            for k in range(1, S // m + 1):
                coeff = xi ** (m * k) * Fraction(rr, k)
                num_t = b * k * m if b else k * m * e
                cs[m * k] = _geom_entry(coeff, num_t, k * m * e, e, N)
            return STruncSeries(cs, S)

        return DiagonalOp(rm, S, log_fn, "Box0")
    j0 = root_exponent(xi0, rm) if not isinstance(xi0, int) else xi0 % rm
    if gcd(j0, m) != 1:
        raise OrderMismatch(f"xi0 = zeta_{rm}^{j0}: xi0^r does not have order {m}")

    def log_fn(b, j):
        xi = CycloElem.root(rm, j)
        a, l = b % r, b // r
        cs = [QRat.zero(e, N)]
        for k in range(1, S + 1):
            coeff = xi ** k * CycloElem.root(rm, j0 * r * l * k) * Fraction(rr, k)
            num_t = k * a if a else k * r
            cs.append(_geom_entry(coeff, num_t, k * r, e, N, den_root=CycloElem.root(rm, -j0 * r * k)))
        return STruncSeries(cs, S)

    return DiagonalOp(rm, S, log_fn, "BoxXi0")


def box0_adams_oracle(r, m, a, j, S, convention="r-factor"):
    """Box_0 log at (m a, j) rebuilt from the Delta log: s -> s^m, q -> q^m."""
    rm = r * m
    xi = CycloElem.root(rm, j) ** m
    base = delta_log(r, a, xi, S, convention, e=rm, N=rm)
    return base.map(lambda c: c.adams(m)).adams_s(m)


def geometric_collapse(r, m, j0, k):
    """sum_{j<m} (xi0^(-rk) q^(k/m))^j against (q^k - 1)/(xi0^(-rk) q^(k/m) - 1).

    Returns (lhs, rhs) as QRat values in Q(zeta_rm)(q^(1/rm)).
    """
    rm = r * m
    u = QRat.t_power(k * r, rm, rm, coeff=CycloElem.root(rm, -j0 * r * k))
    lhs = QRat.zero(rm, rm)
    p = QRat.one(rm, rm)
    for _ in range(m):
        lhs = lhs + p
        p = p * u
    rhs = (QRat.t_power(k * rm, rm, rm) - 1) / (u - 1)
    return lhs, rhs


def box_chain_check(r, m, j0, k, a):
    """The non-broad chain: sum_j xi0^(-rjk) q^(k(a+rj)/rm)/(q^k - 1) equals the closed form."""
    rm = r * m
    lhs = QRat.zero(rm, rm)
    den = QRat.t_power(k * rm, rm, rm) - 1
    for j in range(m):
        lhs = lhs + QRat.t_power(k * (a + r * j), rm, rm, coeff=CycloElem.root(rm, -j0 * r * j * k)) / den
    rhs = _geom_entry(CycloElem.one(rm), k * a, k * r, rm, rm, den_root=CycloElem.root(rm, -j0 * r * k))
    return lhs, rhs


class TransportOp:
    """exp(-G_{1/r}(z nabla, z)), nabla = (x/r) d/dx, acting on x^n (x) e_xi.

    The log at (n, xi) is -r sum_k (s xi)^k/k q^(k(n+1)/r)/(q^k - 1); it does
    not depend on the sector phi_a.
    """

    def __init__(self, r, S, convention="r-factor"):
        self.r = r
        self.S = S
        self.convention = convention
        self._logs = {}

    def log(self, n, j):
        key = (n, j % self.r)
        if key not in self._logs:
            r = self.r
            rr = _rr(r, self.convention)
            xi = CycloElem.root(r, j)
            cs = [QRat.zero(r, r)]
            for k in range(1, self.S + 1):
                coeff = -(xi ** k) * Fraction(rr, k)
                cs.append(_geom_entry(coeff, k * (n + 1), k * r, r, r))
            self._logs[key] = STruncSeries(cs, self.S)
        return self._logs[key]

    def entry(self, n, j):
        return self.log(n, j).exp()

    def as_diagonal(self, n):
        """The operator on the x^n slice as a DiagonalOp over (a, j)."""
        return DiagonalOp(self.r, self.S, lambda a, j: self.log(n, j), f"T[{n}]")


def transport_op(r, S, convention="r-factor"):
    return TransportOp(r, S, convention)
