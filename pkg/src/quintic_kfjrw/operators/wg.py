"""The series w_xi and G_{y,xi}.

w_{xi,d} = r sum_k (xi s)^k k^d / k, so the s^k coefficient of w_{xi,d} is
r xi^k k^(d-1).  The same formula at d = -1 gives r sum_k (xi s)^k / k^2,
which is the value used for the (k, l) = (0, 0) stratum of G.

G_{y,xi}(x, z) = sum_{k,l} w_{xi,k+l-1} B_l(y) x^k z^(l-1) / (k! l!).
"""

import time
from fractions import Fraction
from math import factorial

from ..cyclotomic import CycloElem
from ..qrat import QRat
from .bernoulli import bernoulli
from .series import STruncSeries, TriSeries

__all__ = [
    "w_coeff",
    "w_qform",
    "w_zform",
    "w_xform",
    "exp_neg_w",
    "g_function",
    "g_qform",
    "qrat_to_zseries",
    "zseries_of_sseries",
    "g_equations_check",
    "exp_w_check",
]


def _xi_pow(xi, k):
    return xi ** k if isinstance(xi, CycloElem) else Fraction(xi) ** k


def w_coeff(xi, d, k, r=5):
    """Coefficient of s^k in w_{xi,d}."""
    return _xi_pow(xi, k) * (r * Fraction(k) ** (d - 1))


def w_qform(xi, c, S, r=5, e=None, convention="r-factor"):
    """w_xi at q^c as an s-series over QRat: r sum_k (s xi)^k q^(ck) / k.

    exp(-w) is then (1 - s xi q^c)^r.  With ``convention="no-r-factor"``
    the leading r is dropped.
    """
    c = Fraction(c)
    if e is None:
        e = c.denominator
    N = xi.level if isinstance(xi, CycloElem) else 1
    rr = r if convention == "r-factor" else 1
    cs = [QRat.zero(e, N)]
    for k in range(1, S + 1):
        cs.append(QRat.q_power(c * k, e, N, coeff=_xi_pow(xi, k) * Fraction(rr, k)))
    return STruncSeries(cs, S)


def exp_neg_w(xi, c, S, r=5, e=None):
    return (-w_qform(xi, c, S, r, e)).exp()


def w_zform(xi, c, z_max, S, r=5):
    """w_xi(c z) = sum_d w_{xi,d} (c z)^d / d! as a z-series (x-degree 0)."""
    c = Fraction(c)
    terms = {}
    for d in range(z_max + 1):
        for k in range(1, S + 1):
            terms[(0, d, k)] = w_coeff(xi, d, k, r) * c ** d / factorial(d)
    return TriSeries(terms, 0, z_max, S)


def w_xform(xi, x_max, S, r=5, z_max=0):
    """w_xi(x) = sum_d w_{xi,d} x^d / d! as a series in x (z-degree 0)."""
    terms = {}
    for d in range(x_max + 1):
        for k in range(1, S + 1):
            terms[(d, 0, k)] = w_coeff(xi, d, k, r) / factorial(d)
    return TriSeries(terms, x_max, z_max, S)


def g_function(y, xi, x_order, z_window, S, r=5):
    """G_{y,xi}(x, z) through x^x_order, z^z_window (from z^-1), s^S."""
    y = Fraction(y)
    terms = {}
    for k in range(x_order + 1):
        for l in range(z_window + 2):
            b = bernoulli(l, y)
            if b == 0:
                continue
            scale = b / (factorial(k) * factorial(l))
            for j in range(1, S + 1):
                terms[(k, l - 1, j)] = w_coeff(xi, k + l - 1, j, r) * scale
    return TriSeries(terms, x_order, z_window, S)


def g_qform(xi, c, S, r=5, e=None):
    """r sum_k (s xi)^k q^(kc) / (k (q^k - 1)) as an s-series over QRat."""
    c = Fraction(c)
    if e is None:
        e = c.denominator
    N = xi.level if isinstance(xi, CycloElem) else 1
    cs = [QRat.zero(e, N)]
    for k in range(1, S + 1):
        num = QRat.q_power(c * k, e, N, coeff=_xi_pow(xi, k) * Fraction(r, k))
        cs.append(num / (QRat.q_power(k, e, N) - 1))
    return STruncSeries(cs, S)


def qrat_to_zseries(f, z_max):
    """Laurent expansion of f(q = e^z) around z = 0 through z^z_max.

    Independent of the Bernoulli machinery: t = q^(1/e) = exp(z/e) is
    substituted into numerator and denominator as exponential series and
    the quotient is taken by exact series division.  Returns {power: value}.
    """
    N = f.level
    e = f.e
    num = f.num.coeff_list()
    den = [Fraction(int(c.p), int(c.q)) for c in f.den.coeffs()]

    def exp_series(coeffs, n_terms, cyclo):
        out = []
        for i in range(n_terms):
            acc = CycloElem.zero(N) if cyclo else Fraction(0)
            for n, a in enumerate(coeffs):
                if (a.is_zero() if cyclo else a == 0):
                    continue
                acc = acc + a * (Fraction(n, e) ** i / factorial(i))
            out.append(acc)
        return out

    deg = len(den)
    probe = exp_series(den, deg + 2, False)
    v = 0
    while probe[v] == 0:
        v += 1
    n_terms = z_max + v + 1
    nn = exp_series(num, n_terms, True)
    dd = exp_series(den, n_terms + v, False)[v:]
    out = []
    for i in range(n_terms):
        acc = nn[i]
        for j in range(1, i + 1):
            if dd[j] != 0:
                acc = acc - out[i - j] * dd[j]
        out.append(acc * (1 / dd[0]))
    return {i - v: out[i] for i in range(len(out)) if i - v <= z_max}


def zseries_of_sseries(series, z_max):
    """Map an STruncSeries over QRat to a TriSeries in (z, s) via q = e^z."""
    terms = {}
    low = 0
    for j, c in enumerate(series.coeffs):
        if c.is_zero():
            continue
        for l, v in qrat_to_zseries(c, z_max).items():
            low = min(low, l)
            terms[(0, l, j)] = v
    return TriSeries(terms, 0, z_max, series.order)


def _tri_witness(lhs, rhs, label):
    diff = lhs - rhs
    if diff.is_zero():
        return None
    (i, l, j), _ = diff.items()[0]
    return {
        "equation": label,
        "x": i, "z": l, "s": j,
        "lhs": str(lhs.coeff(i, l, j)),
        "rhs": str(rhs.coeff(i, l, j)),
    }


def g_equations_check(ys=(0, Fraction(1, 5), Fraction(2, 5)), x_max=4, z_max=4, S=4, r=5, c=Fraction(2, 5)):
    """Both functional equations of G and the closed q-form, for every xi in mu_r.

    G_{y,xi}(x, z) = G_{0,xi}(x + y z, z) and
    G_{0,xi}(x + z, z) - G_{0,xi}(x, z) = w_xi(x), through x^x_max, z^z_max, s^S;
    G_{0,xi}(c z, z) against r sum (s xi)^k q^(kc)/(k(q^k - 1)) at q = e^z.
    The shifted side is built with extra x-degrees so that the truncation is exact.
    """
    t0 = time.perf_counter()
    witness = None
    compared = 0
    for jx in range(r):
        xi = CycloElem.root(r, jx)
        g0_wide = g_function(0, xi, x_max + z_max + 1, z_max, S, r)
        for y in ys:
            lhs = g_function(y, xi, x_max, z_max, S, r)
            rhs = g0_wide.substitute_x_shift(y).truncate(x_max, z_max, S)
            compared += 1
            witness = witness or _tri_witness(lhs, rhs, f"first, y={y}, xi=zeta^{jx}")
        g0 = g_function(0, xi, x_max, z_max, S, r)
        lhs = g0_wide.substitute_x_shift(1).truncate(x_max, z_max, S) - g0
        rhs = w_xform(xi, x_max, S, r, z_max)
        compared += 1
        witness = witness or _tri_witness(lhs, rhs, f"second, xi=zeta^{jx}")
        lhs = g_function(0, xi, z_max + 1, z_max, S, r).substitute_x_linear(c).truncate(0, z_max, S)
        rhs = zseries_of_sseries(g_qform(xi, c, S, r), z_max)
        compared += 1
        witness = witness or _tri_witness(lhs, rhs, f"q-form, c={c}, xi=zeta^{jx}")
    rep = {
        "check": "g_equations",
        "params": {"r": r, "x_max": x_max, "z_max": z_max, "S": S, "y": [str(y) for y in ys], "c": str(c)},
        "status": "pass" if witness is None else "fail",
        "compared_identities": compared,
        "timings_ms": round((time.perf_counter() - t0) * 1000, 1),
    }
    if witness:
        rep["witness"] = witness
    return rep


def exp_w_check(S=5, r=5, cs=None):
    """exp(-w_xi) in q-form against (1 - s xi q^c)^r through s^S, all xi in mu_r."""
    t0 = time.perf_counter()
    cs = cs if cs is not None else [Fraction(i, r) for i in range(1, r + 1)]
    witness = None
    for c in cs:
        e = Fraction(c).denominator
        for jx in range(r):
            xi = CycloElem.root(r, jx)
            lhs = exp_neg_w(xi, c, S, r, e)
            lin = STruncSeries([QRat.one(e, r), -QRat.q_power(c, e, r, coeff=xi)], S)
            rhs = STruncSeries([QRat.one(e, r)], S)
            for _ in range(r):
                rhs = rhs * lin
            for k in range(S + 1):
                if lhs[k] != rhs[k]:
                    witness = {"c": str(c), "xi": jx, "s_degree": k, "lhs": lhs[k].body(), "rhs": rhs[k].body()}
                    break
            if witness:
                break
        if witness:
            break
    rep = {
        "check": "exp_w",
        "params": {"r": r, "S": S, "c": [str(c) for c in cs]},
        "status": "pass" if witness is None else "fail",
        "timings_ms": round((time.perf_counter() - t0) * 1000, 1),
    }
    if witness:
        rep["witness"] = witness
    return rep
