import random
from fractions import Fraction
from math import comb, factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from quintic_kfjrw.cyclotomic import CycloElem
from quintic_kfjrw.errors import OrderMismatch, TruncationTooShort
from quintic_kfjrw.genfun import j_point
from quintic_kfjrw.operators.bernoulli import (
    bernoulli, bernoulli_gf_check, bernoulli_periodic, bernoulli_poly,
)
from quintic_kfjrw.operators.diagonal import (
    admissible_xi0, box0_adams_oracle, box_chain_check, box_op, delta_op, geometric_collapse,
    transport_op,
)
from quintic_kfjrw.operators.diffop import DiffOp, diffop_apply, diffop_mul
from quintic_kfjrw.operators.series import STruncSeries, XSeries
from quintic_kfjrw.operators.wg import (
    exp_neg_w, exp_w_check, g_equations_check, g_function, qrat_to_zseries, w_qform, w_zform,
)
from quintic_kfjrw.qrat import QRat

z5 = CycloElem.root(5)


# Bernoulli

def test_bernoulli_values():
    assert bernoulli(0, Fraction(3, 7)) == 1
    assert bernoulli(2, Fraction(1, 5)) == Fraction(1, 150)
    assert bernoulli(3, 1) == 0
    assert bernoulli_periodic(2, Fraction(6, 5)) == Fraction(1, 150)
    assert bernoulli_periodic(1, 0) == Fraction(1, 2)


@pytest.mark.parametrize("d", range(9))
@pytest.mark.parametrize("y", [Fraction(0), Fraction(1, 5), Fraction(2, 3), Fraction(-7, 4)])
def test_bernoulli_against_generating_function(d, y):
    assert bernoulli(d, y) == _gf_oracle(d, y)


def _gf_oracle(n, y):
    """n! [t^n] of e^{yt} / ((e^t - 1)/t), by exact series division."""
    ey = [Fraction(y) ** k / factorial(k) for k in range(n + 1)]
    den = [Fraction(1, factorial(k + 1)) for k in range(n + 1)]
    out = []
    for k in range(n + 1):
        out.append((ey[k] - sum(den[j] * out[k - j] for j in range(1, k + 1))) / den[0])
    return out[n] * factorial(n)


def test_bernoulli_recurrence_and_difference():
    for n in range(1, 15):
        assert sum(comb(n + 1, k) * bernoulli(k, 0) for k in range(n + 1)) == 0
    for d in range(1, 10):
        for y in (Fraction(1, 3), Fraction(-2, 5), Fraction(4)):
            assert bernoulli(d, y + 1) - bernoulli(d, y) == d * y ** (d - 1)


@given(d=st.integers(0, 10), y=st.fractions(-5, 5, max_denominator=12))
def test_bernoulli_periodic_is_periodic(d, y):
    assert bernoulli_periodic(d, y + 1) == bernoulli_periodic(d, y)


def test_bernoulli_gf_check_and_control():
    assert bernoulli_gf_check(6)[0]
    assert bernoulli_gf_check(12)[0]

    def corrupted(d):
        p = bernoulli_poly(d)
        return (p[0] + 1,) + p[1:] if d == 4 else p

    ok, deg = bernoulli_gf_check(12, corrupted)
    assert not ok and deg == 4


# w and G

def _binomial_power(xi, c, S, r=5):
    e = Fraction(c).denominator
    lin = STruncSeries([QRat.one(e, 5), -QRat.q_power(c, e, 5, coeff=xi)], S)
    out = STruncSeries([QRat.one(e, 5)], S)
    for _ in range(r):
        out = out * lin
    return out


def test_exp_minus_w_example():
    assert exp_neg_w(z5, Fraction(1, 5), 3) == _binomial_power(z5, Fraction(1, 5), 3)
    e0 = exp_neg_w(z5, Fraction(1, 5), 0)
    assert e0.order == 0 and e0[0] == 1


def test_exp_minus_w_all_characters():
    rep = exp_w_check(S=5)
    assert rep["status"] == "pass", rep


def test_w_z_form_matches_q_form():
    # substitute q = e^z in the q-form and compare through z^4, s^3
    c = Fraction(2, 5)
    zf = w_zform(z5, c, 4, 3)
    qf = w_qform(z5, c, 3)
    for k in range(1, 4):
        ser = qrat_to_zseries(qf[k], 4)
        for d in range(5):
            assert zf.coeff(0, d, k) == ser.get(d, 0)


def test_g_first_equation_small():
    # G_{y,xi}(x, z) = G_{0,xi}(x + yz, z), through (x^3, z^3, s^3)
    y = Fraction(1, 5)
    lhs = g_function(y, z5, 3, 3, 3)
    rhs = g_function(0, z5, 3 + 3 + 1, 3, 3).substitute_x_shift(y).truncate(3, 3, 3)
    assert lhs == rhs
    # a wrong y breaks it
    bad = g_function(0, z5, 7, 3, 3).substitute_x_shift(Fraction(2, 5)).truncate(3, 3, 3)
    assert lhs != bad


def test_g_equations_full():
    rep = g_equations_check()
    assert rep["status"] == "pass", rep
    assert rep["compared_identities"] == 25


# diagonal operators

def test_delta_entries():
    D0 = delta_op(5, 0)
    assert all(D0.entry(a, j)[0] == 1 for a in range(5) for j in range(5))
    D = delta_op(5, 1)
    q5 = QRat.t_power(5, 5, 5)
    t = QRat.t_power(1, 5, 5)
    assert D.entry(1, 1)[1] == (5 * t.scale(z5)) / (q5 - 1)
    for j in range(5):
        xi = CycloElem.root(5, j)
        assert D.entry(0, j)[1] == (5 * q5.scale(xi)) / (q5 - 1)


def test_transport_times_delta():
    S = 6
    T, D = transport_op(5, S), delta_op(5, S)
    for j in range(5):
        xi = CycloElem.root(5, j)
        assert (T.log(0, j) + D.log(1, j)).is_zero()
        assert (T.log(4, j) + D.log(0, j)).is_zero()
        combined = (T.log(5, j) + D.log(1, j)).exp()
        assert combined == _binomial_power(xi, Fraction(1, 5), S)


@pytest.mark.parametrize("n", range(11))
def test_combined_entry_degree(n):
    r, S = 5, 12
    T, D = transport_op(r, S), delta_op(r, S)
    E = (T.log(n, 1) + D.log((n + 1) % r, 1)).exp()
    deg = r * (n // r)
    assert all(E[k].is_zero() for k in range(deg + 1, S + 1))
    assert not E[deg].is_zero()


def test_geometric_collapse_example():
    lhs, rhs = geometric_collapse(5, 2, 1, 1)
    expected = 1 - QRat.t_power(5, 10, 10)
    assert lhs == rhs == expected


@pytest.mark.parametrize("r,m", [(5, 2), (5, 3), (3, 2)])
def test_collapse_and_chain(r, m):
    for j0 in admissible_xi0(r, m):
        for k in range(1, 7):
            lhs, rhs = geometric_collapse(r, m, j0, k)
            assert lhs == rhs
            for a in range(1, r):
                lhs, rhs = box_chain_check(r, m, j0, k, a)
                assert lhs == rhs


def test_box_entries():
    B = box_op("xi0", 5, 2, 1, 0)
    assert B.entry(3, 4)[0] == 1
    B0 = box_op("zero", 5, 2, None, 4)
    for a in range(5):
        for j in range(10):
            assert B0.log(2 * a, j) == box0_adams_oracle(5, 2, a, j, 4)
    with pytest.raises(OrderMismatch):
        box_op("xi0", 5, 2, 2, 1)


# difference operators

def x_series(coeffs, e=1, N=1):
    return XSeries([QRat.const(c, e, N) if not isinstance(c, QRat) else c for c in coeffs])


def test_shift_examples():
    q = QRat.t_power(1)
    S = DiffOp.shift()
    x = DiffOp.x_power()
    assert S * x == x * S * q
    assert S * x == DiffOp({(1, 1): q})
    out = S.apply(x_series([0, 0, 0, 1]))
    assert out[3] == q ** 3
    op = DiffOp.shift(20, q ** 10)
    assert op.apply(x_series([0, 0, 0, 1]))[3] == q ** 70


def test_product_example():
    q = QRat.t_power(1)
    S = DiffOp.shift()
    left = (1 - S) * (1 - S * q.inverse())
    right = 1 - S * (1 + q.inverse()) + DiffOp.shift(2, q.inverse())
    assert diffop_mul(1 - S, 1 - S * q.inverse()) == left == right


def test_q_exponential_annihilated():
    N = 8
    f = j_point(N).map(lambda c: c / (1 - QRat.t_power(1)))
    op = 1 - DiffOp.shift() - DiffOp.x_power()
    out = diffop_apply(op, f, order=N)
    assert out.is_zero()
    with pytest.raises(TruncationTooShort):
        op.apply(f, order=N + 1)


def test_normal_form_text_sorted():
    q = QRat.t_power(1)
    op = DiffOp.x_power() * DiffOp.shift(2) - 2 * DiffOp.x_power() * DiffOp.shift() \
        + DiffOp.x_power() - DiffOp.shift(-1)
    assert op.to_text() == "-S^-1 + x - 2*x*S + x*S^2"
    assert list(op.terms) == sorted(op.terms)


def _random_op(rng, e=5, N=5):
    terms = {}
    for _ in range(rng.randint(1, 3)):
        c = QRat.t_power(rng.randint(-3, 3), e, N, coeff=CycloElem.root(N, rng.randrange(N)) * rng.randint(-2, 2))
        terms[(rng.randint(0, 2), rng.randint(-2, 2))] = c
    return DiffOp(terms, e, N)


@pytest.mark.parametrize("seed", range(50))
def test_associativity(seed):
    rng = random.Random(seed)
    A, B, C = (_random_op(rng) for _ in range(3))
    assert (A * B) * C == A * (B * C)


@pytest.mark.parametrize("seed", range(10))
def test_apply_composes(seed):
    rng = random.Random(1000 + seed)
    A, B = _random_op(rng), _random_op(rng)
    f = XSeries([QRat.t_power(rng.randint(0, 4), 5, 5) / (1 - QRat.t_power(d + 1, 5, 5)) for d in range(9)])
    n = 8 - A.x_degree() - B.x_degree()
    lhs = (A * B).apply(f, order=n)
    rhs = A.apply(B.apply(f), order=n)
    assert lhs == rhs


def test_twisted_apply_replaces_shift():
    q = QRat.t_power(1, 5, 5)
    mu = QRat.t_power(2, 5, 5, coeff=z5)
    op = 1 - DiffOp.shift(1, e=5, N=5)
    f = XSeries([QRat.one(5, 5)] * 4)
    direct = op.apply(f, twist=mu)
    folded = op.twist(mu).apply(f)
    assert direct == folded
    assert direct[2] == 1 - q ** 10 * mu
