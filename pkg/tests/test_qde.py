from fractions import Fraction

import pytest

from quintic_kfjrw.errors import NonConvergent, PoleAtSample, UnsupportedRank
from quintic_kfjrw.genfun import i_component
from quintic_kfjrw.operators.series import XSeries
from quintic_kfjrw.qde import (
    character_consistency, component_operator, independence_certificate, main_operator,
    operator_on_monomial, qchar_check, qchar_numeric, twist_character, verify_component_ode,
    verify_inverted_ode, verify_twisted_main,
)
from quintic_kfjrw.qrat import QRat

SPOT = [(0, 0), (1, 3), (3, 2), (4, 1), (2, 4)]


@pytest.mark.parametrize("a,j", SPOT)
def test_component_equation(a, j):
    rep = verify_component_ode(a, j, 6)
    assert rep["status"] == "pass", rep
    assert rep["params"] == {"a": a, "xi": j, "N": 6, "r": 5}


def test_degree_zero_factor_vanishes_for_a3():
    op = component_operator(3, 0)
    assert operator_on_monomial(op, 0).is_zero()


def test_first_step_cancellation():
    # c_1 prod_{k<=5}(1 - q^k) = (1 - xi q^(1/5))^5 c_0 at a = 0
    for j in range(5):
        c = i_component(0, j, 2)
        from quintic_kfjrw.genfun import pochhammer_table, xi_of

        _, xi = xi_of(j, 5)
        P = pochhammer_table(5, 5, 5)
        assert c[1] * P[5] == (1 - QRat.t_power(1, 5, 5, coeff=xi)) ** 5 * c[0]


@pytest.mark.parametrize("a", [0, 4])
def test_inverted_equation(a):
    rep = verify_inverted_ode(a, 0 if a == 0 else 2, 6)
    assert rep["status"] == "pass", rep
    ve = rep["verified_exponent"]
    assert ve["passing"] == ["15+4a-1"] and ve["conjugation"] == "15+4a-1"
    assert ve["value"] == 14 + 4 * a


@pytest.mark.parametrize("a,j", SPOT)
def test_twisted_equation(a, j):
    rep = verify_twisted_main(a, j, 6)
    assert rep["status"] == "pass", rep
    assert rep["cross_check"]["matches_inverted"]


@pytest.mark.parametrize("a,j", [(0, 0), (3, 2), (4, 1)])
def test_wrong_character_fails(a, j):
    wrong = twist_character((a + 1) % 5, j).mu
    assert verify_twisted_main(a, j, 6, twist=wrong)["status"] == "fail"


@pytest.mark.parametrize("a,j", [(1, 1), (4, 3)])
def test_corrupted_coefficient_fails_all_three(a, j):
    N = 6
    F = i_component(a, j, N)
    bad = XSeries(list(F.coeffs[:3]) + [F[3] + QRat.t_power(1, 5, 5)] + list(F.coeffs[4:]), N)
    assert verify_component_ode(a, j, N, series=bad)["status"] == "fail"
    assert verify_inverted_ode(a, j, N, series=bad)["status"] == "fail"
    assert verify_twisted_main(a, j, N, series=bad)["status"] == "fail"


def test_unsupported_rank():
    with pytest.raises(UnsupportedRank):
        verify_twisted_main(0, 0, 6, r=3)
    with pytest.raises(UnsupportedRank):
        main_operator(3)


@pytest.mark.parametrize("d", range(7))
def test_left_factor_on_monomials(d):
    from quintic_kfjrw.operators.diffop import DiffOp

    # prod_{k=1}^5 (1 - q^(-k + x d/dx)) in the variable x itself
    left = DiffOp.scalar(1, 5, 5)
    for k in range(1, 6):
        left = left * (1 - DiffOp.shift(1, QRat.q_power(-k, 5, 5), 5, 5))
    value = operator_on_monomial(left, d)
    expected = QRat.one(5, 5)
    for k in range(1, 6):
        expected = expected * (1 - QRat.q_power(d - k, 5, 5))
    assert value == expected
    assert value.is_zero() == (1 <= d <= 5)
    # main_operator acts on series in x^(1/5): its x^0 part sees degree 5d
    L = main_operator()
    x0 = L.__class__({k: v for k, v in L.terms.items() if k[0] == 0}, 5, 5)
    assert operator_on_monomial(x0, d) == operator_on_monomial(left, 5 * d)


def test_twist_characters():
    chars = [twist_character(a, j) for a in range(5) for j in range(5)]
    assert len({(c.mu.c0, c.mu.k % 5) for c in chars}) == 25
    mu = twist_character(4, 0).mu
    assert Fraction(mu.c0).denominator == 1 and mu.k % 5 == 0
    assert str(twist_character(0, 1).mu) == "q^(1/5)*zeta(5)^4"


def test_character_consistency_numeric():
    for a, j in SPOT:
        assert character_consistency(a, j) < 1e-9


def test_qchar_numeric():
    v, _ = qchar_numeric(1, 2, 0.7)
    assert abs(v - 1) < 1e-12
    e_x, _ = qchar_numeric(3, 2, 0.7, 200)
    e_qx, _ = qchar_numeric(3, 2, 1.4, 200)
    assert abs(e_qx - 3 * e_x) / abs(3 * e_x) < 1e-9
    lo, _ = qchar_numeric(3, 2, 0.5, 200)
    hi, _ = qchar_numeric(3, 2, 0.5, 400)
    assert abs(hi - lo) / abs(hi) < 1e-10
    with pytest.raises(NonConvergent):
        qchar_numeric(3, 0.5, 0.7)
    with pytest.raises(PoleAtSample):
        qchar_numeric(3, 2, -1)


def test_qchar_check_report():
    rep = qchar_check()
    assert rep["status"] == "pass", rep


def test_independence_symbolic():
    rep = independence_certificate(casoratian=False)
    assert rep["status"] == "pass"
    assert rep["pairwise_distinct"] and rep["vandermonde_nonzero"]
    assert rep["vandermonde_numeric_rel_diff"] < 1e-20
    with pytest.raises(UnsupportedRank):
        independence_certificate(r=3)
