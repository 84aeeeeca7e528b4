from fractions import Fraction

import pytest

from quintic_kfjrw.cyclotomic import CycloElem
from quintic_kfjrw.errors import TruncationTooShort
from quintic_kfjrw.genfun import (
    i_component, i_fjrw, i_fjrw_dual, i_untwisted, j_point, mu_invariance_check, pochhammer_table,
    verify_pipeline,
)
from quintic_kfjrw.operators.series import XSeries
from quintic_kfjrw.qrat import QRat
from quintic_kfjrw.statespace import StateVec

q1 = QRat.t_power(1)
Q = QRat.t_power(5, 5, 5)          # q at level q^(1/5)
t = QRat.t_power(1, 5, 5)          # q^(1/5)
P = pochhammer_table(40, 5, 5)


def test_j_point_coefficients():
    J = j_point(4)
    assert J[0] == 1 - q1
    assert J[1] == 1
    assert J[2] == 1 / (1 - q1 ** 2)


def test_i_untwisted():
    I = i_untwisted(5, 6)
    assert I[0] == StateVec(5, {(1, 0): 1 - Q}, "delta")
    assert I[4] == StateVec(5, {(0, 0): (1 - Q) / P[4]}, "delta")
    assert I[6] == StateVec(5, {(2, 0): (1 - Q) / P[6]}, "delta")
    flagged = i_untwisted(5, 2, e_part=1)
    assert flagged[0] == StateVec(5, {(1, 1): 1 - Q}, "delta")


def test_i_fjrw_components():
    I = i_fjrw(5, 6)
    for j in range(5):
        xi = CycloElem.root(5, j)
        assert I[0].component(1, j) == 1 - Q
        assert I[5].component(1, j) == (1 - Q) * (1 - t.scale(xi)) ** 5 / P[5]
        # x^4 sits in the broad sector phi_0
        assert I[4].component(0, j) == (1 - Q) / P[4]


def test_formal_s_at_one_matches():
    N = 6
    formal = i_fjrw(5, N, "formal_s", S=10)
    plain = i_fjrw(5, N)
    for d in range(N + 1):
        at_one = StateVec(5, {k: v.evaluate(1) for k, v in formal[d].entries.items()}, "idem")
        assert at_one == plain[d]
    with pytest.raises(TruncationTooShort):
        i_fjrw(5, 6, "formal_s", S=3)


def test_dual():
    D = i_fjrw_dual(5, 6)
    I = i_fjrw(5, 6)
    tinv = QRat.t_power(-1, 5, 5)
    for j in range(5):
        xi = CycloElem.root(5, j)
        assert D[0].component(1, j) == I[0].component(1, j) == 1 - Q
        assert D[5].component(1, j) == (1 - Q) * (1 - tinv.scale(xi.inverse())) ** 5 / P[5]
        # only the numerator is inverted
        ratio_p = I[5].component(1, j) * P[5] / (1 - Q)
        ratio_d = D[5].component(1, j) * P[5] / (1 - Q)
        assert ratio_d == ratio_p.invert_q().galois(-1 % 5)


def test_i_component_examples():
    for j in range(5):
        xi = CycloElem.root(5, j)
        assert i_component(0, j, 3)[0] == 1
        assert i_component(1, j, 3)[0] == 1 / (1 - Q)
        assert i_component(0, j, 3)[1] == (1 - t.scale(xi)) ** 5 / P[5]


@pytest.mark.parametrize("a", range(5))
def test_component_recurrence(a):
    N = 6
    for j in range(5):
        xi = CycloElem.root(5, j)
        c = i_component(a, j, N)
        for d in range(1, N + 1):
            block = P[5 * d + a] / P[5 * d + a - 5]
            mono = QRat.q_power(Fraction(a + 1, 5) + d - 1, 5, 5, coeff=xi)
            assert c[d] * block == c[d - 1] * (1 - mono) ** 5


def test_pipeline_rank_five():
    rep = verify_pipeline(5, 6, 32)
    assert rep["status"] == "pass", rep.get("witness")
    assert not rep["spurious_s_degrees"]


def test_pipeline_rank_three():
    assert verify_pipeline(3, 6, 20)["status"] == "pass"


def test_pipeline_trivial_order():
    assert verify_pipeline(5, 0, 2)["status"] == "pass"


def test_pipeline_without_r_fails_at_n5():
    rep = verify_pipeline(5, 6, 32, convention="no-r-factor")
    assert rep["status"] == "fail"
    assert rep["witness"]["n"] == 5


def test_pipeline_needs_s_order():
    with pytest.raises(TruncationTooShort):
        verify_pipeline(5, 6, 10)


def test_invariance():
    N = 6
    assert mu_invariance_check(i_fjrw(5, N), 5)["status"] == "pass"
    iun = i_untwisted(5, N).map(lambda v: v.to_basis("idem"))
    assert mu_invariance_check(iun, 5)["status"] == "pass"
    f = i_fjrw(5, N)
    single = XSeries([StateVec(5, {k: v for k, v in c.entries.items() if k[1] == 0}, "idem") for c in f.coeffs], N)
    assert mu_invariance_check(single, 5)["status"] == "fail"
