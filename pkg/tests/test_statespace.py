from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from quintic_kfjrw.cyclotomic import CycloElem
from quintic_kfjrw.errors import NonPolynomialCoefficient, OrderMismatch
from quintic_kfjrw.qrat import QRat
from quintic_kfjrw.statespace import (
    StateVec, adams_state, basis_change, mu_act, pairing, phi_embed, polarization_split,
    ring_mul, symplectic_omega,
)

from conftest import qrats

R = 5
ONE = QRat.one(R, R)
q = QRat.t_power(R, R, R)
z = CycloElem.root(R)


def vec(entries, basis="idem", r=R):
    return StateVec(r, {k: (v if isinstance(v, QRat) else ONE * v) for k, v in entries.items()}, basis)


def test_basis_change_examples():
    # [0] is the identity: the sum of all idempotents
    assert vec({(2, 0): 1}, "delta").to_basis("idem") == vec({(2, j): 1 for j in range(R)})
    e1 = basis_change(vec({(0, 0): 1}), "delta")
    assert e1.basis == "delta" and e1 == vec({(0, k): Fraction(1, 5) for k in range(R)}, "delta")


@given(data=st.data())
def test_basis_change_roundtrip(data):
    entries = {(data.draw(st.integers(0, 4)), data.draw(st.integers(0, 4))): data.draw(qrats()) for _ in range(3)}
    v = StateVec(R, entries, "delta")
    back = basis_change(basis_change(v, "idem"), "delta")
    assert back.basis == "delta" and back.entries == v.entries


def test_ring_mul_examples():
    assert ring_mul(vec({(2, 1): 1}, "delta"), vec({(2, 3): 1}, "delta")) == vec({(2, 4): 1}, "delta")
    assert ring_mul(vec({(1, 1): 1}, "delta"), vec({(2, 1): 1}, "delta")).is_zero()


@pytest.mark.parametrize("j", range(R))
@pytest.mark.parametrize("k", range(R))
def test_idempotents_orthogonal(j, k):
    # multiply in the [k] basis, where the product rule is the defining one
    ej = basis_change(vec({(1, j): 1}), "delta")
    ek = basis_change(vec({(1, k): 1}), "delta")
    prod = ring_mul(ej, ek)
    assert prod == (vec({(1, j): 1}) if j == k else vec({}))


def test_pairing_examples():
    assert pairing(vec({(1, 1): 1}), vec({(4, 1): 1}))[0] == Fraction(1, 5)
    assert pairing(vec({(1, 1): 1}), vec({(4, 2): 1})).is_zero()
    broad = pairing(vec({(0, 1): 1}), vec({(0, 1): 1}))
    # (1 - zeta s)^5 / 5
    for k in range(6):
        from math import comb

        assert broad[k] == ONE.scale(CycloElem.rational(5, Fraction(comb(5, k), 5)) * (-z) ** k)


@pytest.mark.parametrize("a", range(R))
@pytest.mark.parametrize("b", range(R))
def test_pairing_symmetric_on_basis(a, b):
    for j in range(R):
        u, v = vec({(a, j): 1}), vec({(b, j): q})
        assert pairing(u, v) == pairing(v, u)


def test_adams_examples():
    v = vec({(3, 1): q})
    assert adams_state(1, v) == v
    assert adams_state(2, vec({(3, 1): 1})) == vec({(3, 3): 1})
    assert adams_state(5, vec({(3, 0): 1})) == vec({(3, 0): 1}, "delta")


def test_mu_act_examples():
    assert mu_act(1, vec({(2, 3): 1})) == vec({(2, 3 + 2): 1})
    t = QRat.t_power(1, R, R)
    assert mu_act(1, vec({(1, 0): t})) == vec({(1, 1): t.scale(z)})
    f = vec({(1, 0): 1 - q}, "delta")
    assert mu_act(1, f) == f
    with pytest.raises(NonPolynomialCoefficient):
        mu_act(1, vec({(1, 0): 1 / (1 - t)}), laurent_only=True)


@given(data=st.data(), k=st.integers(0, 4), l=st.integers(0, 4))
def test_mu_act_group_law(data, k, l):
    entries = {(data.draw(st.integers(0, 4)), data.draw(st.integers(0, 4))): data.draw(qrats()) for _ in range(2)}
    f = StateVec(R, entries, "idem")
    assert mu_act(k, mu_act(l, f)) == mu_act((k + l) % R, f)


def test_polarization_examples():
    q1 = QRat.t_power(1)
    p, m = polarization_split(q1 ** 2)
    assert p == q1 ** 2 and m.is_zero()
    p, m = polarization_split(1 / (1 - q1))
    assert p.is_zero() and m == 1 / (1 - q1)
    p, m = polarization_split(q1 / (1 - q1))
    assert p == -1 and m == 1 / (1 - q1)


@given(f=qrats())
def test_polarization_properties(f):
    from quintic_kfjrw.qrat import expand_at

    p, m = polarization_split(f)
    assert p + m == f
    assert p.is_laurent()
    if not m.is_zero():
        assert expand_at(m, 0, 0).order_low >= 0
        assert expand_at(m, "inf", 0).order_low >= 1
    assert polarization_split(p)[1].is_zero() and polarization_split(m)[0].is_zero()


def test_omega_example():
    q1 = QRat.t_power(R, R, R)
    f = vec({(1, 1): q1})
    g = vec({(4, 1): 1 / (1 - q1)})
    # <f(q), g(1/q)> = (1/5) q^2/(q - 1) = (1/5)(q + 1 + 1/(q - 1)):
    # Res_0 of dq/q is 0, the q^0 coefficient at infinity is 1/5
    om = symplectic_omega(f, g)
    assert om[0] == Fraction(-1, 5)


@pytest.mark.parametrize("a", range(R))
def test_k_plus_isotropy(a):
    for j in range(R):
        for i in range(-6, 7, 3):
            for i2 in range(-6, 7, 4):
                f = vec({(a, j): QRat.t_power(i, R, R)})
                g = vec({((-a) % R, j): QRat.t_power(i2, R, R)})
                assert symplectic_omega(f, g).is_zero()


@given(data=st.data())
def test_omega_antisymmetric(data):
    a, j = data.draw(st.integers(0, 4)), data.draw(st.integers(0, 4))
    f = vec({(a, j): data.draw(qrats())})
    g = vec({((-a) % R, j): data.draw(qrats())})
    assert symplectic_omega(f, g) == symplectic_omega(g, f).map(lambda c: -c)


def test_phi_embed_examples():
    assert phi_embed("zero", vec({(2, 1): 1}), 2) == StateVec(10, {(4, 2): QRat.one(10, 10)}, "idem")
    assert phi_embed("zero", vec({(0, 3): 1}), 2) == StateVec(10, {(0, 6): QRat.one(10, 10)}, "idem")
    j, j0 = 2, 3
    got = phi_embed("xi0", vec({(1, j): 1}), 2, xi0=j0)
    want = StateVec(10, {(1, 2 * j - j0): QRat.one(10, 10), (6, 2 * j - 6 * j0): QRat.one(10, 10)}, "idem")
    assert got == want
    with pytest.raises(OrderMismatch):
        phi_embed("xi0", vec({(1, 0): 1}), 2, xi0=2)


@pytest.mark.parametrize("a", range(1, R))
def test_phi_zero_preserves_pairing(a):
    for j in range(R):
        u, v = vec({(a, j): q}), vec({((-a) % R, j): 1 - q})
        lhs = pairing(phi_embed("zero", u, 2), phi_embed("zero", v, 2), rank=R)[0]
        rhs = pairing(u, v)[0]
        assert lhs == rhs.lift(10, 10)


def test_text_roundtrip():
    v = vec({(1, 2): q / (1 - q), (0, 4): -ONE})
    back = StateVec.from_text(v.to_text())
    assert back == v
    assert v.to_text().splitlines()[1].startswith("phi[0] e[4] :")
