from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from quintic_kfjrw.cyclotomic import CycloElem, euler_phi
from quintic_kfjrw.qrat import QRat

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

small_fracs = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def cyclo(N):
    return st.lists(small_fracs, min_size=euler_phi(N), max_size=euler_phi(N)).map(
        lambda cs: CycloElem(N, cs)
    )


@st.composite
def qrats(draw, e=5, N=5, max_deg=3, den_k=2):
    """Random element of Q(zeta_N)(t) with a denominator that is a product of
    factors (1 - zeta^i t^k), so it never vanishes identically."""
    num = QRat.zero(e, N)
    for k in range(draw(st.integers(0, max_deg)) + 1):
        num = num + QRat.t_power(k, e, N, coeff=draw(cyclo(N)))
    den = QRat.one(e, N)
    for _ in range(draw(st.integers(0, 2))):
        i = draw(st.integers(0, N - 1))
        k = draw(st.integers(1, den_k))
        den = den * (1 - QRat.t_power(k, e, N, coeff=CycloElem.root(N, i)))
    shift = draw(st.integers(-2, 2))
    return num * QRat.t_power(shift, e, N) / den


F = Fraction


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
