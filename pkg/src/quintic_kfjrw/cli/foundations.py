"""Seeded foundation checks: field axioms, residues, isotropy, Bernoulli
identity and the parser round trip.  The property tests cover the same
ground with hypothesis; these run inside ``verify all`` with a fixed seed.
"""

import random
import time
from fractions import Fraction

from ..cyclotomic import CycloElem, cyclotomic_polynomial, euler_phi
from ..operators.bernoulli import bernoulli_gf_check
from ..qrat import QRat, expand_at, residue_pair
from ..statespace import StateVec, symplectic_omega
from .ast import Bin, Call, Indexed, Neg, Num, Pow, Sym
from .parser import parse_expr
from .printer import to_text

__all__ = ["foundation_checks", "random_ast", "random_cyclo", "poles_sum"]


def random_cyclo(rng, N, span=4):
    return CycloElem(N, [Fraction(rng.randint(-span, span), rng.randint(1, 3)) for _ in range(euler_phi(N))])


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _field_axioms(rng, n_max=30, samples=4):
    for N in range(1, n_max + 1):
        # Phi_N(zeta_N) = 0 and x^N - 1 = prod_{d | N} Phi_d
        phi = cyclotomic_polynomial(N)
        z = CycloElem.root(N, 1)
        acc = CycloElem.zero(N)
        for i, c in enumerate(phi):
            acc = acc + z ** i * c
        if not acc.is_zero():
            return {"N": N, "identity": "Phi_N(zeta_N) = 0"}
        prod = [1]
        for d in range(1, N + 1):
            if N % d == 0:
                prod = _poly_mul(prod, list(cyclotomic_polynomial(d)))
        if prod != [-1] + [0] * (N - 1) + [1]:
            return {"N": N, "identity": "x^N - 1 = prod Phi_d"}
        for _ in range(samples):
            a, b, c = (random_cyclo(rng, N) for _ in range(3))
            if (a * b) * c != a * (b * c) or a * (b + c) != a * b + a * c or a * b != b * a:
                return {"N": N, "identity": "ring axioms", "a": a.body(), "b": b.body(), "c": c.body()}
            if not a.is_zero() and a * a.inverse() != CycloElem.one(N):
                return {"N": N, "identity": "inverse", "a": a.body()}
    return None


def poles_sum(f):
    """residue_pair(f) plus the residues of f dq/q at the finite nonzero poles.

    The poles are searched among the 5th roots of unity; ``f`` is built with
    denominators supported there.  A zero total is the residue theorem.
    """
    total = residue_pair(f)
    for i in range(5):
        p = CycloElem.root(5, i)
        g = f * QRat.t_power(-1, 1, 5)
        ex = expand_at(g, p, -1)
        c = ex.coeff(-1)
        if c is not None and not (isinstance(c, int) and c == 0):
            total = total + c
    return total


def _residue_corpus(rng, count=50):
    for n in range(count):
        den = QRat.one(1, 5)
        for i in range(5):
            m = rng.randint(0, 2)
            if m:
                den = den * (1 - QRat.t_power(1, 1, 5, coeff=CycloElem.root(5, i))) ** m
        num = QRat.zero(1, 5)
        for k in range(rng.randint(0, 6)):
            num = num + QRat.t_power(k - 2, 1, 5, coeff=random_cyclo(rng, 5, 3))
        f = num / den
        if not poles_sum(f).is_zero():
            return {"sample": n, "f": f.body()}
    return None


def _isotropy(rng, r=5, count=40):
    for n in range(count):
        a, b, j, k = (rng.randrange(r) for _ in range(4))
        if n % 2 == 0:
            # the only pairs the pairing does not kill outright
            b, k = (-a) % r, j
        p, l = rng.randint(-4, 4), rng.randint(-4, 4)
        f = StateVec(r, {(a, j): QRat.t_power(p, 1, r)}, "idem")
        g = StateVec(r, {(b, k): QRat.t_power(l, 1, r)}, "idem")
        om = symplectic_omega(f, g)
        if not om.is_zero():
            return {"sample": n, "f": [a, j, p], "g": [b, k, l]}
    return None


_ATOM_NAMES = ("q", "S", "x", "s", "Jpt", "Iun", "IFJRW", "IFJRWdual")


def random_ast(rng, depth=4):
    """A random expression tree in the grammar's normal form."""
    if depth <= 0 or rng.random() < 0.25:
        kind = rng.randrange(4)
        if kind == 0:
            return Num(rng.randint(0, 50))
        if kind == 1:
            return Sym(rng.choice(_ATOM_NAMES))
        if kind == 2:
            return Indexed("I", (rng.randrange(5), rng.randrange(5)))
        return Call("zeta", (Num(rng.randint(1, 12)),))
    kind = rng.randrange(6)
    if kind == 0:
        return Neg(random_ast(rng, depth - 1))
    if kind == 1:
        return Pow(random_ast(rng, depth - 1), Fraction(rng.randint(-6, 6), rng.choice((1, 1, 5, 3))))
    if kind == 2:
        return Call("twist", (random_ast(rng, depth - 1), random_ast(rng, depth - 1)))
    op = rng.choice("+-*/")
    return Bin(op, random_ast(rng, depth - 1), random_ast(rng, depth - 1))


def _roundtrip(rng, count=100):
    for n in range(count):
        tree = random_ast(rng)
        text = to_text(tree)
        back = parse_expr(text)
        if back != tree or to_text(back) != text:
            return {"sample": n, "text": text}
    return None


def foundation_checks(seed=20240601):
    rng = random.Random(seed)
    reports = []
    for name, fn in (
        ("field_axioms", _field_axioms),
        ("residue_sum_zero", _residue_corpus),
        ("k_plus_isotropy", _isotropy),
        ("parser_roundtrip", _roundtrip),
    ):
        t0 = time.perf_counter()
        w = fn(rng)
        rep = {"check": name, "params": {"seed": seed}, "status": "pass" if w is None else "fail",
               "timings_ms": round((time.perf_counter() - t0) * 1000, 1)}
        if w:
            rep["witness"] = w
        reports.append(rep)
    t0 = time.perf_counter()
    ok, deg = bernoulli_gf_check(12)
    rep = {"check": "bernoulli_gf", "params": {"D": 12}, "status": "pass" if ok else "fail",
           "timings_ms": round((time.perf_counter() - t0) * 1000, 1)}
    if not ok:
        rep["witness"] = {"degree": deg}
    reports.append(rep)
    return reports
