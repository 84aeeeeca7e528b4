"""Bernoulli polynomials B_d(y), their periodic version, and a table self-check."""

from fractions import Fraction
from functools import lru_cache
from math import comb, ceil, factorial

__all__ = ["bernoulli_poly", "bernoulli", "bernoulli_periodic", "bernoulli_gf_check", "D_MAX"]

D_MAX = 64


@lru_cache(maxsize=None)
def _numbers(D):
    """B_0..B_D with B_1 = -1/2, from sum_{k<=n} C(n+1,k) B_k = 0."""
    B = [Fraction(1)]
    for n in range(1, D + 1):
        acc = sum(comb(n + 1, k) * B[k] for k in range(n))
        B.append(-acc / (n + 1))
    return tuple(B)


@lru_cache(maxsize=None)
def bernoulli_poly(d):
    """Coefficients of B_d(y), constant term first."""
    if d < 0 or d > D_MAX:
        raise ValueError(f"Bernoulli degree {d} outside 0..{D_MAX}")
    B = _numbers(d)
    return tuple(comb(d, k) * B[d - k] for k in range(d + 1))


def bernoulli(d, y):
    y = Fraction(y)
    acc = Fraction(0)
    for c in reversed(bernoulli_poly(d)):
        acc = acc * y + c
    return acc


def bernoulli_periodic(d, y):
    """B_d of the representative of y in ]0, 1]."""
    y = Fraction(y)
    return bernoulli(d, y - ceil(y) + 1)


def bernoulli_gf_check(D, table=None):
    """Check sum_d B_d(y) t^d/d! * (e^t - 1) == t e^(yt) through t^(D+1).

    Both sides are polynomials in y, compared coefficient by coefficient.
    ``table`` optionally overrides B_d(y) (used for negative controls).
    Returns (ok, witness_degree).
    """
    poly = table or (lambda d: bernoulli_poly(d))
    for n in range(1, D + 2):
        # coefficient of t^n on the left: sum_{d + k = n, k >= 1} B_d(y)/(d! k!)
        left = [Fraction(0)] * n
        for d in range(0, n):
            k = n - d
            for i, c in enumerate(poly(d)):
                left[i] += c / (factorial(d) * factorial(k))
        # right: t e^{yt} -> y^(n-1)/(n-1)!
        right = [Fraction(0)] * n
        right[n - 1] = Fraction(1, factorial(n - 1))
        if left != right:
            # the first t-degree that involves the faulty B_d is n = d + 1
            return False, n - 1
    return True, None
