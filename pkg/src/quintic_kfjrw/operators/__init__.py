"""Bernoulli polynomials, series, diagonal operators and q-difference operators."""
