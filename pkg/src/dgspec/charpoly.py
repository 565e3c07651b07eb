"""Exact characteristic polynomials for small matrices.

Independent check on the QR eigenvalues: the determinant ``det(lam I - A)``
is expanded by cofactors over exact rationals, and its roots are located
after an exact factorization over the rationals, so repeated roots come out with
their true multiplicity instead of as a perturbed cluster.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import numpy as np
import sympy

from .graph import Graph

MAX_N = 8


def _padd(p, q):
    out = [Fraction(0)] * max(len(p), len(q))
    for i, c in enumerate(p):
        out[i] += c
    for i, c in enumerate(q):
        out[i] += c
    return out


def _pmul(p, q):
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def _fraction_matrix(m) -> list[list[Fraction]]:
    if isinstance(m, list) and m and isinstance(m[0], list) and all(
            isinstance(x, Fraction) for row in m for x in row):
        return m
    a = np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    return [[Fraction(float(x)) for x in row] for row in a]


def exact_delta(g: Graph) -> list[list[Fraction]]:
    """The normalized Laplacian in exact rationals.

    Weights are binary floats and hence exact rationals; dividing them
    exactly keeps entries such as 1/3 exact, where the float matrix would
    carry a rounded copy.
    """
    w = [[Fraction(float(x)) for x in row] for row in g.weights]
    n = g.n
    out = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        d = sum(w[i])
        # quasi-isolated rows stay zero; the float side uses a relative cutoff
        if abs(float(d)) <= g.zero_tol:
            continue
        for j in range(n):
            out[i][j] = (Fraction(1) if i == j else Fraction(0)) - w[i][j] / d
    return out


def charpoly_oracle(m, max_n: int = MAX_N) -> list[Fraction]:
    """Coefficients of ``det(lam I - m)``, highest degree first (monic).

    ``m`` is an array (entries read with ``Fraction(float)``, which is exact
    for binary floating point) or a square list of ``Fraction`` rows.
    """
    a = _fraction_matrix(m)
    n = len(a)
    if n > max_n:
        raise ValueError(f"charpoly oracle limited to n <= {max_n}, got {n}")
    # entries of lam I - A as polynomials, lowest degree first
    ent = [[[-a[i][j]] + ([Fraction(1)] if i == j else []) for j in range(n)]
           for i in range(n)]

    @lru_cache(maxsize=None)
    def minor(row: int, cols: int):
        if row == n:
            return (Fraction(1),)
        total = [Fraction(0)]
        sign = 1
        for j in range(n):
            if not cols >> j & 1:
                continue
            e = ent[row][j]
            if any(e):
                term = _pmul(e, list(minor(row + 1, cols & ~(1 << j))))
                total = _padd(total, term if sign > 0 else [-c for c in term])
            sign = -sign
        return tuple(total)

    coeffs = list(minor(0, (1 << n) - 1))
    coeffs += [Fraction(0)] * (n + 1 - len(coeffs))
    return coeffs[::-1]


def exact_roots(coeffs: list[Fraction], digits: int = 40) -> np.ndarray:
    """Roots with multiplicity of an exact polynomial (highest degree first)."""
    lam = sympy.Symbol("lam")
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in coeffs], lam, domain="QQ")
    roots: list[complex] = []
    # irreducible factors over Q have simple roots, so nroots is well posed
    _, factors = poly.factor_list()
    for factor, mult in factors:
        if factor.degree() == 0:
            continue
        for z in factor.nroots(n=digits, maxsteps=500):
            roots.extend([complex(z)] * mult)
    return np.asarray(roots, dtype=complex)


def oracle_roots(m, max_n: int = MAX_N) -> np.ndarray:
    return exact_roots(charpoly_oracle(m, max_n))


def graph_oracle_roots(g: Graph, max_n: int = MAX_N) -> np.ndarray:
    """Exact spectrum of the rational normalized Laplacian of ``g``."""
    return exact_roots(charpoly_oracle(exact_delta(g), max_n))
