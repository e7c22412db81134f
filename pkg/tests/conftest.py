"""Shared helpers, including an independent oracle for Schubert structure constants.

The oracle multiplies Schur polynomials in ``n`` variables with sympy and
re-expands the product in the Schur basis by leading-term elimination.
Dropping partitions wider than ``N - n`` gives the Grassmannian product.  It
shares no code with the Pieri/Giambelli implementation under test.
"""

from __future__ import annotations

import sys
from functools import lru_cache

import sympy


@lru_cache(maxsize=None)
def _vars(n: int):
    return sympy.symbols(f"x0:{n}")


@lru_cache(maxsize=None)
def schur_poly(lam: tuple[int, ...], n: int) -> sympy.Poly:
    """Bialternant formula ``det(x_i^(lam_j + n - j)) / det(x_i^(n - j))``."""
    xs = _vars(n)
    lam = tuple(lam) + (0,) * (n - len(lam))
    num = sympy.Matrix(n, n, lambda i, j: xs[i] ** (lam[j] + n - 1 - j)).det()
    den = sympy.Matrix(n, n, lambda i, j: xs[i] ** (n - 1 - j)).det()
    q, r = sympy.div(sympy.Poly(num, *xs), sympy.Poly(den, *xs))
    assert r.is_zero
    return q


@lru_cache(maxsize=None)
def lr_product(lam: tuple[int, ...], mu: tuple[int, ...], n: int, N: int) -> dict[tuple[int, ...], int]:
    """``sigma_lam * sigma_mu`` in ``Gr(n, N)`` via Schur polynomials."""
    poly = schur_poly(lam, n) * schur_poly(mu, n)
    out: dict[tuple[int, ...], int] = {}
    while not poly.is_zero:
        lead, coeff = max(poly.terms(), key=lambda t: t[0])
        nu = tuple(lead)
        assert all(nu[i] >= nu[i + 1] for i in range(n - 1)), "product is not symmetric"
        poly = poly - schur_poly(nu, n) * int(coeff)
        key = tuple(x for x in nu if x)
        if not key or key[0] <= N - n:
            out[key] = int(coeff)
    return out


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for line in results:
            terminalreporter.write_line(line)
