"""Formal vector bundles given by rank and truncated total Chern class.

The coefficient ring is anything whose elements support ``+``, ``-``, ``*``
and integer scaling: Grassmannian classes, tensor classes on ``G x G``,
classes on the exceptional divisor, or quotient-ring elements.  Chern lists
always have length ``dim + 1`` where ``dim`` is the ambient dimension; terms
beyond it are dropped.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Any, Sequence

MAX_TENSOR_RANK = 4


class UnsupportedError(ValueError):
    """The operation is outside the range this implementation handles."""


@dataclass(frozen=True)
class FormalBundle:
    rank: int
    chern: tuple

    def __post_init__(self) -> None:
        if self.rank < 0:
            raise ValueError(f"negative rank {self.rank}")
        if not self.chern:
            raise ValueError("a Chern list needs at least c_0")

    @property
    def dim(self) -> int:
        return len(self.chern) - 1

    @property
    def one(self) -> Any:
        return self.chern[0]

    def c(self, i: int) -> Any:
        if 0 <= i <= self.dim:
            return self.chern[i]
        return 0 * self.one

    def __str__(self) -> str:
        terms = ["1"] + [f"c{i}=({c})" for i, c in enumerate(self.chern) if i and c != 0]
        return f"rank {self.rank}: " + ", ".join(terms)


def bundle(rank: int, classes: Sequence[Any], one: Any, dim: int) -> FormalBundle:
    """Bundle with ``c_1, c_2, ...`` = ``classes`` padded with zeros up to ``dim``."""
    zero = 0 * one
    chern = [one, *classes][: dim + 1]
    chern += [zero] * (dim + 1 - len(chern))
    return FormalBundle(rank, tuple(chern))


def trivial(rank: int, one: Any, dim: int) -> FormalBundle:
    return bundle(rank, [], one, dim)


def line_bundle(c1: Any, one: Any, dim: int) -> FormalBundle:
    return bundle(1, [c1], one, dim)


def series_product(x: Sequence[Any], y: Sequence[Any], dim: int) -> list:
    """Product of two truncated series ``sum x_i`` and ``sum y_j`` up to degree ``dim``."""
    out = []
    for k in range(dim + 1):
        total = 0 * x[0]
        for i in range(k + 1):
            if i < len(x) and k - i < len(y):
                total = total + x[i] * y[k - i]
        out.append(total)
    return out


def segre(b: FormalBundle) -> list:
    """Inverse of the total Chern class: ``s_k = -sum_{i>=1} c_i s_{k-i}``."""
    s = [b.one]
    for k in range(1, b.dim + 1):
        total = 0 * b.one
        for i in range(1, k + 1):
            total = total + b.c(i) * s[k - i]
        s.append(-total)
    return s


def dual(b: FormalBundle) -> FormalBundle:
    return FormalBundle(b.rank, tuple(c if i % 2 == 0 else -c for i, c in enumerate(b.chern)))


def direct_sum(a: FormalBundle, b: FormalBundle) -> FormalBundle:
    _same_dim(a, b)
    return FormalBundle(a.rank + b.rank, tuple(series_product(a.chern, b.chern, a.dim)))


def twist_by_line(b: FormalBundle, c1L: Any) -> FormalBundle:
    """``c_k(b (x) L) = sum_i binom(r - k + i, i) c_{k-i}(b) c_1(L)^i``."""
    r = b.rank
    powers = [b.one]
    for _ in range(b.dim):
        powers.append(powers[-1] * c1L)
    chern = []
    for k in range(b.dim + 1):
        total = 0 * b.one
        for i in range(k + 1):
            if k - i > r or r - k + i < 0:
                continue
            coeff = comb(r - k + i, i)
            if coeff:
                total = total + coeff * (b.c(k - i) * powers[i])
        chern.append(total)
    return FormalBundle(r, tuple(chern))


def _same_dim(a: FormalBundle, b: FormalBundle) -> None:
    if a.dim != b.dim:
        raise ValueError(f"bundles truncated at different dimensions: {a.dim} vs {b.dim}")


# Universal tensor-product formula.  With Chern roots a_1..a_r and b_1..b_s,
# c(A (x) B) = prod_j prod_i (1 + a_i + b_j).  For fixed j the inner product is
# the line-bundle twist of A by b_j, a polynomial in c_1(A)..c_r(A) and b_j.
# Multiplying over j and rewriting the symmetric b-dependence in elementary
# symmetric functions expresses every c_k(A (x) B) through c(A) and c(B).

Monomial = tuple[int, ...]


def _add_mono(x: Monomial, y: Monomial) -> Monomial:
    return tuple(p + q for p, q in zip(x, y))


def _unit(n: int, i: int) -> Monomial:
    return tuple(1 if j == i else 0 for j in range(n))


@lru_cache(maxsize=None)
def _elementary_power_product(exps: Monomial) -> dict[Monomial, int]:
    """Expand ``prod_j e_j^{exps_j}`` in the root variables (``len(exps)`` roots)."""
    s = len(exps)
    e_polys = []
    for j in range(1, s + 1):
        e_polys.append({tuple(1 if i in subset else 0 for i in range(s)): 1
                        for subset in itertools.combinations(range(s), j)})
    result: dict[Monomial, int] = {(0,) * s: 1}
    for j, m in enumerate(exps):
        for _ in range(m):
            nxt: dict[Monomial, int] = {}
            for mono, c in result.items():
                for mono2, c2 in e_polys[j].items():
                    key = _add_mono(mono, mono2)
                    nxt[key] = nxt.get(key, 0) + c * c2
            result = nxt
    return result


def to_elementary(poly: dict[Monomial, int]) -> dict[Monomial, int]:
    """Rewrite a symmetric polynomial in roots as a polynomial in ``e_1..e_s``.

    Leading-term elimination in lex order; raises if ``poly`` is not symmetric.
    """
    poly = {k: v for k, v in poly.items() if v}
    out: dict[Monomial, int] = {}
    while poly:
        lead = max(poly)
        c = poly[lead]
        s = len(lead)
        if any(lead[i] < lead[i + 1] for i in range(s - 1)):
            raise ValueError("polynomial is not symmetric")
        e_exps = tuple(lead[j] - (lead[j + 1] if j + 1 < s else 0) for j in range(s))
        out[e_exps] = out.get(e_exps, 0) + c
        for mono, v in _elementary_power_product(e_exps).items():
            new = poly.get(mono, 0) - c * v
            if new:
                poly[mono] = new
            else:
                poly.pop(mono, None)
    return out


@lru_cache(maxsize=None)
def tensor_formula(r: int, s: int, top: int) -> tuple[tuple[tuple[Monomial, Monomial, int], ...], ...]:
    """For each degree ``k <= top``: terms ``(a_exps, e_exps, coeff)`` of ``c_k(A (x) B)``.

    ``a_exps[i]`` is the exponent of ``c_{i+1}(A)`` and ``e_exps[j]`` that of
    ``c_{j+1}(B)``.
    """
    # Twist factor of A by one root b: keys (a_exps, b_power).
    factor: dict[tuple[Monomial, int], int] = {}
    for k in range(r + 1):
        for i in range(k + 1):
            a = _unit(r, k - i - 1) if k - i >= 1 else (0,) * r
            factor[(a, i)] = factor.get((a, i), 0) + comb(r - k + i, i)

    def weight(a: Monomial, roots: Monomial) -> int:
        return sum((i + 1) * x for i, x in enumerate(a)) + sum(roots)

    prod: dict[tuple[Monomial, Monomial], int] = {((0,) * r, ()): 1}
    for _ in range(s):
        nxt: dict[tuple[Monomial, Monomial], int] = {}
        for (a, roots), c in prod.items():
            for (a2, p), c2 in factor.items():
                key = (_add_mono(a, a2), roots + (p,))
                if weight(*key) > top:
                    continue
                nxt[key] = nxt.get(key, 0) + c * c2
        prod = nxt

    grouped: dict[Monomial, dict[Monomial, int]] = {}
    for (a, roots), c in prod.items():
        grouped.setdefault(a, {})[roots] = c
    by_degree: list[list[tuple[Monomial, Monomial, int]]] = [[] for _ in range(top + 1)]
    for a, sym in grouped.items():
        for e, c in to_elementary(sym).items():
            if c:
                deg = sum((i + 1) * x for i, x in enumerate(a)) + sum((j + 1) * x for j, x in enumerate(e))
                by_degree[deg].append((a, e, c))
    return tuple(tuple(sorted(terms)) for terms in by_degree)


def tensor(a: FormalBundle, b: FormalBundle) -> FormalBundle:
    """Chern classes of ``a (x) b`` by the splitting principle (ranks up to 4)."""
    _same_dim(a, b)
    if a.rank > MAX_TENSOR_RANK or b.rank > MAX_TENSOR_RANK:
        raise UnsupportedError(f"tensor product supports ranks <= {MAX_TENSOR_RANK}, "
                               f"got {a.rank} and {b.rank}")
    top = min(a.dim, a.rank * b.rank)
    formula = tensor_formula(a.rank, b.rank, top)
    zero = 0 * a.one

    def monomial(bundle_: FormalBundle, exps: Monomial) -> Any:
        out = bundle_.one
        for i, x in enumerate(exps):
            for _ in range(x):
                out = out * bundle_.c(i + 1)
        return out

    chern = []
    for k in range(a.dim + 1):
        total = zero
        if k <= top:
            for a_exps, e_exps, c in formula[k]:
                total = total + c * (monomial(a, a_exps) * monomial(b, e_exps))
        chern.append(total)
    return FormalBundle(a.rank * b.rank, tuple(chern))


def virtual_chern(b: FormalBundle, a: FormalBundle) -> list:
    """Total Chern class of the virtual bundle ``b - a``, i.e. ``c(b) s(a)``."""
    _same_dim(a, b)
    return series_product(b.chern, segre(a), b.dim)


def determinant(matrix: Sequence[Sequence[Any]], one: Any) -> Any:
    """Leibniz expansion; fine for the small matrices used here."""
    size = len(matrix)
    total = 0 * one
    for perm in itertools.permutations(range(size)):
        inversions = sum(1 for x, y in itertools.combinations(perm, 2) if x > y)
        term = one
        for i in range(size):
            term = term * matrix[i][perm[i]]
        total = total + (-term if inversions % 2 else term)
    return total


def porteous(a: FormalBundle, b: FormalBundle, k: int) -> Any:
    """Class of the locus where a map ``a -> b`` has rank at most ``k``.

    The locus has expected codimension ``(rank a - k)(rank b - k)`` and class
    ``det[c_{rank b - k + j - i}(b - a)]`` of size ``rank a - k``.
    """
    if k < 0:
        raise ValueError(f"rank bound must be nonnegative, got {k}")
    e, f = a.rank - k, b.rank - k
    if e <= 0 or f <= 0:
        return a.one
    c = virtual_chern(b, a)
    zero = 0 * a.one

    def entry(m: int) -> Any:
        return c[m] if 0 <= m < len(c) else zero

    matrix = [[entry(f + j - i) for j in range(e)] for i in range(e)]
    return determinant(matrix, a.one)
