"""Brute-force skewness checks on explicit rational curves.

Everything here works with exact rationals via python-flint and shares no
code with the intersection-theory pipeline, so agreement between the two is
evidence rather than a tautology.

Two tangent lines ``T_t`` and ``T_s`` of a curve ``f`` in ``P^N`` meet exactly
when ``rank[f(t), f'(t), f(s), f'(s)] <= 3``.  Counting such pairs on a
rational curve in ``P^4`` amounts to solving the system of the five maximal
minors, after removing the factor ``(t - s)^k`` that every minor carries.
"""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import flint

log = logging.getLogger(__name__)

DEFAULT_SEED = 20240611
MAX_COMBINATION_ATTEMPTS = 6

Vector = tuple[Fraction, ...]
Frame = list[tuple[flint.fmpq_poly, ...]]


class OracleError(ValueError):
    """Base class for oracle failures."""


class PreconditionError(OracleError):
    """The input curve or scroll violates a stated precondition."""


class PositiveDimensionalError(PreconditionError):
    """The pairs with meeting lines form a curve rather than finitely many points."""


class SeedDisagreementError(OracleError):
    """Two independent reparametrizations produced different answers."""


def to_fraction(x) -> Fraction:
    if isinstance(x, flint.fmpq):
        return Fraction(int(x.p), int(x.q))
    if isinstance(x, flint.fmpz):
        return Fraction(int(x))
    return Fraction(x)


def _fmpq(x) -> flint.fmpq:
    x = to_fraction(x)
    return flint.fmpq(x.numerator, x.denominator)


def _rank(rows: Sequence[Sequence]) -> int:
    rows = [list(r) for r in rows]
    if not rows or not rows[0]:
        return 0
    flat = [_fmpq(x) for r in rows for x in r]
    return flint.fmpq_mat(len(rows), len(rows[0]), flat).rank()


def _poly_det(matrix: Sequence[Sequence]):
    """Laplace expansion along the first row; entries are any flint polynomials."""
    n = len(matrix)
    if n == 1:
        return matrix[0][0]
    total = None
    for j in range(n):
        entry = matrix[0][j]
        if entry == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in matrix[1:]]
        term = entry * _poly_det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total if total is not None else matrix[0][0] * 0


def _minors(rows: Sequence[Sequence], size: int) -> list:
    """All ``size x size`` minors using every column and a choice of rows."""
    return [_poly_det([list(rows[i]) for i in chosen])
            for chosen in itertools.combinations(range(len(rows)), size)]


def _is_unit_gcd(polys: Iterable[flint.fmpq_poly]) -> bool:
    g = flint.fmpq_poly([0])
    for p in polys:
        g = g.gcd(p) if g != 0 else p
        if g != 0 and g.degree() == 0:
            return True
    return g != 0 and g.degree() == 0


@dataclass(frozen=True)
class RationalCurve:
    """A map ``P^1 -> P^N`` given by ``N + 1`` polynomials in the affine parameter."""

    ambient: int
    coords: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        coords = []
        for c in self.coords:
            c = [to_fraction(x) for x in c]
            while c and c[-1] == 0:
                c.pop()
            coords.append(tuple(c))
        object.__setattr__(self, "coords", tuple(coords))
        if self.ambient < 1:
            raise PreconditionError(f"ambient dimension must be positive, got {self.ambient}")
        if len(coords) != self.ambient + 1:
            raise PreconditionError(f"P^{self.ambient} needs {self.ambient + 1} coordinates, "
                                    f"got {len(coords)}")
        if self.degree < 1:
            raise PreconditionError("coordinates define a point, not a curve")
        if not _is_unit_gcd(p for p in self.polys if p != 0):
            raise PreconditionError("coordinates share a common polynomial factor")

    @classmethod
    def from_coefficients(cls, coords: Sequence[Sequence]) -> "RationalCurve":
        return cls(len(coords) - 1, tuple(tuple(to_fraction(x) for x in c) for c in coords))

    @classmethod
    def from_json(cls, data: dict) -> "RationalCurve":
        try:
            ambient = int(data["ambient"])
            coords = tuple(tuple(Fraction(str(x)) for x in c) for c in data["coords"])
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed curve description: {exc}") from exc
        return cls(ambient, coords)

    def to_json(self) -> dict:
        return {"ambient": self.ambient, "coords": [[str(x) for x in c] for c in self.coords]}

    @property
    def degree(self) -> int:
        return max((len(c) - 1 for c in self.coords), default=-1)

    @property
    def polys(self) -> tuple[flint.fmpq_poly, ...]:
        return tuple(flint.fmpq_poly([_fmpq(x) for x in c]) if c else flint.fmpq_poly([0])
                     for c in self.coords)

    def derivative(self, k: int = 1) -> tuple[flint.fmpq_poly, ...]:
        out = self.polys
        for _ in range(k):
            out = tuple(p.derivative() for p in out)
        return out

    def point(self, t, k: int = 0) -> Vector:
        """``f^{(k)}(t)`` as an exact vector."""
        t = _fmpq(t)
        return tuple(to_fraction(p(t)) for p in self.derivative(k))

    def at_infinity(self) -> "RationalCurve":
        """The same curve in the chart ``u = 1/t`` around the parameter at infinity."""
        d = self.degree
        return RationalCurve(self.ambient, tuple(
            tuple(reversed(c + (Fraction(0),) * (d + 1 - len(c)))) for c in self.coords))

    def reparametrize(self, a: int, b: int, c: int, d: int) -> "RationalCurve":
        """``(ct + d)^D f((at + b)/(ct + d))`` where ``D`` is the curve degree."""
        return RationalCurve(self.ambient, _mobius_coords(self.polys, self.degree, a, b, c, d))

    def osculating_rank(self, t, order: int = 3) -> int:
        return _rank([self.point(t, k) for k in range(order + 1)])

    def is_immersion(self) -> bool:
        return _frame_nondegenerate([self.polys, self.derivative(1)],
                                    [self.at_infinity().point(0, k) for k in range(2)])

    def has_nondegenerate_osculation(self, order: int = 3) -> bool:
        """True if ``f, f', ..., f^{(order)}`` are independent at every parameter."""
        inf = self.at_infinity()
        return _frame_nondegenerate([self.derivative(k) for k in range(order + 1)],
                                    [inf.point(0, k) for k in range(order + 1)])


def _mobius_coords(polys, degree: int, a: int, b: int, c: int, d: int) -> tuple[tuple[Fraction, ...], ...]:
    num = flint.fmpq_poly([b, a])
    den = flint.fmpq_poly([d, c])
    out = []
    for p in polys:
        acc = flint.fmpq_poly([0])
        for k, coeff in enumerate(p.coeffs()):
            acc += coeff * num ** k * den ** (degree - k)
        out.append(tuple(to_fraction(x) for x in acc.coeffs()))
    return tuple(out)


def _frame_nondegenerate(columns: Sequence[Sequence[flint.fmpq_poly]], at_infinity: Sequence[Vector]) -> bool:
    """Columns of polynomial vectors stay independent at every finite and infinite parameter."""
    size = len(columns)
    rows = list(zip(*columns))
    if size > len(rows):
        return False
    minors = [m for m in _minors(rows, size) if m != 0]
    if not minors or not _is_unit_gcd(minors):
        return False
    return _rank(at_infinity) == size


def check_tangent_preconditions(curve: RationalCurve, order: int = 3) -> None:
    if not curve.is_immersion():
        raise PreconditionError("curve is not an immersion: f and f' are dependent somewhere")
    if not curve.has_nondegenerate_osculation(order):
        raise PreconditionError(f"osculating space of order {order} degenerates somewhere on the curve")


def tangent_meet(curve: RationalCurve, t, s) -> bool:
    """True if the tangent lines at parameters ``t`` and ``s`` meet."""
    t, s = to_fraction(t), to_fraction(s)
    if t == s:
        raise PreconditionError("t = s: a tangent line trivially meets itself")
    vectors = [curve.point(t), curve.point(t, 1), curve.point(s), curve.point(s, 1)]
    return _rank(vectors) <= 3


# Bivariate machinery in Q[t, s].

_CTX = flint.fmpq_mpoly_ctx.get(("t", "s"), "lex")
_T, _S = _CTX.gens()
_DIAGONAL = _T - _S


def _in_t(p: flint.fmpq_poly):
    return _CTX.from_dict({(k, 0): c for k, c in enumerate(p.coeffs()) if c != 0})


def _in_s(p: flint.fmpq_poly):
    return _CTX.from_dict({(0, k): c for k, c in enumerate(p.coeffs()) if c != 0})


def pair_matrix(frame: Frame) -> list[list]:
    """Rows of ``[v_1(t), ..., v_m(t), v_1(s), ..., v_m(s)]`` in ``Q[t, s]``."""
    columns = [[_in_t(p) for p in v] for v in frame] + [[_in_s(p) for p in v] for v in frame]
    return [list(row) for row in zip(*columns)]


def saturate(poly) -> tuple[object, int]:
    """Divide out the largest power of ``t - s``; returns the quotient and the exponent."""
    if poly == 0:
        raise ValueError("cannot saturate the zero polynomial")
    k = 0
    while True:
        q, r = divmod(poly, _DIAGONAL)
        if r != 0:
            return poly, k
        poly, k = q, k + 1


def _univariate_t(poly) -> flint.fmpq_poly:
    coeffs: dict[int, flint.fmpq] = {}
    for (i, j), c in poly.to_dict().items():
        if j:
            raise ValueError("expected a polynomial in t only")
        coeffs[i] = c
    top = max(coeffs, default=0)
    return flint.fmpq_poly([coeffs.get(i, 0) for i in range(top + 1)])


# Arithmetic in K[s] with K = Q[t]/(p) for irreducible p.

class _ResidueField:
    def __init__(self, modulus: flint.fmpq_poly):
        self.p = modulus

    def reduce(self, a: flint.fmpq_poly) -> flint.fmpq_poly:
        return a % self.p

    def inv(self, a: flint.fmpq_poly) -> flint.fmpq_poly:
        g, u, _ = a.xgcd(self.p)
        if g.degree() != 0:
            raise ZeroDivisionError("element is not invertible modulo an irreducible polynomial")
        return (u / g[0]) % self.p

    def specialize(self, coeffs: Sequence[flint.fmpq_poly]) -> list[flint.fmpq_poly]:
        """Reduce the ``s``-coefficients of a bivariate polynomial modulo ``p``."""
        return self.trim([self.reduce(c) for c in coeffs])

    def evaluate(self, a: Sequence[flint.fmpq_poly], x: flint.fmpq_poly) -> flint.fmpq_poly:
        acc = flint.fmpq_poly([0])
        for c in reversed(a):
            acc = self.reduce(acc * x + c)
        return acc

    @staticmethod
    def trim(a: list) -> list:
        while a and a[-1] == 0:
            a = a[:-1]
        return a

    def rem(self, a: list, b: list) -> list:
        a = list(a)
        lead_inv = self.inv(b[-1])
        while len(a) >= len(b):
            factor = self.reduce(a[-1] * lead_inv)
            shift = len(a) - len(b)
            for i, c in enumerate(b):
                a[shift + i] = self.reduce(a[shift + i] - factor * c)
            a = self.trim(a)
        return a

    def gcd(self, polys: Iterable[list]) -> list:
        g: list = []
        for a in polys:
            a = self.trim(a)
            while a:
                g, a = a, (self.rem(g, a) if g else [])
        if g:
            lead_inv = self.inv(g[-1])
            g = [self.reduce(c * lead_inv) for c in g]
        return g

    def divide_linear(self, a: list, root: flint.fmpq_poly) -> tuple[list, bool]:
        """Synthetic division of ``a(s)`` by ``s - root``; also reports exactness."""
        quotient: list = []
        carry = flint.fmpq_poly([0])
        for c in reversed(a[1:]):
            carry = self.reduce(c + carry * root)
            quotient.append(carry)
        remainder = self.reduce(a[0] + carry * root)
        return list(reversed(quotient)), remainder == 0


def _coeffs_in_s(poly) -> list[flint.fmpq_poly]:
    """``s``-coefficients of a bivariate polynomial, each a polynomial in ``t``."""
    by_s: dict[int, dict[int, flint.fmpq]] = {}
    for (i, j), c in poly.to_dict().items():
        by_s.setdefault(j, {})[i] = c
    out = []
    for j in range(max(by_s, default=0) + 1):
        terms = by_s.get(j, {})
        out.append(flint.fmpq_poly([terms.get(i, 0) for i in range(max(terms, default=0) + 1)]))
    return out


def _bareiss_det(matrix: list[list[flint.fmpq_poly]]) -> flint.fmpq_poly:
    """Fraction-free determinant over ``Q[t]``."""
    m = [list(row) for row in matrix]
    n = len(m)
    sign, prev = 1, flint.fmpq_poly([1])
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return flint.fmpq_poly([0])
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                q, r = divmod(m[i][j] * m[k][k] - m[i][k] * m[k][j], prev)
                if r != 0:
                    raise OracleError("inexact division in fraction-free elimination")
                m[i][j] = q
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def first_subresultant(a: Sequence[flint.fmpq_poly], b: Sequence[flint.fmpq_poly]
                       ) -> tuple[flint.fmpq_poly, flint.fmpq_poly]:
    """Coefficients ``(S_0, S_1)`` of the first subresultant ``S_1 s + S_0`` in ``s``.

    Wherever ``S_1`` does not vanish, ``a`` and ``b`` have at most one common
    root in ``s``, namely ``-S_0 / S_1``.
    """
    m, n = len(a) - 1, len(b) - 1
    size = m + n - 2
    if m < 1 or n < 1 or size < 1:
        raise ValueError("first subresultant needs degrees with m + n >= 3")
    zero = flint.fmpq_poly([0])
    rows = []
    for poly, shifts in ((a, n - 1), (b, m - 1)):
        for k in range(shifts - 1, -1, -1):
            row = [zero] * (size + 1)
            for j, c in enumerate(poly):
                row[size - (j + k)] = c
            rows.append(row)
    lead = _bareiss_det([row[:size - 1] + [row[size - 1]] for row in rows])
    tail = _bareiss_det([row[:size - 1] + [row[size]] for row in rows])
    return tail, lead


def _monic(p: flint.fmpq_poly) -> flint.fmpq_poly:
    return p / p[p.degree()]


# Pair counting.


@dataclass(frozen=True)
class Solution:
    """A Galois orbit of solutions: ``t`` runs over the roots of ``t_minpoly``.

    Parameters refer to the original curve.  ``t_at_infinity`` marks an orbit
    that contains the parameter at infinity.  For rational orbits the exact
    pair is recorded in ``pair``.
    """

    t_minpoly: tuple[Fraction, ...]
    multiplicity: int
    s_per_t: int
    t_at_infinity: bool = False
    pair: tuple[str, str] | None = None

    @property
    def degree(self) -> int:
        return len(self.t_minpoly) - 1 + int(self.t_at_infinity)

    @property
    def count(self) -> int:
        return self.degree * self.multiplicity

    def key(self) -> tuple:
        return (self.t_minpoly, self.t_at_infinity, self.multiplicity)

    def to_json(self) -> dict:
        out = {
            "t_minpoly": [str(x) for x in self.t_minpoly],
            "t_at_infinity": self.t_at_infinity,
            "multiplicity": self.multiplicity,
            "s_values_per_t": self.s_per_t,
            "count": self.count,
        }
        if self.pair is not None:
            out["pair"] = list(self.pair)
        return out


@dataclass(frozen=True)
class PairCount:
    count: int
    solutions: tuple[Solution, ...]
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.count != sum(s.count for s in self.solutions):
            raise OracleError("count does not equal the sum of solution multiplicities")

    def to_json(self) -> dict:
        return {
            "count": self.count,
            "solutions": [s.to_json() for s in self.solutions],
            "diagnostics": self.diagnostics,
        }


def _random_mobius(rng: random.Random) -> tuple[int, int, int, int]:
    while True:
        a, b, c, d = (rng.randint(-9, 9) for _ in range(4))
        if c != 0 and a * d - b * c != 0:
            return a, b, c, d


def _clear_at_infinity(frame_at: Callable[[tuple[int, int, int, int]], Frame],
                       mobius: tuple[int, int, int, int]) -> bool:
    """True if no solution pair involves the new parameter at infinity.

    Composing with ``u = 1/v`` swaps the Mobius entries pairwise, so the frame
    at ``u = infinity`` is the swapped frame at ``v = 0``.
    """
    a, b, c, d = mobius
    at_inf = [tuple(flint.fmpq_poly([p(0)]) for p in v) for v in frame_at((b, a, d, c))]
    rows = list(zip(*(at_inf + frame_at(mobius))))
    minors = [m for m in _minors(rows, len(rows[0])) if m != 0]
    return bool(minors) and _is_unit_gcd(minors)


def _original_minpoly(p: flint.fmpq_poly, mobius: tuple[int, int, int, int]
                      ) -> tuple[tuple[Fraction, ...], bool]:
    """Pull a minimal polynomial in the new parameter back to the original one.

    The new parameter ``u`` relates to the old ``t`` by ``t = (au + b)/(cu + d)``.
    A drop in degree means one root sits at ``t = infinity``.
    """
    a, b, c, d = mobius
    n = p.degree()
    num = flint.fmpq_poly([-b, d])
    den = flint.fmpq_poly([a, -c])
    acc = flint.fmpq_poly([0])
    for k, coeff in enumerate(p.coeffs()):
        acc += coeff * num ** k * den ** (n - k)
    acc = _monic(acc)
    return tuple(to_fraction(x) for x in acc.coeffs()), acc.degree() < n


def _to_original(u: Fraction, mobius: tuple[int, int, int, int]) -> str:
    a, b, c, d = mobius
    den = c * u + d
    return "infinity" if den == 0 else str((a * u + b) / den)


def _common_s_roots(field_: _ResidueField, specs: list[list], sub0, sub1, alpha
                    ) -> tuple[int, flint.fmpq_poly | None] | None:
    """Off-diagonal common roots in ``s`` of the saturated minors at ``t = alpha``.

    Returns ``None`` when there are none off the diagonal (a spurious
    candidate), otherwise the number of such roots and, when unique, the root
    itself as an element of K.  A count of 0 marks a diagonal-only candidate.
    """
    lead = field_.reduce(sub1)
    if lead != 0:
        beta = field_.reduce(-sub0 * field_.inv(lead))
        if any(field_.evaluate(g, beta) != 0 for g in specs):
            return None
        return (0, None) if beta == alpha else (1, beta)
    # Several common roots of the two combinations: fall back to a gcd in K[s].
    g = field_.gcd(specs)
    if len(g) <= 1:
        return None
    diagonal = False
    while len(g) > 1:
        quotient, exact = field_.divide_linear(g, alpha)
        if not exact:
            break
        g, diagonal = quotient, True
    if len(g) <= 1:
        return (0, None) if diagonal else None
    beta = field_.reduce(-g[0]) if len(g) == 2 else None
    return len(g) - 1, beta


def _count_once(frame_at: Callable[[tuple[int, int, int, int]], Frame], seed: int) -> tuple[PairCount, dict]:
    rng = random.Random(seed)
    for _ in range(50):
        mobius = _random_mobius(rng)
        if _clear_at_infinity(frame_at, mobius):
            break
    else:
        raise PositiveDimensionalError("every sampled reparametrization leaves a solution at infinity")
    frame = frame_at(mobius)
    matrix = pair_matrix(frame)
    size = len(matrix[0])
    minors = _minors(matrix, size)
    if all(m == 0 for m in minors):
        raise PositiveDimensionalError("all maximal minors vanish identically")
    saturated, exponents = [], []
    for m in minors:
        if m == 0:
            exponents.append(None)
            continue
        q, k = saturate(m)
        saturated.append(q)
        exponents.append(k)
    if len(saturated) < 2:
        raise PositiveDimensionalError("a single nonzero minor cuts out a curve of pairs")

    for _ in range(MAX_COMBINATION_ATTEMPTS):
        h = [sum((rng.randint(-30, 30) * g for g in saturated), _CTX.constant(0)) for _ in range(3)]
        r1 = h[0].resultant(h[1], "s")
        r2 = h[0].resultant(h[2], "s")
        if r1 != 0 and r2 != 0:
            break
    else:
        raise PositiveDimensionalError("resultants vanish for every random combination")
    res1, res2 = _univariate_t(r1), _univariate_t(r2)
    candidates = res1.gcd(res2)
    sat_coeffs = [_coeffs_in_s(q) for q in saturated]
    a, b = _coeffs_in_s(h[0]), _coeffs_in_s(h[1])
    if len(a) + len(b) >= 5:
        sub0, sub1 = first_subresultant(a, b)
    else:
        # Too small for a subresultant; certification falls back to gcds in K[s].
        sub0 = sub1 = flint.fmpq_poly([0])

    solutions = []
    diagonal_only = 0
    factors = candidates.factor()[1] if candidates.degree() > 0 else []
    for p, _ in factors:
        field_ = _ResidueField(p)
        alpha = field_.reduce(flint.fmpq_poly([0, 1]))
        specs = [field_.specialize(c) for c in sat_coeffs]
        found = _common_s_roots(field_, specs, sub0, sub1, alpha)
        if found is None:
            continue
        s_per_t, beta = found
        if s_per_t == 0:
            diagonal_only += 1
            continue
        multiplicity = 0
        rest = res1
        while True:
            quo, rem = divmod(rest, p)
            if rem != 0:
                break
            rest, multiplicity = quo, multiplicity + 1
        minpoly, at_inf = _original_minpoly(p, mobius)
        pair = None
        if p.degree() == 1 and beta is not None:
            u = -to_fraction(p[0]) / to_fraction(p[1])
            pair = (_to_original(u, mobius), _to_original(to_fraction(beta[0]), mobius))
        solutions.append(Solution(minpoly, multiplicity, s_per_t, at_inf, pair))

    solutions.sort(key=lambda s: (s.degree, [str(x) for x in s.t_minpoly]))
    diagnostics = {
        "seed": seed,
        "mobius": list(mobius),
        "saturation_exponents": exponents,
        "resultant_degree": res1.degree(),
        "candidate_degree": candidates.degree(),
        "diagonal_only_factors": diagonal_only,
    }
    total = sum(s.count for s in solutions)
    return PairCount(total, tuple(solutions), diagnostics), diagnostics


def second_seed(seed: int) -> int:
    return random.Random(seed).randrange(1, 2**31)


def count_meeting_pairs(frame_at: Callable[[tuple[int, int, int, int]], Frame], seed: int = DEFAULT_SEED
                        ) -> PairCount:
    """Run the elimination twice with independent reparametrizations and compare."""
    first, d1 = _count_once(frame_at, seed)
    second, d2 = _count_once(frame_at, second_seed(seed))
    if first.count != second.count or [s.key() for s in first.solutions] != [s.key() for s in second.solutions]:
        raise SeedDisagreementError(
            f"seed {d1['seed']} gave {first.count} pairs but seed {d2['seed']} gave {second.count}")
    return PairCount(first.count, first.solutions, {"runs": [d1, d2]})


def tangent_frame(curve: RationalCurve) -> Callable[[tuple[int, int, int, int]], Frame]:
    def frame_at(mobius):
        moved = curve.reparametrize(*mobius)
        return [moved.polys, moved.derivative(1)]
    return frame_at


def count_nonskew_pairs_p4(curve: RationalCurve, seed: int = DEFAULT_SEED) -> PairCount:
    """Ordered pairs ``t != s`` whose tangent lines meet, with multiplicity."""
    if curve.ambient != 4:
        raise PreconditionError(f"expected a curve in P^4, got P^{curve.ambient}")
    check_tangent_preconditions(curve)
    return count_meeting_pairs(tangent_frame(curve), seed)


def random_rational_curve(degree: int, ambient: int = 4, seed: int = DEFAULT_SEED, bound: int = 5
                          ) -> RationalCurve:
    """Seeded random curve with integer coefficients satisfying the tangent preconditions."""
    rng = random.Random(seed)
    while True:
        coords = [[rng.randint(-bound, bound) for _ in range(degree + 1)] for _ in range(ambient + 1)]
        if all(c[-1] == 0 for c in coords):
            continue
        try:
            curve = RationalCurve.from_coefficients(coords)
            check_tangent_preconditions(curve, min(3, ambient - 1))
        except PreconditionError:
            continue
        return curve


def rational_normal_curve(degree: int) -> RationalCurve:
    return RationalCurve.from_coefficients([[0] * k + [1] for k in range(degree + 1)])


# Exact identities for curves in P^3.


def tangent_determinant(curve: RationalCurve):
    """``det[f(t), f'(t), f(s), f'(s)]`` for a curve in ``P^3``."""
    if curve.ambient != 3:
        raise PreconditionError(f"expected a curve in P^3, got P^{curve.ambient}")
    return _poly_det(pair_matrix([curve.polys, curve.derivative(1)]))


def diagonal_form(poly) -> tuple[Fraction, int | None]:
    """Write ``poly = c (t - s)^k`` if possible.

    Returns ``(0, None)`` for the zero polynomial and raises if the saturated
    part is not constant.
    """
    if poly == 0:
        return Fraction(0), None
    q, k = saturate(poly)
    if q.total_degree() > 0:
        raise OracleError(f"polynomial is not a constant times a power of (t - s): {q}")
    return to_fraction(q.to_dict()[(0, 0)]), k


def twisted_cubic_identity(curve: RationalCurve | None = None) -> tuple[Fraction, int | None]:
    """Tangent determinant of the twisted cubic as ``(constant, exponent)``."""
    curve = curve or rational_normal_curve(3)
    return diagonal_form(tangent_determinant(curve))


# Scrolls.


@dataclass(frozen=True)
class ScrollSpec:
    first: RationalCurve
    second: RationalCurve

    def __post_init__(self) -> None:
        if self.first.ambient != self.second.ambient:
            raise PreconditionError("scroll directrices live in different ambient spaces")

    @property
    def ambient(self) -> int:
        return self.first.ambient

    @property
    def bidegree(self) -> tuple[int, int]:
        return self.first.degree, self.second.degree

    @classmethod
    def from_json(cls, data: dict) -> "ScrollSpec":
        try:
            first, second = data["first"], data["second"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed scroll description: {exc}") from exc
        return cls(RationalCurve.from_json(first), RationalCurve.from_json(second))

    def to_json(self) -> dict:
        return {"first": self.first.to_json(), "second": self.second.to_json()}

    def rulings_nondegenerate(self) -> bool:
        inf = [self.first.at_infinity().point(0), self.second.at_infinity().point(0)]
        return _frame_nondegenerate([self.first.polys, self.second.polys], inf)


@dataclass(frozen=True)
class ScrollVerdict:
    skew: bool
    certificate: dict

    def to_json(self) -> dict:
        return {"skew": self.skew, "certificate": self.certificate}


def _small_rationals() -> Iterable[Fraction]:
    yield Fraction(0)
    for n in range(1, 50):
        yield Fraction(n)
        yield Fraction(-n)


def _p3_scroll_verdict(spec: ScrollSpec) -> ScrollVerdict:
    det = _poly_det(pair_matrix([spec.first.polys, spec.second.polys]))
    if det == 0:
        return ScrollVerdict(False, {"reason": "determinant vanishes identically"})
    q, k = saturate(det)
    expected = sum(spec.bidegree)
    if q.total_degree() == 0:
        if k == expected:
            return ScrollVerdict(True, {"constant": str(to_fraction(q.to_dict()[(0, 0)])),
                                        "diagonal_exponent": k})
        return ScrollVerdict(False, {"reason": "rulings meet over the parameter at infinity",
                                     "diagonal_exponent": k, "expected_exponent": expected})
    if q.degrees()[1] == 0:
        p = _univariate_t(q)
        _, factors = p.factor()
        return ScrollVerdict(False, {"reason": "a ruling meets every other ruling",
                                     "t_minpoly": [str(to_fraction(x)) for x in _monic(factors[0][0]).coeffs()]})
    for t0 in _small_rationals():
        restricted = q.subs({"t": _fmpq(t0)})
        if restricted == 0:
            return ScrollVerdict(False, {"reason": "ruling meets every other ruling", "t": str(t0)})
        coeffs = {j: c for (_, j), c in restricted.to_dict().items()}
        poly = flint.fmpq_poly([coeffs.get(j, 0) for j in range(max(coeffs) + 1)])
        if poly.degree() < 1:
            continue
        _, factors = poly.factor()
        diag = flint.fmpq_poly([-_fmpq(t0), 1])
        for f, _ in factors:
            if _monic(f) == diag:
                continue
            cert = {"reason": "explicit meeting pair", "t": str(t0),
                    "s_minpoly": [str(to_fraction(x)) for x in _monic(f).coeffs()]}
            if f.degree() == 1:
                s0 = -to_fraction(f[0]) / to_fraction(f[1])
                vectors = [spec.first.point(t0), spec.second.point(t0),
                           spec.first.point(s0), spec.second.point(s0)]
                if _rank(vectors) > 3:
                    raise OracleError("certificate pair failed the exact rank check")
                cert["s"] = str(s0)
            return ScrollVerdict(False, cert)
    raise OracleError("no small rational parameter produced a meeting pair")


def scroll_skew_test(spec: ScrollSpec, seed: int = DEFAULT_SEED) -> ScrollVerdict:
    """Decide whether distinct rulings of the scroll are pairwise disjoint."""
    if spec.ambient not in (3, 4):
        raise PreconditionError(f"scroll test supports P^3 and P^4, got P^{spec.ambient}")
    if not spec.rulings_nondegenerate():
        raise PreconditionError("the two directrices meet, so some ruling degenerates to a point")
    if spec.ambient == 3:
        return _p3_scroll_verdict(spec)

    def frame_at(mobius):
        return [spec.first.reparametrize(*mobius).polys, spec.second.reparametrize(*mobius).polys]

    try:
        count = count_meeting_pairs(frame_at, seed)
    except PositiveDimensionalError as exc:
        return ScrollVerdict(False, {"reason": str(exc)})
    return ScrollVerdict(count.count == 0, {"meeting_pairs": count.to_json()})


def example_skew_scroll() -> ScrollSpec:
    """Bidegree (2,2) scroll in ``P^3`` whose rulings are pairwise skew."""
    return ScrollSpec(RationalCurve.from_coefficients([[1], [0, 2], [0, 0, 1], []]),
                      RationalCurve.from_coefficients([[0, 2], [0, 0, 1], [], [1]]))


def rational_normal_scroll() -> ScrollSpec:
    """The bidegree (1,1) scroll ``<(1:t:0:0), (0:0:1:t)>``."""
    return ScrollSpec(RationalCurve.from_coefficients([[1], [0, 1], [], []]),
                      RationalCurve.from_coefficients([[], [], [1], [0, 1]]))


def random_scroll(d1: int, d2: int, ambient: int = 3, seed: int = DEFAULT_SEED, bound: int = 5) -> ScrollSpec:
    rng = random.Random(seed)
    while True:
        first = [[rng.randint(-bound, bound) for _ in range(d1 + 1)] for _ in range(ambient + 1)]
        second = [[rng.randint(-bound, bound) for _ in range(d2 + 1)] for _ in range(ambient + 1)]
        try:
            spec = ScrollSpec(RationalCurve.from_coefficients(first), RationalCurve.from_coefficients(second))
        except PreconditionError:
            continue
        if spec.bidegree == (d1, d2) and spec.rulings_nondegenerate():
            return spec


# Cubic Veronese surface projected from the monomial x0*x1*x2.

VERONESE_MONOMIALS: tuple[tuple[int, int, int], ...] = tuple(
    e for e in itertools.product(range(4), repeat=3) if sum(e) == 3 and 0 in e)


def _veronese_vectors(x: Sequence[Fraction]) -> list[Vector]:
    """The lift and its three partial derivatives at ``x``."""
    def value(e):
        out = Fraction(1)
        for xi, k in zip(x, e):
            out *= xi ** k
        return out

    vectors = [tuple(value(e) for e in VERONESE_MONOMIALS)]
    for i in range(3):
        row = []
        for e in VERONESE_MONOMIALS:
            if e[i] == 0:
                row.append(Fraction(0))
            else:
                lowered = tuple(k - 1 if j == i else k for j, k in enumerate(e))
                row.append(e[i] * value(lowered))
        vectors.append(tuple(row))
    return vectors


def veronese_tangent_rank(x: Sequence, y: Sequence) -> int:
    """Rank of the combined tangent spaces at ``x`` and ``y`` (6 means skew)."""
    x = [to_fraction(v) for v in x]
    y = [to_fraction(v) for v in y]
    return _rank(_veronese_vectors(x) + _veronese_vectors(y))


def veronese_sample_test(samples: int = 100, seed: int = DEFAULT_SEED) -> bool:
    if samples < 1:
        raise ValueError("need at least one sample")
    rng = random.Random(seed)
    done = 0
    while done < samples:
        x = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(3)]
        y = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(3)]
        if _rank([x, y]) < 2:
            continue
        if veronese_tangent_rank(x, y) != 6:
            return False
        done += 1
    return True


# Local contact of the two branches through the diagonal.


@dataclass(frozen=True)
class ContactReport:
    t0: Fraction
    matching_orders: tuple[int, ...]
    obstruction_rank: int

    @property
    def agrees_to_order_two(self) -> bool:
        return all(k in self.matching_orders for k in range(3))

    @property
    def order_three_obstructed(self) -> bool:
        return self.obstruction_rank == 2

    def to_json(self) -> dict:
        return {
            "t0": str(self.t0),
            "matching_orders": list(self.matching_orders),
            "agrees_to_order_two": self.agrees_to_order_two,
            "order_three_obstructed": self.order_three_obstructed,
            "obstruction_rank": self.obstruction_rank,
        }


def _series_vector(polys: Sequence[flint.fmpq_poly], prec: int) -> list[flint.fmpq_series]:
    return [flint.fmpq_series(p.coeffs() or [0], prec=prec) for p in polys]


def contact_order_test(curve: RationalCurve, t0, prec: int = 7) -> ContactReport:
    """Compare ``alpha = (f - u f', f')`` with ``beta = (-(u/2) f', f')`` at ``u = 0``.

    ``f`` is the curve written in the normalized local form: an affine chart
    centred at ``f(t0)`` with the first coordinate as parameter, so the other
    coordinates vanish to order two.
    """
    if curve.ambient != 4:
        raise PreconditionError(f"expected a curve in P^4, got P^{curve.ambient}")
    t0 = to_fraction(t0)
    if curve.osculating_rank(t0) < 4:
        raise PreconditionError(f"osculating space degenerates at t = {t0}")
    shift = flint.fmpq_poly([_fmpq(t0), 1])
    shifted = [p(shift) for p in curve.polys]
    taylor = [[to_fraction(p[k]) for p in shifted] for k in range(4)]
    basis = list(taylor)
    for i in range(5):
        e = [Fraction(int(i == j)) for j in range(5)]
        if _rank(basis + [e]) == 5:
            basis.append(e)
            break
    change = flint.fmpq_mat(5, 5, [_fmpq(basis[j][i]) for i in range(5) for j in range(5)]).inv()
    moved = []
    for i in range(5):
        acc = flint.fmpq_poly([0])
        for j in range(5):
            acc += change[i, j] * shifted[j]
        moved.append(acc)
    series = _series_vector(moved, prec)
    inv0 = series[0].inv()
    chart = [s * inv0 for s in series[1:]]
    param_inverse = chart[0].reversion()
    f = [c(param_inverse) for c in chart[1:]]

    u = flint.fmpq_series([0, 1], prec=prec)
    fprime = [c.derivative() for c in f]
    alpha = [a - u * b for a, b in zip(f, fprime)] + fprime
    beta = [-(u * b) / 2 for b in fprime] + fprime
    top = prec - 2
    matching = tuple(k for k in range(top)
                     if all(to_fraction(a[k]) == to_fraction(b[k]) for a, b in zip(alpha, beta)))
    second = [2 * to_fraction(c[2]) for c in f]
    third = [6 * to_fraction(c[3]) for c in f]
    return ContactReport(t0, matching, _rank([second, third]))
