"""Chow rings of Grassmannians in the Schubert basis.

``Gr(n, N)`` is the Grassmannian of ``n``-dimensional subspaces of an
``N``-dimensional vector space.  Schubert classes are indexed by partitions
fitting in an ``n x (N - n)`` box, stored as tuples with trailing zeros
removed.  Products use Giambelli's determinant to write one factor as a
polynomial in special classes, then Pieri's rule for each special factor.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator, Mapping

from .params import Coefficient, ParamPoly, format_param, param
from .terms import Combination, collect, format_terms

Partition = tuple[int, ...]


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


@dataclass(frozen=True)
class GrassContext:
    n: int
    N: int

    def __post_init__(self) -> None:
        if not (1 <= self.n <= self.N):
            raise DomainError(f"need 1 <= n <= N, got Gr({self.n},{self.N})")

    @property
    def width(self) -> int:
        return self.N - self.n

    @property
    def dim(self) -> int:
        return self.n * (self.N - self.n)

    @property
    def top(self) -> Partition:
        return normalize((self.width,) * self.n)

    @cached_property
    def partitions(self) -> tuple[Partition, ...]:
        """All partitions in the box, ordered by size then reverse-lex."""
        out = []
        for parts in itertools.product(range(self.width, -1, -1), repeat=self.n):
            if all(parts[i] >= parts[i + 1] for i in range(self.n - 1)):
                out.append(normalize(parts))
        return tuple(sorted(out, key=lambda p: (sum(p), tuple(-x for x in p))))

    def partitions_of(self, size: int) -> tuple[Partition, ...]:
        return tuple(p for p in self.partitions if sum(p) == size)

    def __str__(self) -> str:
        return f"Gr({self.n},{self.N})"


def normalize(parts) -> Partition:
    parts = tuple(int(x) for x in parts)
    if any(x < 0 for x in parts):
        raise DomainError(f"negative part in {parts}")
    if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
        raise DomainError(f"{parts} is not weakly decreasing")
    end = len(parts)
    while end and parts[end - 1] == 0:
        end -= 1
    return parts[:end]


def check_partition(parts, ctx: GrassContext) -> Partition:
    lam = normalize(parts)
    if len(lam) > ctx.n or (lam and lam[0] > ctx.width):
        raise DomainError(f"partition {lam} does not fit the box of {ctx}")
    return lam


def padded(lam: Partition, n: int) -> tuple[int, ...]:
    return lam + (0,) * (n - len(lam))


def dual(lam, ctx: GrassContext) -> Partition:
    """Complementary partition: ``sigma_lam * sigma_dual`` is the point class."""
    lam = padded(check_partition(lam, ctx), ctx.n)
    return normalize(ctx.width - lam[ctx.n - 1 - i] for i in range(ctx.n))


def _horizontal_strips(lam: tuple[int, ...], i: int, width: int) -> Iterator[tuple[int, ...]]:
    n = len(lam)

    def rec(row: int, left: int, acc: list[int]) -> Iterator[tuple[int, ...]]:
        if row == n:
            if left == 0:
                yield tuple(acc)
            return
        upper = width if row == 0 else lam[row - 1]
        for mu in range(lam[row], min(upper, lam[row] + left) + 1):
            acc.append(mu)
            yield from rec(row + 1, left - (mu - lam[row]), acc)
            acc.pop()

    yield from rec(0, i, [])


@lru_cache(maxsize=None)
def _pieri(ctx: GrassContext, lam: Partition, i: int) -> tuple[Partition, ...]:
    if i < 0 or i > ctx.width:
        return ()
    return tuple(normalize(mu) for mu in _horizontal_strips(padded(lam, ctx.n), i, ctx.width))


def pieri(lam, i: int, ctx: GrassContext) -> "ChowClass":
    """``sigma_lam * sigma_i``: add ``i`` boxes to ``lam``, no two in one column."""
    lam = check_partition(lam, ctx)
    if not (0 <= i <= ctx.width):
        raise DomainError(f"special class sigma_{i} does not exist in {ctx}")
    return ChowClass(ctx, collect((mu, 1) for mu in _pieri(ctx, lam, i)))


def giambelli(lam, ctx: GrassContext) -> list[tuple[int, tuple[int, ...]]]:
    """Expand ``sigma_lam`` as ``det[sigma_{lam_i + j - i}]``.

    Returns (sign, special indices) pairs; products containing an index outside
    ``0..N-n`` vanish and are omitted.
    """
    lam = check_partition(lam, ctx)
    ell = len(lam)
    out = []
    for perm in itertools.permutations(range(ell)):
        idx = tuple(lam[i] + perm[i] - i for i in range(ell))
        if any(x < 0 or x > ctx.width for x in idx):
            continue
        inversions = sum(1 for a, b in itertools.combinations(perm, 2) if a > b)
        out.append((-1 if inversions % 2 else 1, idx))
    return out


def _apply_special(ctx: GrassContext, vec: dict[Partition, int], i: int) -> dict[Partition, int]:
    out: dict[Partition, int] = {}
    for lam, c in vec.items():
        for mu in _pieri(ctx, lam, i):
            out[mu] = out.get(mu, 0) + c
    return {k: v for k, v in out.items() if v}


@lru_cache(maxsize=None)
def schubert_product(ctx: GrassContext, lam: Partition, mu: Partition) -> tuple[tuple[Partition, int], ...]:
    """Structure constants of ``sigma_lam * sigma_mu`` (Giambelli on ``mu``)."""
    total: dict[Partition, int] = {}
    for sign, idx in giambelli(mu, ctx):
        vec = {lam: 1}
        for i in idx:
            vec = _apply_special(ctx, vec, i)
            if not vec:
                break
        for nu, c in vec.items():
            total[nu] = total.get(nu, 0) + sign * c
    return tuple(sorted(((k, v) for k, v in total.items() if v), key=lambda kv: (sum(kv[0]), kv[0])))


def _partition_label(lam: Partition) -> str:
    if not lam:
        return "1"
    sep = "," if any(x > 9 for x in lam) else ""
    return "σ" + sep.join(str(x) for x in lam)


@dataclass(frozen=True, eq=False)
class ChowClass(Combination):
    """An element of the Chow ring of a Grassmannian."""

    ctx: GrassContext
    terms: Mapping[Partition, ParamPoly]

    def __post_init__(self) -> None:
        for lam in self.terms:
            check_partition(lam, self.ctx)

    def _like(self, terms) -> "ChowClass":
        return ChowClass(self.ctx, dict(terms))

    def _eq_key(self):
        return self.ctx

    def _check_compatible(self, other) -> None:
        super()._check_compatible(other)
        if other.ctx != self.ctx:
            raise DomainError(f"classes live in different Grassmannians: {self.ctx} vs {other.ctx}")

    @classmethod
    def zero(cls, ctx: GrassContext) -> "ChowClass":
        return cls(ctx, {})

    @classmethod
    def one(cls, ctx: GrassContext) -> "ChowClass":
        return cls(ctx, {(): param(1)})

    def __mul__(self, other):
        if isinstance(other, ChowClass):
            return product(self, other)
        if isinstance(other, Combination):
            return NotImplemented
        return self.scale(other)

    def degrees(self) -> set[int]:
        return {sum(lam) for lam in self.terms}

    def homogeneous_part(self, k: int) -> "ChowClass":
        return self._like({lam: c for lam, c in self.terms.items() if sum(lam) == k})

    def __pow__(self, k: int) -> "ChowClass":
        out = ChowClass.one(self.ctx)
        for _ in range(k):
            out = out * self
        return out

    def __str__(self) -> str:
        keys = sorted(self.terms, key=lambda p: (sum(p), tuple(-x for x in p)))
        return format_terms([(_partition_label(k), self.terms[k]) for k in keys])

    def to_json(self) -> dict:
        keys = sorted(self.terms, key=lambda p: (sum(p), p))
        return {
            "ctx": [self.ctx.n, self.ctx.N],
            "terms": [{"partition": list(k), "coeff": format_param(self.terms[k])} for k in keys],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ChowClass":
        n, N = data["ctx"]
        ctx = GrassContext(int(n), int(N))
        return cls(ctx, collect((check_partition(t["partition"], ctx), param(t["coeff"]))
                                for t in data["terms"]))


def sigma(ctx: GrassContext, *parts: int, coeff: Coefficient = 1) -> ChowClass:
    return ChowClass(ctx, collect([(check_partition(parts, ctx), coeff)]))


def product(alpha: ChowClass, beta: ChowClass) -> ChowClass:
    if alpha.ctx != beta.ctx:
        raise DomainError(f"classes live in different Grassmannians: {alpha.ctx} vs {beta.ctx}")
    ctx = alpha.ctx
    pairs = []
    for lam, a in alpha.terms.items():
        for mu, b in beta.terms.items():
            ab = a * b
            for nu, c in schubert_product(ctx, lam, mu):
                pairs.append((nu, ab * c))
    return ChowClass(ctx, collect(pairs))


def point_degree(alpha: ChowClass) -> ParamPoly:
    """Coefficient of the point class (the full box)."""
    return alpha.coefficient(alpha.ctx.top)


def special_classes(ctx: GrassContext) -> list[ChowClass]:
    return [sigma(ctx, i) for i in range(ctx.width + 1)]


def tautological_bundles(ctx: GrassContext):
    """Universal sub- and quotient bundles ``S`` and ``Q``.

    ``c(S) = sum_k (-1)^k sigma_{1^k}`` and ``c(Q) = 1 + sigma_1 + ... + sigma_{N-n}``.
    """
    from .bundles import bundle

    one = ChowClass.one(ctx)
    sub = [sigma(ctx, *([1] * k), coeff=(-1) ** k) for k in range(1, ctx.n + 1)]
    quo = [sigma(ctx, k) for k in range(1, ctx.width + 1)]
    return bundle(ctx.n, sub, one, ctx.dim), bundle(ctx.width, quo, one, ctx.dim)


@lru_cache(maxsize=None)
def tangent_bundle(ctx: GrassContext):
    """``T_G = Hom(S, Q) = S* (x) Q``."""
    from .bundles import dual as dual_bundle, tensor

    S, Q = tautological_bundles(ctx)
    return tensor(dual_bundle(S), Q)
