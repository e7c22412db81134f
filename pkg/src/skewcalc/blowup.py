"""Chow ring of the blowup ``B`` of ``G x G`` along the diagonal.

``G = Gr(n, N)`` with ``D = dim G``.  The exceptional divisor ``E`` is the
projectivized tangent bundle of the diagonal, so ``A(E) = A(G)[zeta]`` modulo
``sum_i c_i(T_G) zeta^(D-i) = 0``.  Every class of ``B`` is written as
``pi^*(t) + j_*(e)`` with ``t`` in ``A(G x G)`` and ``e`` in ``A(E)``; the
normal form keeps only ``zeta``-exponents up to ``D - 2`` in ``e``, which
makes the decomposition unique.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Mapping

import sympy

from . import bundles
from .params import Coefficient, ParamPoly, format_param, param
from .schubert import (ChowClass, DomainError, GrassContext, Partition, check_partition,
                       dual, schubert_product, sigma, tangent_bundle,
                       tautological_bundles)
from .terms import Combination, collect, format_terms

log = logging.getLogger(__name__)


class InternalError(RuntimeError):
    """An identity that must hold by construction failed."""


def _label(lam: Partition, bar: bool = False) -> str:
    if not lam:
        return "1"
    sep = "," if any(x > 9 for x in lam) else ""
    return ("σ̄" if bar else "σ") + sep.join(str(x) for x in lam)


def _same_ctx(x, y) -> None:
    if x.ctx != y.ctx:
        raise DomainError(f"classes over different Grassmannians: {x.ctx} vs {y.ctx}")


# --- A(G x G) ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class TensorClass(Combination):
    """Element of ``A(G x G)`` in the basis ``sigma_a (x) sigma_b``."""

    ctx: GrassContext
    terms: Mapping[tuple[Partition, Partition], ParamPoly]

    def __post_init__(self) -> None:
        for a, b in self.terms:
            check_partition(a, self.ctx)
            check_partition(b, self.ctx)

    def _like(self, terms) -> "TensorClass":
        return TensorClass(self.ctx, dict(terms))

    def _eq_key(self):
        return self.ctx

    def _check_compatible(self, other) -> None:
        super()._check_compatible(other)
        _same_ctx(self, other)

    @classmethod
    def one(cls, ctx: GrassContext) -> "TensorClass":
        return cls(ctx, {((), ()): param(1)})

    @classmethod
    def zero(cls, ctx: GrassContext) -> "TensorClass":
        return cls(ctx, {})

    def __mul__(self, other):
        if isinstance(other, TensorClass):
            _same_ctx(self, other)
            pairs = []
            for (a, b), x in self.terms.items():
                for (c, e), y in other.terms.items():
                    xy = x * y
                    for left, m in schubert_product(self.ctx, a, c):
                        for right, k in schubert_product(self.ctx, b, e):
                            pairs.append(((left, right), xy * (m * k)))
            return TensorClass(self.ctx, collect(pairs))
        if isinstance(other, Combination):
            return NotImplemented
        return self.scale(other)

    def codimensions(self) -> set[int]:
        return {sum(a) + sum(b) for a, b in self.terms}

    def __str__(self) -> str:
        keys = sorted(self.terms, key=lambda k: (sum(k[0]) + sum(k[1]), k))
        return format_terms((f"{_label(a) if a else '1'}⊗{_label(b) if b else '1'}", self.terms[(a, b)])
                            for a, b in keys)

    def to_json(self) -> list:
        keys = sorted(self.terms, key=lambda k: (sum(k[0]) + sum(k[1]), k))
        return [{"left": list(a), "right": list(b), "coeff": format_param(self.terms[(a, b)])}
                for a, b in keys]


def tensor_of(alpha: ChowClass, beta: ChowClass) -> TensorClass:
    _same_ctx(alpha, beta)
    return TensorClass(alpha.ctx, collect(((a, b), x * y) for a, x in alpha.terms.items()
                                          for b, y in beta.terms.items()))


def tensor_point(ctx: GrassContext) -> TensorClass:
    return TensorClass(ctx, {(ctx.top, ctx.top): param(1)})


def tensor_degree(t: TensorClass) -> ParamPoly:
    return t.coefficient((t.ctx.top, t.ctx.top))


def i_pullback(t: TensorClass) -> ChowClass:
    """Restriction to the diagonal: ``sigma_a (x) sigma_b -> sigma_a sigma_b``."""
    ctx = t.ctx
    pairs = []
    for (a, b), x in t.terms.items():
        for nu, m in schubert_product(ctx, a, b):
            pairs.append((nu, x * m))
    return ChowClass(ctx, collect(pairs))


@lru_cache(maxsize=None)
def _pushforward_basis(ctx: GrassContext, p: Partition) -> tuple[tuple[tuple[Partition, Partition], int], ...]:
    out = []
    codim = sum(p) + ctx.dim
    for a in ctx.partitions:
        for b in ctx.partitions_of(codim - sum(a)):
            # deg(sigma_abar sigma_bbar sigma_p)
            abar, bbar = dual(a, ctx), dual(b, ctx)
            n_ab = 0
            for nu, m in schubert_product(ctx, abar, bbar):
                n_ab += m * dict(schubert_product(ctx, nu, p)).get(ctx.top, 0)
            if n_ab:
                if n_ab > 1:
                    log.warning("diagonal pushforward of sigma%s in %s has coefficient %d on %s(x)%s",
                                p, ctx, n_ab, a, b)
                out.append(((a, b), n_ab))
    return tuple(out)


def i_pushforward(c: ChowClass) -> TensorClass:
    """Pushforward along the diagonal via triple intersection numbers."""
    return TensorClass(c.ctx, collect((key, x * n) for p, x in c.terms.items()
                                      for key, n in _pushforward_basis(c.ctx, p)))


def pull_left(c: ChowClass) -> TensorClass:
    return tensor_of(c, ChowClass.one(c.ctx))


def pull_right(c: ChowClass) -> TensorClass:
    return tensor_of(ChowClass.one(c.ctx), c)


def degeneracy_class(ctx: GrassContext, r: int) -> TensorClass:
    """Class of ``D_r``: pairs of subspaces meeting in dimension at least ``r``.

    Porteous for ``S_1 + S_2 -> V`` dropping to rank ``2n - r``.
    """
    if not (max(2 * ctx.n - ctx.N, 0) <= r <= ctx.n):
        raise DomainError(f"r={r} outside the filtration range of {ctx}")
    S, _ = tautological_bundles(ctx)
    one = TensorClass.one(ctx)
    top = 2 * ctx.dim
    S1 = bundles.bundle(ctx.n, [pull_left(S.c(i)) for i in range(1, ctx.n + 1)], one, top)
    S2 = bundles.bundle(ctx.n, [pull_right(S.c(i)) for i in range(1, ctx.n + 1)], one, top)
    V = bundles.trivial(ctx.N, one, top)
    return bundles.porteous(bundles.direct_sum(S1, S2), V, 2 * ctx.n - r)


# --- A(E) -------------------------------------------------------------------

@lru_cache(maxsize=None)
def tangent_chern(ctx: GrassContext) -> tuple[ChowClass, ...]:
    """``c_0 .. c_D`` of ``T_G``, equal to those of the diagonal's normal bundle."""
    T = tangent_bundle(ctx)
    return tuple(T.c(i) for i in range(ctx.dim + 1))


def _reduce_e(ctx: GrassContext, poly: dict[int, ChowClass]) -> dict[tuple[Partition, int], ParamPoly]:
    D = ctx.dim
    chern = tangent_chern(ctx)
    poly = dict(poly)
    while poly and max(poly) >= D:
        k = max(poly)
        top = poly.pop(k)
        for i in range(1, D + 1):
            poly[k - i] = poly.get(k - i, ChowClass.zero(ctx)) - top * chern[i]
    return collect(((lam, k), x) for k, c in poly.items() for lam, x in c.terms.items())


@dataclass(frozen=True, eq=False)
class EClass(Combination):
    """Element of ``A(E)`` in the basis ``sigma_bar_p zeta^k``, ``0 <= k <= D - 1``."""

    ctx: GrassContext
    terms: Mapping[tuple[Partition, int], ParamPoly]

    def __post_init__(self) -> None:
        for lam, k in self.terms:
            check_partition(lam, self.ctx)
            if not (0 <= k <= self.ctx.dim - 1):
                raise DomainError(f"zeta exponent {k} outside 0..{self.ctx.dim - 1}")

    def _like(self, terms) -> "EClass":
        return EClass(self.ctx, dict(terms))

    def _eq_key(self):
        return self.ctx

    def _check_compatible(self, other) -> None:
        super()._check_compatible(other)
        _same_ctx(self, other)

    @classmethod
    def build(cls, ctx: GrassContext, poly: Mapping[int, ChowClass]) -> "EClass":
        """From a polynomial ``{k: coefficient of zeta^k}``, reducing high powers."""
        return cls(ctx, _reduce_e(ctx, dict(poly)))

    @classmethod
    def base(cls, c: ChowClass, k: int = 0) -> "EClass":
        return cls.build(c.ctx, {k: c})

    @classmethod
    def one(cls, ctx: GrassContext) -> "EClass":
        return cls(ctx, {((), 0): param(1)})

    @classmethod
    def zeta(cls, ctx: GrassContext, k: int = 1) -> "EClass":
        return cls.base(ChowClass.one(ctx), k)

    def by_power(self) -> dict[int, ChowClass]:
        out: dict[int, dict] = {}
        for (lam, k), x in self.terms.items():
            out.setdefault(k, {})[lam] = x
        return {k: ChowClass(self.ctx, v) for k, v in out.items()}

    def __mul__(self, other):
        if isinstance(other, EClass):
            return mult_E(self, other)
        if isinstance(other, ChowClass):
            return mult_E(self, EClass.base(other))
        if isinstance(other, Combination):
            return NotImplemented
        return self.scale(other)

    def times_zeta(self, k: int = 1) -> "EClass":
        return EClass.build(self.ctx, {e + k: c for e, c in self.by_power().items()})

    def divide_by_zeta(self) -> "EClass":
        """Inverse of ``times_zeta`` on classes without a ``zeta^0`` part."""
        parts = self.by_power()
        if 0 in parts:
            raise DomainError("class has a zeta^0 component; not divisible by zeta")
        return EClass.build(self.ctx, {k - 1: c for k, c in parts.items()})

    def codimensions(self) -> set[int]:
        return {sum(lam) + k for lam, k in self.terms}

    def degree(self) -> ParamPoly:
        """Degree on ``E``: the coefficient of ``sigma_bar_top zeta^(D-1)``."""
        return self.coefficient((self.ctx.top, self.ctx.dim - 1))

    def __str__(self) -> str:
        keys = sorted(self.terms, key=lambda t: (sum(t[0]) + t[1], -t[1], t[0]))
        return format_terms((_e_label(lam, k), self.terms[(lam, k)]) for lam, k in keys)

    def to_json(self) -> list:
        keys = sorted(self.terms, key=lambda t: (sum(t[0]) + t[1], t[1], t[0]))
        return [{"partition": list(lam), "zeta": k, "coeff": format_param(self.terms[(lam, k)])}
                for lam, k in keys]


def _e_label(lam: Partition, k: int) -> str:
    z = "" if k == 0 else ("ζ" if k == 1 else f"ζ^{k}")
    if not lam:
        return z or "1"
    return _label(lam, bar=True) + ("*" + z if z else "")


def mult_E(x: EClass, y: EClass) -> EClass:
    _same_ctx(x, y)
    poly: dict[int, ChowClass] = {}
    px, py = x.by_power(), y.by_power()
    for k, a in px.items():
        for l, b in py.items():
            poly[k + l] = poly.get(k + l, ChowClass.zero(x.ctx)) + a * b
    return EClass.build(x.ctx, poly)


# --- A(B) -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class BlowupClass:
    """``pi^*(pullback) + j_*(exceptional)``."""

    pullback: TensorClass
    exceptional: EClass

    def __post_init__(self) -> None:
        _same_ctx(self.pullback, self.exceptional)

    @property
    def ctx(self) -> GrassContext:
        return self.pullback.ctx

    @classmethod
    def pi(cls, t: TensorClass) -> "BlowupClass":
        return cls(t, EClass(t.ctx, {}))

    @classmethod
    def j(cls, e: EClass) -> "BlowupClass":
        return normal_form(cls(TensorClass.zero(e.ctx), e))

    @classmethod
    def exceptional_divisor(cls, ctx: GrassContext) -> "BlowupClass":
        return cls.j(EClass.one(ctx))

    @classmethod
    def zero(cls, ctx: GrassContext) -> "BlowupClass":
        return cls(TensorClass.zero(ctx), EClass(ctx, {}))

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        if not isinstance(other, BlowupClass):
            return NotImplemented
        return normal_form(BlowupClass(self.pullback + other.pullback, self.exceptional + other.exceptional))

    __radd__ = __add__

    def __neg__(self) -> "BlowupClass":
        return BlowupClass(-self.pullback, -self.exceptional)

    def __sub__(self, other):
        if not isinstance(other, BlowupClass):
            return NotImplemented
        return self + (-other)

    def scale(self, factor: Coefficient) -> "BlowupClass":
        return BlowupClass(self.pullback.scale(factor), self.exceptional.scale(factor))

    def __mul__(self, other):
        if isinstance(other, BlowupClass):
            return mult_B(self, other)
        if isinstance(other, Combination):
            return NotImplemented
        return self.scale(other)

    def __rmul__(self, other):
        if isinstance(other, BlowupClass):
            return NotImplemented
        return self.scale(other)

    def is_zero(self) -> bool:
        nf = normal_form(self)
        return nf.pullback.is_zero() and nf.exceptional.is_zero()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        if not isinstance(other, BlowupClass):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self) -> int:
        nf = normal_form(self)
        return hash((nf.pullback, nf.exceptional))

    def __str__(self) -> str:
        parts = []
        if not self.pullback.is_zero():
            parts.append(f"π*({self.pullback})")
        if not self.exceptional.is_zero():
            parts.append(f"j_*({self.exceptional})")
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"ctx": [self.ctx.n, self.ctx.N], "pullback": self.pullback.to_json(),
                "exceptional": self.exceptional.to_json()}


def _lower_chern_tail(ctx: GrassContext, c: ChowClass, top: int) -> dict[int, ChowClass]:
    """``c * sum_{i>=1} c_i(T_G) zeta^(top - i)`` as a zeta-polynomial."""
    chern = tangent_chern(ctx)
    return {top - i: c * chern[i] for i in range(1, top + 1)}


def normal_form(x: BlowupClass) -> BlowupClass:
    """Rewrite ``j_*(sigma_bar_p zeta^(D-1))`` as ``pi^*(i_* sigma_p) - j_*(...)``."""
    ctx = x.ctx
    D = ctx.dim
    parts = x.exceptional.by_power()
    top = parts.pop(D - 1, None)
    if top is None:
        return x
    poly = dict(parts)
    for k, c in _lower_chern_tail(ctx, top, D - 1).items():
        poly[k] = poly.get(k, ChowClass.zero(ctx)) - c
    return BlowupClass(x.pullback + i_pushforward(top), EClass.build(ctx, poly))


def mult_B(x: BlowupClass, y: BlowupClass) -> BlowupClass:
    _same_ctx(x.pullback, y.pullback)
    ctx = x.ctx
    pull = x.pullback * y.pullback
    exc = EClass(ctx, {})
    if not y.pullback.is_zero():
        exc = exc + x.exceptional * i_pullback(y.pullback)
    if not x.pullback.is_zero():
        exc = exc + y.exceptional * i_pullback(x.pullback)
    if not (x.exceptional.is_zero() or y.exceptional.is_zero()):
        exc = exc - (x.exceptional * y.exceptional).times_zeta()
    return normal_form(BlowupClass(pull, exc))


def blowup_degree(x: BlowupClass) -> ParamPoly:
    """Degree of a zero-dimensional class.

    After the normal form the exceptional part cannot carry a point, since
    ``sigma_bar_p zeta^k`` with ``k <= D - 2`` and total codimension
    ``2D`` would need ``|p| > D``.
    """
    return tensor_degree(normal_form(x).pullback)


def as_exceptional(x: BlowupClass) -> EClass:
    """The unique ``e`` with ``j_*(e) = x``; raises if ``x`` is not of that form."""
    ctx = x.ctx
    nf = normal_form(x)
    c = ChowClass(ctx, collect((a, coeff) for (a, b), coeff in nf.pullback.terms.items()
                               if b == ctx.top))
    if i_pushforward(c) != nf.pullback:
        raise DomainError(f"{x} is not supported on the exceptional divisor")
    poly = {ctx.dim - 1: c, **_lower_chern_tail(ctx, c, ctx.dim - 1)}
    return EClass.build(ctx, poly) + nf.exceptional


# --- classes of the proper transforms ---------------------------------------

def projcur_class(curve: Any, c1F: Any, K_deg: Coefficient, rank: int, *, zeta: Any,
                  base_point: Any) -> Any:
    """Class of ``P(L)`` for a line subbundle ``L`` of ``F|_X`` over a curve ``X``.

    ``zeta^(r-1) [X] + zeta^(r-2) (c_1(F)[X] + K_X)``, where ``K_X`` is
    ``K_deg`` times ``base_point``.  Works over any ring with ``+`` and ``*``.
    """
    if rank < 2:
        raise DomainError(f"projective bundle needs rank >= 2, got {rank}")
    lower = c1F * curve + base_point * param(K_deg)
    for _ in range(rank - 2):
        lower = zeta * lower
    upper = zeta * curve
    for _ in range(rank - 2):
        upper = zeta * upper
    return upper + lower


def exceptional_porteous(ctx: GrassContext):
    """Class of ``D1_tilde`` restricted to ``E`` via Porteous on ``E``.

    Locus in ``P(Hom(S, Q))`` where ``O(-1) (x) S -> Q`` has rank at most ``n - 1``.
    """
    S, Q = tautological_bundles(ctx)
    one = EClass.one(ctx)
    top = 2 * ctx.dim - 1
    S_E = bundles.bundle(S.rank, [EClass.base(S.c(i)) for i in range(1, S.rank + 1)], one, top)
    Q_E = bundles.bundle(Q.rank, [EClass.base(Q.c(i)) for i in range(1, Q.rank + 1)], one, top)
    twisted = bundles.twist_by_line(S_E, -EClass.zeta(ctx))
    return bundles.porteous(twisted, Q_E, ctx.n - 1), twisted


@dataclass(frozen=True)
class ProperTransform:
    cls: BlowupClass
    multiplicity: int
    restriction: EClass


def _e_basis(ctx: GrassContext, codim: int) -> list[tuple[Partition, int]]:
    return [(lam, k) for k in range(0, min(codim, ctx.dim - 2) + 1)
            for lam in ctx.partitions_of(codim - k)]


@lru_cache(maxsize=None)
def solve_D1_tilde(ctx: GrassContext) -> ProperTransform:
    """Solve ``[E] (pi^*[D1] + j_*(mu)) = m j_*(P)`` for ``mu`` and ``m``.

    ``P`` is the Porteous class on ``E``; the unknowns are the integer
    coefficients of ``mu`` and the multiplicity ``m``.
    """
    D1 = degeneracy_class(ctx, 1)
    codim = max(D1.codimensions())
    P, _ = exceptional_porteous(ctx)
    restricted = EClass.base(i_pullback(D1))
    basis = _e_basis(ctx, codim - 1)
    unknowns = sympy.symbols(f"n0:{len(basis)}")
    m = sympy.Symbol("m")
    lhs: dict[tuple, Any] = {}
    for key, x in restricted.terms.items():
        lhs[key] = lhs.get(key, 0) + int(x.LC)
    for sym, (lam, k) in zip(unknowns, basis):
        prod = EClass(ctx, {(lam, k): param(1)}).times_zeta()
        for key, x in prod.terms.items():
            lhs[key] = lhs.get(key, 0) - sym * int(x.LC)
    for key, x in P.terms.items():
        lhs[key] = lhs.get(key, 0) - m * int(x.LC)
    eqs = [sympy.Eq(v, 0) for v in lhs.values()]
    solutions = sympy.linsolve(eqs, [*unknowns, m])
    if not solutions:
        raise InternalError(f"no proper transform of D1 solves the restriction equation in {ctx}")
    (sol,) = solutions
    if any(v.free_symbols for v in sol) or any(not v.is_integer for v in sol):
        raise InternalError(f"proper transform of D1 not uniquely determined in {ctx}: {sol}")
    mu = EClass(ctx, collect((key, int(v)) for key, v in zip(basis, sol[:-1])))
    multiplicity = int(sol[-1])
    result = BlowupClass(D1, EClass(ctx, {})) + BlowupClass.j(mu)
    if mult_B(BlowupClass.exceptional_divisor(ctx), result) != BlowupClass.j(P.scale(multiplicity)):
        raise InternalError("solved proper transform fails the restriction identity")
    return ProperTransform(result, multiplicity, P)


def class_D1_tilde(ctx: GrassContext) -> BlowupClass:
    return solve_D1_tilde(ctx).cls


def curve_partition(ctx: GrassContext) -> Partition:
    """Partition of the class of a curve in ``G``: the top box minus one square."""
    if ctx.n != 2:
        raise DomainError(f"families of lines live in Gr(2, N), not {ctx}")
    return check_partition((ctx.width, ctx.width - 1), ctx)


def gamma_restriction(ctx: GrassContext, g: Coefficient = "g", dv: Coefficient = "dv") -> EClass:
    """``[E cap Gamma_tilde]``: the projectivized tangent bundle of the diagonal curve.

    The curve of tangent lines has class ``dv sigma_c`` and genus ``g``.
    """
    c = curve_partition(ctx)
    chern = tangent_chern(ctx)
    return projcur_class(EClass.base(sigma(ctx, *c, coeff=dv)), EClass.base(chern[1]),
                         2 * param(g) - 2, ctx.dim, zeta=EClass.zeta(ctx),
                         base_point=EClass.base(sigma(ctx, *ctx.top)))


def class_Gamma_tilde(ctx: GrassContext, g: Coefficient = "g", dv: Coefficient = "dv") -> BlowupClass:
    """Proper transform of ``C x C``: ``pi^*[C x C] - j_*(restriction / zeta)``.

    ``[E][Gamma_tilde] = j_*(i^*[C x C] + zeta nu)`` and ``i^*[C x C] = 0``,
    so ``nu`` is the restriction divided by ``zeta``.
    """
    c = curve_partition(ctx)
    dv = param(dv)
    gamma = TensorClass(ctx, {(c, c): dv * dv})
    if not i_pullback(gamma).is_zero():
        raise InternalError("curve classes should not meet on the diagonal of G")
    nu = gamma_restriction(ctx, g, dv).divide_by_zeta()
    return BlowupClass(gamma, EClass(ctx, {})) - BlowupClass.j(nu)


def c1_tangent_blowup(ctx: GrassContext) -> BlowupClass:
    """``c_1(T_B) = pi^* c_1(T_{G x G}) + j_*(1 - codim of the diagonal)``."""
    c1 = tangent_chern(ctx)[1]
    pulled = tensor_of(c1, ChowClass.one(ctx)) + tensor_of(ChowClass.one(ctx), c1)
    return BlowupClass.pi(pulled) + BlowupClass.j(EClass.one(ctx).scale(1 - ctx.dim))
