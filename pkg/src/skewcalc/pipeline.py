"""End-to-end computations for tangent-line skewness of curves in P^3 and P^4.

Curves are described by degree ``d``, genus ``g`` and dual degree ``dv``.
Their tangent lines form a curve ``C`` in ``Gr(2, N + 1)``; a pair of tangent
lines meets exactly when the corresponding point of ``C x C`` lies on the
degeneracy locus ``D_1``.  The count of meeting pairs is the degree of
``D_1 . (C x C)`` once the diagonal is removed by two blowups, the second
contributing an excess term along the diagonal curve.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from . import bundles
from .blowup import (BlowupClass, EClass, as_exceptional, blowup_degree, c1_tangent_blowup,
                     class_D1_tilde, class_Gamma_tilde, gamma_restriction, mult_B,
                     projcur_class)
from .params import (Coefficient, ParamPoly, d as D_SYM, dv as DV_SYM, equal_on_curves,
                     evaluate, format_param, g as G_SYM, param, substitute_dv)
from .rings import QElement, QuotientRingSpec
from .schubert import DomainError, GrassContext

GR24 = GrassContext(2, 4)
GR25 = GrassContext(2, 5)


@dataclass(frozen=True)
class CurveInvariants:
    """A smooth curve of degree ``d`` and genus ``g`` in ``P^N``."""

    N: int
    d: int
    g: int

    def __post_init__(self) -> None:
        if self.d < 1 or self.g < 0:
            raise DomainError(f"need d >= 1 and g >= 0, got d={self.d}, g={self.g}")
        if self.N < 2:
            raise DomainError(f"ambient dimension must be at least 2, got {self.N}")

    @property
    def dv(self) -> int:
        return 2 * self.d + 2 * self.g - 2

    @property
    def K_deg(self) -> int:
        return 2 * self.g - 2


def _params(d: Coefficient | None, g: Coefficient | None, dv: Coefficient | None
            ) -> tuple[ParamPoly, ParamPoly, ParamPoly]:
    """Default to symbols; tie ``dv`` to ``d`` and ``g`` when both are numbers."""
    if dv is None:
        if isinstance(d, int) and isinstance(g, int):
            dv = 2 * d + 2 * g - 2
        else:
            dv = DV_SYM
    return (param(D_SYM if d is None else d), param(G_SYM if g is None else g), param(dv))


# --- the degeneracy filtration ----------------------------------------------

def dim_Dr(r: int, n: int, N: int) -> int:
    """Dimension of the locus of pairs of ``n``-planes meeting in dimension ``>= r``."""
    if not (max(2 * n - N, 0) <= r <= n):
        raise DomainError(f"r={r} outside {max(2 * n - N, 0)}..{n} for Gr({n},{N})")
    return r * (N - r) + 2 * (n - r) * (N - n)


def msdim_bounds(n: int) -> tuple[int, int]:
    """Bounds ``3n <= msdim X <= 4n + 1`` for an ``n``-dimensional variety."""
    if n < 1:
        raise DomainError(f"dimension must be positive, got {n}")
    return 3 * n, 4 * n + 1


# --- P^3 --------------------------------------------------------------------

def _p3_keys(ctx: GrassContext):
    return ((2, 1), ctx.dim - 1), ((2, 2), ctx.dim - 2)


def p3_intersection(g: Coefficient | None = None, dv: Coefficient | None = None
                    ) -> tuple[ParamPoly, ParamPoly]:
    """Coefficients of ``j_*(sigma_bar_21 zeta^3)`` and ``j_*(sigma_bar_22 zeta^2)`` in ``[D1~][Gamma~]``."""
    _, g, dv = _params(None, g, dv)
    product = as_exceptional(mult_B(class_D1_tilde(GR24), class_Gamma_tilde(GR24, g, dv)))
    k1, k2 = _p3_keys(GR24)
    rest = product - EClass(GR24, {k1: product.coefficient(k1), k2: product.coefficient(k2)})
    if not rest.is_zero():
        raise ValueError(f"unexpected terms in the P^3 product: {rest}")
    return product.coefficient(k1), product.coefficient(k2)


def p3_restriction(g: Coefficient | None = None, dv: Coefficient | None = None
                   ) -> tuple[ParamPoly, ParamPoly]:
    """The same two coefficients of ``[E cap Gamma~]``."""
    _, g, dv = _params(None, g, dv)
    restricted = gamma_restriction(GR24, g, dv)
    k1, k2 = _p3_keys(GR24)
    return restricted.coefficient(k1), restricted.coefficient(k2)


@dataclass(frozen=True)
class P3Analysis:
    product: tuple[ParamPoly, ParamPoly]
    restriction: tuple[ParamPoly, ParamPoly]
    multiplicity: ParamPoly
    residual: ParamPoly

    @property
    def genus_zero_forced(self) -> bool:
        """The residual is a nonzero multiple of ``g``, so it vanishes only for ``g = 0``."""
        return bool(self.residual) and self.residual.compose(G_SYM, param(0)) == 0


def p3_analysis(g: Coefficient | None = None, dv: Coefficient | None = None) -> P3Analysis:
    """Compare ``[D1~][Gamma~]`` with the multiple ``m [E cap Gamma~]`` it would have to be.

    A skew curve has ``D1~ cap Gamma~`` supported on ``E``; the leading
    coefficient fixes ``m`` and the second one leaves a residual that must vanish.
    """
    product = p3_intersection(g, dv)
    restriction = p3_restriction(g, dv)
    multiplicity, remainder = divmod(product[0], restriction[0])
    if remainder:
        raise ValueError("leading coefficients are not proportional")
    residual = product[1] - multiplicity * restriction[1]
    return P3Analysis(product, restriction, multiplicity, residual)


def scroll_degree(d1: int, d2: int) -> int:
    """Degree of the scroll joining two embeddings of degrees ``d1`` and ``d2``."""
    if d1 < 1 or d2 < 1:
        raise DomainError(f"scroll bidegree must be positive, got ({d1},{d2})")
    return d1 + d2


# --- P^4 scroll count --------------------------------------------------------

def p4_scroll_count(g: Coefficient | None = None, dv: Coefficient | None = None) -> ParamPoly:
    """Degree of ``[D1~][Gamma~]`` over ``Gr(2, 5)``."""
    _, g, dv = _params(None, g, dv)
    return blowup_degree(mult_B(class_D1_tilde(GR25), class_Gamma_tilde(GR25, g, dv)))


# --- rings over P^4 -----------------------------------------------------------

def _projective_relation(ring: QuotientRingSpec, base: str, fibre: str, rank: int) -> QuotientRingSpec:
    """``sum_i base^i fibre^(rank - i) = 0``: the bundle with ``c(F) = 1/(1 - base)``."""
    e, z = ring.gen(base), ring.gen(fibre)
    tail = ring.zero
    for i in range(1, rank + 1):
        tail = tail + (e ** i) * (z ** (rank - i))
    return ring.with_rule(fibre, rank, -tail)


@dataclass(frozen=True)
class P4Rings:
    delta_hat: QuotientRingSpec
    d1_hat: QuotientRingSpec
    delta_tilde: QuotientRingSpec
    hom_bundle: bundles.FormalBundle

    def to_tilde(self, x: QElement) -> QElement:
        """Pull a class from ``A(Delta^_D)`` or ``A(D^_1)`` back to ``A(Delta~_D)``."""
        t = self.delta_tilde
        images = {"e": t.gen("e"), "ζQ": t.gen("ζQ"), "ζ1": t.gen("ζQ"), "ζ2": t.gen("ζQ")}
        return x.map_to(t, {name: images[name] for name in x.ring.generators})


def build_p4_rings(truncated: bool = False) -> P4Rings:
    """``A(Delta^_D)``, ``A(D^_1)`` and ``A(Delta~_D)``.

    ``Delta~_D`` is the projectivization of ``Hom(S2/S1, V/S2)`` over
    ``Delta^_D``.  With ``truncated`` only ``c_1`` of that bundle enters the
    ``zeta_H`` relation.
    """
    free = QuotientRingSpec.free("A(Δ^_D)", ["e", "ζQ"])
    hat = _projective_relation(free.with_rule("e", 5, 0), "e", "ζQ", 4)
    e, zq = hat.gen("e"), hat.gen("ζQ")
    hat = hat.with_point(e ** 4 * zq ** 3)
    e, zq = hat.gen("e"), hat.gen("ζQ")

    dim = hat.dim
    S1 = bundles.line_bundle(-e, hat.one, dim)
    quotient_line = bundles.line_bundle(-zq, hat.one, dim)
    S2 = bundles.direct_sum(S1, quotient_line)
    V_mod_S2 = bundles.FormalBundle(3, tuple(bundles.segre(S2)))
    hom = bundles.twist_by_line(V_mod_S2, zq)

    d1 = QuotientRingSpec.free("A(D^_1)", ["e", "ζ1", "ζ2"]).with_rule("e", 5, 0)
    d1 = _projective_relation(_projective_relation(d1, "e", "ζ1", 4), "e", "ζ2", 4)
    d1 = d1.with_point(d1.gen("e") ** 4 * d1.gen("ζ1") ** 3 * d1.gen("ζ2") ** 3)

    free3 = QuotientRingSpec.free("A(Δ~_D)", ["e", "ζQ", "ζH"]).with_rule("e", 5, 0)
    tilde = _projective_relation(free3, "e", "ζQ", 4)
    zh = tilde.gen("ζH")
    top = 1 if truncated else 3
    tail = tilde.zero
    for j in range(1, top + 1):
        tail = tail + hom.c(j).map_to(tilde, {"e": tilde.gen("e"), "ζQ": tilde.gen("ζQ")}) * zh ** (3 - j)
    tilde = tilde.with_rule("ζH", 3, -tail)
    tilde = tilde.with_point(tilde.gen("e") ** 4 * tilde.gen("ζQ") ** 3 * tilde.gen("ζH") ** 2)
    return P4Rings(hat, d1, tilde, hom)


def hat_gamma_class(rings: P4Rings, d: Coefficient | None = None, g: Coefficient | None = None
                    ) -> QElement:
    """Class of the tangent directions of the curve inside ``P(T_P4) = Delta^_D``.

    ``zeta_T = zeta_Q - e`` converts the tautological class of ``P(T_P4)`` into
    that of ``P(Q)``.
    """
    d, g, _ = _params(d, g, 0)
    ring = rings.delta_hat
    e, zq = ring.gen("e"), ring.gen("ζQ")
    return projcur_class(e ** 3 * d, e * 5, 2 * g - 2, 4, zeta=zq - e, base_point=e ** 4)


def tilde_delta_gamma_class(d: Coefficient | None = None, g: Coefficient | None = None,
                            rings: P4Rings | None = None) -> QElement:
    """``[Delta~_Gamma]`` in ``A(Delta~_D)``."""
    rings = rings or build_p4_rings()
    d, g, _ = _params(d, g, 0)
    t = rings.delta_tilde
    hat_x = rings.to_tilde(hat_gamma_class(rings, d, g))
    c1_hom = rings.to_tilde(rings.hom_bundle.c(1))
    base = t.gen("e") ** 4 * t.gen("ζQ") ** 3
    return projcur_class(hat_x, c1_hom, 2 * g - 2, 3, zeta=t.gen("ζH"), base_point=base)


# --- first Chern classes of tangent bundles -----------------------------------

def c1_projective_bundle(rank: int, zeta: Any, c1F: Any, c1_base: Any) -> Any:
    """``c_1(T_P(F)) = rank * zeta + c_1(F) + c_1(T_Y)``."""
    return zeta * rank + c1F + c1_base


@dataclass(frozen=True)
class BlowupDivisor:
    """``pi^*(pullback) + j_*(exceptional)`` for a divisor on a blowup."""

    pullback: QElement
    exceptional: int

    def restrict_to_exceptional(self, pulled: QElement, zeta: QElement) -> QElement:
        """Restriction to ``E``, where ``[E]|_E = -zeta``."""
        return pulled - zeta * self.exceptional


def c1_blowup(c1_base: QElement, codim: int) -> BlowupDivisor:
    """``c_1(T_Y~) = pi^* c_1(T_Y) + j_*(1 - codim)``."""
    return BlowupDivisor(c1_base, 1 - codim)


def c1_T_delta_hat(rings: P4Rings) -> QElement:
    r = rings.delta_hat
    e = r.gen("e")
    return c1_projective_bundle(4, r.gen("ζQ"), e, e * 5)


def c1_T_D1_hat(rings: P4Rings) -> QElement:
    r = rings.d1_hat
    e = r.gen("e")
    first = c1_projective_bundle(4, r.gen("ζ1"), e, e * 5)
    return c1_projective_bundle(4, r.gen("ζ2"), e, first)


def c1_T_D1_tilde(rings: P4Rings | None = None) -> BlowupDivisor:
    rings = rings or build_p4_rings()
    codim = rings.d1_hat.dim - rings.delta_hat.dim
    return c1_blowup(c1_T_D1_hat(rings), codim)


# --- numerical classes over a curve -----------------------------------------

def curve_ring() -> QuotientRingSpec:
    ring = QuotientRingSpec.free("A(X)", ["P"]).with_rule("P", 2, 0)
    return ring.with_point(ring.gen("P"))


def curve_square_ring() -> QuotientRingSpec:
    ring = QuotientRingSpec.free("A(X×X)", ["x1", "x2"]).with_rule("x1", 2, 0).with_rule("x2", 2, 0)
    return ring.with_point(ring.gen("x1") * ring.gen("x2"))


@dataclass(frozen=True)
class CurveBundleNumerics:
    """Numerical ring of ``P(N)`` for a rank ``r`` bundle ``N`` over a curve.

    Spanned by ``zeta^k`` and ``F zeta^k``; ``F^2 = 0``, ``F zeta^(r-1)`` is a
    point and ``zeta^r = -deg c_1(N) F zeta^(r-1)``.
    """

    rank: int
    c1_degree: ParamPoly
    ring: QuotientRingSpec = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise DomainError(f"rank must be positive, got {self.rank}")
        base = QuotientRingSpec.free(f"N(P^{self.rank - 1}-bundle)", ["F", "ζ"]).with_rule("F", 2, 0)
        F, z = base.gen("F"), base.gen("ζ")
        ring = base.with_rule("ζ", self.rank, -(F * z ** (self.rank - 1)).scale(self.c1_degree))
        object.__setattr__(self, "ring", ring.with_point(F * z ** (self.rank - 1)))

    @property
    def zeta(self) -> QElement:
        return self.ring.gen("ζ")

    @property
    def F(self) -> QElement:
        return self.ring.gen("F")

    def subbundle_class(self, sub_rank: int, c1_quotient: Coefficient) -> QElement:
        """``[P(L)]`` for a rank ``s`` subbundle: ``zeta^(r-s) + c_1(N/L) F zeta^(r-s-1)``."""
        k = self.rank - sub_rank
        if k < 1:
            raise DomainError(f"subbundle rank {sub_rank} must be below {self.rank}")
        return self.zeta ** k + (self.F * self.zeta ** (k - 1)).scale(c1_quotient)

    def restricted_blowup_c1(self, base_degree: Coefficient) -> QElement:
        """``c_1`` of the blown-up space restricted to the exceptional divisor."""
        return self.F.scale(base_degree) + self.zeta * (self.rank - 1)

    def divide_by_zeta(self, x: QElement) -> QElement:
        i = self.ring.index("ζ")
        out = {}
        for mono, c in x.normal_form().terms.items():
            if mono[i] == 0:
                raise DomainError(f"{x} is not divisible by ζ")
            out[tuple(e - 1 if j == i else e for j, e in enumerate(mono))] = c
        return QElement(self.ring, out)

    def degree(self, x: QElement) -> ParamPoly:
        return x.degree()


@dataclass(frozen=True)
class DegreeLedger:
    """Degrees of first Chern classes restricted to the diagonal curve."""

    c1_D1_tilde: ParamPoly
    c1_B: ParamPoly
    c1_curve: ParamPoly
    c1_Gamma: ParamPoly
    c1_B_dagger: ParamPoly
    c1_D1_dagger: ParamPoly
    normal_B: ParamPoly
    normal_D1: ParamPoly

    def entries(self) -> dict[str, ParamPoly]:
        return {
            "restricted_c1_D1_tilde": self.c1_D1_tilde,
            "restricted_c1_blowup": self.c1_B,
            "c1_diagonal_curve": self.c1_curve,
            "restricted_c1_Gamma": self.c1_Gamma,
            "restricted_c1_blowup_dagger": self.c1_B_dagger,
            "restricted_c1_D1_dagger": self.c1_D1_dagger,
            "c1_normal_in_blowup": self.normal_B,
            "c1_normal_in_D1_tilde": self.normal_D1,
        }


def _c1_D1_tilde_degree(d, g, rings: P4Rings) -> ParamPoly:
    divisor = c1_T_D1_tilde(rings)
    restricted = divisor.restrict_to_exceptional(rings.to_tilde(divisor.pullback),
                                                 rings.delta_tilde.gen("ζH"))
    return (tilde_delta_gamma_class(d, g, rings) * restricted).degree()


def _c1_B_degree(g, dv) -> ParamPoly:
    curve = BlowupClass.j(gamma_restriction(GR25, g, dv))
    return blowup_degree(mult_B(curve, c1_tangent_blowup(GR25)))


def _c1_curve_degree(g) -> ParamPoly:
    ring = curve_ring()
    K = ring.gen("P").scale(2 * g - 2)
    return (-K).degree()


def _c1_gamma_degree(g) -> ParamPoly:
    ring = curve_square_ring()
    x1, x2 = ring.gen("x1"), ring.gen("x2")
    diagonal = x1 + x2
    c1 = -(x1 + x2).scale(2 * g - 2)
    return (diagonal * c1).degree()


def _dims() -> tuple[int, int]:
    return 2 * GR25.dim, build_p4_rings().d1_hat.dim


def p4_degree_ledger(d: Coefficient | None = None, g: Coefficient | None = None,
                     dv: Coefficient | None = None) -> DegreeLedger:
    d, g, dv = _params(d, g, dv)
    rings = build_p4_rings()
    dim_B, dim_D1 = _dims()
    c1_D = _c1_D1_tilde_degree(d, g, rings)
    c1_B = _c1_B_degree(g, dv)
    c1_X = _c1_curve_degree(g)
    c1_G = _c1_gamma_degree(g)
    normal_B, normal_D = c1_B - c1_X, c1_D - c1_X

    e_dagger = CurveBundleNumerics(dim_B - 1, normal_B)
    diag_B = e_dagger.subbundle_class(1, c1_B - c1_G)
    c1_B_dagger = e_dagger.degree(diag_B * e_dagger.restricted_blowup_c1(c1_B))

    e_dagger_D = CurveBundleNumerics(dim_D1 - 1, normal_D)
    diag_D = e_dagger_D.subbundle_class(1, c1_D - c1_G)
    c1_D_dagger = e_dagger_D.degree(diag_D * e_dagger_D.restricted_blowup_c1(c1_D))
    return DegreeLedger(c1_D, c1_B, c1_X, c1_G, c1_B_dagger, c1_D_dagger, normal_B, normal_D)


@dataclass(frozen=True)
class DaggerTerms:
    scroll: ParamPoly
    mu: QElement
    nu: QElement
    correction: ParamPoly

    @property
    def total(self) -> ParamPoly:
        return self.scroll - self.correction


def dagger_terms(d: Coefficient | None = None, g: Coefficient | None = None,
                 dv: Coefficient | None = None) -> DaggerTerms:
    """``[D1+][Gamma+] = [D1~][Gamma~] - deg(mu nu zeta)`` on the second blowup.

    ``mu`` and ``nu`` are the classes of ``E+ cap D1+`` and ``E+ cap Gamma+``
    divided by ``zeta``.
    """
    d, g, dv = _params(d, g, dv)
    ledger = p4_degree_ledger(d, g, dv)
    dim_B, dim_D1 = _dims()
    num = CurveBundleNumerics(dim_B - 1, ledger.normal_B)
    mu = num.divide_by_zeta(num.subbundle_class(dim_D1 - 1, ledger.c1_B - ledger.c1_D1_tilde))
    nu = num.divide_by_zeta(num.subbundle_class(1, ledger.c1_B - ledger.c1_Gamma))
    correction = num.degree(mu * nu * num.zeta)
    return DaggerTerms(p4_scroll_count(g, dv), mu, nu, correction)


def dagger_intersection(d: Coefficient | None = None, g: Coefficient | None = None,
                        dv: Coefficient | None = None) -> ParamPoly:
    return dagger_terms(d, g, dv).total


def excess_term(d: Coefficient | None = None, g: Coefficient | None = None,
                dv: Coefficient | None = None) -> ParamPoly:
    """Excess contribution of the diagonal curve, assembled from the ledger."""
    L = p4_degree_ledger(d, g, dv)
    return L.c1_B_dagger - L.c1_Gamma - L.c1_D1_dagger + L.c1_curve


def excess_term_via_segre(d: Coefficient | None = None, g: Coefficient | None = None,
                          dv: Coefficient | None = None) -> ParamPoly:
    """The same term as ``{c(N_X) c(N_Y) s(N_C)}`` in degree one on the curve."""
    L = p4_degree_ledger(d, g, dv)
    dim_B, dim_D1 = _dims()
    ring = curve_ring()
    P = ring.gen("P")

    def normal(rank: int, c1_degree: ParamPoly) -> bundles.FormalBundle:
        return bundles.bundle(rank, [P.scale(c1_degree)], ring.one, 1)

    N_D = normal(dim_B - dim_D1, L.c1_B_dagger - L.c1_D1_dagger)
    N_G = normal(dim_B - 2, L.c1_B_dagger - L.c1_Gamma)
    N_C = normal(dim_B - 1, L.c1_B_dagger - L.c1_curve)
    total = bundles.series_product(bundles.series_product(N_D.chern, N_G.chern, 1),
                                   bundles.segre(N_C), 1)
    return total[1].degree()


def nonskew_count(d: Coefficient | None = None, g: Coefficient | None = None,
                  dv: Coefficient | None = None) -> ParamPoly:
    """Ordered pairs of meeting tangent lines of a curve in ``P^4``."""
    return dagger_intersection(d, g, dv) - excess_term(d, g, dv)


def nonskew_closed_form_dv() -> ParamPoly:
    return DV_SYM ** 2 - 10 * DV_SYM - 24 * G_SYM + 24


def nonskew_closed_form_d() -> ParamPoly:
    return (2 * D_SYM + 2 * G_SYM - 2) ** 2 - 20 * D_SYM - 44 * G_SYM + 44


def nonskew_number(d: int, g: int) -> int:
    """Numerical value of the count for a curve of degree ``d`` and genus ``g``."""
    return int(evaluate(substitute_dv(nonskew_count()), d=d, g=g))


# --- classification in P^4 -----------------------------------------------------

def castelnuovo_bound(d: int, N: int) -> int:
    """Largest genus of a nondegenerate smooth curve of degree ``d`` in ``P^N``."""
    if N < 2 or d < N:
        raise DomainError(f"no nondegenerate curve of degree {d} in P^{N}")
    m, eps = divmod(d - 1, N - 1)
    return m * (m - 1) * (N - 1) // 2 + m * eps


@dataclass(frozen=True)
class Classification:
    candidates: list[tuple[int, int]]
    excluded: list[tuple[tuple[int, int], str]]
    final: list[tuple[int, int]]


def classify_p4(dv_range: tuple[int, int] = (2, 16), min_degree: int = 4) -> Classification:
    """Genus and degree pairs ``(g, d)`` of curves in ``P^4`` with no meeting tangents.

    Solves ``dv^2 - 10 dv - 24 g + 24 = 0`` with ``dv = 2d + 2g - 2`` over the
    given range, then applies the Castelnuovo bound.
    """
    closed = nonskew_closed_form_dv()
    candidates = []
    for value in range(dv_range[0], dv_range[1] + 1):
        numerator = value * value - 10 * value
        if numerator % 24:
            continue
        genus = numerator // 24 + 1
        if genus < 0 or (value + 2 - 2 * genus) % 2:
            continue
        degree = (value + 2 - 2 * genus) // 2
        if degree < min_degree:
            continue
        if evaluate(closed, dv=value, d=degree, g=genus) != 0:
            raise ValueError(f"candidate (g={genus}, d={degree}) does not solve the count")
        candidates.append((genus, degree))
    excluded, final = [], []
    for genus, degree in candidates:
        bound = castelnuovo_bound(degree, 4)
        if genus > bound:
            excluded.append(((genus, degree), f"genus {genus} exceeds the Castelnuovo bound {bound} "
                                               f"for degree {degree} in P^4"))
        else:
            final.append((genus, degree))
    return Classification(candidates, excluded, final)


# --- report -------------------------------------------------------------------

def _fmt(p: ParamPoly) -> str:
    return format_param(p)


def pipeline_report(d: int | None = None, g: int | None = None) -> dict:
    """All intermediate quantities, symbolic and (when given) evaluated at ``(d, g)``."""
    ledger = p4_degree_ledger()
    terms = dagger_terms()
    excess = excess_term()
    count = nonskew_count()
    p3 = p3_analysis()
    rings = build_p4_rings()
    report: dict[str, Any] = {
        "schema": 1,
        "p3": {
            "product_coefficients": [_fmt(x) for x in p3.product],
            "restriction_coefficients": [_fmt(x) for x in p3.restriction],
            "multiplicity": _fmt(p3.multiplicity),
            "residual": _fmt(p3.residual),
        },
        "p4": {
            "scroll_count": _fmt(p4_scroll_count()),
            "hom_c1": str(rings.hom_bundle.c(1)),
            "tilde_delta_gamma": str(tilde_delta_gamma_class(rings=rings)),
            "ledger": {k: _fmt(v) for k, v in ledger.entries().items()},
            "mu": str(terms.mu),
            "nu": str(terms.nu),
            "dagger_intersection": _fmt(terms.total),
            "excess_term": _fmt(excess),
            "nonskew_count": _fmt(count),
            "nonskew_count_in_d_g": _fmt(substitute_dv(count)),
        },
    }
    if d is not None and g is not None:
        def value(p: ParamPoly) -> int:
            return int(evaluate(substitute_dv(p), d=d, g=g))

        report["evaluated"] = {
            "d": d, "g": g, "dv": 2 * d + 2 * g - 2,
            "ledger": {k: value(v) for k, v in ledger.entries().items()},
            "dagger_intersection": value(terms.total),
            "excess_term": value(excess),
            "nonskew_count": value(count),
        }
    return report


def consistency_checks() -> dict[str, bool]:
    """Identities that must hold; a failure indicates a bug in the ring arithmetic."""
    count = nonskew_count()
    return {
        "count_matches_dv_form": equal_on_curves(count, nonskew_closed_form_dv()),
        "count_matches_d_form": substitute_dv(count) == nonskew_closed_form_d(),
        "excess_routes_agree": equal_on_curves(excess_term(), excess_term_via_segre()),
        "p3_residual": p3_analysis().residual == -2 * DV_SYM * G_SYM,
    }
