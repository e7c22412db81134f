import pytest

from skewcalc import pipeline as P
from skewcalc.params import as_int, d, dv, evaluate, g, substitute_dv
from skewcalc.pipeline import _c1_D1_tilde_degree
from skewcalc.schubert import DomainError


def test_dimension_formulas():
    assert P.dim_Dr(1, 2, 4) == 7
    assert P.dim_Dr(2, 2, 5) == P.GR25.dim
    assert P.dim_Dr(0, 2, 5) == 12
    with pytest.raises(DomainError):
        P.dim_Dr(0, 2, 3)


def test_msdim_bounds():
    assert P.msdim_bounds(1) == (3, 5)
    assert P.msdim_bounds(2) == (6, 9)
    with pytest.raises(DomainError):
        P.msdim_bounds(0)


def test_curve_invariants():
    c = P.CurveInvariants(4, 8, 5)
    assert c.dv == 24 and c.K_deg == 8
    with pytest.raises(DomainError):
        P.CurveInvariants(4, 0, 0)


def test_p3_intersection():
    a = P.p3_analysis()
    assert a.product == (dv ** 2 - 2 * dv, 4 * dv ** 2 - 10 * dv - 4 * g + 4)
    assert a.restriction == (dv, 4 * dv + 2 * g - 2)
    assert a.multiplicity == dv - 2
    assert a.residual == -2 * dv * g
    assert a.genus_zero_forced


def test_twisted_cubic_p3_values():
    a = P.p3_analysis(g=0, dv=4)
    assert a.product == (8, 28)
    assert a.multiplicity == 2 and a.residual == 0


def test_scroll_degree():
    assert P.scroll_degree(1, 1) == 2
    assert P.scroll_degree(2, 2) == 4
    assert P.scroll_degree(1, 2) == 3
    with pytest.raises(DomainError):
        P.scroll_degree(0, 1)


def test_p4_scroll_count():
    count = P.p4_scroll_count()
    assert count == dv ** 2 - 5 * dv - 6 * g + 6
    assert evaluate(count, dv=3, g=0) == 0
    assert evaluate(count, dv=5, g=1) == 0
    assert evaluate(count, dv=4, g=0) == 2


def test_p4_rings():
    rings = P.build_p4_rings()
    t = rings.delta_tilde
    e, zq, zh = t.gen("e"), t.gen("ζQ"), t.gen("ζH")
    assert str(rings.hom_bundle.c(1)) == "e + 4*ζQ"
    assert e ** 3 * zq ** 4 == -(e ** 4 * zq ** 3)
    assert e ** 4 * zq ** 4 == t.zero
    assert (e ** 4 * zq ** 3 * zh ** 2).degree() == 1
    assert t.dim == 9


def test_tilde_delta_gamma_class():
    x = P.tilde_delta_gamma_class()
    t = x.ring
    e, zq, zh = t.gen("e"), t.gen("ζQ"), t.gen("ζH")
    expected = ((e ** 3 * zq ** 3 * zh ** 2).scale(d) + (e ** 4 * zq ** 2 * zh ** 2).scale(2 * d + 2 * g - 2)
                + (e ** 4 * zq ** 3 * zh).scale(5 * d + 10 * g - 10))
    assert x == expected


def test_hat_gamma_class():
    rings = P.build_p4_rings()
    x = P.hat_gamma_class(rings)
    r = rings.delta_hat
    e, zq = r.gen("e"), r.gen("ζQ")
    assert x == (e ** 3 * zq ** 3).scale(d) + (e ** 4 * zq ** 2).scale(2 * d + 2 * g - 2)


def test_tangent_chern_classes_of_the_p4_spaces():
    rings = P.build_p4_rings()
    assert str(P.c1_T_delta_hat(rings)) == "6*e + 4*ζQ"
    hat_d1 = P.c1_T_D1_hat(rings)
    r = rings.d1_hat
    assert hat_d1 == r.gen("e") * 7 + r.gen("ζ1") * 4 + r.gen("ζ2") * 4
    assert P.c1_T_D1_tilde(rings).exceptional == -2


def test_degree_ledger_symbolic():
    L = P.p4_degree_ledger()
    assert L.c1_D1_tilde == 15 * d + 20 * g - 20
    assert L.c1_B == 10 * dv + 10 * g - 10
    assert L.c1_curve == 2 - 2 * g
    assert L.c1_Gamma == 4 - 4 * g
    assert L.c1_B_dagger == 10 * dv + 30 * g - 30
    assert L.c1_D1_dagger == 15 * d + 36 * g - 36
    assert L.normal_B == 10 * dv + 12 * g - 12
    assert L.normal_D1 == 15 * d + 22 * g - 22


def test_degree_ledger_at_8_5():
    values = [as_int(x) for x in P.p4_degree_ledger(8, 5).entries().values()][:6]
    assert values == [200, 280, -8, -16, 360, 264]


def test_curve_bundle_numerics():
    num = P.CurveBundleNumerics(11, 10 * dv + 12 * g - 12)
    z, F = num.zeta, num.F
    assert (F * z ** 10).degree() == 1
    assert F * F == num.ring.zero
    assert z ** 11 == (F * z ** 10).scale(-(10 * dv + 12 * g - 12))
    num_d = P.CurveBundleNumerics(9, 15 * d + 22 * g - 22)
    assert (num_d.zeta ** 9).degree() == -(15 * d + 22 * g - 22)
    with pytest.raises(DomainError):
        num.subbundle_class(11, 0)
    with pytest.raises(DomainError):
        num.divide_by_zeta(F)


def test_dagger_terms():
    t = P.dagger_terms()
    assert str(t.mu) == "(10*dv - 15*d - 10*g + 10)*F + ζ"
    assert str(t.nu) == "(10*dv + 14*g - 14)*F*ζ^8 + ζ^9"
    assert t.total == dv ** 2 - 15 * dv + 15 * d + 2 * g - 2
    assert evaluate(t.total, d=8, g=5) == 344
    assert evaluate(t.total, d=4, g=0) == 4


def test_excess_term():
    ex = P.excess_term()
    assert ex == 10 * dv - 15 * d - 4 * g + 4
    assert P.excess_term_via_segre() == ex
    assert evaluate(ex, d=8, g=5) == 104
    assert evaluate(ex, d=4, g=0) == 4


def test_nonskew_count():
    count = P.nonskew_count()
    assert count == P.dagger_intersection() - P.excess_term()
    assert substitute_dv(count) == P.nonskew_closed_form_d()
    assert substitute_dv(count) == substitute_dv(P.nonskew_closed_form_dv())
    assert [P.nonskew_number(*x) for x in [(8, 5), (4, 0), (5, 1), (5, 0), (6, 0)]] == [240, 0, 0, 8, 24]


def test_castelnuovo_bound():
    assert P.castelnuovo_bound(5, 4) == 1
    assert P.castelnuovo_bound(4, 4) == 0
    assert P.castelnuovo_bound(4, 3) == 1
    with pytest.raises(DomainError):
        P.castelnuovo_bound(3, 4)


def test_classification():
    c = P.classify_p4()
    assert c.candidates == [(0, 4), (1, 5), (2, 5), (5, 4)]
    assert c.final == [(0, 4), (1, 5)]
    assert [x for x, _ in c.excluded] == [(2, 5), (5, 4)]


def test_truncated_relation_agrees_in_used_degrees():
    full, trunc = P.build_p4_rings(), P.build_p4_rings(truncated=True)
    xf, xt = P.tilde_delta_gamma_class(rings=full), P.tilde_delta_gamma_class(rings=trunc)
    assert xf.terms == xt.terms
    for name in ("e", "ζQ", "ζH"):
        assert (xf * full.delta_tilde.gen(name)).degree() == (xt * trunc.delta_tilde.gen(name)).degree()
    assert _c1_D1_tilde_degree(None, None, full) == _c1_D1_tilde_degree(None, None, trunc)


def test_consistency_and_report():
    assert all(P.consistency_checks().values())
    report = P.pipeline_report(8, 5)
    assert report["evaluated"]["nonskew_count"] == 240
    assert report["evaluated"]["dagger_intersection"] == 344
    assert report["evaluated"]["excess_term"] == 104
    assert report["p4"]["nonskew_count_in_d_g"] == str(P.nonskew_closed_form_d())
