import random

import pytest

from skewcalc.blowup import (BlowupClass, EClass, TensorClass, as_exceptional, blowup_degree,
                             class_D1_tilde, class_Gamma_tilde, degeneracy_class,
                             exceptional_porteous, gamma_restriction, i_pullback,
                             i_pushforward, mult_B, normal_form, projcur_class, solve_D1_tilde,
                             tensor_of, tensor_point)
from skewcalc.params import param
from skewcalc.schubert import ChowClass, DomainError, GrassContext, sigma

GR12 = GrassContext(1, 2)
GR24 = GrassContext(2, 4)
GR25 = GrassContext(2, 5)


def T(ctx, pairs):
    return TensorClass(ctx, {(a, b): param(c) for a, b, c in pairs})


def E(ctx, pairs):
    return EClass(ctx, {(lam, k): param(c) for lam, k, c in pairs})


def test_degeneracy_classes():
    assert degeneracy_class(GR24, 1) == T(GR24, [((1,), (), 1), ((), (1,), 1)])
    assert degeneracy_class(GR25, 1) == T(GR25, [((2,), (), 1), ((1,), (1,), 1), ((), (2,), 1)])
    assert degeneracy_class(GR24, 0) == TensorClass.one(GR24)
    with pytest.raises(DomainError):
        degeneracy_class(GR24, 3)


def test_i_pullback_examples():
    assert i_pullback(T(GR24, [((1,), (1,), 1)])) == sigma(GR24, 2) + sigma(GR24, 1, 1)
    assert i_pullback(TensorClass.one(GR24)) == ChowClass.one(GR24)
    assert i_pullback(T(GR24, [((2,), (2,), 1)])) == sigma(GR24, 2, 2)


def test_i_pushforward_examples():
    assert i_pushforward(sigma(GR24, 2, 1)) == T(GR24, [((2, 1), (2, 2), 1), ((2, 2), (2, 1), 1)])
    assert i_pushforward(sigma(GR25, 3, 3)) == tensor_point(GR25)
    assert i_pushforward(ChowClass.one(GR12)) == T(GR12, [((1,), (), 1), ((), (1,), 1)])


def test_diagonal_self_intersection_on_p1():
    diag = i_pullback(i_pushforward(ChowClass.one(GR12)))
    assert diag == sigma(GR12, 1, coeff=2)
    for c in (ChowClass.one(GR12), sigma(GR12, 1)):
        assert i_pullback(i_pushforward(c)) == c * diag


def test_exceptional_square():
    ex = BlowupClass.exceptional_divisor(GR24)
    assert ex * ex == BlowupClass.j(EClass.zeta(GR24).scale(-1))


def test_zeta_relation_in_gr25():
    # sigma_bar_32 zeta^6 = -5 sigma_bar_33 zeta^5
    lhs = EClass.base(sigma(GR25, 3, 2)).times_zeta(6)
    assert lhs == E(GR25, [((3, 3), 5, -5)])


def test_e_products_match_base_ring():
    for a in GR24.partitions:
        for b in GR24.partitions:
            prod = EClass.base(sigma(GR24, *a)) * EClass.base(sigma(GR24, *b))
            assert prod == EClass.base(sigma(GR24, *a) * sigma(GR24, *b))


def test_exceptional_porteous_classes():
    P24, twisted = exceptional_porteous(GR24)
    assert P24 == E(GR24, [((1,), 0, 2), ((), 1, 2)])
    P25, _ = exceptional_porteous(GR25)
    assert P25 == E(GR25, [((2,), 0, 3), ((1, 1), 0, 1), ((1,), 1, 5), ((), 2, 3)])


def test_twisted_segre_classes_in_gr24():
    _, twisted = exceptional_porteous(GR24)
    from skewcalc.bundles import segre
    s = segre(twisted)
    assert s[1] == E(GR24, [((1,), 0, 1), ((), 1, 2)])
    assert s[2] == E(GR24, [((2,), 0, 1), ((1,), 1, 3), ((), 2, 3)])
    assert twisted.c(1) == E(GR24, [((1,), 0, -1), ((), 1, -2)])


def test_proper_transform_of_d1():
    expected24 = BlowupClass.pi(degeneracy_class(GR24, 1)) - BlowupClass.j(EClass.one(GR24).scale(2))
    expected25 = (BlowupClass.pi(degeneracy_class(GR25, 1))
                  - BlowupClass.j(E(GR25, [((1,), 0, 5), ((), 1, 3)])))
    assert class_D1_tilde(GR24) == expected24
    assert class_D1_tilde(GR25) == expected25
    assert solve_D1_tilde(GR24).multiplicity == 1
    assert solve_D1_tilde(GR25).multiplicity == 1


def test_exceptional_restriction_of_d1_tilde():
    ex = BlowupClass.exceptional_divisor(GR24)
    assert as_exceptional(ex * class_D1_tilde(GR24)) == E(GR24, [((1,), 0, 2), ((), 1, 2)])
    ex5 = BlowupClass.exceptional_divisor(GR25)
    P25, _ = exceptional_porteous(GR25)
    assert as_exceptional(ex5 * class_D1_tilde(GR25)) == P25


def test_proper_transform_of_curve_square():
    exp3 = (BlowupClass.pi(T(GR24, [((2, 1), (2, 1), "dv^2")]))
            - BlowupClass.j(E(GR24, [((2, 1), 2, "dv"), ((2, 2), 1, "4*dv + 2*g - 2")])))
    exp4 = (BlowupClass.pi(T(GR25, [((3, 2), (3, 2), "dv^2")]))
            - BlowupClass.j(E(GR25, [((3, 2), 4, "dv"), ((3, 3), 3, "5*dv + 2*g - 2")])))
    assert class_Gamma_tilde(GR24) == exp3
    assert class_Gamma_tilde(GR25) == exp4
    assert gamma_restriction(GR25) == E(GR25, [((3, 2), 5, "dv"), ((3, 3), 4, "5*dv + 2*g - 2")])


def test_gamma_restriction_with_numeric_genus_one():
    # canonical class vanishes when g = 1
    assert gamma_restriction(GR24, 1, 10) == E(GR24, [((2, 1), 3, 10), ((2, 2), 2, 40)])


def test_projcur_rank_check():
    with pytest.raises(DomainError):
        projcur_class(1, 1, 0, 1, zeta=1, base_point=1)


def test_rule_iv_both_sides_agree():
    p = sigma(GR24, 2, 1)
    lhs = BlowupClass.j(EClass.base(p).times_zeta(3))
    rhs = normal_form(BlowupClass(TensorClass.zero(GR24), E(GR24, [((2, 1), 3, 1)])))
    assert lhs == rhs
    excess = (BlowupClass.pi(i_pushforward(p))
              - BlowupClass.j(E(GR24, [((2, 1), 3, 1), ((2, 2), 2, 4)])))
    assert excess == 0


def test_normal_form_of_zero_and_degree():
    assert normal_form(BlowupClass.zero(GR24)) == 0
    assert blowup_degree(BlowupClass.pi(tensor_point(GR24))) == 1


def test_as_exceptional_rejects_pullbacks():
    with pytest.raises(DomainError):
        as_exceptional(BlowupClass.pi(TensorClass.one(GR24)))


def random_blowup_class(rng: random.Random, ctx: GrassContext) -> BlowupClass:
    pull = {}
    for _ in range(rng.randint(1, 3)):
        a, b = rng.choice(ctx.partitions), rng.choice(ctx.partitions)
        pull[(a, b)] = param(rng.randint(-3, 3))
    exc = {}
    for _ in range(rng.randint(0, 3)):
        exc[(rng.choice(ctx.partitions), rng.randint(0, ctx.dim - 1))] = param(rng.randint(-3, 3))
    return BlowupClass(TensorClass(ctx, {k: v for k, v in pull.items() if v}),
                       EClass(ctx, {k: v for k, v in exc.items() if v}))


def ring_congruence_trials(ctx: GrassContext, trials: int, seed: int) -> None:
    rng = random.Random(seed)
    for _ in range(trials):
        x, y, z = (random_blowup_class(rng, ctx) for _ in range(3))
        nx = normal_form(x)
        assert normal_form(nx) == nx and normal_form(nx).exceptional == nx.exceptional
        assert normal_form(mult_B(x, y)) == mult_B(normal_form(x), normal_form(y))
        assert mult_B(x, y) == mult_B(y, x)
        assert mult_B(mult_B(x, y), z) == mult_B(x, mult_B(y, z))
        assert mult_B(x, y + z) == mult_B(x, y) + mult_B(x, z)


def test_normal_form_ring_congruence_gr24():
    ring_congruence_trials(GR24, 200, 11)


def test_normal_form_ring_congruence_gr25_sample():
    ring_congruence_trials(GR25, 20, 12)


def test_codimension_is_additive():
    a = BlowupClass.pi(tensor_of(sigma(GR24, 1), ChowClass.one(GR24)))
    b = BlowupClass.j(EClass.zeta(GR24))
    prod = mult_B(a, b)
    # j_* raises codimension by one
    assert prod.pullback.codimensions() <= {3}
    assert prod.exceptional.codimensions() == {2}


def test_json_shape():
    data = class_D1_tilde(GR24).to_json()
    assert data["ctx"] == [2, 4]
    assert {"pullback", "exceptional"} <= set(data)
