import random

import pytest
import sympy

from skewcalc import bundles
from skewcalc.bundles import UnsupportedError

H = sympy.Symbol("H")


def expand_all(b: bundles.FormalBundle) -> list:
    return [sympy.expand(c) for c in b.chern]


def split_bundle(roots, dim):
    """Sum of line bundles with the given Chern roots, over a sympy polynomial ring."""
    out = bundles.line_bundle(roots[0], sympy.Integer(1), dim)
    for r in roots[1:]:
        out = bundles.direct_sum(out, bundles.line_bundle(r, sympy.Integer(1), dim))
    return out


def random_bundle(rng: random.Random, dim: int) -> bundles.FormalBundle:
    rank = rng.randint(1, 4)
    classes = [rng.randint(-5, 5) * H ** i for i in range(1, dim + 1)]
    return bundles.bundle(rank, classes, sympy.Integer(1), dim)


def test_chern_times_segre_is_one_for_random_bundles():
    rng = random.Random(7)
    for _ in range(50):
        b = random_bundle(rng, 6)
        prod = bundles.series_product(b.chern, bundles.segre(b), b.dim)
        assert [sympy.expand(x) for x in prod] == [1] + [0] * b.dim


def test_segre_of_tautological_line_on_projective_space():
    b = bundles.line_bundle(-H, sympy.Integer(1), 3)
    assert [sympy.expand(x) for x in bundles.segre(b)] == [1, H, H ** 2, H ** 3]


def test_dual_flips_odd_classes():
    b = bundles.bundle(2, [H, 2 * H ** 2], sympy.Integer(1), 2)
    assert bundles.dual(b).chern == (1, -H, 2 * H ** 2)


@pytest.mark.parametrize("r,s", [(1, 1), (1, 3), (2, 2), (2, 3), (3, 2), (4, 2)])
def test_tensor_matches_chern_roots(r, s):
    a = sympy.symbols(f"a0:{r}")
    b = sympy.symbols(f"b0:{s}")
    dim = r * s
    A, B = split_bundle(a, dim), split_bundle(b, dim)
    expected = sympy.Poly(sympy.prod([1 + x + y for x in a for y in b]), *a, *b)
    got = bundles.tensor(A, B)
    assert got.rank == r * s
    for k in range(dim + 1):
        part = sum((coeff * sympy.prod([v ** e for v, e in zip((*a, *b), mono)])
                    for mono, coeff in expected.terms() if sum(mono) == k), sympy.Integer(0))
        assert sympy.expand(got.c(k) - part) == 0, k


def test_twist_by_line_matches_roots():
    a = sympy.symbols("a0:3")
    L = sympy.Symbol("L")
    A = split_bundle(a, 3)
    twisted = bundles.twist_by_line(A, L)
    direct = split_bundle([x + L for x in a], 3)
    assert all(sympy.expand(x - y) == 0 for x, y in zip(twisted.chern, direct.chern))


def test_tensor_rank_limit():
    big = bundles.trivial(5, sympy.Integer(1), 2)
    with pytest.raises(UnsupportedError):
        bundles.tensor(big, big)


def test_to_elementary_rejects_non_symmetric():
    with pytest.raises(ValueError):
        bundles.to_elementary({(1, 0): 1})


def test_porteous_twisted_cubic():
    # 2x3 matrix of linear forms on P^3 drops rank along a twisted cubic.
    one = sympy.Integer(1)
    a = bundles.bundle(2, [-2 * H, H ** 2], one, 3)
    b = bundles.trivial(3, one, 3)
    assert sympy.expand(bundles.porteous(a, b, 1)) == 3 * H ** 2


def test_porteous_two_by_two_determinant():
    # Rank <= 1 locus of a 3x3 matrix of linear forms on P^4: six points,
    # the degree of the Segre embedding of P^2 x P^2.
    one = sympy.Integer(1)
    a = bundles.trivial(3, one, 4)
    b = bundles.bundle(3, [3 * H, 3 * H ** 2, H ** 3], one, 4)
    assert sympy.expand(bundles.porteous(a, b, 1)) == 6 * H ** 4


def test_porteous_trivial_cases():
    one = sympy.Integer(1)
    a = bundles.trivial(2, one, 2)
    assert bundles.porteous(a, a, 2) == 1
    with pytest.raises(ValueError):
        bundles.porteous(a, a, -1)


def test_mismatched_dimensions_rejected():
    one = sympy.Integer(1)
    with pytest.raises(ValueError):
        bundles.direct_sum(bundles.trivial(1, one, 2), bundles.trivial(1, one, 3))
