import json
from fractions import Fraction
from pathlib import Path

import pytest

from skewcalc import oracle as O
from skewcalc.pipeline import nonskew_number

INPUTS = Path(__file__).resolve().parent.parent / "inputs"

# Rational quintic built so that the tangent lines at t = 0 and t = 1 meet.
MEETING_QUINTIC = [[1, 0, -1, -3, 3], [0, 1, 0, -4, 3], [0, 0, -1, 4, -1, -1],
                   [0, 0, 1, -2, 1], [0, 0, 0, 3, -6, 3]]


@pytest.fixture(scope="module")
def quintic():
    return O.random_rational_curve(5, seed=1)


@pytest.fixture(scope="module")
def quintic_count(quintic):
    return O.count_nonskew_pairs_p4(quintic)


def test_curve_validation():
    with pytest.raises(O.PreconditionError):
        O.RationalCurve(4, ((1,), (0, 1)))
    with pytest.raises(O.PreconditionError):
        O.RationalCurve.from_coefficients([[0, 1], [0, 0, 1], [0, 1, 1]])
    with pytest.raises(O.PreconditionError):
        O.RationalCurve.from_coefficients([[1], [2], [3]])
    with pytest.raises(ValueError):
        O.RationalCurve.from_json({"ambient": 4})
    with pytest.raises(ValueError):
        O.RationalCurve.from_json({"ambient": 1, "coords": [["1"], ["x"]]})


def test_curve_json_round_trip_and_inputs():
    for name in ("rational_normal_quartic", "quintic", "sextic", "twisted_cubic"):
        data = json.loads((INPUTS / f"{name}.json").read_text())
        curve = O.RationalCurve.from_json(data)
        assert O.RationalCurve.from_json(curve.to_json()) == curve
    assert O.RationalCurve.from_json(json.loads((INPUTS / "quintic.json").read_text())) == \
        O.random_rational_curve(5, seed=1)


def test_curve_geometry_helpers():
    c = O.rational_normal_curve(4)
    assert c.degree == 4
    assert c.point(2) == (1, 2, 4, 8, 16)
    assert c.point(2, 1) == (0, 1, 4, 12, 32)
    assert c.is_immersion() and c.has_nondegenerate_osculation()
    assert c.osculating_rank(Fraction(1, 3)) == 4
    flat = O.RationalCurve.from_coefficients([[1], [0, 1], [0, 0, 1], [0, 0, 0, 1], [0, 0, 0, 0, 0, 1]])
    # cusp at the parameter at infinity
    assert not flat.is_immersion()


def test_tangent_meet():
    cubic = O.rational_normal_curve(3)
    assert not O.tangent_meet(cubic, 0, 1)
    quartic = O.rational_normal_curve(4)
    assert not O.tangent_meet(quartic, Fraction(2, 3), Fraction(-5, 7))
    meeting = O.RationalCurve.from_coefficients(MEETING_QUINTIC)
    assert O.tangent_meet(meeting, 0, 1) and O.tangent_meet(meeting, 1, 0)
    assert not O.tangent_meet(meeting, 0, 2)
    with pytest.raises(O.PreconditionError):
        O.tangent_meet(quartic, 1, 1)


def test_saturation():
    t, s = O._T, O._S
    q, k = O.saturate((t - s) ** 3 * (t + s + 1))
    assert k == 3 and q == t + s + 1


def test_first_subresultant_matches_linear_remainder():
    P = O.flint.fmpq_poly
    # (s - 1)(s - 2) and (s - 1)(s + 5): common root s = 1
    a = [P([2]), P([-3]), P([1])]
    b = [P([-5]), P([4]), P([1])]
    tail, lead = O.first_subresultant(a, b)
    assert lead != 0 and -tail / lead == 1


def test_rational_normal_quartic_has_no_pairs():
    count = O.count_nonskew_pairs_p4(O.rational_normal_curve(4))
    assert count.count == 0 and count.solutions == ()


def test_quintic_count_matches_formula(quintic_count):
    assert quintic_count.count == nonskew_number(5, 0) == 8
    assert quintic_count.count % 2 == 0
    assert len(quintic_count.diagnostics["runs"]) == 2


def test_meeting_quintic_pairs_are_certified():
    curve = O.RationalCurve.from_coefficients(MEETING_QUINTIC)
    count = O.count_nonskew_pairs_p4(curve)
    assert count.count == 8
    pairs = {s.pair for s in count.solutions if s.pair is not None}
    assert {("0", "1"), ("1", "0")} <= pairs
    for t, s in pairs:
        assert O.tangent_meet(curve, Fraction(t), Fraction(s))


def test_count_invariant_under_reparametrization_and_projective_change(quintic, quintic_count):
    moved = quintic.reparametrize(2, -1, 1, 3)
    assert O.count_nonskew_pairs_p4(moved).count == quintic_count.count
    polys = [list(c) for c in quintic.coords]
    # x0 -> x0 + x3, x2 -> 2 x2 - x4
    def add(a, b, k=1):
        n = max(len(a), len(b))
        a, b = a + [0] * (n - len(a)), b + [0] * (n - len(b))
        return [x + k * y for x, y in zip(a, b)]
    changed = [add(polys[0], polys[3]), polys[1], add([2 * x for x in polys[2]], polys[4], -1),
               polys[3], polys[4]]
    assert O.count_nonskew_pairs_p4(O.RationalCurve.from_coefficients(changed)).count == quintic_count.count


def test_count_independent_of_seed(quintic, quintic_count):
    other = O.count_nonskew_pairs_p4(quintic, seed=7)
    assert other.count == quintic_count.count
    assert [s.key() for s in other.solutions] == [s.key() for s in quintic_count.solutions]


def test_pair_count_json(quintic_count):
    data = quintic_count.to_json()
    assert data["count"] == sum(s["count"] for s in data["solutions"])
    assert json.loads(json.dumps(data)) == data


def test_pair_count_rejects_inconsistent_totals():
    sol = O.Solution((Fraction(0), Fraction(1)), 1, 1)
    with pytest.raises(O.OracleError):
        O.PairCount(2, (sol,))


def test_count_preconditions():
    with pytest.raises(O.PreconditionError):
        O.count_nonskew_pairs_p4(O.rational_normal_curve(3))
    flat = O.RationalCurve.from_coefficients([[1], [0, 1], [0, 0, 1], [0, 0, 0, 1], [0, 0, 0, 0, 0, 1]])
    with pytest.raises(O.PreconditionError):
        O.count_nonskew_pairs_p4(flat)


def test_twisted_cubic_identity():
    c, k = O.twisted_cubic_identity()
    assert k == 4 and c != 0
    conic = O.RationalCurve.from_coefficients([[1], [0, 1], [0, 0, 1], []])
    assert O.diagonal_form(O.tangent_determinant(conic)) == (0, None)


def test_scroll_verdicts_p3():
    assert O.scroll_skew_test(O.rational_normal_scroll()).skew
    assert O.scroll_skew_test(O.example_skew_scroll()).skew
    generic = O.random_scroll(2, 2, seed=4)
    verdict = O.scroll_skew_test(generic)
    assert not verdict.skew
    assert verdict.certificate


def test_scroll_json_and_preconditions():
    spec = O.example_skew_scroll()
    assert O.ScrollSpec.from_json(spec.to_json()) == spec
    assert spec.bidegree == (2, 2) and spec.ambient == 3
    line = O.RationalCurve.from_coefficients([[1], [0, 1], [], []])
    with pytest.raises(O.PreconditionError):
        O.scroll_skew_test(O.ScrollSpec(line, line))
    with pytest.raises(ValueError):
        O.ScrollSpec.from_json({"first": {}})


@pytest.mark.parametrize("bidegree,expected", [((1, 1), 0), ((2, 2), 2), ((1, 3), 2)])
def test_p4_scroll_pairs_match_formula(bidegree, expected):
    spec = O.random_scroll(*bidegree, ambient=4, seed=5)
    verdict = O.scroll_skew_test(spec)
    count = verdict.certificate["meeting_pairs"]["count"]
    dv = sum(bidegree)
    assert count == expected == (dv - 2) * (dv - 3)
    assert verdict.skew == (expected == 0)


def test_veronese():
    assert O.veronese_sample_test(100)
    assert O.veronese_tangent_rank((1, 2, 3), (1, 2, 3)) == 3
    assert len(O.VERONESE_MONOMIALS) == 9


def test_contact_order():
    report = O.contact_order_test(O.rational_normal_curve(4), 0)
    assert report.matching_orders[:3] == (0, 1, 2)
    assert 3 not in report.matching_orders
    assert report.agrees_to_order_two and report.order_three_obstructed
    other = O.contact_order_test(O.random_rational_curve(5, seed=1), Fraction(2, 7))
    assert other.agrees_to_order_two and other.order_three_obstructed
    degenerate = O.RationalCurve.from_coefficients([[1], [0, 1], [0, 0, 1], [0, 0, 0, 0, 1],
                                                    [0, 0, 0, 0, 0, 1]])
    with pytest.raises(O.PreconditionError):
        O.contact_order_test(degenerate, 0)
