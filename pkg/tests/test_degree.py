import random
import warnings
from fractions import Fraction

import pytest

from sigcurve.degree import (
    base_locus_on_curve,
    generic_degree,
    mult_min,
    mult_min_canonical,
    mult_sum_line,
    mult_sum_line_resultant,
    predict_degree,
    series_valuations,
)
from sigcurve.errors import NonIntegralSymmetryError
from sigcurve.jets import CurveInput, GroupId, projective_extension
from sigcurve.parser import parse
from sigcurve.poly import SparsePoly

R = ("x", "y")


def rand_curve(rng, d, height=9):
    while True:
        F = SparsePoly.from_terms(
            R,
            [((i, j), rng.randint(-height, height)) for i in range(d + 1) for j in range(d + 1 - i)],
        )
        cv = CurveInput.from_poly(F)
        if cv.d == d and not cv.fy().is_zero():
            return cv


def rand_curve_rational_infinity(rng, d, w0):
    while True:
        terms = {
            (i, j): Fraction(rng.randint(-9, 9))
            for i in range(d + 1)
            for j in range(d + 1 - i)
        }
        top = sum(c * w0**j for (i, j), c in terms.items() if i + j == d and (i, j) != (d, 0))
        terms[(d, 0)] = -top
        F = SparsePoly(R, {k: v for k, v in terms.items() if v})
        cv = CurveInput.from_poly(F)
        if cv.d == d:
            return cv


class TestCubicFixture:
    def test_mult_sums(self, worked_cubic):
        tri = projective_extension(worked_cubic, GroupId.A2, cancel=True)
        assert tri.deg == 26
        assert mult_sum_line(worked_cubic, tri, (5, 1, 1)) == 30
        # the known non-generic line pairs its -6 with the T4*T6 component
        # (component order here is [T4^3 : T5^2 : T4*T6])
        assert mult_sum_line(worked_cubic, tri, (1, 1, -6)) == 32
        rep = mult_min(worked_cubic, tri, trials=3, seed=0)
        assert rep.min_sum == 30
        assert rep.lower_bound == 30 and rep.sandwich_closed

    def test_predicted_degree(self, worked_cubic):
        rep = predict_degree(worked_cubic, GroupId.A2, n=2)
        assert rep.deg_S_predicted == 24
        assert rep.mult_sum == 60 and rep.deg_sigma == 36  # canonical triple
        with pytest.raises(NonIntegralSymmetryError):
            predict_degree(worked_cubic, GroupId.A2, n=7)


class TestGenericDegrees:
    def test_closed_forms(self):
        assert generic_degree(GroupId.SE2, 4) == 72
        assert generic_degree(GroupId.A2, 5) == 360
        assert generic_degree(GroupId.SA2, 5) == 360
        assert generic_degree(GroupId.PGL3, 4) == 672

    def test_d3_caveat_flag(self):
        with warnings.catch_warnings(record=True) as log:
            warnings.simplefilter("always")
            generic_degree(GroupId.SE2, 3)
        assert any("d = 3" in str(w.message) for w in log)
        with pytest.raises(ValueError):
            generic_degree(GroupId.SE2, 2)

    def test_tightness_one_quartic(self):
        rng = random.Random(41)
        cv = rand_curve(rng, 4)
        for g in (GroupId.SE2, GroupId.SA2, GroupId.A2):
            rep = predict_degree(cv, g, n=1, seed=2)
            assert rep.deg_S_predicted == generic_degree(g, 4)
            assert rep.mult_report.sandwich_closed

    def test_per_point_multiplicities(self):
        # mult per infinite point is 0 / 16 / 12 for SE2 / SA2 / A2
        rng = random.Random(43)
        cv = rand_curve(rng, 4)
        for g, per_point in ((GroupId.SE2, 0), (GroupId.SA2, 16), (GroupId.A2, 12)):
            rep, _, _ = mult_min_canonical(cv, g, seed=5)
            assert rep.min_sum == 4 * per_point


class TestSeriesValuations:
    def test_quartic_tables(self):
        rng = random.Random(17)
        cv = rand_curve_rational_infinity(rng, 4, Fraction(2, 3))
        vt = series_valuations(cv, Fraction(2, 3))
        assert vt.val_theta == (0, 3, 4, 8, 15, 19, 40, 60)
        assert vt.v_i == (0, 2, 2, 4, 9, 11, 24, 36)

    def test_wrong_root_rejected(self):
        cv = CurveInput.from_poly(parse("x^3 + y^3 + 1"))
        with pytest.raises(ValueError):
            series_valuations(cv, Fraction(1, 2))

    def test_fermat_rational_root(self):
        cv = CurveInput.from_poly(parse("x^3 + y^3 + 1"))
        vt = series_valuations(cv, Fraction(-1))
        # non-generic curve: valuations exist but differ from the generic table
        assert len(vt.val_theta) == 8


class TestRoutesAgree:
    def test_series_vs_resultant_route(self, ellipse):
        tri = projective_extension(ellipse, GroupId.SE2)
        rng = random.Random(3)
        for _ in range(3):
            a = tuple(Fraction(rng.randint(-50, 50)) for _ in range(3))
            if all(x == 0 for x in a):
                continue
            assert mult_sum_line(ellipse, tri, a) == mult_sum_line_resultant(
                ellipse, tri, a
            )

    def test_cancelled_vs_uncancelled_consistency(self, worked_cubic):
        # n*deg(S) is extension-independent: d*deg - mult agrees
        t26 = projective_extension(worked_cubic, GroupId.A2, cancel=True)
        t36 = projective_extension(worked_cubic, GroupId.A2, cancel=False)
        m26 = mult_min(worked_cubic, t26, seed=1).min_sum
        m36 = mult_min(worked_cubic, t36, seed=1).min_sum
        assert 3 * 26 - m26 == 3 * 36 - m36 == 48


class TestBaseLocus:
    def test_generic_quartic_affine_empty(self):
        rng = random.Random(19)
        cv = rand_curve(rng, 4)
        tri = projective_extension(cv, GroupId.A2)
        rep = base_locus_on_curve(cv, tri)
        assert rep.affine_empty is True

    def test_fermat_pgl3_base_at_infinity(self):
        cv = CurveInput.from_poly(parse("x^3 + y^3 + 1"))
        tri = projective_extension(cv, GroupId.PGL3)
        rep = base_locus_on_curve(cv, tri)
        assert rep.affine_empty is True
        assert "base points" in rep.infinity_points

    def test_worked_cubic_affine_candidates(self, worked_cubic):
        tri = projective_extension(worked_cubic, GroupId.A2, cancel=True)
        rep = base_locus_on_curve(worked_cubic, tri)
        assert rep.affine_empty is None  # candidates cut out by 11x^2 - 9

    def test_zero_triple_rejected(self, ellipse):
        from sigcurve.jets import HomogeneousTriple

        z = SparsePoly.zero(("x0", "x1", "x2"))
        with pytest.raises(ValueError):
            base_locus_on_curve(ellipse, HomogeneousTriple((z, z, z), 0, GroupId.SE2))


class TestFermatDegrees:
    def test_fermat_pgl3_nds(self):
        # n*deg(S) = 6d^2 * 4 for the Fermat family
        for d in (3, 4):
            cv = CurveInput.from_poly(parse(f"x^{d} + y^{d} + 1"))
            rep = predict_degree(cv, GroupId.PGL3, seed=1)
            assert rep.n_times_deg_S == 6 * d * d * 4

    def test_fermat_a2_nds(self):
        for d, deg_s in ((3, 2), (4, 3)):
            cv = CurveInput.from_poly(parse(f"x^{d} + y^{d} + 1"))
            rep = predict_degree(cv, GroupId.A2, seed=1)
            assert rep.n_times_deg_S == 2 * d * d * deg_s
