import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bisa_mech.bending import withstand_moment
from bisa_mech.core import ChamberStack, DomainError
from bisa_mech.datafit import (
    ForceDispSeries,
    SeriesMeta,
    StiffnessRow,
    StiffnessTable,
    calibrate_bls,
    calibrate_chambers,
    fit_angle_pressure,
    fit_slope,
    ratio_curve,
)
from bisa_mech.lateral import evaluation_function

MM = 1e-3


def series(x_mm, f, **meta):
    return ForceDispSeries(tuple(v * MM for v in x_mm), tuple(f), SeriesMeta(**meta))


class TestSlope:
    def test_exact_headline_stiffness(self):
        x = np.arange(0, 11, 1.0)
        fit = fit_slope(series(x, 0.7 * x))
        assert fit.stiffness_N_per_mm == pytest.approx(0.7, rel=1e-13)
        assert fit.r2 == 1.0

    def test_small_noise_resolves_lateral_scale(self):
        rng = np.random.default_rng(3)
        x = np.linspace(0, 5, 51)
        fit = fit_slope(series(x, 0.46 * x + 1e-6 * rng.standard_normal(x.size)))
        assert round(fit.stiffness_N_per_mm, 4) == 0.46

    def test_two_points(self):
        assert fit_slope(series([0.0, 10.0], [0.0, 1.0])).stiffness_N_per_mm == pytest.approx(0.1, rel=1e-14)

    def test_free_intercept(self):
        x = np.arange(5.0)
        fit = fit_slope(series(x, 0.3 * x + 0.2))
        assert fit.stiffness_N_per_mm == pytest.approx(0.3, rel=1e-13)
        assert fit.intercept == pytest.approx(0.2, rel=1e-13)

    @given(st.floats(-100, 100).filter(lambda c: abs(c) > 1e-3), st.floats(-10, 10))
    def test_affine_equivariance(self, scale, shift):
        x = [0.0, 1.0, 2.5, 4.0, 7.0]
        f = [0.1, 0.35, 0.9, 1.2, 2.3]
        base = fit_slope(series(x, f)).stiffness
        assert fit_slope(series(x, [scale * v for v in f])).stiffness == pytest.approx(scale * base, rel=1e-10)
        assert fit_slope(series(x, [v + shift for v in f])).stiffness == pytest.approx(base, rel=1e-9, abs=1e-9)

    def test_series_invariants(self):
        with pytest.raises(DomainError):
            series([0.0], [0.0])
        with pytest.raises(DomainError):
            series([0.0, 0.0], [0.0, 1.0])
        with pytest.raises(DomainError):
            series([0.0, 1.0], [0.0, math.nan])
        with pytest.raises(DomainError):
            ForceDispSeries((0.0, 1.0), (0.0,))

    def test_pulling_force(self):
        assert SeriesMeta(pulling_mass_kg=2.0).pulling_force == pytest.approx(19.62)


def table(values, label="A"):
    return StiffnessTable([StiffnessRow(SeriesMeta(bending_angle_deg=a, label=label), k, 1.0) for a, k in values])


class TestRatio:
    def test_all_equal(self):
        curve = ratio_curve(table([(0, 5.0), (45, 5.0), (90, 5.0)]))["A"]
        assert curve.ratios == (1.0, 1.0, 1.0)

    def test_doubling(self):
        assert ratio_curve(table([(0, 5.0), (90, 10.0)]))["A"].ratios == (1.0, 2.0)

    def test_dip_then_rise(self):
        curve = ratio_curve(table([(0, 1.0), (45, 0.9), (90, 0.95), (135, 1.1)]))["A"]
        assert curve.ratios == pytest.approx((1.0, 0.9, 0.95, 1.1), rel=1e-15)
        assert curve.angles == (0, 45, 90, 135)

    def test_baseline_exactly_one_and_scale_invariant(self):
        rows = [(90, 0.37), (0, 0.31), (45, 0.29)]
        a = ratio_curve(table(rows))["A"]
        b = ratio_curve(table([(ang, 7.3 * k) for ang, k in rows]))["A"]
        assert a.ratios[0] == 1.0
        assert a.ratios == pytest.approx(b.ratios, rel=1e-14)

    def test_groups(self):
        t = table([(0, 1.0), (90, 2.0)], "A")
        t.rows += table([(0, 4.0), (90, 2.0)], "B").rows
        curves = ratio_curve(t)
        assert curves["A"].ratios == (1.0, 2.0) and curves["B"].ratios == (1.0, 0.5)

    def test_missing_baseline(self):
        with pytest.raises(DomainError, match="'B'"):
            ratio_curve(table([(45, 1.0)], "B"))


class TestCalibrateBls:
    NU, LAM = 0.35, 1.0

    def k(self, s, alpha):
        return 4 * s * evaluation_function(alpha, self.NU, self.LAM)

    def test_single_point(self):
        cal = calibrate_bls([(1.0, self.k(3.7, 1.0))], self.NU, self.LAM)
        assert cal.scale == pytest.approx(3.7, rel=1e-15)
        assert cal.residual == pytest.approx(0.0, abs=1e-14)

    def test_five_angle_round_trip(self):
        alphas = np.radians([30, 60, 90, 135, 180])
        cal = calibrate_bls([(a, self.k(2.5, a)) for a in alphas], self.NU, self.LAM)
        assert cal.scale == pytest.approx(2.5, rel=1e-12)
        assert cal.residual < 1e-14
        regenerated = [self.k(cal.scale, a) for a in alphas]
        assert regenerated == pytest.approx([self.k(2.5, a) for a in alphas], rel=1e-10)

    def test_perturbed_against_scan(self):
        alphas = np.radians([30, 60, 90, 135, 180])
        signs = [1, -1, 1, -1, 1]
        data = [(a, self.k(2.5, a) * (1 + 0.1 * s)) for a, s in zip(alphas, signs)]
        cal = calibrate_bls(data, self.NU, self.LAM)
        assert 2.5 * 0.9 <= cal.scale <= 2.5 * 1.1
        grid = np.linspace(2.0, 3.0, 200001)
        sse = [sum((k - self.k(s, a)) ** 2 for a, k in data) for s in grid[::100]]
        coarse = grid[::100][int(np.argmin(sse))]
        fine = grid[(grid > coarse - 1e-3) & (grid < coarse + 1e-3)]
        best = fine[int(np.argmin([sum((k - self.k(s, a)) ** 2 for a, k in data) for s in fine]))]
        assert cal.scale == pytest.approx(best, abs=1e-5)

    def test_empty(self):
        with pytest.raises(DomainError):
            calibrate_bls([], 0.35, 1.0)


class TestCalibrateChambers:
    def test_exact_line(self):
        cal = calibrate_chambers([(1.0, 1.0), (2.0, 3.0), (3.0, 5.0)], 2)
        assert cal.coefficient == pytest.approx(2.0, rel=1e-14)
        assert cal.restoring_moment == pytest.approx(0.5, rel=1e-14)

    def test_round_trip_through_withstand(self):
        # c = 0.02 m^3 lumped, M_w = 0.05 N*m with n = 9, wall term 8*8*a*b^2
        n = 9
        a, b = 6e-3, 5e-3
        wall = 8 * (n - 1) * a * b * b
        s = ChamberStack(a, b, n, contact_moment_area=(0.02 - wall) / (n - 1), restoring_moment=0.05)
        data = [(p, withstand_moment(s, p)) for p in (50.0, 60.0, 80.0, 100.0)]
        cal = calibrate_chambers(data, n)
        assert cal.coefficient == pytest.approx(0.02, rel=1e-12)
        assert cal.restoring_moment == pytest.approx(0.05, rel=1e-12)
        assert not cal.unphysical
        restored = cal.to_stack(s)
        assert restored.calibrated
        for p, m in data:
            assert withstand_moment(restored, p) == pytest.approx(m, rel=1e-10)

    def test_unphysical_flag(self):
        cal = calibrate_chambers([(1.0, 2.0), (2.0, 3.0)], 9)
        assert cal.restoring_moment < 0 and cal.unphysical

    def test_single_pressure(self):
        with pytest.raises(DomainError):
            calibrate_chambers([(1.0, 2.0), (1.0, 2.1)], 9)


def normal_equation_residual(p, a, degree):
    """Least-squares residual in exact rational arithmetic."""
    p = [Fraction(v) for v in p]
    a = [Fraction(v) for v in a]
    m = degree + 1
    ata = [[sum(x ** (i + j) for x in p) for j in range(m)] for i in range(m)]
    atb = [sum(y * x**i for x, y in zip(p, a)) for i in range(m)]
    # Gauss-Jordan on the normal equations
    for col in range(m):
        piv = next(r for r in range(col, m) if ata[r][col] != 0)
        ata[col], ata[piv] = ata[piv], ata[col]
        atb[col], atb[piv] = atb[piv], atb[col]
        for r in range(m):
            if r != col and ata[r][col] != 0:
                f = ata[r][col] / ata[col][col]
                ata[r] = [u - f * v for u, v in zip(ata[r], ata[col])]
                atb[r] -= f * atb[col]
    coef = [atb[i] / ata[i][i] for i in range(m)]
    return float(sum((y - sum(c * x**i for i, c in enumerate(coef))) ** 2 for x, y in zip(p, a)))


class TestAnglePressure:
    def test_linear(self):
        fit = fit_angle_pressure([(p, 2.0 + 1.5 * p) for p in (0, 10, 20, 30)], 1)["all"]
        assert fit.coefficients == pytest.approx((2.0, 1.5), rel=1e-12)

    def test_quadratic(self):
        fit = fit_angle_pressure([(p, 1.0 + 0.5 * p + 0.02 * p * p) for p in (0, 10, 20, 30, 40)], 2)["all"]
        assert fit.coefficients == pytest.approx((1.0, 0.5, 0.02), rel=1e-10, abs=1e-12)
        assert fit(25.0) == pytest.approx(1.0 + 12.5 + 12.5, rel=1e-12)

    def test_projection_residual(self):
        p = [0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0]
        a = [0.001 * x**3 - 0.02 * x * x + x for x in p]
        fit = fit_angle_pressure(list(zip(p, a)), 2)["all"]
        assert fit.residual == pytest.approx(normal_equation_residual(p, a, 2), rel=1e-9)

    def test_branches(self):
        samples = [(p, p, "inflate") for p in (0, 10, 20)] + [(p, p + 3, "deflate") for p in (20, 10, 0)]
        fits = fit_angle_pressure(samples, 1)
        assert sorted(fits) == ["deflate", "inflate"]
        assert fits["deflate"].coefficients == pytest.approx((3.0, 1.0), rel=1e-12)

    def test_underdetermined(self):
        with pytest.raises(DomainError):
            fit_angle_pressure([(0, 1), (1, 2)], 2)

    @pytest.mark.parametrize("degree", [0, 5, 1.5])
    def test_degree_domain(self, degree):
        with pytest.raises(DomainError):
            fit_angle_pressure([(p, p) for p in range(8)], degree)
