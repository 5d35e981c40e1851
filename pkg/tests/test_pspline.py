import numpy as np
import pytest

from tsboost import pspline
from tsboost.errors import (
    DomainTooShort,
    EDSaturated,
    FlatCriterion,
    LeverageOne,
    ZeroResidual,
)
from tsboost.pspline import (
    LambdaCriterion,
    build_basis,
    default_interior_knots,
    difference_penalty,
    effective_dimension,
    fit_pspline,
    score_aic,
    score_gcv,
    score_loocv,
    select_lambda,
    smooth_series,
)


def degree0_basis(n_points, interior):
    """Piecewise-constant basis; with enough knots B is a 0/1 selection matrix."""
    return build_basis(np.linspace(0, 1, n_points), degree=0, interior_knots=interior)


class TestBasis:
    def test_default_knot_rule(self):
        assert default_interior_knots(10) == 3
        assert default_interior_knots(100) == 25
        assert default_interior_knots(500) == 40

    def test_basis_count(self):
        basis = build_basis(np.linspace(0, 1, 30), degree=3, interior_knots=7)
        assert basis.n_bases == 7 + 3 + 1

    def test_partition_of_unity(self, rng):
        for degree in (0, 1, 2, 3):
            basis = build_basis(np.linspace(0, 1, 25), degree=degree, interior_knots=5)
            assert np.all(basis.matrix >= 0)
            assert np.max(np.abs(basis.matrix.sum(axis=1) - 1.0)) < 1e-10
            # also at arbitrary interior points
            x = rng.uniform(0, 1, size=40)
            B = basis.design(x)
            assert np.max(np.abs(B.sum(axis=1) - 1.0)) < 1e-10

    def test_degree0_selection_matrix(self):
        basis = degree0_basis(10, 4)
        B = basis.matrix
        assert set(np.unique(B)) <= {0.0, 1.0}
        assert np.array_equal(B.sum(axis=1), np.ones(10))

    def test_domain_too_short(self):
        with pytest.raises(DomainTooShort):
            build_basis(np.linspace(0, 1, 3), degree=3, interior_knots=2)


class TestPenalty:
    def test_annihilates_low_degree_polynomials(self):
        m = 12
        idx = np.arange(m, dtype=float)
        for order in (1, 2, 3):
            D = difference_penalty(m, order).matrix
            for deg in range(order):
                assert np.max(np.abs(D @ idx**deg)) == 0.0

    def test_shape(self):
        pen = difference_penalty(10, 2)
        assert pen.matrix.shape == (8, 10)


class TestFit:
    def test_interpolation_limit(self):
        # saturated piecewise-constant basis, one point per cell
        basis = degree0_basis(8, 7)
        pen = difference_penalty(basis.n_bases, 2)
        y = np.sin(np.linspace(0, 3, 8))
        fit = fit_pspline(y, basis, pen, 1e-8)
        assert np.max(np.abs(fit.fitted - y)) < 1e-6

    def test_heavy_smoothing_matches_ols_line(self, rng):
        x = np.linspace(0, 1, 40)
        y = 2.0 + 3.0 * x + rng.normal(0, 0.3, size=40)
        basis = build_basis(x, degree=3, interior_knots=8)
        pen = difference_penalty(basis.n_bases, 2)
        fit = fit_pspline(y, basis, pen, 1e8)
        slope, intercept = np.polyfit(x, y, 1)
        assert np.max(np.abs(fit.fitted - (intercept + slope * x))) < 1e-4

    def test_constant_preserved(self):
        x = np.linspace(0, 1, 20)
        basis = build_basis(x, degree=3, interior_knots=4)
        pen = difference_penalty(basis.n_bases, 2)
        for lam in (0.0, 1.0, 1e6):
            fit = fit_pspline(np.full(20, 4.25), basis, pen, lam)
            assert np.max(np.abs(fit.fitted - 4.25)) < 1e-9

    def test_penalized_objective_minimized(self, rng):
        x = np.linspace(0, 1, 30)
        y = rng.normal(size=30)
        basis = build_basis(x, degree=3, interior_knots=6)
        pen = difference_penalty(basis.n_bases, 2)
        lam = 3.7
        fit = fit_pspline(y, basis, pen, lam)

        def objective(a):
            return np.sum((y - basis.matrix @ a) ** 2) + lam * np.sum((pen.matrix @ a) ** 2)

        best = objective(fit.coef)
        for _ in range(20):
            direction = rng.normal(size=fit.coef.shape)
            direction /= np.linalg.norm(direction)
            assert objective(fit.coef + 1e-4 * direction) > best
            assert objective(fit.coef - 1e-4 * direction) > best

    def test_weighted_fit_equals_replication(self, rng):
        # integer weights must act exactly like repeating the data points
        x = np.linspace(0, 1, 12)
        y = rng.normal(size=12)
        w = rng.integers(1, 4, size=12).astype(float)
        basis = build_basis(x, degree=3, interior_knots=3)
        pen = difference_penalty(basis.n_bases, 2)
        weighted = fit_pspline(y, basis, pen, 0.5, weights=w)
        B = basis.matrix
        reps = np.repeat(np.arange(12), w.astype(int))
        Bx, yx = B[reps], y[reps]
        A = Bx.T @ Bx + 0.5 * pen.matrix.T @ pen.matrix
        coef = np.linalg.solve(A, Bx.T @ yx)
        assert np.max(np.abs(weighted.coef - coef)) < 1e-10


class TestEffectiveDimension:
    def test_zero_lambda_gives_m(self):
        basis = build_basis(np.linspace(0, 1, 30), degree=3, interior_knots=5)
        pen = difference_penalty(basis.n_bases, 2)
        assert abs(effective_dimension(basis, pen, 0.0) - basis.n_bases) < 1e-8

    def test_large_lambda_limit_is_penalty_nullspace(self):
        basis = build_basis(np.linspace(0, 1, 30), degree=3, interior_knots=5)
        pen = difference_penalty(basis.n_bases, 2)
        assert abs(effective_dimension(basis, pen, 1e12) - 2.0) < 0.01

    def test_monotone_in_lambda(self):
        basis = build_basis(np.linspace(0, 1, 40), degree=3, interior_knots=8)
        pen = difference_penalty(basis.n_bases, 2)
        eds = [effective_dimension(basis, pen, lam) for lam in np.logspace(-8, 8, 30)]
        assert np.all(np.diff(eds) <= 1e-10)

    def test_matches_hat_trace(self):
        basis = build_basis(np.linspace(0, 1, 25), degree=3, interior_knots=5)
        pen = difference_penalty(basis.n_bases, 2)
        for lam in (0.01, 1.0, 100.0):
            h = pspline._hat_diagonal(basis, pen, lam)
            assert abs(h.sum() - effective_dimension(basis, pen, lam)) < 1e-8


class TestScores:
    def test_aic_hand_case(self):
        # 10 points in 5 cells of 2; y = cell mean +/- 1 so the unpenalized
        # piecewise-constant fit leaves unit residual variance and ED = 5
        basis = degree0_basis(10, 4)
        pen = difference_penalty(basis.n_bases, 2)
        means = np.repeat([0.0, 2.0, -1.0, 3.0, 5.0], 2)
        y = means + np.tile([1.0, -1.0], 5)
        fit = fit_pspline(y, basis, pen, 0.0)
        assert np.max(np.abs(fit.fitted - means)) < 1e-10
        assert abs(score_aic(y, fit) - 10.0) < 1e-8

    def test_aic_orders_by_effective_dimension(self, rng):
        x = np.linspace(0, 1, 30)
        y = rng.normal(size=30)
        basis = build_basis(x, degree=3, interior_knots=6)
        pen = difference_penalty(basis.n_bases, 2)
        lo = fit_pspline(y, basis, pen, 100.0)
        hi = fit_pspline(y, basis, pen, 0.01)
        # fabricate equal residuals by scoring the same y against both fits'
        # own residuals is not possible; instead check the penalty term only
        ed_lo = effective_dimension(basis, pen, 100.0)
        ed_hi = effective_dimension(basis, pen, 0.01)
        assert ed_lo < ed_hi
        rss = 2.5
        n = 30
        aic = lambda ed: 2 * ed + n * np.log(rss / n)
        assert aic(ed_lo) < aic(ed_hi)

    def test_aic_zero_residual(self):
        basis = degree0_basis(8, 7)
        pen = difference_penalty(basis.n_bases, 2)
        y = np.arange(8.0)
        fit = fit_pspline(y, basis, pen, 0.0)
        with pytest.raises(ZeroResidual):
            score_aic(y, fit)

    def test_gcv_hand_case(self):
        basis = degree0_basis(4, 1)
        pen = difference_penalty(basis.n_bases, 1)
        y = np.array([1.0, -1.0, 4.0, 2.0])  # cell means 0 and 3, residuals +-1
        fit = fit_pspline(y, basis, pen, 0.0)
        assert abs(score_gcv(y, fit) - 1.0) < 1e-10

    def test_gcv_zero_residual_is_zero(self):
        x = np.linspace(0, 1, 20)
        basis = build_basis(x, degree=3, interior_knots=4)
        pen = difference_penalty(basis.n_bases, 2)
        y = 1.0 + 2.0 * x  # in the penalty null space: fitted exactly
        fit = fit_pspline(y, basis, pen, 10.0)
        assert score_gcv(y, fit) < 1e-20

    def test_gcv_saturated(self):
        basis = degree0_basis(8, 7)
        pen = difference_penalty(basis.n_bases, 2)
        y = np.arange(8.0)
        fit = fit_pspline(y, basis, pen, 0.0)
        with pytest.raises(EDSaturated):
            score_gcv(y, fit)

    def test_loocv_matches_explicit_refits(self, rng):
        n = 15
        x = np.linspace(0, 1, n)
        y = np.sin(2 * np.pi * x) + rng.normal(0, 0.2, size=n)
        basis = build_basis(x, degree=3, interior_knots=3)
        pen = difference_penalty(basis.n_bases, 2)
        for lam in (0.1, 1.0, 10.0):
            shortcut = score_loocv(y, basis, pen, lam)
            explicit = 0.0
            for j in range(n):
                w = np.ones(n)
                w[j] = 0.0
                fit = fit_pspline(y, basis, pen, lam, weights=w)
                explicit += (y[j] - fit.fitted[j]) ** 2
            assert abs(shortcut - explicit) < 1e-8 * max(abs(explicit), 1.0)

    def test_loocv_on_line_is_tiny(self):
        x = np.linspace(0, 1, 20)
        y = 3.0 - 2.0 * x
        basis = build_basis(x, degree=3, interior_knots=4)
        pen = difference_penalty(basis.n_bases, 2)
        assert score_loocv(y, basis, pen, 50.0) < 1e-18

    def test_loocv_leverage_one(self):
        basis = degree0_basis(8, 7)
        pen = difference_penalty(basis.n_bases, 2)
        with pytest.raises(LeverageOne):
            score_loocv(np.arange(8.0), basis, pen, 0.0)


class TestSelectLambda:
    def test_criterion_validation(self):
        with pytest.raises(ValueError):
            LambdaCriterion("bogus")
        with pytest.raises(ValueError):
            LambdaCriterion("gcv", grid=np.array([1.0, 2.0]))
        with pytest.raises(ValueError):
            LambdaCriterion("gcv", grid=np.linspace(-1, 1, 20))

    def test_noiseless_line_degenerates_gracefully(self):
        # residual and penalty both vanish for data in the penalty null space;
        # a criterion may either flag the flat profile or pick some lambda
        x = np.linspace(0, 1, 25)
        y = 0.5 + 4.0 * x
        basis = build_basis(x, degree=3, interior_knots=5)
        pen = difference_penalty(basis.n_bases, 2)
        grid = pspline.default_lambda_grid()
        for name in pspline.CRITERIA:
            try:
                selection = select_lambda(y, basis, pen, name)
            except FlatCriterion:
                continue
            assert grid[0] <= selection.lam <= grid[-1]

    def test_vcurve_scores_match_hand_differences(self, rng):
        x = np.linspace(0, 1, 40)
        y = np.sin(2 * np.pi * x) + rng.normal(0, 0.15, size=40)
        basis = build_basis(x, degree=3, interior_knots=8)
        pen = difference_penalty(basis.n_bases, 2)
        grid = np.logspace(-3, 3, 12)
        selection = select_lambda(y, basis, pen, LambdaCriterion("vcurve", grid=grid))
        psi, phi = [], []
        for lam in grid:
            fit = fit_pspline(y, basis, pen, lam)
            psi.append(np.log(np.sum((y - fit.fitted) ** 2)))
            phi.append(np.log(np.sum((pen.matrix @ fit.coef) ** 2)))
        u = np.log(grid)
        du = np.diff(u)
        expected = np.hypot(np.diff(psi) / du, np.diff(phi) / du)
        assert selection.scores.shape == (11,)
        assert np.max(np.abs(selection.scores - expected)) < 1e-8
        assert np.max(np.abs(selection.lambdas - np.exp((u[:-1] + u[1:]) / 2))) < 1e-12

    def test_minimizing_criteria_pick_grid_argmin(self, rng):
        x = np.linspace(0, 1, 60)
        y = np.sin(2 * np.pi * x) + rng.normal(0, 0.2, size=60)
        basis = build_basis(x, degree=3, interior_knots=12)
        pen = difference_penalty(basis.n_bases, 2)
        for name in ("aic", "gcv", "loocv"):
            selection = select_lambda(y, basis, pen, name)
            pick = np.argmin(selection.scores)
            assert selection.lam == selection.lambdas[pick]

    def test_smooth_series_returns_selected_fit(self, rng):
        x = np.linspace(0, 1, 50)
        y = np.cos(3 * x) + rng.normal(0, 0.1, size=50)
        basis = build_basis(x, degree=3, interior_knots=10)
        pen = difference_penalty(basis.n_bases, 2)
        fit, selection = smooth_series(y, basis, pen, "gcv")
        assert fit.lam == selection.lam
        refit = fit_pspline(y, basis, pen, selection.lam)
        assert np.array_equal(fit.fitted, refit.fitted)
