import json

import numpy as np
import pytest
from scipy.stats import t as t_dist

from refcast.exceptions import ConvergenceError, PredictionDomainError, SingleGroupWarning, SingularDesignError
from refcast.exceptions import ValidationError
from refcast.lmm.fit import OLS_DF_CONVENTION, FittedModel, MethodEnum, fit, profile_loglik
from refcast.lmm.predict import NO_RANDOM_EFFECT, back_transform, fitted_values, predict
from refcast.lmm.spec import INTERCEPT, ModelSpec, Term

# Balanced one-way layout: group means 2, 5, 9, within mean square 2, between mean square 24.667
Y = [1.0, 3.0, 4.0, 6.0, 8.0, 10.0]
GROUPS = ["A", "A", "B", "B", "C", "C"]
X1 = np.ones((6, 1))


def test_reml_matches_anova_estimates():
    """REML of a balanced layout equals the ANOVA estimator: s2_g = (24.667 - 2) / 2."""
    model = fit(Y, X1, GROUPS, column_names=[INTERCEPT])

    assert model.method is MethodEnum.REML
    assert model.beta[0] == pytest.approx(32 / 6, rel=1e-6)
    assert model.sigma2_resid == pytest.approx(2.0, rel=1e-4)
    assert model.sigma2_group == pytest.approx(34 / 3, rel=1e-4)
    assert model.variance_ratio == pytest.approx(17 / 3, rel=1e-4)
    # Var(mean) = (s2_g + s2_e / 2) / 3
    assert model.se[0] == pytest.approx(np.sqrt((34 / 3 + 1) / 3), rel=1e-4)
    assert model.df == 3, "containment: 6 - 1 - 3 + 1"
    assert model.n_groups == 3
    assert model.n_used == 6

    shrink = (34 / 3) / (34 / 3 + 1)
    assert model.group_effects["A"] == pytest.approx(shrink * (2 - 32 / 6), rel=1e-4)
    assert model.group_effects["C"] == pytest.approx(shrink * (9 - 32 / 6), rel=1e-4)
    assert sum(model.group_effects.values()) == pytest.approx(0.0, abs=1e-9)


def test_ml_variance_components():
    """Balanced ML: s2_g = ((2/3) * 24.667 - 2) / 2 = 7.2222."""
    model = fit(Y, X1, GROUPS, method="ml", column_names=[INTERCEPT])

    assert model.method is MethodEnum.ML
    assert model.sigma2_resid == pytest.approx(2.0, rel=1e-4)
    assert model.sigma2_group == pytest.approx(65 / 9, rel=1e-4)
    assert model.beta[0] == pytest.approx(32 / 6, rel=1e-6)


def test_profile_loglik_peaks_at_estimate():
    model = fit(Y, X1, GROUPS)
    lam = model.variance_ratio

    best = profile_loglik(Y, X1, GROUPS, lam)
    assert best == pytest.approx(model.loglik, rel=1e-9)
    assert best > profile_loglik(Y, X1, GROUPS, lam / 2)
    assert best > profile_loglik(Y, X1, GROUPS, lam * 2)
    assert best > profile_loglik(Y, X1, GROUPS, 0.0)


def test_single_observation_groups_degrade_to_ols():
    with pytest.warns(SingleGroupWarning, match="fitting OLS"):
        model = fit(Y, X1, ["A", "B", "C", "D", "E", "F"])

    assert model.sigma2_group == 0.0
    assert model.sigma2_resid == pytest.approx(np.var(Y, ddof=1))
    assert model.df == 5
    assert model.df_convention == OLS_DF_CONVENTION
    assert dict(model.group_effects) == {}


def test_no_grouping_fits_ols_without_warning(recwarn):
    spec = ModelSpec(Term("cost_overrun"), (), grouping=None)
    model = fit(Y, X1, [""] * 6, spec=spec, column_names=spec.column_names)

    assert not [w for w in recwarn if issubclass(w.category, SingleGroupWarning)]
    assert model.beta[0] == pytest.approx(32 / 6)
    assert model.n_groups == 1


def test_singular_design_names_columns():
    x = np.arange(6, dtype=float)
    X = np.column_stack([np.ones(6), x, 2 * x])
    with pytest.raises(SingularDesignError, match="collinear columns: b") as e:
        fit(Y, X, GROUPS, column_names=[INTERCEPT, "a", "b"])
    assert e.value.columns == ["b"]


def test_zero_within_variance_does_not_converge():
    with pytest.raises(ConvergenceError, match="upper bound") as e:
        fit([1.0, 1.0, 5.0, 5.0, 9.0, 9.0], X1, GROUPS)
    assert len(e.value.trace) > 0
    lams = [lam for lam, _ in e.value.trace]
    assert max(lams) == pytest.approx(1e6)


def test_fit_input_errors():
    with pytest.raises(ValidationError, match="need more than p \\+ 2"):
        fit(Y[:3], X1[:3], GROUPS[:3])
    with pytest.raises(ValidationError, match="groups and y differ"):
        fit(Y, X1, GROUPS[:5])
    with pytest.raises(ValidationError, match="must be finite"):
        fit([np.nan] + Y[1:], X1, GROUPS)


def test_recovers_coefficients_of_simulated_data():
    rng = np.random.default_rng(7)
    n_groups, per_group = 12, 8
    groups = np.repeat([f"G{j}" for j in range(n_groups)], per_group)
    x = rng.uniform(0, 4, size=groups.size)
    effects = rng.normal(0, 0.5, size=n_groups)
    y = 1.0 + 0.5 * x + np.repeat(effects, per_group) + rng.normal(0, 0.3, size=groups.size)
    X = np.column_stack([np.ones_like(x), x])

    model = fit(y, X, groups, column_names=[INTERCEPT, "x"])

    assert abs(model.coefficient(INTERCEPT) - 1.0) < 4 * model.se[0]
    assert abs(model.coefficient("x") - 0.5) < 4 * model.se[1]
    assert model.p_values[1] < 0.001
    assert model.sigma2_group > 0
    assert model.df == groups.size - 2 - n_groups + 1

    fitted = fitted_values(model, X, groups)
    residual = y - fitted
    assert float(residual @ residual) == pytest.approx(model.residual_ss)


def test_model_serializes():
    model = fit(Y, X1, GROUPS, column_names=[INTERCEPT])
    data = json.loads(model.to_json())

    assert data["method"] == "reml"
    assert data["coefficients"][0]["term"] == INTERCEPT
    assert data["variance_components"]["residual"] == pytest.approx(2.0, rel=1e-4)
    assert list(data["group_effects"]) == ["A", "B", "C"]
    assert data["df"] == 3
    assert "containment" in model.format_table()


# ----- Prediction -----
def _reciprocal_model(intercept: float) -> FittedModel:
    spec = ModelSpec(Term("cost_overrun", "reciprocal"), ())
    return FittedModel(
        column_names=spec.column_names,
        beta=[intercept],
        se=[0.1],
        t_stats=[intercept / 0.1],
        p_values=[0.01],
        sigma2_group=0.01,
        sigma2_resid=0.02,
        method="reml",
        n_used=30,
        spec=spec,
        group_effects={"PAK": 0.1},
    )


def test_predict_applies_known_group_effect():
    model = _reciprocal_model(0.5)

    known = predict(model, {}, group="PAK")
    assert known.random_effect_applied
    assert known.linear_predictor == pytest.approx(0.6)
    assert known.value == pytest.approx(1 / 0.6)
    assert known.flags == ()

    unknown = predict(model, {}, group="BRA")
    assert not unknown.random_effect_applied
    assert unknown.value == pytest.approx(2.0)
    assert unknown.flags == (NO_RANDOM_EFFECT,)
    assert predict(model, {}).flags == (NO_RANDOM_EFFECT,)


def test_predict_outside_response_domain():
    model = _reciprocal_model(-0.2)
    with pytest.raises(PredictionDomainError, match="prediction outside response domain"):
        predict(model, {})
    with pytest.raises(PredictionDomainError):
        back_transform(model, 0.0)
    assert back_transform(model, 0.25) == pytest.approx(4.0)


def test_published_model_predicts_fixed_effects():
    """1.402 - 0.1 ln 120 - 0.085 ln 8 = 0.7465, a factor of 1.3396."""
    spec = ModelSpec(
        Term("cost_overrun", "reciprocal"),
        (Term("estimated_schedule_months", "natural_log"), Term("long_term_inflation", "natural_log")),
    )
    model = FittedModel.from_published(
        spec, [1.402, -0.100, -0.085], [0.185, 0.041, 0.029], [7.56, -2.424, -2.93], [0.0, 0.016, 0.005], 239
    )
    result = predict(model, {"estimated_schedule_months": 120.0, "long_term_inflation": 8.0}, group="PAK")

    assert model.sigma2_group == model.sigma2_resid == 0.0
    assert result.linear_predictor == pytest.approx(0.746498, abs=1e-6)
    assert result.value == pytest.approx(1.3396, abs=1e-4)
    assert not result.random_effect_applied


# ----- Closed forms and invariances -----
def _balanced_layout():
    """Six groups of five with well separated group means."""
    rng = np.random.default_rng(65)
    offsets = np.array([-2.0, -1.0, 0.0, 0.5, 1.5, 3.0])
    y = np.repeat(offsets, 5) + rng.normal(0.0, 0.7, size=30)
    groups = np.repeat([f"G{j}" for j in range(6)], 5)
    return y, groups


def test_reml_matches_anova_closed_form_on_balanced_design():
    y, groups = _balanced_layout()
    cells = y.reshape(6, 5)
    ms_within = float(np.sum((cells - cells.mean(axis=1, keepdims=True)) ** 2)) / (6 * 4)
    ms_between = 5 * float(np.sum((cells.mean(axis=1) - y.mean()) ** 2)) / 5
    assert ms_between > ms_within

    model = fit(y, np.ones((30, 1)), groups, column_names=[INTERCEPT])

    assert model.sigma2_resid == pytest.approx(ms_within, abs=1e-6)
    assert model.sigma2_group == pytest.approx((ms_between - ms_within) / 5, abs=1e-6)
    assert model.beta[0] == pytest.approx(y.mean(), abs=1e-10)


def test_zero_group_variance_gives_ols():
    """Residuals that sum to zero in every group carry no between-group signal, so the estimate sits at 0."""
    x = np.tile([1.0, 2.0, 3.0, 4.0, 5.0], 8)
    # orthogonal to both the intercept and x within each group
    pattern = np.array([1.0, -2.0, 0.0, 2.0, -1.0])
    e = np.concatenate([s * pattern for s in (0.1, 0.3, 0.2, 0.05, 0.4, 0.15, 0.25, 0.35)])
    y = 1.4 - 0.1 * x + e
    X = np.column_stack([np.ones_like(x), x])
    groups = np.repeat([f"G{j}" for j in range(8)], 5)

    model = fit(y, X, groups, column_names=[INTERCEPT, "x"])
    ols, *_ = np.linalg.lstsq(X, y, rcond=None)

    assert model.sigma2_group < 1e-6
    np.testing.assert_allclose(model.beta, ols, rtol=0.0, atol=1e-8)
    np.testing.assert_allclose(model.beta, [1.4, -0.1], rtol=0.0, atol=1e-8)


def _simulated(rng, n_groups=20, per_group=6):
    groups = np.repeat([f"C{j:02d}" for j in range(n_groups)], per_group)
    x = rng.uniform(1.0, 5.0, size=groups.size)
    z = np.repeat(rng.uniform(0.0, 3.0, size=n_groups), per_group)
    effects = np.repeat(rng.normal(0.0, 0.3, size=n_groups), per_group)
    y = 2.0 + 0.4 * x - 0.3 * z + effects + rng.normal(0.0, 0.5, size=groups.size)
    return y, np.column_stack([np.ones_like(x), x, z]), groups


def test_fit_is_invariant_to_row_permutation():
    rng = np.random.default_rng(21)
    y, X, groups = _simulated(rng)
    model = fit(y, X, groups, column_names=[INTERCEPT, "x", "z"])

    for _ in range(5):
        order = rng.permutation(y.size)
        shuffled = fit(y[order], X[order], groups[order], column_names=[INTERCEPT, "x", "z"])
        np.testing.assert_allclose(shuffled.beta, model.beta, rtol=0.0, atol=1e-10)
        assert shuffled.sigma2_group == pytest.approx(model.sigma2_group, abs=1e-10)
        assert shuffled.sigma2_resid == pytest.approx(model.sigma2_resid, abs=1e-10)
        assert shuffled.loglik == pytest.approx(model.loglik, abs=1e-10)


@pytest.mark.parametrize("factor, tolerance", [(1024.0, 1e-12), (0.125, 1e-12), (10.0, 1e-6)])
def test_rescaled_covariate_keeps_its_t_statistic(factor, tolerance):
    """Power-of-two factors reproduce the fit bit for bit; other factors agree to optimiser tolerance."""
    y, X, groups = _simulated(np.random.default_rng(22))
    model = fit(y, X, groups, column_names=[INTERCEPT, "x", "z"])

    scaled = X.copy()
    scaled[:, 1] *= factor
    rescaled = fit(y, scaled, groups, column_names=[INTERCEPT, "x", "z"])

    assert rescaled.coefficient("x") == pytest.approx(model.coefficient("x") / factor, rel=tolerance)
    assert rescaled.t_stats[1] == pytest.approx(model.t_stats[1], rel=tolerance)
    assert rescaled.sigma2_group == pytest.approx(model.sigma2_group, rel=tolerance)


def test_reml_loglik_beats_zero_and_ten_times_the_estimate():
    y, X, groups = _simulated(np.random.default_rng(23))
    model = fit(y, X, groups)
    lam = model.variance_ratio
    assert lam > 0

    assert model.loglik >= profile_loglik(y, X, groups, 0.0)
    assert model.loglik >= profile_loglik(y, X, groups, 10 * lam)
    assert model.loglik == pytest.approx(profile_loglik(y, X, groups, lam), rel=1e-9)


def test_recovery_and_interval_coverage_over_500_replications():
    """60 countries of 4 projects, beta (1.4, -0.1, -0.085), s2_g = 0.01, s2_e = 0.04."""
    truth = np.array([1.4, -0.1, -0.085])
    n_countries, per_country, replications = 60, 4, 500
    rng = np.random.default_rng(2012)
    groups = np.repeat([f"C{j:02d}" for j in range(n_countries)], per_country)

    estimates = np.empty((replications, 3))
    covered = np.zeros(3)
    for r in range(replications):
        log_months = rng.uniform(np.log(12.0), np.log(240.0), size=groups.size)
        log_inflation = np.repeat(rng.uniform(0.0, np.log(50.0), size=n_countries), per_country)
        X = np.column_stack([np.ones(groups.size), log_months, log_inflation])
        effects = np.repeat(rng.normal(0.0, 0.1, size=n_countries), per_country)
        y = X @ truth + effects + rng.normal(0.0, 0.2, size=groups.size)

        model = fit(y, X, groups)
        half_width = t_dist.ppf(0.975, model.df) * model.se
        estimates[r] = model.beta
        covered += np.abs(model.beta - truth) <= half_width

    np.testing.assert_allclose(estimates.mean(axis=0), truth, rtol=0.0, atol=0.01)
    coverage = covered / replications
    assert np.all((coverage >= 0.92) & (coverage <= 0.98)), coverage
