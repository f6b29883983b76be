import math

import numpy as np
import pytest

from refcast.exceptions import FixtureError, MissingTermError, PredictionDomainError, TransformationDomainError
from refcast.exceptions import InputError, ValidationError
from refcast.fixtures import DIAMER_BHASHA, FIXTURES_ENV, fixture_path
from refcast.dammodels.descriptor import ProjectDescriptor, load_descriptor
from refcast.dammodels.published import (
    COMPLETION_FALLBACK,
    PublishedModelEnum,
    load_published_models,
    predict_published,
    prediction_surface,
    published_model,
    published_model_id,
    sensitivity,
)


@pytest.fixture
def diamer() -> ProjectDescriptor:
    return load_descriptor(fixture_path(DIAMER_BHASHA))


def test_load_published_models():
    models = load_published_models()
    assert list(models) == list(PublishedModelEnum)

    m3 = models[PublishedModelEnum.M3_SCHEDULE_SLIP]
    assert m3.spec.column_names[-1] == "democracy:south_asia"
    assert m3.terms[-1].coefficient == -0.239
    assert m3.is_ratio
    assert not models[PublishedModelEnum.M2_EST_SCHEDULE].is_ratio
    assert m3.to_fitted_model().beta[0] == 0.405

    assert published_model_id("m1") is PublishedModelEnum.M1_COST_OVERRUN
    assert published_model_id("M4_actual_schedule") is PublishedModelEnum.M4_ACTUAL_SCHEDULE
    with pytest.raises(ValueError, match="Supported values"):
        published_model_id("M5")


def test_m1_diamer_bhasha(diamer):
    """1.402 - 0.100 ln 120 - 0.085 ln 8 = 0.746498 -> 1 / 0.746498 = 1.3396."""
    prediction = predict_published("M1", diamer)

    assert prediction.linear_predictor == pytest.approx(0.746498, abs=1e-6)
    assert prediction.value == pytest.approx(1.3396, abs=1e-4)
    assert prediction.overrun_pct == pytest.approx(33.96, abs=0.01)
    assert prediction.caveats == ()


def test_m2_estimated_schedule():
    """3.444 + 0.029 sqrt(100) + 0.058 ln 1000 + 0.016 ln 1000 = 4.245174 -> 69.77 months."""
    project = ProjectDescriptor("Example", wall_height_m=100, wall_length_m=1000, installed_capacity_mw=1000)
    prediction = predict_published(PublishedModelEnum.M2_EST_SCHEDULE, project)

    assert prediction.linear_predictor == pytest.approx(4.245174, abs=1e-6)
    assert prediction.value == pytest.approx(69.77, abs=0.01)
    assert prediction.overrun_pct is None


def test_m3_pakistan_and_relocated(diamer):
    """In Pakistan 0.611516 (63.5 % slippage); relocated to the US with income 38000, 0.921405."""
    pakistan = predict_published("M3", diamer)
    assert pakistan.linear_predictor == pytest.approx(0.611516, abs=1e-5)
    assert pakistan.value == pytest.approx(1.63528, abs=1e-4)

    relocated = diamer.with_changes(country="USA", south_asia=False, per_capita_income_2000usd=38000)
    us = predict_published("M3", relocated)
    assert us.linear_predictor == pytest.approx(0.921405, abs=1e-5)
    assert us.value == pytest.approx(1.0853, abs=1e-4)


def test_m4_completion_year_and_fallback():
    """-17.712 + 0.105 ln 1364 + 0.011 * 1980 = 4.825909 -> 124.70 months."""
    project = ProjectDescriptor("Example", wall_length_m=1364, year_completion=1980)
    prediction = predict_published("M4", project)
    assert prediction.value == pytest.approx(124.70, abs=0.01)
    assert prediction.caveats == ()

    planned = ProjectDescriptor("Example", wall_length_m=1364, year_decision=1970, estimated_schedule_months=120)
    fallback = predict_published("M4", planned)
    assert fallback.value == pytest.approx(124.70, abs=0.01)
    assert fallback.caveats == (COMPLETION_FALLBACK,)


def test_prediction_errors():
    with pytest.raises(MissingTermError, match="missing term: long_term_inflation"):
        predict_published("M1", ProjectDescriptor("Example", estimated_schedule_months=120))
    # 1.402 - 0.1 ln(1e9) - 0.085 ln 8 < 0
    with pytest.raises(PredictionDomainError):
        predict_published("M1", ProjectDescriptor("Example", estimated_schedule_months=1e9, long_term_inflation_pct=8))
    with pytest.raises(ValidationError, match="must be positive"):
        ProjectDescriptor("Example", long_term_inflation_pct=0)

    # Bypasses descriptor validation to reach the transformation check
    project = ProjectDescriptor("Example", estimated_schedule_months=120, long_term_inflation_pct=8)
    object.__setattr__(project, "long_term_inflation_pct", -1.0)
    with pytest.raises(TransformationDomainError, match="log\\(long_term_inflation\\) undefined"):
        predict_published("M1", project)


def test_sensitivity(diamer):
    """Switching the democracy dummy off in South Asia raises 1/slippage by 0.134 + 0.239."""
    result = sensitivity("M3", diamer, "democracy", -1.0)
    assert result.shifted.linear_predictor - result.base.linear_predictor == pytest.approx(0.373)
    assert result.change < 0, "less slippage without democracy in South Asia"

    inflation = sensitivity("M1", diamer, "long_term_inflation", 12.0)
    assert inflation.change > 0, "higher inflation means larger overruns"

    with pytest.raises(ValidationError, match="has no term in wall_height_m"):
        sensitivity("M1", diamer, "wall_height_m", 1.0)


def test_prediction_surface(diamer):
    rows = prediction_surface(
        "M1", diamer, "estimated_schedule_months", [24, 120, 240], "long_term_inflation", [2, 40]
    )
    assert [(r["long_term_inflation"], r["estimated_schedule_months"]) for r in rows] == [
        (2.0, 24.0),
        (2.0, 120.0),
        (2.0, 240.0),
        (40.0, 24.0),
        (40.0, 120.0),
        (40.0, 240.0),
    ]
    values = [r["value"] for r in rows]
    assert values[:3] == sorted(values[:3]), "longer schedules overrun more"
    assert values[3] > values[0]
    assert rows[1]["linear_predictor"] == pytest.approx(1.402 - 0.1 * math.log(120) - 0.085 * math.log(2))

    with pytest.raises(ValidationError, match="has no term"):
        prediction_surface("M1", diamer, "wall_height_m", [1], "long_term_inflation", [2])


def test_descriptor_loading(tmp_path, diamer):
    assert diamer.name == "Diamer-Bhasha"
    assert diamer.democracy is True
    assert diamer.values()["long_term_inflation"] == 8.0
    assert ProjectDescriptor.from_dict(diamer.to_dict()) == diamer

    bad = tmp_path / "bad.json"
    bad.write_text('{"name": "X", "colour": "red"}', encoding="utf-8")
    with pytest.raises(InputError, match="Unknown descriptor fields \\['colour'\\]"):
        load_descriptor(bad)
    bad.write_text("[]", encoding="utf-8")
    with pytest.raises(InputError, match="expected a JSON object"):
        load_descriptor(bad)
    with pytest.raises(InputError, match="cannot read descriptor"):
        load_descriptor(tmp_path / "missing.json")
    with pytest.raises(InputError, match="needs a name"):
        ProjectDescriptor.from_dict({"country": "PAK"})


def test_broken_model_fixture(tmp_path, monkeypatch):
    (tmp_path / "published_models.json").write_text('{"models": [{"id": "M1"}]}', encoding="utf-8")
    monkeypatch.setenv(FIXTURES_ENV, str(tmp_path))
    with pytest.raises(FixtureError, match="invalid published_models.json"):
        published_model("M1")


def test_published_model_lookup_and_m1_prediction(diamer):
    """The id coercer and the model lookup resolve to the same bundled model."""
    model = published_model("M1")
    assert model.id is published_model_id("m1_cost_overrun")
    assert [t.coefficient for t in model.terms] == [-0.100, -0.085]

    assert predict_published(model.id, diamer).linear_predictor == pytest.approx(0.746498, abs=1e-6)


def test_m1_increases_with_duration_and_inflation():
    rng = np.random.default_rng(1)
    for _ in range(1000):
        months = float(rng.uniform(6.0, 400.0))
        inflation = float(rng.uniform(0.5, 60.0))
        step = float(rng.uniform(0.01, 1.0))
        base = ProjectDescriptor("Example", estimated_schedule_months=months, long_term_inflation_pct=inflation)

        reference = predict_published("M1", base).value
        longer = base.with_changes(estimated_schedule_months=months * (1 + step))
        dearer = base.with_changes(long_term_inflation_pct=inflation * (1 + step))
        assert predict_published("M1", longer).value > reference, (months, inflation, step)
        assert predict_published("M1", dearer).value > reference, (months, inflation, step)


def test_m3_slippage_rises_with_wall_length_and_falls_with_capacity():
    rng = np.random.default_rng(3)
    for _ in range(1000):
        base = ProjectDescriptor(
            "Example",
            democracy=bool(rng.integers(0, 2)),
            south_asia=bool(rng.integers(0, 2)),
            per_capita_income_2000usd=float(rng.uniform(200.0, 50000.0)),
            wall_length_m=float(rng.uniform(50.0, 5000.0)),
            installed_capacity_mw=float(rng.uniform(1.0, 20000.0)),
        )
        step = float(rng.uniform(0.01, 1.0))

        reference = predict_published("M3", base).value
        longer = base.with_changes(wall_length_m=base.wall_length_m * (1 + step))
        larger = base.with_changes(installed_capacity_mw=base.installed_capacity_mw * (1 + step))
        assert predict_published("M3", longer).value > reference, base
        assert predict_published("M3", larger).value < reference, base
