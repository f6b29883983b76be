import json

import pytest

from refcast.exceptions import MissingTermError, ValidationError
from refcast.fixtures import DIAMER_BHASHA, fixture_path
from refcast.dammodels.descriptor import ProjectDescriptor, load_descriptor
from refcast.dammodels.published import COMPLETION_FALLBACK, PublishedModelEnum
from refcast.dammodels.report import (
    CONVENTION_CAVEAT,
    FIXED_EFFECTS_CAVEAT,
    NO_BCR_CAVEAT,
    VIABILITY_CAVEAT,
    forecast_report,
)
from refcast.refdata.records import DamRecord, ReferenceClass
from refcast.refdata.regions import region_of


@pytest.fixture
def diamer() -> ProjectDescriptor:
    return load_descriptor(fixture_path(DIAMER_BHASHA))


def test_diamer_bhasha_forecast(diamer):
    """Budget 894 * 1.99 = 1779.06 at 20 % risk; BCR 1.43 / 1.9618 = 0.729, stranded."""
    report = forecast_report(diamer)

    rcf = report.rcf_branch
    assert rcf.cost_uplift == pytest.approx(0.99)
    assert rcf.schedule_uplift == pytest.approx(0.66)
    assert rcf.debiased_budget == pytest.approx(1779.06)
    assert rcf.debiased_schedule_months == pytest.approx(199.2)
    assert rcf.expected_cost_overrun == pytest.approx(21.58 / 11)

    assert [p.model_id for p in report.model_branch] == list(PublishedModelEnum)
    assert report.model_branch[0].value == pytest.approx(1.3396, abs=1e-4)

    assert report.viability.debiased_bcr == pytest.approx(1.43 / (21.58 / 11))
    assert report.viability.stranded

    assert report.caveats[0] == CONVENTION_CAVEAT
    assert COMPLETION_FALLBACK in report.caveats
    assert FIXED_EFFECTS_CAVEAT in report.caveats
    assert VIABILITY_CAVEAT in report.caveats
    assert any(c.startswith("published Pakistan cost overrun 44%") for c in report.caveats)


def test_forecast_at_median_risk(diamer):
    report = forecast_report(diamer, acceptable_risk=0.5, models=["M1"])

    assert report.rcf_branch.cost_uplift == pytest.approx(0.26)
    assert report.rcf_branch.debiased_budget == pytest.approx(894 * 1.26)
    assert [p.model_id for p in report.model_branch] == [PublishedModelEnum.M1_COST_OVERRUN]


def test_forecast_serializations(diamer):
    report = forecast_report(diamer, models=["M1", "M3"])

    data = json.loads(report.to_json())
    assert data["project"] == "Diamer-Bhasha"
    assert data["currency"] == "PKR bn"
    assert [m["model"] for m in data["model_branch"]] == ["M1_cost_overrun", "M3_schedule_slip"]
    assert data["viability"]["stranded"] is True

    rows = report.to_csv_rows()
    assert ("rcf", "acceptable_risk", 0.2) in rows
    assert ("viability", "stranded", True) in rows
    assert ("caveat", "note", CONVENTION_CAVEAT) in rows
    assert "de-biased budget:      1,779.1 PKR bn" in report.to_text()


def test_missing_inputs_skip_default_models_but_raise_when_named():
    project = ProjectDescriptor("Sketch", estimated_cost=100.0)

    report = forecast_report(project)
    assert report.model_branch == ()
    assert report.viability is None
    assert NO_BCR_CAVEAT in report.caveats
    assert any(c.startswith("M1_cost_overrun skipped: missing term") for c in report.caveats)
    assert report.rcf_branch.debiased_schedule_months is None

    with pytest.raises(MissingTermError):
        forecast_report(project, models=["M1"])


def test_forecast_needs_a_branch():
    with pytest.raises(ValidationError, match="neither branch computable"):
        forecast_report(ProjectDescriptor("Nothing"))
    with pytest.raises(ValueError, match="acceptable_risk must be in"):
        forecast_report(ProjectDescriptor("Sketch", estimated_cost=1.0), acceptable_risk=1.0)


def test_forecast_against_own_reference_class():
    records = [
        DamRecord(
            id=f"D{k}",
            name=f"Dam {k}",
            country="BRA",
            region=region_of("BRA"),
            project_type="hydropower",
            is_hydropower=True,
            is_new_station=True,
            wall_height_m=60.0,
            estimated_cost=100.0,
            actual_cost=100.0 * (1.0 + 0.1 * k),
            year_decision=1980,
            estimated_schedule_months=60.0,
            actual_schedule_months=60.0,
        )
        for k in range(1, 31)
    ]
    rc = ReferenceClass(records, "Brazilian dams")
    project = ProjectDescriptor("Planned", estimated_cost=200.0, estimated_schedule_months=48.0, estimated_bcr=3.0)

    report = forecast_report(project, rc, acceptable_risk=0.5, models=[])
    assert report.rcf_branch.reference == "cost overrun, 30 dams (Brazilian dams)"
    assert report.rcf_branch.schedule_uplift == 0.0
    assert report.rcf_branch.debiased_schedule_months == 48.0
    assert report.rcf_branch.expected_cost_overrun == pytest.approx(2.55)
    assert not report.viability.stranded
