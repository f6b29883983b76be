import pytest

from refcast.exceptions import FixtureError
from refcast.fixtures import FIXTURES_ENV, load_fixture
from refcast.rcf.benchmarks import (
    PROJECT_CATEGORY,
    AssetClassBenchmark,
    LargeDamSummary,
    compare_asset_classes,
    load_benchmarks,
)
from refcast.rcf.uplift import UpliftCurve
from refcast.stats.distribution import EmpiricalDistribution


def _by_category():
    return {b.category: b for b in load_benchmarks()}


def test_load_benchmarks_published_rows():
    rows = _by_category()

    rail = rows["Rail"]
    assert (rail.mean_overrun_pct, rail.p50_uplift_pct, rail.p80_uplift_pct) == (45, 40, 57)
    roads = rows["Roads"]
    assert (roads.mean_overrun_pct, roads.p50_uplift_pct, roads.p80_uplift_pct) == (20, 15, 32)
    dams = rows["Large dam projects"]
    assert (dams.mean_overrun_pct, dams.p50_uplift_pct, dams.p80_uplift_pct) == (96, 26, 99)

    assert rows["Building projects"].p80_range_pct == (4.0, 51.0)
    assert rows["Building projects"].p80_uplift_pct is None
    assert rows["Nuclear power plants"].mean_overrun_pct == 207
    assert "Metro" in rail.project_types


def test_compare_asset_classes_appends_project_row():
    summary = LargeDamSummary.load()
    table = compare_asset_classes(load_benchmarks(), summary.cost_curve())

    project = table[-1]
    assert project.category == PROJECT_CATEGORY
    # Sketch mean 21.58 / 11, p50 and p80 read off the curve
    assert project.mean_overrun_pct == pytest.approx(100 * (21.58 / 11 - 1))
    assert project.p50_uplift_pct == pytest.approx(26.0)
    assert project.p80_uplift_pct == pytest.approx(99.0)
    assert len(table) == len(load_benchmarks()) + 1


def test_compare_asset_classes_minimal_inputs():
    dams = [_by_category()["Large dam projects"]]
    assert compare_asset_classes(dams) == dams

    curve = UpliftCurve(EmpiricalDistribution([1.0, 1.2, 1.4] * 10, label="own class"))
    table = compare_asset_classes([], curve, project_category="Hydro in Asia")
    assert [b.category for b in table] == ["Hydro in Asia"]
    assert table[0].source == "own class"

    with pytest.raises(ValueError, match="at least one benchmark"):
        compare_asset_classes([])


def test_asset_class_benchmark_validation():
    with pytest.raises(ValueError, match="p80 uplift below p50"):
        AssetClassBenchmark("Broken", p50_uplift_pct=50, p80_uplift_pct=40)
    with pytest.raises(ValueError, match="inverted p80 range"):
        AssetClassBenchmark("Broken", p80_range_pct=(10, 5))


def test_large_dam_summary_quoted_constants():
    summary = LargeDamSummary.load()
    assert summary.cost.represented_n == 245
    assert summary.schedule.represented_n == 239
    assert summary.quoted["cost_median"] == 1.27
    assert summary.quoted["uplift_p80_with_inflation"] == 1.76
    assert summary.cost.mean == pytest.approx(1.9618, abs=0.0001)
    with pytest.raises(TypeError):
        summary.quoted["cost_median"] = 2.0


def test_fixture_directory_override(tmp_path, monkeypatch):
    (tmp_path / "benchmarks.json").write_text('{"benchmarks": [{"category": "Ports"}]}', encoding="utf-8")
    (tmp_path / "large_dam_summary.json").write_text("[1, 2]", encoding="utf-8")
    monkeypatch.setenv(FIXTURES_ENV, str(tmp_path))

    assert [b.category for b in load_benchmarks()] == ["Ports"]
    with pytest.raises(FixtureError, match="expected a JSON object"):
        LargeDamSummary.load()
    with pytest.raises(FixtureError, match="fixture not found"):
        load_fixture("published_models.json")
