"""
This module contains the:

- **AssetClassBenchmark:** Published optimism-bias uplifts of one infrastructure asset class.

- **LargeDamSummary:** The bundled reconstruction of the large-dam overrun distributions
  together with the quoted headline constants.

- **compare_asset_classes:** The cross-asset comparison table.
"""

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from ..exceptions import FixtureError
from ..fixtures import BENCHMARKS, LARGE_DAM_SUMMARY, load_fixture
from ..stats.distribution import EmpiricalDistribution
from .uplift import UpliftCurve

PROJECT_CATEGORY = "This project"


@dataclass(frozen=True)
class AssetClassBenchmark:
    """Uplifts of one asset class in percent; None where only a range is published."""

    category: str
    mean_overrun_pct: Optional[float] = None
    p50_uplift_pct: Optional[float] = None
    p80_uplift_pct: Optional[float] = None
    p80_range_pct: Optional[Tuple[float, float]] = None
    project_types: Tuple[str, ...] = ()
    source: str = ""

    def __post_init__(self):
        if self.p50_uplift_pct is not None and self.p80_uplift_pct is not None:
            if self.p80_uplift_pct < self.p50_uplift_pct:
                raise ValueError(f"{self.category}: p80 uplift below p50 uplift")
        if self.p80_range_pct is not None:
            low, high = self.p80_range_pct
            if high < low:
                raise ValueError(f"{self.category}: inverted p80 range")
            object.__setattr__(self, "p80_range_pct", (float(low), float(high)))
        object.__setattr__(self, "project_types", tuple(self.project_types))

    @classmethod
    def from_dict(cls, data: Mapping[str, object]) -> "AssetClassBenchmark":
        p80_range = data.get("p80_range_pct")
        return cls(
            category=str(data["category"]),
            mean_overrun_pct=data.get("mean_overrun_pct"),
            p50_uplift_pct=data.get("p50_uplift_pct"),
            p80_uplift_pct=data.get("p80_uplift_pct"),
            p80_range_pct=tuple(p80_range) if p80_range is not None else None,
            project_types=tuple(data.get("project_types", ())),
            source=str(data.get("source", "")),
        )

    def to_dict(self) -> Dict[str, object]:
        return {
            "category": self.category,
            "mean_overrun_pct": self.mean_overrun_pct,
            "p50_uplift_pct": self.p50_uplift_pct,
            "p80_uplift_pct": self.p80_uplift_pct,
            "p80_range_pct": list(self.p80_range_pct) if self.p80_range_pct else None,
            "source": self.source,
        }


def load_benchmarks() -> List[AssetClassBenchmark]:
    """All bundled asset-class benchmark rows, in published order."""
    data = load_fixture(BENCHMARKS)
    try:
        return [AssetClassBenchmark.from_dict(row) for row in data["benchmarks"]]
    except (KeyError, TypeError, ValueError) as e:
        raise FixtureError(f"invalid {BENCHMARKS}: {e}")


def compare_asset_classes(
    benchmarks: Sequence[AssetClassBenchmark],
    project_uplift_curve: Optional[UpliftCurve] = None,
    project_category: str = PROJECT_CATEGORY,
) -> List[AssetClassBenchmark]:
    """The comparison table, with the project's own class appended when a curve is given.

    The appended row reads its mean overrun from the curve's distribution and
    its 50th and 80th percentile uplifts from the curve at risks 0.5 and 0.2.

    Raises
    ------
    ValueError
        If neither benchmarks nor a project curve are supplied.
    """
    rows = list(benchmarks)
    if project_uplift_curve is not None:
        source = project_uplift_curve.source
        rows.append(
            AssetClassBenchmark(
                category=project_category,
                mean_overrun_pct=100.0 * (source.mean - 1.0),
                p50_uplift_pct=100.0 * project_uplift_curve.evaluate(0.5),
                p80_uplift_pct=100.0 * project_uplift_curve.evaluate(0.2),
                source=source.label,
            )
        )
    if not rows:
        raise ValueError("compare_asset_classes requires at least one benchmark")
    return rows


@dataclass(frozen=True)
class LargeDamSummary:
    """Decile sketches of the published cost and schedule overrun distributions.

    The sketches are reconstructions: eleven points at the 0th to 100th
    deciles chosen so that the quantile rule reproduces the published uplift
    curve. ``quoted`` holds the headline numbers as documentary constants;
    they are not recomputed from the sketches.
    """

    cost: EmpiricalDistribution
    schedule: EmpiricalDistribution
    quoted: Mapping[str, float] = field(default_factory=dict)
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "quoted", MappingProxyType(dict(self.quoted)))

    @classmethod
    def load(cls) -> "LargeDamSummary":
        data = load_fixture(LARGE_DAM_SUMMARY)
        try:
            return cls(
                cost=EmpiricalDistribution(
                    sample=data["cost"]["deciles"],
                    label="cost overrun, large dams (published decile sketch)",
                    represented_n=int(data["cost"]["represented_n"]),
                ),
                schedule=EmpiricalDistribution(
                    sample=data["schedule"]["deciles"],
                    label="schedule slippage, large dams (published decile sketch)",
                    represented_n=int(data["schedule"]["represented_n"]),
                ),
                quoted={k: float(v) for k, v in data["quoted"].items()},
                label=str(data.get("label", "")),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise FixtureError(f"invalid {LARGE_DAM_SUMMARY}: {e}")

    def cost_curve(self) -> UpliftCurve:
        return UpliftCurve(self.cost)

    def schedule_curve(self) -> UpliftCurve:
        return UpliftCurve(self.schedule)
