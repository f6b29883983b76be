"""Descriptive battery of a reference class: summaries, bias tests, regional and time comparisons."""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from ..refdata.records import ReferenceClass
from ..refdata.regions import RegionEnum
from ..stats.distribution import EmpiricalDistribution, fraction_above, summarize
from ..stats.linear import anova_oneway, ols_univariate
from ..stats.rank_tests import mann_whitney_u, signed_rank_vs_reference
from ..stats.results import OLSResult, Summary, TestResult
from .viability import TYPICAL_BCR

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RegionBreakdown:
    region: str
    n: int
    cost_mean: float
    cost_median: float
    schedule_mean: float
    schedule_median: float

    def to_dict(self) -> Dict[str, object]:
        return {
            "region": self.region,
            "n": self.n,
            "cost_mean": self.cost_mean,
            "cost_median": self.cost_median,
            "schedule_mean": self.schedule_mean,
            "schedule_median": self.schedule_median,
        }


@dataclass(frozen=True)
class Description:
    """Result of ``describe``. Tests that cannot run on the class are None."""

    filter_description: str
    n_records: int
    n_observations: int
    cost: Summary
    schedule: Summary
    regions: List[RegionBreakdown]
    cost_bias: Optional[TestResult] = None
    schedule_bias: Optional[TestResult] = None
    north_america_vs_rest: Optional[TestResult] = None
    south_asia_vs_rest: Optional[TestResult] = None
    decade_anova: Optional[TestResult] = None
    year_trend: Optional[OLSResult] = None
    stranded_fraction: float = 0.0
    notes: List[str] = field(default_factory=list)

    @property
    def fraction_over_budget(self) -> float:
        return self.cost.fraction_above[1.0]

    @property
    def fraction_over_schedule(self) -> float:
        return self.schedule.fraction_above[1.0]

    def to_dict(self) -> Dict[str, object]:
        def optional(result):
            return None if result is None else result.to_dict()

        return {
            "filter_description": self.filter_description,
            "n_records": self.n_records,
            "n_observations": self.n_observations,
            "cost": self.cost.to_dict(),
            "schedule": self.schedule.to_dict(),
            "fraction_over_budget": self.fraction_over_budget,
            "fraction_over_schedule": self.fraction_over_schedule,
            "regions": [r.to_dict() for r in self.regions],
            "cost_bias": optional(self.cost_bias),
            "schedule_bias": optional(self.schedule_bias),
            "north_america_vs_rest": optional(self.north_america_vs_rest),
            "south_asia_vs_rest": optional(self.south_asia_vs_rest),
            "decade_anova": optional(self.decade_anova),
            "year_trend": optional(self.year_trend),
            "stranded_fraction": self.stranded_fraction,
            "notes": list(self.notes),
        }

    def to_text(self) -> str:
        lines = [
            f"reference class: {self.filter_description}",
            f"records: {self.n_records}, observations: {self.n_observations}",
            f"cost overrun: mean {self.cost.mean:.4f}, median {self.cost.median:.4f}, IQR {self.cost.iqr:.4f}",
            f"fraction over budget: {self.fraction_over_budget:.4g}",
            f"fraction > 2x budget: {self.cost.fraction_above[2.0]:.4g}",
            f"fraction > 3x budget: {self.cost.fraction_above[3.0]:.4g}",
            f"schedule slippage: mean {self.schedule.mean:.4f}, median {self.schedule.median:.4f}, "
            f"IQR {self.schedule.iqr:.4f}",
            f"fraction over schedule: {self.fraction_over_schedule:.4g}",
            f"stranded at BCR {TYPICAL_BCR:g}: {self.stranded_fraction:.4g}",
            "regions:",
        ]
        for r in self.regions:
            lines.append(
                f"  {r.region:<22} n={r.n:<4d} cost mean {r.cost_mean:.3f} median {r.cost_median:.3f}"
                f"  schedule mean {r.schedule_mean:.3f} median {r.schedule_median:.3f}"
            )
        for name, result in (
            ("cost bias vs 1.0", self.cost_bias),
            ("schedule bias vs 1.0", self.schedule_bias),
            ("North America vs rest (cost)", self.north_america_vs_rest),
            ("South Asia vs rest (schedule)", self.south_asia_vs_rest),
            ("decade ANOVA (cost)", self.decade_anova),
        ):
            if result is not None:
                lines.append(f"{name}: {result.method}, statistic {result.statistic:.4g}, p {result.p_value:.4g}")
        if self.year_trend is not None:
            t = self.year_trend
            lines.append(f"cost trend on decision year: slope {t.slope:.4g}, F {t.F:.4g}, p {t.p_value:.4g}")
        lines.extend(f"note: {note}" for note in self.notes)
        return "\n".join(lines)


def _try(notes: List[str], name: str, func, *args, **kwargs):
    try:
        return func(*args, **kwargs)
    except ValueError as e:
        notes.append(f"{name} skipped: {e}")
        logger.debug("%s skipped: %s", name, e)
        return None


def describe(rc: ReferenceClass) -> Description:
    """Run the descriptive battery on a reference class.

    Covers cost and schedule summaries (fractions over, above 2x and above 3x),
    a per-region breakdown, one-sided signed-rank tests of both ratios against
    1.0, North America against the rest on cost overrun, South Asia against the
    rest on schedule slippage, one-way ANOVA of cost overrun across decades of
    the decision to build, the linear trend on decision year, and the share of
    projects stranded at the typical benefit-cost ratio.

    Raises
    ------
    EmptyReferenceClassError
        If no record carries a complete observation.
    """
    cost = rc.cost_distribution()
    schedule = rc.schedule_distribution()
    records = rc.by_id()
    pairs = [(records[o.dam_id], o) for o in rc.observations]
    notes: List[str] = []

    regions = []
    for region in RegionEnum:
        members = [o for r, o in pairs if r.region is region]
        if not members:
            continue
        c = EmpiricalDistribution.from_values(o.cost_overrun for o in members)
        s = EmpiricalDistribution.from_values(o.schedule_slippage for o in members)
        regions.append(
            RegionBreakdown(region.value, len(members), c.mean, summarize(c).median, s.mean, summarize(s).median)
        )

    def split(region: RegionEnum, attribute: str):
        inside = [getattr(o, attribute) for r, o in pairs if r.region is region]
        outside = [getattr(o, attribute) for r, o in pairs if r.region is not region]
        return inside, outside

    na, rest = split(RegionEnum.NORTH_AMERICA, "cost_overrun")
    sa, rest_sa = split(RegionEnum.SOUTH_ASIA, "schedule_slippage")

    decades: Dict[int, List[float]] = {}
    for r, o in pairs:
        decades.setdefault(10 * (r.year_decision // 10), []).append(o.cost_overrun)
    decade_groups = [v for _, v in sorted(decades.items()) if len(v) >= 2]

    return Description(
        filter_description=rc.filter_description,
        n_records=len(rc.records),
        n_observations=len(rc.observations),
        cost=summarize(cost),
        schedule=summarize(schedule),
        regions=regions,
        cost_bias=_try(notes, "cost bias test", signed_rank_vs_reference, cost.sample, 1.0, "greater"),
        schedule_bias=_try(notes, "schedule bias test", signed_rank_vs_reference, schedule.sample, 1.0, "greater"),
        north_america_vs_rest=(
            _try(notes, "North America comparison", mann_whitney_u, na, rest) if na and rest else None
        ),
        south_asia_vs_rest=(
            _try(notes, "South Asia comparison", mann_whitney_u, sa, rest_sa) if sa and rest_sa else None
        ),
        decade_anova=_try(notes, "decade ANOVA", anova_oneway, decade_groups),
        year_trend=_try(
            notes,
            "decision-year trend",
            ols_univariate,
            [r.year_decision for r, _ in pairs],
            [o.cost_overrun for _, o in pairs],
        ),
        stranded_fraction=fraction_above(cost, TYPICAL_BCR),
        notes=notes,
    )
