"""
This module contains the reference-class record types:

- **DamRecord:** One completed (or proposed) large dam with its features,
  constant-currency costs, schedule and country linkage.

- **CountryMacroSeries:** Yearly macroeconomic series of one host country.

- **OverrunObservation:** The cost overrun and schedule slippage ratios of one dam.

- **ReferenceClass:** A validated, nonempty set of records and their observations.

All types are frozen; derived collections are tuples or read-only mappings.
"""

import math
from dataclasses import dataclass, field, fields
from types import MappingProxyType
from typing import Callable, Dict, Mapping, Optional, Tuple

from ..exceptions import EmptyReferenceClassError, UndefinedRatioError, ValidationError
from ..stats.distribution import EmpiricalDistribution
from ..utils import value_to_enum
from .inflation import long_term_inflation
from .regions import ProjectTypeEnum, RegionEnum, region_of

LARGE_DAM_HEIGHT_M = 15.0
SCHEDULE_TOLERANCE_MONTHS = 24.0
DEMOCRACY_POLITY2 = 6


def _check_positive(name: str, value: Optional[float]):
    if value is None:
        return
    if not math.isfinite(value) or value <= 0:
        raise ValidationError(f"{name} must be positive, got {value}")


def _check_nonnegative(name: str, value: Optional[float]):
    if value is None:
        return
    if not math.isfinite(value) or value < 0:
        raise ValidationError(f"{name} must be nonnegative, got {value}")


def _check_share(name: str, value: Optional[float]):
    if value is None:
        return
    if not 0.0 <= value <= 100.0:
        raise ValidationError(f"{name} must be within [0, 100], got {value}")


@dataclass(frozen=True, kw_only=True)
class DamRecord:
    """One reference-class project.

    Field order matches the ``refclass.csv`` header. Optional fields are None
    when the source left them empty; no sentinel numbers are used. Costs are in
    constant local currency of ``base_year`` (the year of the decision to build)
    and schedules in months from project approval to full operation.

    Records below the 15 m large-dam threshold are valid; ``is_large_dam``
    reports the flag and ingestion emits a warning diagnostic for them.
    """

    id: str
    name: str
    country: str
    region: RegionEnum
    project_type: ProjectTypeEnum
    is_hydropower: bool
    is_new_station: bool
    wall_height_m: float
    wall_length_m: Optional[float] = None
    installed_capacity_mw: Optional[float] = None
    unit_capacity_mw: Optional[float] = None
    reservoir_area_ha: Optional[float] = None
    tunnel_length_km: Optional[float] = None
    estimated_cost: Optional[float] = None
    actual_cost: Optional[float] = None
    currency: str = ""
    base_year: Optional[int] = None
    year_decision: int
    year_completion: Optional[int] = None
    estimated_schedule_months: Optional[float] = None
    actual_schedule_months: Optional[float] = None
    fx_cost_share_pct: Optional[float] = None
    icb_share_pct: Optional[float] = None
    local_contractor: Optional[bool] = None
    inflation_contingency_pct: Optional[float] = None
    estimated_bcr: Optional[float] = None

    def __post_init__(self):
        if not str(self.id).strip():
            raise ValidationError("id must be nonempty")

        country = self.country.strip().upper()
        object.__setattr__(self, "country", country)
        object.__setattr__(self, "region", value_to_enum(self.region, RegionEnum))
        object.__setattr__(self, "project_type", value_to_enum(self.project_type, ProjectTypeEnum))
        expected = region_of(country)
        if expected is not self.region:
            raise ValidationError(
                f"region {self.region.value} inconsistent with country {country} ({expected.value})"
            )
        if self.base_year is None:
            object.__setattr__(self, "base_year", self.year_decision)

        _check_positive("wall_height_m", self.wall_height_m)
        _check_positive("wall_length_m", self.wall_length_m)
        _check_nonnegative("installed_capacity_mw", self.installed_capacity_mw)
        _check_positive("unit_capacity_mw", self.unit_capacity_mw)
        _check_positive("reservoir_area_ha", self.reservoir_area_ha)
        _check_nonnegative("tunnel_length_km", self.tunnel_length_km)
        _check_positive("estimated_cost", self.estimated_cost)
        _check_positive("actual_cost", self.actual_cost)
        _check_positive("estimated_schedule_months", self.estimated_schedule_months)
        _check_positive("actual_schedule_months", self.actual_schedule_months)
        _check_share("fx_cost_share_pct", self.fx_cost_share_pct)
        _check_share("icb_share_pct", self.icb_share_pct)
        _check_nonnegative("inflation_contingency_pct", self.inflation_contingency_pct)
        _check_positive("estimated_bcr", self.estimated_bcr)

        if self.year_completion is not None:
            if self.year_completion < self.year_decision:
                raise ValidationError(
                    f"year_completion {self.year_completion} precedes year_decision {self.year_decision}"
                )
            if self.actual_schedule_months is not None:
                span = 12.0 * (self.year_completion - self.year_decision)
                if abs(span - self.actual_schedule_months) > SCHEDULE_TOLERANCE_MONTHS:
                    raise ValidationError(
                        f"actual_schedule_months {self.actual_schedule_months:g} inconsistent with "
                        f"{self.year_decision}-{self.year_completion} (tolerance {SCHEDULE_TOLERANCE_MONTHS:g} months)"
                    )

    @property
    def is_large_dam(self) -> bool:
        return self.wall_height_m >= LARGE_DAM_HEIGHT_M

    @property
    def has_observation(self) -> bool:
        """True when all four cost and schedule fields are present."""
        return None not in (
            self.estimated_cost,
            self.actual_cost,
            self.estimated_schedule_months,
            self.actual_schedule_months,
        )

    @classmethod
    def field_names(cls) -> Tuple[str, ...]:
        return tuple(f.name for f in fields(cls))


@dataclass(frozen=True)
class OverrunObservation:
    """Cost overrun and schedule slippage of one dam, both actual / estimated."""

    dam_id: str
    cost_overrun: float
    schedule_slippage: float

    def __post_init__(self):
        for name in ("cost_overrun", "schedule_slippage"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0:
                raise ValidationError(f"{name} must be finite and > 0, got {value}")


def _ratio(name: str, numerator: Optional[float], denominator: Optional[float]) -> float:
    if numerator is None or denominator is None or denominator == 0:
        raise UndefinedRatioError(f"undefined ratio: {name}")
    return numerator / denominator


def derive_observation(record: DamRecord) -> OverrunObservation:
    """Derive the overrun ratios of a record.

    Parameters
    ----------
    record : DamRecord
        A record with estimated and actual cost and schedule present.

    Returns
    -------
    OverrunObservation
        ``cost_overrun = actual_cost / estimated_cost`` and
        ``schedule_slippage = actual / estimated months``.

    Raises
    ------
    UndefinedRatioError
        If an estimate is zero or any of the four fields is absent.
    """
    return OverrunObservation(
        dam_id=record.id,
        cost_overrun=_ratio("cost_overrun", record.actual_cost, record.estimated_cost),
        schedule_slippage=_ratio(
            "schedule_slippage", record.actual_schedule_months, record.estimated_schedule_months
        ),
    )


MACRO_SERIES = (
    "deflator",
    "fx_rate_lcu_per_usd",
    "per_capita_income_const2000usd",
    "gdp_nominal_usd",
    "polity2",
    "muv_index",
)


def _freeze_series(name: str, series: Mapping[int, float]) -> Mapping[int, float]:
    items = sorted((int(year), float(value)) for year, value in series.items())
    for year, value in items:
        if name == "polity2":
            if not value.is_integer() or not -10 <= value <= 10:
                raise ValidationError(f"polity2 must be an integer in [-10, 10], got {value:g} for {year}")
        elif not math.isfinite(value) or value <= 0:
            raise ValidationError(f"{name} must be positive, got {value:g} for {year}")
    if name == "polity2":
        return MappingProxyType({year: int(value) for year, value in items})
    return MappingProxyType(dict(items))


@dataclass(frozen=True)
class CountryMacroSeries:
    """Macroeconomic series of one country, each a year -> value mapping.

    Series are stored sorted by year as read-only mappings. ``muv_index`` is
    optional and may be empty.
    """

    country: str
    deflator: Mapping[int, float] = field(default_factory=dict)
    fx_rate_lcu_per_usd: Mapping[int, float] = field(default_factory=dict)
    per_capita_income_const2000usd: Mapping[int, float] = field(default_factory=dict)
    gdp_nominal_usd: Mapping[int, float] = field(default_factory=dict)
    polity2: Mapping[int, int] = field(default_factory=dict)
    muv_index: Mapping[int, float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "country", self.country.strip().upper())
        for name in MACRO_SERIES:
            object.__setattr__(self, name, _freeze_series(name, getattr(self, name)))

    def value(self, series: str, year: int) -> Optional[float]:
        """Value of a series in a year, or None when the year is not covered."""
        if series not in MACRO_SERIES:
            raise ValueError(f'Unknown series "{series}".\nSupported values: {list(MACRO_SERIES)}')
        return getattr(self, series).get(int(year))

    def democracy(self, year: int) -> Optional[bool]:
        """Democracy dummy: polity2 of +6 to +10 is a democracy."""
        score = self.polity2.get(int(year))
        return None if score is None else score >= DEMOCRACY_POLITY2

    def long_term_inflation(self) -> float:
        """Long-term inflation of the deflator series in percent per year."""
        return long_term_inflation(self.deflator)

    def average_growth_pct(self, series: str, start_year: int, end_year: int) -> Optional[float]:
        """Compound annual growth of a series between two years, in percent.

        Returns None when either year is missing or the span is not positive.
        For ``fx_rate_lcu_per_usd`` the result is the average depreciation of
        the local currency against the dollar.
        """
        start = self.value(series, start_year)
        end = self.value(series, end_year)
        span = int(end_year) - int(start_year)
        if start is None or end is None or span <= 0:
            return None
        return ((end / start) ** (1.0 / span) - 1.0) * 100.0


@dataclass(frozen=True)
class ReferenceClass:
    """A nonempty set of reference projects.

    Parameters
    ----------
    records : Iterable[DamRecord]
        Records with unique ids. Order is kept.
    filter_description : str, optional
        Provenance of the predicate that selected the records.

    Notes
    -----
    ``observations`` holds one OverrunObservation per record with complete
    cost and schedule fields; other records stay in ``records`` only.
    """

    records: Tuple[DamRecord, ...]
    filter_description: str = "all records"
    observations: Tuple[OverrunObservation, ...] = field(init=False)

    def __post_init__(self):
        records = tuple(self.records)
        if not records:
            raise EmptyReferenceClassError()
        seen = set()
        for record in records:
            if record.id in seen:
                raise ValidationError(f"duplicate dam id {record.id}")
            seen.add(record.id)
        object.__setattr__(self, "records", records)
        object.__setattr__(
            self,
            "observations",
            tuple(derive_observation(r) for r in records if r.has_observation),
        )

    def __len__(self) -> int:
        return len(self.records)

    def by_id(self) -> Dict[str, DamRecord]:
        return {r.id: r for r in self.records}

    def filter(self, predicate: Callable[[DamRecord], bool], description: str) -> "ReferenceClass":
        """Select a sub-class; provenance strings are chained with " & ".

        Raises
        ------
        EmptyReferenceClassError
            If no record satisfies the predicate.
        """
        selected = [r for r in self.records if predicate(r)]
        if self.filter_description and self.filter_description != "all records":
            description = f"{self.filter_description} & {description}"
        return ReferenceClass(selected, description)

    def _distribution(self, attribute: str, label: str) -> EmpiricalDistribution:
        if not self.observations:
            raise EmptyReferenceClassError()
        return EmpiricalDistribution.from_values(
            (getattr(o, attribute) for o in self.observations),
            label=f"{label}, {len(self.observations)} dams ({self.filter_description})",
        )

    def cost_distribution(self) -> EmpiricalDistribution:
        return self._distribution("cost_overrun", "cost overrun")

    def schedule_distribution(self) -> EmpiricalDistribution:
        return self._distribution("schedule_slippage", "schedule slippage")

