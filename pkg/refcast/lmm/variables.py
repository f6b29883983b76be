"""
This module contains the model variables and the:

- **VariableEnum:** The end user enumeration of variables a ModelSpec may reference.

Every variable resolves to a float (or None when missing) from a DamRecord and
the CountryMacroSeries of its country. Country variables are read at the year
of the decision to build unless stated otherwise.
"""

from abc import ABC, abstractmethod
from enum import Enum
from typing import Optional

from ..refdata.records import CountryMacroSeries, DamRecord
from ..refdata.regions import RegionEnum
from ..utils import value_to_enum


# --------------------------- Base Variable --------------------------- #
class Variable(ABC):
    """A common interface for model variables."""

    dummy: bool = False
    needs_macro: bool = False

    def __init__(self, description: str = ""):
        self.description = description

    @abstractmethod
    def resolve(self, record: DamRecord, macro: Optional[CountryMacroSeries]) -> Optional[float]:
        pass

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.description!r})"


# --------------------------- Implementations --------------------------- #
class RecordVariable(Variable):
    """A numeric DamRecord field."""

    def __init__(self, field: str, description: str = ""):
        super().__init__(description or field)
        self.field = field

    def resolve(self, record, macro):
        value = getattr(record, self.field)
        return None if value is None else float(value)


class FlagVariable(RecordVariable):
    """A boolean DamRecord field coded 0/1."""

    dummy = True

    def resolve(self, record, macro):
        value = getattr(record, self.field)
        return None if value is None else float(bool(value))


class RegionDummy(Variable):
    dummy = True

    def __init__(self, region: RegionEnum):
        super().__init__(f"project in {region.value}")
        self.region = region

    def resolve(self, record, macro):
        return float(record.region is self.region)


class RatioVariable(Variable):
    """Cost overrun or schedule slippage of a completed record."""

    def __init__(self, numerator: str, denominator: str, description: str):
        super().__init__(description)
        self.numerator = numerator
        self.denominator = denominator

    def resolve(self, record, macro):
        num = getattr(record, self.numerator)
        den = getattr(record, self.denominator)
        if num is None or den is None or den == 0:
            return None
        return num / den


class DemocracyVariable(Variable):
    """Polity2 of +6 to +10 in the decision year coded 1, else 0."""

    dummy = True
    needs_macro = True

    def resolve(self, record, macro):
        if macro is None:
            return None
        flag = macro.democracy(record.year_decision)
        return None if flag is None else float(flag)


class MacroAtDecision(Variable):
    needs_macro = True

    def __init__(self, series: str, description: str = ""):
        super().__init__(description or f"{series} in the decision year")
        self.series = series

    def resolve(self, record, macro):
        if macro is None:
            return None
        value = macro.value(self.series, record.year_decision)
        return None if value is None else float(value)


class LongTermInflationVariable(Variable):
    """Long-term inflation of the country, percent per year, from the whole deflator series."""

    needs_macro = True

    def resolve(self, record, macro):
        if macro is None or len(macro.deflator) < 2:
            return None
        return macro.long_term_inflation()


class MacroGrowthVariable(Variable):
    """Average annual growth of a series between decision and completion, in percent."""

    needs_macro = True

    def __init__(self, series: str, description: str = ""):
        super().__init__(description or f"average growth of {series} over implementation")
        self.series = series

    def resolve(self, record, macro):
        if macro is None or record.year_completion is None:
            return None
        return macro.average_growth_pct(self.series, record.year_decision, record.year_completion)


class VariableEnum(Enum):
    """Enumeration of available model variables."""

    COST_OVERRUN = RatioVariable("actual_cost", "estimated_cost", "actual / estimated cost")
    SCHEDULE_SLIPPAGE = RatioVariable(
        "actual_schedule_months", "estimated_schedule_months", "actual / estimated schedule"
    )

    ESTIMATED_SCHEDULE_MONTHS = RecordVariable("estimated_schedule_months")
    ACTUAL_SCHEDULE_MONTHS = RecordVariable("actual_schedule_months")
    ESTIMATED_COST = RecordVariable("estimated_cost")
    ACTUAL_COST = RecordVariable("actual_cost")
    WALL_HEIGHT_M = RecordVariable("wall_height_m")
    WALL_LENGTH_M = RecordVariable("wall_length_m")
    INSTALLED_CAPACITY_MW = RecordVariable("installed_capacity_mw")
    UNIT_CAPACITY_MW = RecordVariable("unit_capacity_mw")
    RESERVOIR_AREA_HA = RecordVariable("reservoir_area_ha")
    TUNNEL_LENGTH_KM = RecordVariable("tunnel_length_km")
    YEAR_DECISION = RecordVariable("year_decision")
    YEAR_COMPLETION = RecordVariable("year_completion")
    FX_COST_SHARE_PCT = RecordVariable("fx_cost_share_pct")
    ICB_SHARE_PCT = RecordVariable("icb_share_pct")
    INFLATION_CONTINGENCY_PCT = RecordVariable("inflation_contingency_pct")
    ESTIMATED_BCR = RecordVariable("estimated_bcr")

    IS_HYDROPOWER = FlagVariable("is_hydropower")
    IS_NEW_STATION = FlagVariable("is_new_station")
    LOCAL_CONTRACTOR = FlagVariable("local_contractor")
    NORTH_AMERICA = RegionDummy(RegionEnum.NORTH_AMERICA)
    SOUTH_ASIA = RegionDummy(RegionEnum.SOUTH_ASIA)

    DEMOCRACY = DemocracyVariable("democracy dummy")
    POLITY2 = MacroAtDecision("polity2")
    PER_CAPITA_INCOME_2000USD = MacroAtDecision("per_capita_income_const2000usd")
    GDP_NOMINAL_USD = MacroAtDecision("gdp_nominal_usd")
    LONG_TERM_INFLATION = LongTermInflationVariable("long-term inflation, percent per year")
    DEFLATOR_GROWTH = MacroGrowthVariable("deflator")
    FX_DEPRECIATION = MacroGrowthVariable("fx_rate_lcu_per_usd", "average depreciation against the USD")
    MUV_GROWTH = MacroGrowthVariable("muv_index")


def variable_name(variable: str | VariableEnum) -> str:
    """Canonical lowercase name of a variable, e.g. ``"wall_length_m"``."""
    return value_to_enum(variable, VariableEnum).name.lower()
