"""Inflation and debt stress arithmetic."""

from dataclasses import dataclass
from typing import Dict

from ..exceptions import ValidationError

LUMP_SUM_CONVENTION = (
    "lump-sum-at-completion: the whole real cost is assumed to be paid at the end of "
    "the schedule, so inflation compounds over the full duration"
)


@dataclass(frozen=True)
class NominalOverrun:
    """A nominal overrun factor and the convention it was computed under."""

    factor: float
    real_overrun: float
    inflation_factor: float
    convention: str = LUMP_SUM_CONVENTION

    def __float__(self) -> float:
        return self.factor

    def to_dict(self) -> Dict[str, object]:
        return {
            "factor": self.factor,
            "real_overrun": self.real_overrun,
            "inflation_factor": self.inflation_factor,
            "convention": self.convention,
        }


def nominal_overrun(
    real_overrun: float,
    planned_inflation_pct_yr: float,
    planned_months: float,
    actual_inflation_pct_yr: float,
    actual_months: float,
) -> NominalOverrun:
    """Nominal cost overrun from a real overrun and unanticipated inflation.

    The real overrun is scaled by the actual price growth over the actual
    schedule and divided by the planned price growth over the planned schedule:

        real * (1 + a) ** (actual_months / 12) / (1 + p) ** (planned_months / 12)

    with rates in percent per year. Spend profiles are not modelled; see
    ``NominalOverrun.convention``.
    """
    if planned_months <= 0 or actual_months <= 0:
        raise ValueError("months must be positive")
    if planned_inflation_pct_yr <= -100.0 or actual_inflation_pct_yr <= -100.0:
        raise ValueError("inflation must exceed -100 %")
    if not real_overrun > 0:
        raise ValueError(f"real_overrun must be positive, got {real_overrun}")

    actual = (1.0 + actual_inflation_pct_yr / 100.0) ** (actual_months / 12.0)
    planned = (1.0 + planned_inflation_pct_yr / 100.0) ** (planned_months / 12.0)
    inflation_factor = actual / planned
    return NominalOverrun(
        factor=real_overrun * inflation_factor,
        real_overrun=real_overrun,
        inflation_factor=inflation_factor,
    )


def debt_impact(dam_cost_nominal: float, debt_before: float, debt_after: float) -> float:
    """Cost of a dam as a percentage of the increase in the public debt stock.

    Raises
    ------
    ValidationError
        If the debt did not increase.
    """
    increase = debt_after - debt_before
    if not increase > 0:
        raise ValidationError(f"nonpositive debt increase ({debt_before:g} -> {debt_after:g})")
    return 100.0 * dam_cost_nominal / increase
