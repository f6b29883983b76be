"""Benefit-cost viability of a project once its costs and benefits are de-biased."""

from dataclasses import dataclass
from typing import Dict

TYPICAL_BCR = 1.4
MEAN_BENEFIT_SHORTFALL = 0.11


@dataclass(frozen=True)
class ViabilityVerdict:
    """De-biased benefit-cost ratio of a project and whether it is stranded.

    ``stranded`` is True exactly when ``debiased_bcr < 1``.
    """

    debiased_bcr: float
    stranded: bool
    assumptions: str

    def to_dict(self) -> Dict[str, object]:
        return {
            "debiased_bcr": self.debiased_bcr,
            "stranded": self.stranded,
            "assumptions": self.assumptions,
        }


def viability(
    forecast_bcr: float, cost_overrun_factor: float, benefit_shortfall: float = 0.0
) -> ViabilityVerdict:
    """Check whether a forecast benefit-cost ratio survives a cost overrun.

    Parameters
    ----------
    forecast_bcr : float
        The inside-view benefit-cost ratio.
    cost_overrun_factor : float
        Expected actual / estimated cost, e.g. 1.44.
    benefit_shortfall : float, optional
        Fractional shortfall of benefits in [0, 1), by default 0.

    Returns
    -------
    ViabilityVerdict
        ``debiased_bcr = forecast_bcr * (1 - benefit_shortfall) / cost_overrun_factor``.
    """
    if not forecast_bcr > 0:
        raise ValueError(f"forecast_bcr must be positive, got {forecast_bcr}")
    if not cost_overrun_factor > 0:
        raise ValueError(f"cost_overrun_factor must be positive, got {cost_overrun_factor}")
    if not 0.0 <= benefit_shortfall < 1.0:
        raise ValueError(f"benefit_shortfall must be in [0, 1), got {benefit_shortfall}")

    debiased = forecast_bcr * (1.0 - benefit_shortfall) / cost_overrun_factor
    assumptions = (
        f"forecast BCR {forecast_bcr:g} divided by cost overrun factor {cost_overrun_factor:.4g}"
        f", benefit shortfall {benefit_shortfall:.0%}"
    )
    return ViabilityVerdict(debiased_bcr=debiased, stranded=debiased < 1.0, assumptions=assumptions)
