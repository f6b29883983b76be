"""Uplift curves: the budget or schedule increase needed to hold a chosen acceptable risk."""

import warnings
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from ..exceptions import SmallSampleWarning
from ..stats.distribution import EmpiricalDistribution, fraction_above, quantile
from ..stats.export import Destination, write_xy_csv

SMALL_SAMPLE_N = 20
DEFAULT_RISKS: Tuple[float, ...] = tuple(round(0.05 * k, 2) for k in range(1, 20))


def _check_risk(acceptable_risk: float):
    if not 0.0 < acceptable_risk < 1.0:
        raise ValueError(f"acceptable_risk must be in (0, 1), got {acceptable_risk}")


def _warn_small(dist: EmpiricalDistribution):
    if dist.represented_n < SMALL_SAMPLE_N:
        warnings.warn(
            f"quantile read from {dist.represented_n} observations (< {SMALL_SAMPLE_N})",
            SmallSampleWarning,
            stacklevel=3,
        )


def required_uplift(dist: EmpiricalDistribution, acceptable_risk: float) -> float:
    """Uplift that keeps the chance of exceeding the revised estimate at acceptable_risk.

    Parameters
    ----------
    dist : EmpiricalDistribution
        Overrun factors of the reference class.
    acceptable_risk : float
        Maximum acceptable probability of an overrun, in (0, 1).

    Returns
    -------
    float
        ``quantile(dist, 1 - acceptable_risk) - 1``. Negative values are
        downlifts and are reported as such.

    Warns
    -----
    SmallSampleWarning
        If the distribution represents fewer than 20 projects.
    """
    _check_risk(acceptable_risk)
    _warn_small(dist)
    return quantile(dist, 1.0 - acceptable_risk) - 1.0


def debias(estimate: float, uplift: float) -> float:
    """Apply an uplift to an inside-view estimate: ``estimate * (1 + uplift)``."""
    if not estimate > 0:
        raise ValueError(f"estimate must be positive, got {estimate}")
    if not uplift > -1.0:
        raise ValueError(f"uplift must exceed -1, got {uplift}")
    return estimate * (1.0 + uplift)


@dataclass(frozen=True)
class UpliftCurve:
    """The mapping from acceptable risk to required uplift of one distribution."""

    source: EmpiricalDistribution

    def evaluate(self, acceptable_risk: float) -> float:
        return required_uplift(self.source, acceptable_risk)

    __call__ = evaluate

    def risk_at(self, uplift: float) -> float:
        """Acceptable risk implied by an uplift.

        The share of the reference class whose overrun exceeds ``1 + uplift``,
        i.e. the chance that the revised estimate is still exceeded.
        """
        return fraction_above(self.source, 1.0 + uplift)

    def table(self, risks: Sequence[float] = DEFAULT_RISKS) -> List[Tuple[float, float]]:
        """(acceptable_risk, uplift_pct) rows, uplift in percent."""
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", SmallSampleWarning)
            rows = [(float(p), 100.0 * self.evaluate(p)) for p in risks]
        _warn_small(self.source)
        return rows

    def to_csv(self, dest: Destination, risks: Sequence[float] = DEFAULT_RISKS):
        """Write the curve as a two-column CSV (acceptable_risk, uplift_pct)."""
        write_xy_csv(self.table(risks), ("acceptable_risk", "uplift_pct"), dest)

    def grid(self, points: int = 99) -> Tuple[np.ndarray, np.ndarray]:
        """Evenly spaced risks in (0, 1) and their uplifts, for plotting."""
        risks = np.linspace(0.01, 0.99, points)
        return risks, np.array([u for _, u in self.table(risks)]) / 100.0
