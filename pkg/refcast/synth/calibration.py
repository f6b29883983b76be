"""Calibration of lognormal overrun tails to published summary statistics."""

import math
from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional

import numpy as np
from scipy.stats import norm

from ..exceptions import ValidationError
from .spec import TailSpec

PUBLISHED_TARGETS: Dict[str, float] = {
    "mean": 1.96,
    "median": 1.27,
    "iqr": 0.86,
    "fraction_above_2": 0.2,
    "fraction_above_3": 0.1,
}

_Z_QUARTILE = float(norm.ppf(0.75))


def lognormal_statistics(mu: float, sigma: float) -> Dict[str, float]:
    """Closed-form mean, median, IQR and tail fractions of a lognormal."""
    median = math.exp(mu)
    return {
        "mean": math.exp(mu + 0.5 * sigma**2),
        "median": median,
        "iqr": median * (math.exp(_Z_QUARTILE * sigma) - math.exp(-_Z_QUARTILE * sigma)),
        "fraction_above_2": float(norm.sf((math.log(2.0) - mu) / sigma)),
        "fraction_above_3": float(norm.sf((math.log(3.0) - mu) / sigma)),
    }


@dataclass(frozen=True)
class TailCalibration:
    """A calibrated tail and its misfit per target (model minus target)."""

    tail: TailSpec
    residuals: Mapping[str, float]
    loss: float
    targets: Mapping[str, float] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, object]:
        return {
            "tail": self.tail.to_dict(),
            "residuals": dict(self.residuals),
            "loss": self.loss,
            "targets": dict(self.targets),
        }


def _calibration(mu: float, sigma: float, targets: Mapping[str, float], weights: Mapping[str, float]) -> TailCalibration:
    stats = lognormal_statistics(mu, sigma)
    residuals = {k: stats[k] - v for k, v in targets.items()}
    loss = sum(weights.get(k, 1.0) * (r / targets[k]) ** 2 for k, r in residuals.items())
    return TailCalibration(TailSpec.lognormal(mu, sigma), residuals, float(loss), dict(targets))


def calibrate_tail(
    targets: Optional[Mapping[str, float]] = None,
    weights: Optional[Mapping[str, float]] = None,
    mu_grid: Optional[np.ndarray] = None,
    sigma_grid: Optional[np.ndarray] = None,
) -> TailCalibration:
    """Brute-force lognormal fit to summary targets.

    Five targets over-determine two parameters, so no exact fit exists; the
    (mu, sigma) grid point with the least weighted squared relative error is
    returned with its residuals.

    Parameters
    ----------
    targets : Mapping[str, float], optional
        Any of "mean", "median", "iqr", "fraction_above_2" and
        "fraction_above_3". Defaults to the published large-dam values.
    weights : Mapping[str, float], optional
        Per-target weights, by default 1.
    mu_grid, sigma_grid : np.ndarray, optional
        Search grids, by default 601 points on [-1, 1] and 300 on (0, 1.5].

    Returns
    -------
    TailCalibration
    """
    targets = dict(PUBLISHED_TARGETS if targets is None else targets)
    unknown = sorted(set(targets) - set(PUBLISHED_TARGETS))
    if unknown or not targets:
        raise ValidationError(f"unknown calibration targets {unknown}.\nSupported values: {list(PUBLISHED_TARGETS)}")
    weights = dict(weights or {})
    mu_grid = np.linspace(-1.0, 1.0, 601) if mu_grid is None else np.asarray(mu_grid, dtype=float)
    sigma_grid = np.linspace(0.005, 1.5, 300) if sigma_grid is None else np.asarray(sigma_grid, dtype=float)
    if np.any(sigma_grid <= 0):
        raise ValidationError("sigma grid must be positive")

    best: Optional[TailCalibration] = None
    for mu in mu_grid:
        for sigma in sigma_grid:
            candidate = _calibration(float(mu), float(sigma), targets, weights)
            if best is None or candidate.loss < best.loss:
                best = candidate
    return best


def tail_from_fractions(fraction_above_2: float = 0.2, fraction_above_3: float = 0.1) -> TailSpec:
    """The lognormal with the given shares of overruns above 2x and 3x.

    sigma = ln(3/2) / (z(1 - p3) - z(1 - p2)) and mu = ln 2 - z(1 - p2) sigma.

    Raises
    ------
    ValidationError
        Unless 0 < fraction_above_3 < fraction_above_2 < 1.
    """
    if not 0.0 < fraction_above_3 < fraction_above_2 < 1.0:
        raise ValidationError(
            f"need 0 < fraction_above_3 < fraction_above_2 < 1, got {fraction_above_2}, {fraction_above_3}"
        )
    z2 = float(norm.isf(fraction_above_2))
    z3 = float(norm.isf(fraction_above_3))
    sigma = math.log(1.5) / (z3 - z2)
    return TailSpec.lognormal(mu=math.log(2.0) - z2 * sigma, sigma=sigma)
