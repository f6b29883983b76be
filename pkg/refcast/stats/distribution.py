"""Empirical overrun distributions and the order-statistic quantile rule."""

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .results import Summary


@dataclass(frozen=True, eq=False)
class EmpiricalDistribution:
    """A sorted sample of positive overrun factors.

    Parameters
    ----------
    sample : Sequence[float]
        Overrun factors (actual / estimated). Sorted on construction.
    label : str, optional
        Free text provenance, e.g. "cost overrun, 245 large dams".
    represented_n : int, optional
        Number of projects the sample stands for. Defaults to the sample size;
        a quantile sketch of a larger class sets it to the class size so that
        small-sample warnings reflect the underlying data.
    """

    sample: np.ndarray
    label: str = ""
    represented_n: Optional[int] = None
    n: int = field(init=False)

    def __post_init__(self):
        values = np.sort(np.asarray(self.sample, dtype=float).ravel())
        if values.size < 1:
            raise ValueError("EmpiricalDistribution requires at least one value")
        if not np.all(np.isfinite(values)) or np.any(values <= 0):
            raise ValueError("EmpiricalDistribution values must be finite and > 0")
        values.flags.writeable = False
        object.__setattr__(self, "sample", values)
        object.__setattr__(self, "n", int(values.size))
        if self.represented_n is None:
            object.__setattr__(self, "represented_n", int(values.size))

    @classmethod
    def from_values(cls, values: Iterable[float], label: str = "") -> "EmpiricalDistribution":
        return cls(sample=np.fromiter(values, dtype=float), label=label)

    @property
    def mean(self) -> float:
        return float(np.mean(self.sample))

    def __len__(self) -> int:
        return self.n


def quantile(dist: EmpiricalDistribution, q: float) -> float:
    """Order-statistic quantile with linear interpolation.

    Uses h = (n - 1) q + 1 and returns
    x_(floor h) + (h - floor h) (x_(floor h + 1) - x_(floor h)),
    which is numpy's default ``linear`` method. q = 0 gives the minimum and
    q = 1 the maximum.

    Parameters
    ----------
    dist : EmpiricalDistribution
        The sample.
    q : float
        Probability in [0, 1].

    Returns
    -------
    float
        The interpolated quantile.
    """
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"q must be in [0, 1], got {q}")
    return float(np.quantile(dist.sample, q, method="linear"))


def fraction_above(dist: EmpiricalDistribution, threshold: float) -> float:
    """Share of the sample strictly greater than threshold."""
    return int(np.count_nonzero(dist.sample > threshold)) / dist.n


def summarize(
    dist: EmpiricalDistribution, thresholds: Sequence[float] = (1.0, 2.0, 3.0)
) -> Summary:
    """Mean, median, interquartile range and tail fractions.

    Parameters
    ----------
    dist : EmpiricalDistribution
        The sample.
    thresholds : Sequence[float], optional
        Thresholds for ``fraction_above``. The defaults answer "over budget",
        "more than double" and "more than triple".

    Returns
    -------
    Summary
        The descriptive summary.
    """
    return Summary(
        n=dist.n,
        mean=dist.mean,
        median=quantile(dist, 0.5),
        iqr=quantile(dist, 0.75) - quantile(dist, 0.25),
        fraction_above={float(t): fraction_above(dist, t) for t in thresholds},
    )
