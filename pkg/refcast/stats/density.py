"""Gaussian kernel density traces of overrun samples."""

from typing import List, Sequence, Tuple

import numpy as np
from sklearn.neighbors import KernelDensity


def silverman_bandwidth(sample: Sequence[float]) -> float:
    """Silverman's rule of thumb, 0.9 min(sd, IQR / 1.34) n^(-1/5).

    The IQR uses the same linear order-statistic rule as ``quantile``. When
    the IQR is zero but the standard deviation is not, the standard deviation
    is used alone.
    """
    x = np.asarray(sample, dtype=float).ravel()
    if x.size < 2:
        raise ValueError("density trace needs at least 2 observations")
    sd = float(np.std(x, ddof=1))
    q25, q75 = np.quantile(x, [0.25, 0.75], method="linear")
    spread = min(sd, (q75 - q25) / 1.34) if q75 > q25 else sd
    if spread <= 0.0:
        raise ValueError("zero spread: density trace undefined")
    return 0.9 * spread * x.size ** (-0.2)


def kde_density(sample: Sequence[float], grid_points: int = 512) -> List[Tuple[float, float]]:
    """Evaluate a Gaussian kernel density on an even grid.

    Parameters
    ----------
    sample : Sequence[float]
        Observations, n >= 2 with positive spread.
    grid_points : int, optional
        Number of grid points covering [min - 3h, max + 3h]. Default 512.

    Returns
    -------
    List[Tuple[float, float]]
        (x, density) pairs in increasing x.
    """
    x = np.asarray(sample, dtype=float).ravel()
    if grid_points < 2:
        raise ValueError("grid_points must be at least 2")
    h = silverman_bandwidth(x)
    grid = np.linspace(x.min() - 3 * h, x.max() + 3 * h, grid_points)

    kde = KernelDensity(kernel="gaussian", bandwidth=h).fit(x.reshape(-1, 1))
    density = np.exp(kde.score_samples(grid.reshape(-1, 1)))
    return [(float(g), float(d)) for g, d in zip(grid, density)]
