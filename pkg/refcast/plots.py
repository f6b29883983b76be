"""This module contains plotting utilities for uplift curves, overrun density
traces and published-model prediction surfaces."""

from typing import Dict, List, Mapping, Sequence

import numpy as np
from matplotlib import pyplot as plt

from .rcf.uplift import UpliftCurve
from .stats.density import kde_density
from .stats.distribution import EmpiricalDistribution, quantile


def plot_uplift_curves(curves: Mapping[str, UpliftCurve], points: int = 99) -> plt.Figure:
    """Plot required uplift against acceptable risk for several reference classes.

    Parameters
    ----------
    curves : Mapping[str, UpliftCurve]
        Legend label to curve, e.g. ``{"cost": ..., "schedule": ...}``.
    points : int, optional
        Number of risk levels evaluated in (0, 1).

    Returns
    -------
    plt.Figure
        The matplotlib Figure object containing the curves. Closed to prevent display upon creation.
    """
    fig, ax = plt.subplots(1, 1, figsize=(8, 5), dpi=100)

    for label, curve in curves.items():
        risks, uplifts = curve.grid(points)
        ax.plot(100 * risks, 100 * uplifts, label=label)

    ax.axhline(0.0, color="black", lw=0.8)
    ax.set_xlabel("Acceptable chance of overrun (%)")
    ax.set_ylabel("Required uplift (%)")
    ax.invert_xaxis()
    ax.legend(loc="upper left")
    ax.grid(ls="--", alpha=0.5, color="gray")

    plt.tight_layout()
    plt.close(fig)
    return fig


def plot_density_trace(dist: EmpiricalDistribution, grid_points: int = 512) -> plt.Figure:
    """Plot a kernel density trace of an overrun sample with its median and mean.

    Parameters
    ----------
    dist : EmpiricalDistribution
        The overrun factors.
    grid_points : int, optional
        Density grid size.

    Returns
    -------
    plt.Figure
        The matplotlib Figure object containing the trace. Closed to prevent display upon creation.
    """
    trace = np.asarray(kde_density(dist.sample, grid_points))
    median = quantile(dist, 0.5)

    fig, ax = plt.subplots(1, 1, figsize=(8, 4), dpi=100)
    ax.plot(trace[:, 0], trace[:, 1], color="darkgreen")
    ax.fill_between(trace[:, 0], trace[:, 1], alpha=0.2, color="darkgreen")
    ax.axvline(median, ls="--", color="black", label=f"Median {median:.2f}")
    ax.axvline(dist.mean, ls=":", color="red", label=f"Mean {dist.mean:.2f}")
    ax.axvline(1.0, color="gray", lw=0.8)

    ax.set_title(dist.label or "Overrun density")
    ax.set_xlabel("Actual / estimated")
    ax.set_ylabel("Density")
    ax.legend(loc="upper right")
    ax.grid(ls="--", alpha=0.5, color="gray")

    plt.tight_layout()
    plt.close(fig)
    return fig


def plot_prediction_surface(
    rows: Sequence[Dict[str, float]], x_variable: str, series_variable: str, as_percent: bool = True
) -> plt.Figure:
    """Plot a prediction surface as one line per series value.

    Parameters
    ----------
    rows : Sequence[Dict[str, float]]
        Output of ``prediction_surface``.
    x_variable, series_variable : str
        The grid variables.
    as_percent : bool, optional
        Show ratio predictions as percent overrun, by default True.

    Returns
    -------
    plt.Figure
        The matplotlib Figure object containing the surface. Closed to prevent display upon creation.
    """
    series: Dict[float, List[Dict[str, float]]] = {}
    for row in rows:
        series.setdefault(row[series_variable], []).append(row)

    fig, ax = plt.subplots(1, 1, figsize=(8, 5), dpi=100)
    for level, points in series.items():
        x = [p[x_variable] for p in points]
        y = [100 * (p["value"] - 1) if as_percent else p["value"] for p in points]
        ax.plot(x, y, marker=".", label=f"{series_variable} = {level:g}")

    ax.set_xlabel(x_variable)
    ax.set_ylabel("Predicted overrun (%)" if as_percent else "Prediction")
    ax.legend(loc="upper left")
    ax.grid(ls="--", alpha=0.5, color="gray")

    plt.tight_layout()
    plt.close(fig)
    return fig
