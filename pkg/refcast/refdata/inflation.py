"""Deflator arithmetic: constant-currency normalisation and long-term inflation."""

from typing import Iterable, Mapping, Tuple

import numpy as np

from ..exceptions import MissingDeflatorYearError, ValidationError


def _deflator_at(deflator: Mapping[int, float], year: int) -> float:
    try:
        value = float(deflator[int(year)])
    except KeyError:
        raise MissingDeflatorYearError(int(year))
    if not value > 0:
        raise ValidationError(f"deflator must be positive, got {value} for year {year}")
    return value


def normalize_to_constant(
    payments: Iterable[Tuple[int, float]],
    deflator: Mapping[int, float],
    base_year: int,
) -> float:
    """Convert nominal payments into constant base-year currency.

    Each payment is rescaled by deflator(base_year) / deflator(year) and the
    results are summed in the order given.

    Parameters
    ----------
    payments : Iterable[Tuple[int, float]]
        (year, nominal amount) pairs.
    deflator : Mapping[int, float]
        Deflator index by calendar year. Must cover every payment year and
        the base year.
    base_year : int
        The constant-currency year, normally the year of the decision to build.

    Returns
    -------
    float
        The constant-currency total.

    Raises
    ------
    MissingDeflatorYearError
        If the deflator has no value for a required year; the error names it.
    """
    base = _deflator_at(deflator, base_year)
    total = 0.0
    for year, amount in payments:
        total += float(amount) * base / _deflator_at(deflator, year)
    return total


def long_term_inflation(deflator: Mapping[int, float]) -> float:
    """Annual long-term inflation rate implied by a deflator series, in percent.

    Fits ordinary least squares of ln(deflator) on calendar year and returns
    (exp(slope) - 1) * 100, so 8.0 means 8 % per year. The slope is unchanged
    by rescaling the index or shifting every year by a constant.

    Parameters
    ----------
    deflator : Mapping[int, float]
        Deflator index by year, at least 2 distinct years, all positive.

    Returns
    -------
    float
        Rate in percent per year.
    """
    if len(deflator) < 2:
        raise ValidationError("long-term inflation needs at least 2 deflator years")
    years = np.fromiter(deflator.keys(), dtype=float)
    values = np.fromiter(deflator.values(), dtype=float)
    if np.any(~np.isfinite(values)) or np.any(values <= 0):
        raise ValidationError("deflator values must be positive")

    t = years - years.mean()
    log_d = np.log(values)
    slope = float(np.sum(t * (log_d - log_d.mean())) / np.sum(t * t))
    return float(np.expm1(slope) * 100.0)


def annualize_cumulative_inflation(cumulative_pct: float, months: float) -> float:
    """Annual rate (percent) equivalent to a cumulative rise over a span.

    A cumulative 380 % over 192 months (prices multiplied by 4.8) becomes
    4.8 ** (12 / 192) - 1, expressed in percent.
    """
    if months <= 0:
        raise ValueError("months must be positive")
    if cumulative_pct <= -100.0:
        raise ValueError("cumulative inflation must exceed -100 %")
    factor = 1.0 + cumulative_pct / 100.0
    return float((factor ** (12.0 / months) - 1.0) * 100.0)
