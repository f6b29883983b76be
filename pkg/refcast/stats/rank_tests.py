"""Rank tests for forecast bias: one-sample signed-rank and two-sample U.

Both tests use midranks for ties. Samples with a total size up to
``EXACT_MAX_N`` get exact p-values by complete enumeration of the permutation
null (sign patterns or group arrangements) conditional on the observed ranks,
so ties are handled exactly. Larger samples use the normal approximation with
tie-corrected variance and a 0.5 continuity correction.

Values that agree to ``TIE_DECIMALS`` decimal places are treated as ties, so
floating point noise such as 1.1 - 1.0 != 1.0 - 0.9 does not break symmetry.
"""

import itertools
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.stats import norm, rankdata

from ..exceptions import RefcastError
from ..utils import value_to_enum
from .results import AlternativeEnum, TestResult

EXACT_MAX_N = 12
TIE_DECIMALS = 12
NORMAL_MIN_N = 5


def _tie_term(ranks: np.ndarray) -> float:
    """Sum of t^3 - t over tie groups."""
    _, counts = np.unique(ranks, return_counts=True)
    return float(np.sum(counts.astype(float) ** 3 - counts))


def _p_from_tails(p_greater: float, p_less: float, alternative: AlternativeEnum) -> float:
    if alternative == AlternativeEnum.GREATER:
        return p_greater
    if alternative == AlternativeEnum.LESS:
        return p_less
    return min(1.0, 2.0 * min(p_greater, p_less))


def _use_exact(method: str, n: int) -> bool:
    method = method.lower()
    if method not in ("auto", "exact", "normal"):
        raise ValueError(f'method must be "auto", "exact" or "normal", got "{method}"')
    if method == "exact":
        if n > 20:
            raise ValueError(f"exact enumeration is limited to n <= 20, got {n}")
        return True
    if method == "normal":
        return False
    return n <= EXACT_MAX_N


# --------------------------- Signed rank --------------------------- #
@lru_cache(maxsize=256)
def _signed_rank_null(ranks: tuple) -> np.ndarray:
    """W+ over all 2^n sign patterns of the given absolute ranks."""
    r = np.asarray(ranks, dtype=float)
    n = r.size
    patterns = (np.arange(2**n)[:, None] >> np.arange(n)) & 1
    return patterns @ r


def signed_rank_vs_reference(
    sample: Sequence[float],
    reference: float = 1.0,
    alternative: str | AlternativeEnum = AlternativeEnum.TWO_SIDED,
    method: str = "auto",
) -> TestResult:
    """Wilcoxon signed-rank test of a sample against a reference value.

    Parameters
    ----------
    sample : Sequence[float]
        Observations, e.g. cost overrun factors.
    reference : float, optional
        The null location, 1.0 meaning "on budget". Default 1.0.
    alternative : str | AlternativeEnum, optional
        ``greater`` tests whether the sample sits above the reference.
    method : str, optional
        ``auto`` (exact for n <= 12), ``exact`` or ``normal``.

    Returns
    -------
    TestResult
        statistic is W+, the rank sum of positive differences.

    Raises
    ------
    RefcastError
        If every difference is zero ("degenerate sample").
    """
    alt = value_to_enum(alternative, AlternativeEnum)
    diffs = np.round(np.asarray(sample, dtype=float) - reference, TIE_DECIMALS)
    diffs = diffs[diffs != 0.0]
    n = int(diffs.size)
    if n == 0:
        raise RefcastError("degenerate sample")

    ranks = rankdata(np.abs(diffs))
    w_plus = float(ranks[diffs > 0].sum())

    if _use_exact(method, n):
        null = _signed_rank_null(tuple(np.sort(ranks)))
        p_greater = float(np.mean(null >= w_plus - 1e-9))
        p_less = float(np.mean(null <= w_plus + 1e-9))
        label = "Wilcoxon signed-rank (exact enumeration)"
        exact = True
    else:
        if n < NORMAL_MIN_N:
            raise ValueError(f"normal approximation needs n >= {NORMAL_MIN_N}, got {n}")
        mean = n * (n + 1) / 4.0
        var = n * (n + 1) * (2 * n + 1) / 24.0 - _tie_term(ranks) / 48.0
        sd = np.sqrt(var)
        p_greater = float(norm.sf((w_plus - mean - 0.5) / sd))
        p_less = float(norm.cdf((w_plus - mean + 0.5) / sd))
        label = "Wilcoxon signed-rank (normal approximation, tie corrected)"
        exact = False

    return TestResult(
        statistic=w_plus,
        p_value=_p_from_tails(p_greater, p_less, alt),
        method=label,
        alternative=alt,
        n=n,
        exact=exact,
    )


# --------------------------- Mann-Whitney --------------------------- #
@lru_cache(maxsize=256)
def _mann_whitney_null(ranks: tuple, n1: int) -> np.ndarray:
    """U of the first group over all C(N, n1) arrangements of the pooled ranks."""
    r = np.asarray(ranks, dtype=float)
    combos = np.array(list(itertools.combinations(range(r.size), n1)), dtype=int)
    return r[combos].sum(axis=1) - n1 * (n1 + 1) / 2.0


def mann_whitney_u(
    x: Sequence[float],
    y: Sequence[float],
    alternative: str | AlternativeEnum = AlternativeEnum.TWO_SIDED,
    method: str = "auto",
) -> TestResult:
    """Mann-Whitney-Wilcoxon rank-sum test.

    Parameters
    ----------
    x : Sequence[float]
        First sample.
    y : Sequence[float]
        Second sample.
    alternative : str | AlternativeEnum, optional
        ``greater`` tests whether x is stochastically larger than y.
    method : str, optional
        ``auto`` (exact when len(x) + len(y) <= 12), ``exact`` or ``normal``.

    Returns
    -------
    TestResult
        statistic is U_x, the number of pairs with x > y plus half the ties.
    """
    alt = value_to_enum(alternative, AlternativeEnum)
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    n1, n2 = int(x.size), int(y.size)
    if n1 == 0 or n2 == 0:
        raise ValueError("both samples must be nonempty")

    pooled = np.round(np.concatenate([x, y]), TIE_DECIMALS)
    ranks = rankdata(pooled)
    u_x = float(ranks[:n1].sum() - n1 * (n1 + 1) / 2.0)
    total = n1 + n2

    if _use_exact(method, total):
        null = _mann_whitney_null(tuple(np.sort(ranks)), n1)
        p_greater = float(np.mean(null >= u_x - 1e-9))
        p_less = float(np.mean(null <= u_x + 1e-9))
        label = "Mann-Whitney U (exact enumeration)"
        exact = True
    else:
        mean = n1 * n2 / 2.0
        var = n1 * n2 / 12.0 * ((total + 1) - _tie_term(ranks) / (total * (total - 1)))
        label = "Mann-Whitney U (normal approximation, tie corrected)"
        exact = False
        if var <= 0:
            # every value identical: no evidence of separation
            p_greater = p_less = 1.0
        else:
            sd = np.sqrt(var)
            p_greater = float(norm.sf((u_x - mean - 0.5) / sd))
            p_less = float(norm.cdf((u_x - mean + 0.5) / sd))

    return TestResult(
        statistic=u_x,
        p_value=_p_from_tails(p_greater, p_less, alt),
        method=label,
        alternative=alt,
        n=total,
        exact=exact,
    )
