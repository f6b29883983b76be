"""One-way ANOVA and univariate least squares on transformed scales."""

from typing import Sequence

import numpy as np
from scipy.stats import f as f_dist
from sklearn.linear_model import LinearRegression
from sklearn.metrics import r2_score

from ..exceptions import TransformationDomainError
from ..utils import value_to_enum
from .registry import TransformationEnum
from .results import AlternativeEnum, OLSResult, TestResult


def anova_oneway(groups: Sequence[Sequence[float]]) -> TestResult:
    """Classical one-way ANOVA F test.

    Used to check whether forecast errors differ between decades or project
    types.

    Parameters
    ----------
    groups : Sequence[Sequence[float]]
        At least two groups of at least two observations each.

    Returns
    -------
    TestResult
        F with (k - 1, N - k) degrees of freedom and its upper-tail p-value.
    """
    arrays = [np.asarray(g, dtype=float).ravel() for g in groups]
    if len(arrays) < 2:
        raise ValueError("anova_oneway needs at least 2 groups")
    if any(a.size < 2 for a in arrays):
        raise ValueError("every ANOVA group needs at least 2 observations")

    k = len(arrays)
    n_total = sum(a.size for a in arrays)
    grand_mean = np.concatenate(arrays).mean()

    ss_between = sum(a.size * (a.mean() - grand_mean) ** 2 for a in arrays)
    ss_within = sum(float(np.sum((a - a.mean()) ** 2)) for a in arrays)
    if ss_within == 0.0:
        raise ValueError("zero within-group variance in all groups")

    df_between, df_within = k - 1, n_total - k
    F = (ss_between / df_between) / (ss_within / df_within)
    return TestResult(
        statistic=float(F),
        p_value=float(f_dist.sf(F, df_between, df_within)),
        method=f"one-way ANOVA F({df_between}, {df_within})",
        alternative=AlternativeEnum.GREATER,
        n=n_total,
    )


def ols_univariate(
    x: Sequence[float],
    y: Sequence[float],
    x_transform: str | TransformationEnum = TransformationEnum.IDENTITY,
    y_transform: str | TransformationEnum = TransformationEnum.IDENTITY,
) -> OLSResult:
    """Least-squares line of transformed y on transformed x.

    With ``x_transform="natural_log"`` and ``y_transform="natural_log"`` the
    slope is a scaling exponent, e.g. how cost grows with wall height.

    Parameters
    ----------
    x : Sequence[float]
        Predictor values.
    y : Sequence[float]
        Response values.
    x_transform, y_transform : str | TransformationEnum, optional
        Transformations applied before fitting. Default identity.

    Returns
    -------
    OLSResult
        slope, intercept, R2, F = R2 (n - 2) / (1 - R2) and the F-test p-value.
    """
    tx_enum = value_to_enum(x_transform, TransformationEnum)
    ty_enum = value_to_enum(y_transform, TransformationEnum)
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if x.size != y.size:
        raise ValueError(f"x and y must have equal length, got {x.size} and {y.size}")
    if x.size < 3:
        raise ValueError("ols_univariate needs at least 3 points")
    for values, enum, axis in ((x, tx_enum, "x"), (y, ty_enum, "y")):
        if not np.all(enum.value.in_domain(values)):
            raise TransformationDomainError(
                f"{axis} has values outside the domain of {enum.name.lower()}"
            )

    tx = np.asarray(tx_enum.value.forward(x), dtype=float)
    ty = np.asarray(ty_enum.value.forward(y), dtype=float)
    if np.ptp(tx) == 0.0:
        raise ValueError("zero x-variance")

    model = LinearRegression().fit(tx.reshape(-1, 1), ty)
    r2 = float(r2_score(ty, model.predict(tx.reshape(-1, 1))))
    n = int(x.size)
    if r2 >= 1.0:
        F, p = float("inf"), 0.0
    else:
        F = r2 * (n - 2) / (1.0 - r2)
        p = float(f_dist.sf(F, 1, n - 2))

    return OLSResult(
        slope=float(model.coef_[0]),
        intercept=float(model.intercept_),
        r2=r2,
        F=float(F),
        p_value=p,
        n=n,
        x_transform=tx_enum.name.lower(),
        y_transform=ty_enum.name.lower(),
    )
