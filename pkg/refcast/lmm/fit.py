"""Random-intercept linear mixed model fitted by profiled ML or REML.

The model is y = X beta + Z b + e with one random intercept per group,
b ~ N(0, s2_group) and e ~ N(0, s2_resid). With the variance ratio
lam = s2_group / s2_resid the marginal covariance of group j is
s2_resid * (I + lam 11'), whose inverse and determinant are closed form:

    (I + lam 11')^-1 = I - c_j 11',   c_j = lam / (1 + lam n_j)
    log |I + lam 11'| = log(1 + lam n_j)

so beta and s2_resid are profiled out and the (restricted) log-likelihood
is maximised over lam alone. All group sums are computed once per fit.
"""

import json
import logging
import math
import warnings
from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.stats import t as t_dist

from ..exceptions import ConvergenceError, SingleGroupWarning, SingularDesignError, ValidationError
from ..utils import value_to_enum
from .design import build_design
from .spec import ModelSpec

logger = logging.getLogger(__name__)

LAMBDA_GRID = np.concatenate(([0.0], np.logspace(-8, 6, 57)))
XATOL = 1e-10
MAX_ITER = 200
DF_CONVENTION = "containment: df = n - p - g + 1 (n - p when that is below 1)"
OLS_DF_CONVENTION = "ordinary least squares: df = n - p"


class MethodEnum(Enum):
    """Variance component estimation methods."""

    ML = "ml"
    REML = "reml"


@dataclass(frozen=True)
class _GroupSums:
    """Per-group sufficient statistics of (y, X)."""

    labels: np.ndarray
    index: np.ndarray
    sizes: np.ndarray
    XtX: np.ndarray
    Xty: np.ndarray
    yty: float
    col_sums: np.ndarray
    y_sums: np.ndarray

    @classmethod
    def of(cls, y: np.ndarray, X: np.ndarray, groups: np.ndarray) -> "_GroupSums":
        labels, index = np.unique(groups.astype(str), return_inverse=True)
        g, p = labels.size, X.shape[1]
        col_sums = np.zeros((g, p))
        np.add.at(col_sums, index, X)
        return cls(
            labels=labels,
            index=index,
            sizes=np.bincount(index, minlength=g).astype(float),
            XtX=X.T @ X,
            Xty=X.T @ y,
            yty=float(y @ y),
            col_sums=col_sums,
            y_sums=np.bincount(index, weights=y, minlength=g),
        )


@dataclass(frozen=True)
class _Profile:
    lam: float
    loglik: float
    beta: np.ndarray
    sigma2: float
    XtVX: np.ndarray


def _profile(sums: _GroupSums, lam: float, n: int, p: int, method: MethodEnum) -> _Profile:
    c = lam / (1.0 + lam * sums.sizes)
    XtVX = sums.XtX - (sums.col_sums.T * c) @ sums.col_sums
    XtVy = sums.Xty - sums.col_sums.T @ (c * sums.y_sums)
    ytVy = sums.yty - float(np.sum(c * sums.y_sums**2))

    beta = np.linalg.solve(XtVX, XtVy)
    quad = max(ytVy - float(beta @ XtVy), np.finfo(float).tiny)
    logdet = float(np.sum(np.log1p(lam * sums.sizes)))

    if method is MethodEnum.ML:
        dof = n
        extra = 0.0
    else:
        dof = n - p
        extra = float(np.linalg.slogdet(XtVX)[1])
    sigma2 = quad / dof
    loglik = -0.5 * (dof * math.log(2.0 * math.pi * sigma2) + logdet + extra + dof)
    return _Profile(lam=lam, loglik=loglik, beta=beta, sigma2=sigma2, XtVX=XtVX)


def _collinear_columns(X: np.ndarray, names: Sequence[str]) -> List[str]:
    kept: List[int] = []
    collinear = []
    for j in range(X.shape[1]):
        if np.linalg.matrix_rank(X[:, kept + [j]]) > len(kept):
            kept.append(j)
        else:
            collinear.append(names[j])
    return collinear


def _search(sums: _GroupSums, n: int, p: int, method: MethodEnum) -> Tuple[_Profile, List[Tuple[float, float]]]:
    """Coarse log-spaced grid, then bounded Brent search between the grid neighbours of the best point."""
    grid = [_profile(sums, lam, n, p, method) for lam in LAMBDA_GRID]
    trace = [(pr.lam, pr.loglik) for pr in grid]
    k = int(np.argmax([pr.loglik for pr in grid]))
    if k == len(grid) - 1:
        raise ConvergenceError(
            f"variance ratio search hit the upper bound {LAMBDA_GRID[-1]:g}; "
            "the within-group variance is numerically zero",
            trace,
        )
    lower, upper = LAMBDA_GRID[max(k - 1, 0)], LAMBDA_GRID[k + 1]
    logger.debug("Variance ratio bracket [%g, %g] around grid optimum %g", lower, upper, LAMBDA_GRID[k])

    def objective(lam: float) -> float:
        pr = _profile(sums, lam, n, p, method)
        trace.append((lam, pr.loglik))
        return -pr.loglik

    res = minimize_scalar(
        objective,
        bounds=(lower, upper),
        method="bounded",
        options={"xatol": XATOL, "maxiter": MAX_ITER},
    )
    if not res.success:
        raise ConvergenceError(f"variance ratio search did not converge: {res.message}", trace)

    best = _profile(sums, float(res.x), n, p, method)
    if grid[k].loglik > best.loglik:
        best = grid[k]
    return best, trace


@dataclass(frozen=True, eq=False)
class FittedModel:
    """A fitted (or published) random-intercept model.

    Coefficient arrays are aligned with ``column_names``. ``group_effects``
    holds the best linear unbiased predictor of each group's intercept.
    R-squared is not reported for multilevel fits; the log-likelihood and the
    variance components are.
    """

    column_names: Tuple[str, ...]
    beta: np.ndarray
    se: np.ndarray
    t_stats: np.ndarray
    p_values: np.ndarray
    sigma2_group: float
    sigma2_resid: float
    method: MethodEnum
    n_used: int
    n_dropped: int = 0
    spec: Optional[ModelSpec] = None
    group_effects: Mapping[str, float] = field(default_factory=dict)
    loglik: float = float("nan")
    df: int = 0
    df_convention: str = DF_CONVENTION
    n_groups: int = 0
    residual_ss: float = float("nan")
    provenance: str = ""

    def __post_init__(self):
        arrays = {}
        for name in ("beta", "se", "t_stats", "p_values"):
            values = np.array(getattr(self, name), dtype=float)
            values.flags.writeable = False
            arrays[name] = values
            object.__setattr__(self, name, values)
        if len({len(self.column_names)} | {a.size for a in arrays.values()}) != 1:
            raise ValidationError("coefficient arrays and column names differ in length")
        if self.sigma2_group < 0 or self.sigma2_resid < 0:
            raise ValidationError("variance components must be nonnegative")
        object.__setattr__(self, "column_names", tuple(self.column_names))
        object.__setattr__(self, "method", value_to_enum(self.method, MethodEnum))
        object.__setattr__(self, "group_effects", MappingProxyType(dict(self.group_effects)))

    @property
    def variance_ratio(self) -> float:
        return self.sigma2_group / self.sigma2_resid if self.sigma2_resid > 0 else float("inf")

    def coefficient(self, name: str) -> float:
        return float(self.beta[self.column_names.index(name)])

    def coefficient_table(self) -> List[Dict[str, object]]:
        """Rows of (term, coefficient, se, t, p) in column order."""
        return [
            {
                "term": name,
                "coefficient": float(b),
                "se": float(s),
                "t": float(t),
                "p": float(p),
            }
            for name, b, s, t, p in zip(self.column_names, self.beta, self.se, self.t_stats, self.p_values)
        ]

    def format_table(self) -> str:
        """Four-column coefficient table followed by the variance components."""
        width = max([len("Variable")] + [len(n) for n in self.column_names])
        header = f"{'Variable':<{width}}  {'Coefficient':>11}  {'Std. error':>10}  {'t-stat':>8}  {'2-tailed p':>10}"
        lines = [header, "-" * len(header)]
        for row in self.coefficient_table():
            lines.append(
                f"{row['term']:<{width}}  {row['coefficient']:>11.3f}  {row['se']:>10.3f}  "
                f"{row['t']:>8.3f}  {row['p']:>10.3f}"
            )
        lines.append("-" * len(header))
        if self.spec is not None:
            lines.append(f"model: {self.spec}")
        lines.append(
            f"method: {self.method.name}, n used: {self.n_used}, n dropped: {self.n_dropped}, groups: {self.n_groups}"
        )
        lines.append(f"group variance: {self.sigma2_group:.6g}, residual variance: {self.sigma2_resid:.6g}")
        lines.append(f"log-likelihood: {self.loglik:.6g}, df: {self.df} ({self.df_convention})")
        return "\n".join(lines)

    def to_dict(self) -> Dict[str, object]:
        def number(x: float):
            return x if math.isfinite(x) else None

        return {
            "spec": None if self.spec is None else self.spec.to_dict(),
            "coefficients": self.coefficient_table(),
            "variance_components": {"group": self.sigma2_group, "residual": self.sigma2_resid},
            "group_effects": dict(sorted(self.group_effects.items())),
            "method": self.method.value,
            "loglik": number(self.loglik),
            "df": self.df,
            "df_convention": self.df_convention,
            "n_used": self.n_used,
            "n_dropped": self.n_dropped,
            "n_groups": self.n_groups,
            "residual_ss": number(self.residual_ss),
            "provenance": self.provenance,
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=indent)

    @classmethod
    def from_published(
        cls,
        spec: ModelSpec,
        beta: Sequence[float],
        se: Sequence[float],
        t_stats: Sequence[float],
        p_values: Sequence[float],
        n_used: int,
        provenance: str = "",
    ) -> "FittedModel":
        """A model from printed coefficients, with zero variance components and no group effects."""
        return cls(
            column_names=tuple(spec.column_names),
            beta=beta,
            se=se,
            t_stats=t_stats,
            p_values=p_values,
            sigma2_group=0.0,
            sigma2_resid=0.0,
            method=MethodEnum.REML,
            n_used=n_used,
            spec=spec,
            df_convention="published; degrees-of-freedom method not stated",
            provenance=provenance,
        )


def fit(
    y: Sequence[float],
    X: np.ndarray,
    groups: Sequence[str],
    method: str | MethodEnum = MethodEnum.REML,
    column_names: Optional[Sequence[str]] = None,
    spec: Optional[ModelSpec] = None,
    n_dropped: int = 0,
) -> FittedModel:
    """Fit a random-intercept model by profiled ML or REML.

    Parameters
    ----------
    y : Sequence[float]
        Response on the transformed scale.
    X : np.ndarray
        Fixed-effects design, one row per observation.
    groups : Sequence[str]
        Group label of each observation, e.g. the country.
    method : str | MethodEnum, optional
        ``"reml"`` (default) or ``"ml"``.
    column_names : Sequence[str], optional
        Names of the columns of X, by default ``x0, x1, ...``.
    spec : ModelSpec, optional
        The specification the design was built from, kept for prediction.
    n_dropped : int, optional
        Rows deleted before fitting, reported with the model.

    Returns
    -------
    FittedModel
        Coefficients from generalised least squares at the optimal variance
        ratio, two-tailed t-test p-values with df = n - p - g + 1 (n - p when
        that is below 1), variance components and group BLUPs.

    Raises
    ------
    SingularDesignError
        If X is rank deficient; the columns that add no rank are named.
    ConvergenceError
        If the variance ratio search fails; the error carries the search trace.
    ValidationError
        If there are too few observations.

    Warns
    -----
    SingleGroupWarning
        If the groups cannot identify a group variance (one group, or one
        observation per group); the model is then fitted by OLS.
    """
    method = value_to_enum(method, MethodEnum)
    y = np.asarray(y, dtype=float).ravel()
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] != y.size:
        raise ValidationError(f"X must have shape ({y.size}, p), got {X.shape}")
    groups = np.asarray(groups, dtype=object).ravel()
    if groups.size != y.size:
        raise ValidationError("groups and y differ in length")
    n, p = X.shape
    names = tuple(column_names) if column_names is not None else tuple(f"x{j}" for j in range(p))
    if len(names) != p:
        raise ValidationError("column_names and X differ in width")
    if p == 0:
        raise ValidationError("the design has no columns")
    if n <= p + 2:
        raise ValidationError(f"need more than p + 2 = {p + 2} observations, got {n}")
    if not np.all(np.isfinite(y)) or not np.all(np.isfinite(X)):
        raise ValidationError("y and X must be finite")
    if np.linalg.matrix_rank(X) < p:
        raise SingularDesignError(_collinear_columns(X, names))

    # Canonical row order and power-of-two column scales: permuting rows or
    # rescaling a column by a power of two leaves every floating point sum unchanged.
    scale = np.exp2(np.round(np.log2(np.linalg.norm(X, axis=0))))
    Xs = X / scale
    order = np.lexsort(tuple(Xs.T[::-1]) + (y, groups.astype(str)))
    y, Xs, groups = y[order], Xs[order], groups[order]

    sums = _GroupSums.of(y, Xs, groups)
    g = sums.labels.size
    mixed = g > 1 and np.any(sums.sizes > 1)
    if mixed:
        best, trace = _search(sums, n, p, method)
        df = n - p - g + 1
        df_convention = DF_CONVENTION
        if df < 1:
            df = n - p
    else:
        if spec is None or spec.grouping is not None:
            warnings.warn(
                f"{g} group(s) of sizes up to {int(sums.sizes.max())}: group variance not identifiable, fitting OLS",
                SingleGroupWarning,
                stacklevel=2,
            )
            logger.warning("Degrading to ordinary least squares (%d groups)", g)
        best, trace = _profile(sums, 0.0, n, p, method), []
        df, df_convention = n - p, OLS_DF_CONVENTION

    cov = best.sigma2 * np.linalg.inv(best.XtVX)
    beta = best.beta / scale
    se = np.sqrt(np.clip(np.diag(cov), 0.0, None)) / scale
    with np.errstate(divide="ignore", invalid="ignore"):
        t_stats = np.where(se > 0, beta / se, np.copysign(np.inf, beta))
    p_values = np.clip(2.0 * t_dist.sf(np.abs(t_stats), df), 0.0, 1.0)

    residuals = y - Xs @ best.beta
    group_resid = np.bincount(sums.index, weights=residuals, minlength=g)
    blups = best.lam / (1.0 + best.lam * sums.sizes) * group_resid
    conditional = residuals - blups[sums.index]
    # REML log-likelihood of the unscaled design
    loglik = best.loglik - (float(np.sum(np.log(scale))) if method is MethodEnum.REML else 0.0)

    logger.info(
        "Fitted %s: n_used=%d n_dropped=%d groups=%d lambda=%.6g loglik=%.6g (%d evaluations)",
        method.name,
        n,
        n_dropped,
        g,
        best.lam,
        loglik,
        len(trace),
    )
    return FittedModel(
        column_names=names,
        beta=beta,
        se=se,
        t_stats=t_stats,
        p_values=p_values,
        sigma2_group=best.lam * best.sigma2,
        sigma2_resid=best.sigma2,
        method=method,
        n_used=n,
        n_dropped=n_dropped,
        spec=spec,
        group_effects={str(label): float(b) for label, b in zip(sums.labels, blups)} if mixed else {},
        loglik=loglik,
        df=df,
        df_convention=df_convention,
        n_groups=g,
        residual_ss=float(conditional @ conditional),
    )


def fit_spec(rc, macro, spec: ModelSpec, method: str | MethodEnum = MethodEnum.REML) -> FittedModel:
    """Build the design of a spec over a reference class and fit it.

    Parameters
    ----------
    rc : ReferenceClass
        The records.
    macro : Mapping[str, CountryMacroSeries]
        Country series keyed by country code.
    spec : ModelSpec
        The model specification.
    method : str | MethodEnum, optional
        ``"reml"`` (default) or ``"ml"``.
    """
    design = build_design(rc, macro, spec)
    return fit(
        design.y,
        design.X,
        design.groups if spec.grouping else np.full(design.n_used, "", dtype=object),
        method=method,
        column_names=design.column_names,
        spec=spec,
        n_dropped=design.n_dropped,
    )


def profile_loglik(
    y: Sequence[float], X: np.ndarray, groups: Sequence[str], lam: float, method: str | MethodEnum = MethodEnum.REML
) -> float:
    """Profiled (restricted) log-likelihood at a fixed variance ratio."""
    method = value_to_enum(method, MethodEnum)
    y = np.asarray(y, dtype=float).ravel()
    X = np.asarray(X, dtype=float)
    sums = _GroupSums.of(y, X, np.asarray(groups, dtype=object).ravel())
    return _profile(sums, float(lam), X.shape[0], X.shape[1], method).loglik
