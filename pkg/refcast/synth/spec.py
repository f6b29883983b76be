"""
This module contains the synthetic data specifications:

- **TailSpec:** A fat-tailed overrun distribution, lognormal or a lognormal/Pareto mixture.

- **CovariateSpec:** The generator of one model covariate.

- **SynthSpec:** A complete random-intercept data-generating process.

- **InflationRegime:** Deflator drift and noise of generated countries.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Mapping, Optional, Tuple

import numpy as np
from scipy.stats import norm

from ..exceptions import ValidationError
from ..lmm.spec import Term
from ..stats.registry import TransformationEnum
from ..utils import value_to_enum

COUNTRY_VARIABLES = ("long_term_inflation", "per_capita_income_2000usd", "democracy")
RESPONSES = ("cost_overrun", "schedule_slippage")


class TailKindEnum(Enum):
    LOGNORMAL = "lognormal"
    PARETO_MIX = "pareto_mix"


@dataclass(frozen=True)
class TailSpec:
    """An overrun factor distribution.

    ``lognormal`` uses (mu, sigma) of the log. ``pareto_mix`` draws from the
    lognormal with probability ``1 - weight`` and otherwise from a Pareto
    with shape ``alpha`` and minimum ``scale``.
    """

    kind: TailKindEnum = TailKindEnum.LOGNORMAL
    mu: float = 0.0
    sigma: float = 0.5
    weight: float = 0.0
    alpha: float = 2.0
    scale: float = 2.0

    def __post_init__(self):
        object.__setattr__(self, "kind", value_to_enum(self.kind, TailKindEnum))
        if not self.sigma > 0:
            raise ValidationError(f"sigma must be positive, got {self.sigma}")
        if self.kind is TailKindEnum.PARETO_MIX:
            if not 0.0 <= self.weight <= 1.0:
                raise ValidationError(f"weight must be within [0, 1], got {self.weight}")
            if not self.alpha > 0 or not self.scale > 0:
                raise ValidationError("alpha and scale must be positive")

    @classmethod
    def lognormal(cls, mu: float, sigma: float) -> "TailSpec":
        return cls(TailKindEnum.LOGNORMAL, mu, sigma)

    @classmethod
    def pareto_mix(cls, mu: float, sigma: float, weight: float, alpha: float, scale: float) -> "TailSpec":
        return cls(TailKindEnum.PARETO_MIX, mu, sigma, weight, alpha, scale)

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        values = rng.lognormal(self.mu, self.sigma, size=n)
        if self.kind is TailKindEnum.PARETO_MIX and self.weight > 0:
            heavy = rng.random(n) < self.weight
            values[heavy] = self.scale * (1.0 + rng.pareto(self.alpha, size=int(heavy.sum())))
        return values

    def sf(self, x: float) -> float:
        """P(overrun > x)."""
        base = float(norm.sf((math.log(x) - self.mu) / self.sigma))
        if self.kind is TailKindEnum.LOGNORMAL:
            return base
        pareto = 1.0 if x < self.scale else (self.scale / x) ** self.alpha
        return (1.0 - self.weight) * base + self.weight * pareto

    def to_dict(self) -> Dict[str, object]:
        data = {"kind": self.kind.value, "mu": self.mu, "sigma": self.sigma}
        if self.kind is TailKindEnum.PARETO_MIX:
            data.update(weight=self.weight, alpha=self.alpha, scale=self.scale)
        return data


class DistributionEnum(Enum):
    UNIFORM = "uniform"
    LOGUNIFORM = "loguniform"
    NORMAL = "normal"
    LOGNORMAL = "lognormal"
    BERNOULLI = "bernoulli"


_PARAMS = {
    DistributionEnum.UNIFORM: ("low", "high"),
    DistributionEnum.LOGUNIFORM: ("low", "high"),
    DistributionEnum.NORMAL: ("mean", "sd"),
    DistributionEnum.LOGNORMAL: ("mu", "sigma"),
    DistributionEnum.BERNOULLI: ("p",),
}


@dataclass(frozen=True)
class CovariateSpec:
    """How one covariate is drawn and how it enters the model.

    Country-level variables (long-term inflation, per capita income and the
    democracy dummy) are drawn once per country and written into its macro
    series; all others are drawn per project into the record field of the
    same name.

    Raises
    ------
    ValidationError
        If the generator is degenerate (zero variance) or misses parameters.
    """

    variable: str
    distribution: DistributionEnum
    params: Mapping[str, float]
    transformation: TransformationEnum = TransformationEnum.IDENTITY

    def __post_init__(self):
        dist = value_to_enum(self.distribution, DistributionEnum)
        object.__setattr__(self, "distribution", dist)
        object.__setattr__(self, "transformation", value_to_enum(self.transformation, TransformationEnum))
        missing = [p for p in _PARAMS[dist] if p not in self.params]
        if missing:
            raise ValidationError(f"{self.variable}: {dist.value} generator needs {missing}")
        p = {k: float(v) for k, v in self.params.items()}
        object.__setattr__(self, "params", p)
        degenerate = {
            DistributionEnum.UNIFORM: lambda: p["high"] <= p["low"],
            DistributionEnum.LOGUNIFORM: lambda: p["high"] <= p["low"] or p["low"] <= 0,
            DistributionEnum.NORMAL: lambda: p["sd"] <= 0,
            DistributionEnum.LOGNORMAL: lambda: p["sigma"] <= 0,
            DistributionEnum.BERNOULLI: lambda: not 0.0 < p["p"] < 1.0,
        }[dist]()
        if degenerate:
            raise ValidationError(f"degenerate generator for {self.variable}: {dist.value} {p}")

    @property
    def term(self) -> Term:
        return Term(self.variable, self.transformation)

    @property
    def country_level(self) -> bool:
        return self.term.variable in COUNTRY_VARIABLES

    def draw(self, rng: np.random.Generator, n: int) -> np.ndarray:
        p = self.params
        match self.distribution:
            case DistributionEnum.UNIFORM:
                return rng.uniform(p["low"], p["high"], size=n)
            case DistributionEnum.LOGUNIFORM:
                return np.exp(rng.uniform(math.log(p["low"]), math.log(p["high"]), size=n))
            case DistributionEnum.NORMAL:
                return rng.normal(p["mean"], p["sd"], size=n)
            case DistributionEnum.LOGNORMAL:
                return rng.lognormal(p["mu"], p["sigma"], size=n)
            case DistributionEnum.BERNOULLI:
                return (rng.random(n) < p["p"]).astype(float)


@dataclass(frozen=True)
class InflationRegime:
    """Deflator path with ``drift_pct`` annual growth and lognormal noise of sd ``noise_sd``."""

    drift_pct: float
    noise_sd: float = 0.0

    def __post_init__(self):
        if self.drift_pct <= -100.0:
            raise ValidationError(f"drift must exceed -100 %, got {self.drift_pct}")
        if self.noise_sd < 0:
            raise ValidationError(f"noise_sd must be nonnegative, got {self.noise_sd}")


# Lognormal matched to 20 % of dams above 2x and 10 % above 3x the budget.
LARGE_DAM_TAIL = TailSpec.lognormal(mu=-0.0824, sigma=0.9215)
SCHEDULE_TAIL = TailSpec.lognormal(mu=0.3, sigma=0.3)


def default_covariates() -> Tuple[CovariateSpec, ...]:
    """Estimated duration per project and long-term inflation per country."""
    return (
        CovariateSpec("estimated_schedule_months", "loguniform", {"low": 36, "high": 180}, "natural_log"),
        CovariateSpec("long_term_inflation", "loguniform", {"low": 1.5, "high": 40}, "natural_log"),
    )


@dataclass(frozen=True)
class SynthSpec:
    """A random-intercept data-generating process over synthetic countries.

    Parameters
    ----------
    n_countries : int
        Number of countries (groups).
    projects_per_country : int | Tuple[int, int]
        Fixed count, or an inclusive (low, high) range drawn per country.
    covariates : Tuple[CovariateSpec, ...]
        Model covariates in declaration order.
    beta : Tuple[float, ...]
        Intercept followed by one coefficient per covariate.
    sigma2_group, sigma2_resid : float
        Random intercept and residual variances on the transformed scale.
    response : Term
        The modelled ratio and its transformation, by default 1/cost overrun.
    overrun_tail : TailSpec, optional
        Distribution of the ratio that is not modelled.
    seed : int
        Determines every draw.
    """

    n_countries: int = 60
    projects_per_country: int | Tuple[int, int] = 4
    covariates: Tuple[CovariateSpec, ...] = field(default_factory=default_covariates)
    beta: Tuple[float, ...] = (1.4, -0.1, -0.085)
    sigma2_group: float = 0.01
    sigma2_resid: float = 0.04
    response: Term = field(default_factory=lambda: Term("cost_overrun", "reciprocal"))
    overrun_tail: Optional[TailSpec] = None
    year_range: Tuple[int, int] = (1934, 2007)
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "covariates", tuple(self.covariates))
        object.__setattr__(self, "beta", tuple(float(b) for b in self.beta))
        if self.n_countries < 1:
            raise ValidationError("n_countries must be at least 1")
        low, high = self.projects_range
        if low < 1 or high < low:
            raise ValidationError(f"invalid projects_per_country {self.projects_per_country}")
        if len(self.beta) != len(self.covariates) + 1:
            raise ValidationError(
                f"beta needs {len(self.covariates) + 1} values (intercept first), got {len(self.beta)}"
            )
        if self.sigma2_group < 0 or self.sigma2_resid < 0:
            raise ValidationError("variances must be nonnegative")
        if self.response.variable not in RESPONSES:
            raise ValidationError(f'response must be one of {list(RESPONSES)}, got "{self.response.variable}"')
        if not 0 <= self.seed < 2**64:
            raise ValidationError("seed must be a 64-bit unsigned integer")
        names = [c.term.variable for c in self.covariates]
        if len(set(names)) != len(names):
            raise ValidationError(f"duplicate covariates: {names}")

    @property
    def projects_range(self) -> Tuple[int, int]:
        if isinstance(self.projects_per_country, int):
            return self.projects_per_country, self.projects_per_country
        low, high = self.projects_per_country
        return int(low), int(high)

    def model_terms(self) -> Tuple[Term, ...]:
        return tuple(c.term for c in self.covariates)
