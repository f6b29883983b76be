from dataclasses import dataclass, field
from enum import Enum
from typing import Dict


class AlternativeEnum(Enum):
    """Alternative hypotheses for rank tests."""

    TWO_SIDED = "two_sided"
    GREATER = "greater"
    LESS = "less"


@dataclass(frozen=True)
class TestResult:
    """The result of a hypothesis test.

    Each TestResult contains:

    - statistic: The test statistic (W+, U, or F).

    - p_value: The p-value, always clipped to [0, 1].

    - method: A description of the test and the p-value method.

    - alternative: The alternative hypothesis.

    - n: Number of observations that entered the test.

    - exact: True when the p-value comes from complete enumeration.
    """

    __test__ = False  # not a pytest class

    statistic: float
    p_value: float
    method: str
    alternative: AlternativeEnum = AlternativeEnum.TWO_SIDED
    n: int = 0
    exact: bool = False

    def __post_init__(self):
        object.__setattr__(self, "p_value", float(min(1.0, max(0.0, self.p_value))))

    def to_dict(self) -> Dict[str, object]:
        return {
            "statistic": self.statistic,
            "p_value": self.p_value,
            "method": self.method,
            "alternative": self.alternative.value,
            "n": self.n,
            "exact": self.exact,
        }


@dataclass(frozen=True)
class OLSResult:
    """The result of a univariate least-squares fit on transformed scales."""

    slope: float
    intercept: float
    r2: float
    F: float
    p_value: float
    n: int
    x_transform: str = "identity"
    y_transform: str = "identity"

    def to_dict(self) -> Dict[str, object]:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "r2": self.r2,
            "F": self.F,
            "p_value": self.p_value,
            "n": self.n,
            "x_transform": self.x_transform,
            "y_transform": self.y_transform,
        }


@dataclass(frozen=True)
class Summary:
    """Descriptive summary of an empirical distribution."""

    n: int
    mean: float
    median: float
    iqr: float
    fraction_above: Dict[float, float] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, object]:
        return {
            "n": self.n,
            "mean": self.mean,
            "median": self.median,
            "iqr": self.iqr,
            "fraction_above": {f"{k:g}": v for k, v in self.fraction_above.items()},
        }
