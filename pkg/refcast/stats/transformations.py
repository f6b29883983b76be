from abc import ABC, abstractmethod

import numpy as np


# --------------------------- Base Transformation --------------------------- #
class Transformation(ABC):
    """A common interface for variable transformations.

    Transformations remove skewness from model variables. Each one exposes a
    forward map, its inverse, and predicates for the valid domain of both, so
    design construction can drop rows with a reason and predictions can refuse
    to back-transform an out-of-range linear predictor.
    """

    label: str = ""

    @abstractmethod
    def forward(self, x: np.ndarray | float) -> np.ndarray | float:
        pass

    @abstractmethod
    def inverse(self, y: np.ndarray | float) -> np.ndarray | float:
        pass

    def in_domain(self, x: np.ndarray | float) -> np.ndarray | bool:
        return np.isfinite(x)

    def in_inverse_domain(self, y: np.ndarray | float) -> np.ndarray | bool:
        return np.isfinite(y)

    def column_name(self, variable: str) -> str:
        """Name of the transformed column, e.g. ``log(wall_length_m)``."""
        return f"{self.label}({variable})" if self.label else variable


# --------------------------- Implementations --------------------------- #
class IdentityTransformation(Transformation):
    """Leaves values unchanged."""

    def forward(self, x):
        return x

    def inverse(self, y):
        return y


class ReciprocalTransformation(Transformation):
    """One over x, defined for positive ratios."""

    label = "inv"

    def forward(self, x):
        return np.divide(1.0, x)

    def inverse(self, y):
        return np.divide(1.0, y)

    def in_domain(self, x):
        return np.isfinite(x) & (np.asarray(x) > 0)

    def in_inverse_domain(self, y):
        return np.isfinite(y) & (np.asarray(y) > 0)


class NaturalLogTransformation(Transformation):
    """Natural logarithm. All model logarithms are natural logs."""

    label = "log"

    def forward(self, x):
        return np.log(x)

    def inverse(self, y):
        return np.exp(y)

    def in_domain(self, x):
        return np.isfinite(x) & (np.asarray(x) > 0)


class SqrtTransformation(Transformation):
    """Square root."""

    label = "sqrt"

    def forward(self, x):
        return np.sqrt(x)

    def inverse(self, y):
        return np.square(y)

    def in_domain(self, x):
        return np.isfinite(x) & (np.asarray(x) >= 0)

    def in_inverse_domain(self, y):
        return np.isfinite(y) & (np.asarray(y) >= 0)


class CbrtTransformation(Transformation):
    """Cube root, defined on the whole real line."""

    label = "cbrt"

    def forward(self, x):
        return np.cbrt(x)

    def inverse(self, y):
        return np.power(y, 3)


class FourthRootTransformation(Transformation):
    """x to the power 0.25."""

    label = "root4"

    def forward(self, x):
        return np.sqrt(np.sqrt(x))

    def inverse(self, y):
        return np.square(np.square(y))

    def in_domain(self, x):
        return np.isfinite(x) & (np.asarray(x) >= 0)

    def in_inverse_domain(self, y):
        return np.isfinite(y) & (np.asarray(y) >= 0)
