"""Prediction from fitted (or published) random-intercept models."""

import math
from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional, Tuple

import numpy as np

from ..exceptions import PredictionDomainError, ValidationError
from .design import design_row
from .fit import FittedModel

NO_RANDOM_EFFECT = "no random effect applied"


@dataclass(frozen=True)
class PredictionResult:
    """A prediction on both scales.

    ``linear_predictor`` is on the transformed response scale; ``value`` is
    its back-transform, e.g. a cost overrun factor for a reciprocal response.
    """

    linear_predictor: float
    value: float
    random_effect_applied: bool
    random_effect: float = 0.0
    group: Optional[str] = None
    flags: Tuple[str, ...] = field(default_factory=tuple)

    def to_dict(self) -> Dict[str, object]:
        return {
            "linear_predictor": self.linear_predictor,
            "value": self.value,
            "random_effect_applied": self.random_effect_applied,
            "random_effect": self.random_effect,
            "group": self.group,
            "flags": list(self.flags),
        }


def back_transform(model: FittedModel, linear_predictor: float) -> float:
    """Map a linear predictor through the inverse of the response transformation.

    Raises
    ------
    PredictionDomainError
        If the inverse is undefined at the linear predictor.
    """
    transformation = model.spec.response.transformation
    if not bool(transformation.value.in_inverse_domain(linear_predictor)):
        raise PredictionDomainError(
            f"{model.spec.response.name} = {linear_predictor:g} has no {transformation.name.lower()} inverse"
        )
    value = float(transformation.value.inverse(linear_predictor))
    if not math.isfinite(value):
        raise PredictionDomainError(f"back-transform of {linear_predictor:g} is not finite")
    return value


def predict(
    model: FittedModel,
    new_row: Mapping[str, Optional[float]],
    group: Optional[str] = None,
) -> PredictionResult:
    """Predict the response of a new project.

    Parameters
    ----------
    model : FittedModel
        A model carrying its ModelSpec.
    new_row : Mapping[str, Optional[float]]
        Untransformed values keyed by variable name; dummies are 0/1.
    group : str, optional
        Group label (e.g. country code). When the model has a group effect for
        it, the BLUP is added to the linear predictor; otherwise the
        prediction is fixed-effects only and flagged.

    Returns
    -------
    PredictionResult

    Raises
    ------
    MissingTermError
        If a term the model needs is absent from ``new_row``.
    PredictionDomainError
        If the linear predictor cannot be back-transformed.
    """
    if model.spec is None:
        raise ValidationError("model has no ModelSpec; cannot build a design row")

    x = design_row(model.spec, new_row)
    eta = float(np.dot(x, model.beta))
    flags = []
    effect = 0.0
    applied = group is not None and group in model.group_effects
    if applied:
        effect = float(model.group_effects[group])
        eta += effect
    else:
        flags.append(NO_RANDOM_EFFECT)

    return PredictionResult(
        linear_predictor=eta,
        value=back_transform(model, eta),
        random_effect_applied=applied,
        random_effect=effect,
        group=group,
        flags=tuple(flags),
    )


def fitted_values(model: FittedModel, X: np.ndarray, groups) -> np.ndarray:
    """Conditional fitted values X beta + b_group on the transformed scale."""
    X = np.asarray(X, dtype=float)
    effects = np.array([model.group_effects.get(str(g), 0.0) for g in groups], dtype=float)
    return X @ model.beta + effects
