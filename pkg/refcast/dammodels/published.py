"""
This module contains the four published large-dam models and the:

- **PublishedModelEnum:** The end user enumeration of published model ids.

The coefficient sets are frozen as printed. Predictions apply fixed effects
only: no country random intercepts were published.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..exceptions import (
    FixtureError,
    MissingTermError,
    PredictionDomainError,
    TransformationDomainError,
    ValidationError,
)
from ..fixtures import PUBLISHED_MODELS, load_fixture
from ..lmm.fit import FittedModel
from ..lmm.predict import predict
from ..lmm.spec import AnyTerm, InteractionTerm, ModelSpec, Term
from ..utils import value_to_enum
from .descriptor import ProjectDescriptor

logger = logging.getLogger(__name__)

RATIO_RESPONSES = ("cost_overrun", "schedule_slippage")
COMPLETION_FALLBACK = (
    "year_completion not supplied; estimated as year_decision + estimated_schedule_months / 12"
)


class PublishedModelEnum(Enum):
    """Enumeration of published model ids."""

    M1_COST_OVERRUN = "M1_cost_overrun"
    M2_EST_SCHEDULE = "M2_est_schedule"
    M3_SCHEDULE_SLIP = "M3_schedule_slip"
    M4_ACTUAL_SCHEDULE = "M4_actual_schedule"


def published_model_id(value: str | PublishedModelEnum) -> PublishedModelEnum:
    """Coerce a model id, accepting the short forms ``"M1"`` to ``"M4"``."""
    if isinstance(value, PublishedModelEnum):
        return value
    short = str(value).strip().upper()
    for member in PublishedModelEnum:
        if member.name.split("_")[0] == short:
            return member
    return value_to_enum(value, PublishedModelEnum)


@dataclass(frozen=True)
class PublishedTerm:
    """One printed coefficient row."""

    label: str
    term: Optional[AnyTerm]
    coefficient: float
    se: float
    t: float
    p: float

    def to_dict(self) -> Dict[str, object]:
        return {
            "label": self.label,
            "term": None if self.term is None else self.term.name,
            "coefficient": self.coefficient,
            "se": self.se,
            "t": self.t,
            "p": self.p,
        }


def _row(label: str, term: Optional[AnyTerm], data: Mapping) -> PublishedTerm:
    return PublishedTerm(
        label=label,
        term=term,
        coefficient=float(data["coefficient"]),
        se=float(data["se"]),
        t=float(data["t"]),
        p=float(data["p"]),
    )


@dataclass(frozen=True)
class PublishedModel:
    """A published coefficient set and its model specification."""

    id: PublishedModelEnum
    title: str
    spec: ModelSpec
    intercept: PublishedTerm
    terms: Tuple[PublishedTerm, ...]
    n_observations: int
    provenance: str

    @classmethod
    def from_dict(cls, data: Mapping) -> "PublishedModel":
        terms: List[AnyTerm] = []
        rows: List[PublishedTerm] = []
        for entry in data["terms"]:
            if "interaction" in entry:
                term: AnyTerm = InteractionTerm(tuple(entry["interaction"]))
            else:
                term = Term(entry["variable"], entry.get("transformation", "identity"))
            terms.append(term)
            rows.append(_row(entry.get("label", ""), term, entry))
        response = data["response"]
        spec = ModelSpec(
            response=Term(response["variable"], response["transformation"]),
            terms=tuple(terms),
            grouping="country",
        )
        # interaction names are resolved by ModelSpec
        rows = [
            PublishedTerm(r.label, resolved, r.coefficient, r.se, r.t, r.p) for r, resolved in zip(rows, spec.terms)
        ]
        return cls(
            id=published_model_id(data["id"]),
            title=str(data.get("title", "")),
            spec=spec,
            intercept=_row("Intercept", None, data["intercept"]),
            terms=tuple(rows),
            n_observations=int(data.get("n_observations", 0)),
            provenance=str(data.get("provenance", "")),
        )

    @property
    def is_ratio(self) -> bool:
        """True when the response is an overrun ratio rather than a duration."""
        return self.spec.response.variable in RATIO_RESPONSES

    @property
    def variables(self) -> List[str]:
        return [t.term.variable for t in self.terms if isinstance(t.term, Term)]

    def to_fitted_model(self) -> FittedModel:
        """The coefficients as a FittedModel with zero variance components."""
        rows = [self.intercept] + list(self.terms)
        return FittedModel.from_published(
            self.spec,
            beta=[r.coefficient for r in rows],
            se=[r.se for r in rows],
            t_stats=[r.t for r in rows],
            p_values=[r.p for r in rows],
            n_used=self.n_observations,
            provenance=self.provenance,
        )

    def to_dict(self) -> Dict[str, object]:
        return {
            "id": self.id.value,
            "title": self.title,
            "spec": self.spec.to_dict(),
            "intercept": self.intercept.to_dict(),
            "terms": [t.to_dict() for t in self.terms],
            "n_observations": self.n_observations,
            "provenance": self.provenance,
        }


def load_published_models() -> Dict[PublishedModelEnum, PublishedModel]:
    """The bundled published models keyed by id.

    Raises
    ------
    FixtureError
        If ``published_models.json`` is missing or malformed.
    """
    data = load_fixture(PUBLISHED_MODELS)
    try:
        models = [PublishedModel.from_dict(entry) for entry in data["models"]]
    except (KeyError, TypeError, ValueError) as e:
        raise FixtureError(f"invalid {PUBLISHED_MODELS}: {e}")
    return {m.id: m for m in models}


def published_model(model_id: str | PublishedModelEnum) -> PublishedModel:
    return load_published_models()[published_model_id(model_id)]


@dataclass(frozen=True)
class PublishedPrediction:
    """A fixed-effects prediction of a published model on both scales.

    For ratio responses ``value`` is the overrun factor (1.34 = 34 % over);
    for duration responses it is a number of months.
    """

    model_id: PublishedModelEnum
    response: str
    linear_predictor: float
    value: float
    is_ratio: bool
    caveats: Tuple[str, ...] = ()

    @property
    def overrun_pct(self) -> Optional[float]:
        return 100.0 * (self.value - 1.0) if self.is_ratio else None

    def to_dict(self) -> Dict[str, object]:
        return {
            "model": self.model_id.value,
            "response": self.response,
            "linear_predictor": self.linear_predictor,
            "value": self.value,
            "overrun_pct": self.overrun_pct,
            "caveats": list(self.caveats),
        }


def _model_values(model: PublishedModel, values: Dict[str, Optional[float]]) -> Tuple[Dict, Tuple[str, ...]]:
    caveats = []
    if "year_completion" in model.variables and values.get("year_completion") is None:
        decision = values.get("year_decision")
        months = values.get("estimated_schedule_months")
        if decision is not None and months is not None:
            values = dict(values, year_completion=decision + months / 12.0)
            caveats.append(COMPLETION_FALLBACK)
    return values, tuple(caveats)


def _predict_values(model: PublishedModel, values: Dict[str, Optional[float]]) -> PublishedPrediction:
    values, caveats = _model_values(model, values)
    result = predict(model.to_fitted_model(), values)
    return PublishedPrediction(
        model_id=model.id,
        response=model.spec.response.name,
        linear_predictor=result.linear_predictor,
        value=result.value,
        is_ratio=model.is_ratio,
        caveats=caveats,
    )


def predict_published(model_id: str | PublishedModelEnum, descriptor: ProjectDescriptor) -> PublishedPrediction:
    """Evaluate a published model for a project.

    Parameters
    ----------
    model_id : str | PublishedModelEnum
        e.g. ``"M1"`` or ``PublishedModelEnum.M3_SCHEDULE_SLIP``.
    descriptor : ProjectDescriptor
        The project; inflation in percent per year.

    Returns
    -------
    PublishedPrediction
        Linear predictor and its back-transform. No random effect is applied.

    Raises
    ------
    MissingTermError
        If the descriptor lacks a variable the model needs.
    TransformationDomainError
        If a value lies outside its transformation's domain, e.g. log of 0.
    PredictionDomainError
        If the linear predictor has no back-transform, e.g. 1/x of a
        nonpositive value.
    """
    model = published_model(model_id)
    prediction = _predict_values(model, descriptor.values())
    logger.debug("%s for %s: eta=%.6g value=%.6g", model.id.value, descriptor.name, prediction.linear_predictor, prediction.value)
    return prediction


@dataclass(frozen=True)
class Sensitivity:
    """Finite-difference effect of one variable on a published prediction."""

    model_id: PublishedModelEnum
    variable: str
    delta: float
    base: PublishedPrediction
    shifted: PublishedPrediction

    @property
    def change(self) -> float:
        """Change of the back-transformed prediction."""
        return self.shifted.value - self.base.value

    def to_dict(self) -> Dict[str, object]:
        return {
            "model": self.model_id.value,
            "variable": self.variable,
            "delta": self.delta,
            "base": self.base.to_dict(),
            "shifted": self.shifted.to_dict(),
            "change": self.change,
        }


def sensitivity(
    model_id: str | PublishedModelEnum, descriptor: ProjectDescriptor, variable: str, delta: float
) -> Sensitivity:
    """Change of a published prediction when one variable moves by delta.

    For a dummy, ``delta=1`` from 0 switches the flag on. A positive change
    on a ratio model means a larger overrun, whatever the sign of the printed
    coefficient on the reciprocal scale.

    Raises
    ------
    ValidationError
        If the model does not use the variable.
    MissingTermError
        If the descriptor lacks the variable.
    """
    model = published_model(model_id)
    if variable not in model.variables:
        raise ValidationError(f"{model.id.value} has no term in {variable}; terms: {model.variables}")
    values = descriptor.values()
    if values.get(variable) is None:
        raise MissingTermError(variable)
    shifted = dict(values, **{variable: values[variable] + delta})
    return Sensitivity(
        model_id=model.id,
        variable=variable,
        delta=float(delta),
        base=_predict_values(model, values),
        shifted=_predict_values(model, shifted),
    )


def prediction_surface(
    model_id: str | PublishedModelEnum,
    descriptor: ProjectDescriptor,
    x_variable: str,
    x_values: Sequence[float],
    series_variable: str,
    series_values: Sequence[float],
) -> List[Dict[str, float]]:
    """Predictions over a grid of two variables, one row per point.

    The default use draws predicted cost overrun against estimated duration
    for several long-term inflation rates. Grid points whose prediction is
    undefined are left out.

    Returns
    -------
    List[Dict[str, float]]
        Rows with keys ``series_variable``, ``x_variable``,
        ``linear_predictor`` and ``value``, ordered by series then x.
    """
    model = published_model(model_id)
    for variable in (x_variable, series_variable):
        if variable not in model.variables:
            raise ValidationError(f"{model.id.value} has no term in {variable}; terms: {model.variables}")
    base = descriptor.values()
    rows = []
    for s in series_values:
        for x in np.asarray(x_values, dtype=float):
            values = dict(base, **{series_variable: float(s), x_variable: float(x)})
            try:
                prediction = _predict_values(model, values)
            except (PredictionDomainError, TransformationDomainError):
                logger.debug("Surface point %s=%g, %s=%g outside response domain", series_variable, s, x_variable, x)
                continue
            rows.append(
                {
                    series_variable: float(s),
                    x_variable: float(x),
                    "linear_predictor": prediction.linear_predictor,
                    "value": prediction.value,
                }
            )
    return rows
