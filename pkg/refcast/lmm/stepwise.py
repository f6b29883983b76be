"""Backward stepwise elimination of fixed-effect terms."""

import logging
import warnings
from dataclasses import dataclass
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from ..exceptions import InterceptOnlyWarning, ValidationError
from ..refdata.records import CountryMacroSeries, ReferenceClass
from .fit import FittedModel, MethodEnum, fit_spec
from .spec import ModelSpec

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EliminationStep:
    """One elimination: the removed term, its p-value and any terms tied with it."""

    step: int
    term: str
    p_value: float
    n_used: int
    tied_with: Tuple[str, ...] = ()

    def to_dict(self) -> Dict[str, object]:
        return {
            "step": self.step,
            "term": self.term,
            "p_value": self.p_value,
            "n_used": self.n_used,
            "tied_with": list(self.tied_with),
        }


def _select_elimination(
    spec: ModelSpec, model: FittedModel, alpha: float
) -> Optional[Tuple[str, float, Tuple[str, ...]]]:
    """The term to drop, or None when every eligible p-value is <= alpha.

    Mains used by a surviving interaction are not eligible. Ties on the
    largest p-value go to the later-declared term.
    """
    protected = spec.protected()
    p_values = dict(zip(model.column_names, model.p_values))
    chosen, best = None, alpha
    for term in spec.terms:
        if term.name in protected:
            continue
        p = float(p_values[term.name])
        if p > alpha and p >= best:
            chosen, best = term.name, p
    if chosen is None:
        return None
    tied = tuple(
        t.name
        for t in spec.terms
        if t.name != chosen and t.name not in protected and float(p_values[t.name]) == best
    )
    return chosen, best, tied


def backward_eliminate(
    spec: ModelSpec,
    fit_fn: Callable[[ModelSpec], FittedModel],
    alpha: float = 0.05,
) -> Tuple[ModelSpec, List[EliminationStep]]:
    """Backward elimination with any fitting function.

    Parameters
    ----------
    spec : ModelSpec
        The full model with every candidate term.
    fit_fn : Callable[[ModelSpec], FittedModel]
        Fits a spec; called once per step.
    alpha : float, optional
        Terms with p > alpha are candidates for removal, by default 0.05.

    Returns
    -------
    Tuple[ModelSpec, List[EliminationStep]]
        The surviving spec and the ordered elimination trace.

    Warns
    -----
    InterceptOnlyWarning
        If every term was eliminated.
    """
    if not spec.terms:
        raise ValidationError("stepwise selection needs at least one candidate term")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be within (0, 1), got {alpha}")

    trace: List[EliminationStep] = []
    current = spec
    while current.terms:
        model = fit_fn(current)
        selected = _select_elimination(current, model, alpha)
        if selected is None:
            break
        name, p, tied = selected
        trace.append(EliminationStep(len(trace) + 1, name, p, model.n_used, tied))
        logger.info("Stepwise step %d: removed %s (p = %.4g)%s", len(trace), name, p, f", tied with {tied}" if tied else "")
        current = current.without(name)

    if not current.terms:
        warnings.warn(
            f"stepwise selection eliminated every term of {spec}; returning the intercept-only model",
            InterceptOnlyWarning,
            stacklevel=2,
        )
    return current, trace


def stepwise(
    rc: ReferenceClass,
    macro: Optional[Mapping[str, CountryMacroSeries]],
    candidates: ModelSpec | Sequence,
    alpha: float = 0.05,
    method: str | MethodEnum = MethodEnum.REML,
    response=None,
) -> Tuple[ModelSpec, List[EliminationStep]]:
    """Make a mixed model parsimonious by backward stepwise elimination.

    Each step fits the current model, removes the eligible term with the
    largest p-value above ``alpha`` and refits. Interactions are eligible
    before their mains, which stay protected while an interaction uses them.

    Parameters
    ----------
    rc : ReferenceClass
        The records.
    macro : Mapping[str, CountryMacroSeries], optional
        Country series keyed by country code.
    candidates : ModelSpec | Sequence[Term | InteractionTerm]
        The full model, or its terms together with ``response``.
    alpha : float, optional
        Significance level, by default 0.05.
    method : str | MethodEnum, optional
        ``"reml"`` (default) or ``"ml"``.
    response : Term, optional
        Response term when ``candidates`` is a sequence of terms.

    Returns
    -------
    Tuple[ModelSpec, List[EliminationStep]]
        The surviving spec and the elimination trace.
    """
    if isinstance(candidates, ModelSpec):
        spec = candidates
    else:
        if response is None:
            raise ValidationError("a response term is required with a sequence of candidates")
        spec = ModelSpec(response=response, terms=tuple(candidates))
    return backward_eliminate(spec, lambda s: fit_spec(rc, macro, s, method), alpha)

