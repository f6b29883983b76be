"""Design construction: transformed columns, dummies, interactions and listwise deletion."""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Mapping, Optional, Tuple

import numpy as np

from ..exceptions import MissingTermError, TransformationDomainError, ValidationError
from ..refdata.records import CountryMacroSeries, DamRecord, ReferenceClass
from .spec import InteractionTerm, ModelSpec, Term

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DroppedRow:
    dam_id: str
    reason: str

    def to_dict(self) -> Dict[str, str]:
        return {"dam_id": self.dam_id, "reason": self.reason}


@dataclass(frozen=True, eq=False)
class Design:
    """Response vector, fixed-effects design matrix and group labels of the used rows."""

    spec: ModelSpec
    y: np.ndarray
    X: np.ndarray
    groups: np.ndarray
    column_names: Tuple[str, ...]
    record_ids: Tuple[str, ...]
    dropped: Tuple[DroppedRow, ...] = field(default_factory=tuple)

    @property
    def n_used(self) -> int:
        return int(self.y.size)

    @property
    def n_dropped(self) -> int:
        return len(self.dropped)


def _transform(term: Term, raw: float) -> float:
    transformation = term.transformation.value
    if not bool(transformation.in_domain(raw)):
        raise TransformationDomainError(f"{term.name} undefined for {term.variable} = {raw:g}")
    return float(transformation.forward(raw))


def design_row(spec: ModelSpec, values: Mapping[str, Optional[float]]) -> np.ndarray:
    """Fixed-effects row of a single observation from raw variable values.

    Parameters
    ----------
    spec : ModelSpec
        The model specification.
    values : Mapping[str, Optional[float]]
        Untransformed values keyed by variable name. Dummies are 0/1.

    Returns
    -------
    np.ndarray
        The design row in ``spec.column_names`` order.

    Raises
    ------
    MissingTermError
        If a variable the spec needs is absent or None.
    TransformationDomainError
        If a value lies outside its transformation's domain.
    """
    transformed: Dict[str, float] = {}
    row: List[float] = [1.0] if spec.intercept else []
    for term in spec.terms:
        if isinstance(term, InteractionTerm):
            value = float(np.prod([transformed[c] for c in term.components]))
        else:
            raw = values.get(term.variable)
            if raw is None:
                raise MissingTermError(term.variable)
            value = _transform(term, float(raw))
            transformed[term.name] = value
        row.append(value)
    return np.asarray(row, dtype=float)


def _group_label(record: DamRecord, grouping: Optional[str]) -> str:
    if grouping is None:
        return ""
    value = getattr(record, grouping)
    return str(value.value) if isinstance(value, Enum) else str(value)


def record_values(
    spec: ModelSpec, record: DamRecord, macro: Optional[CountryMacroSeries]
) -> Dict[str, Optional[float]]:
    """Raw values of every variable the spec references, None when missing."""
    terms = [spec.response] + [t for t in spec.terms if isinstance(t, Term)]
    return {t.variable: t.source.value.resolve(record, macro) for t in terms}


def build_design(
    rc: ReferenceClass,
    macro: Optional[Mapping[str, CountryMacroSeries]],
    spec: ModelSpec,
) -> Design:
    """Build the design of a spec over a reference class.

    Rows with a missing variable or a value outside a transformation's domain
    are deleted listwise; each deletion is reported with its reason.

    Parameters
    ----------
    rc : ReferenceClass
        The records.
    macro : Mapping[str, CountryMacroSeries], optional
        Country series keyed by country code; needed by country variables.
    spec : ModelSpec
        The model specification.

    Returns
    -------
    Design
        The used rows and the drop report, ``n_used + n_dropped == len(rc)``.

    Raises
    ------
    ValidationError
        If no row survives.
    """
    macro = macro or {}
    ys, rows, groups, ids, dropped = [], [], [], [], []
    for record in rc.records:
        values = record_values(spec, record, macro.get(record.country))
        try:
            raw_y = values[spec.response.variable]
            if raw_y is None:
                raise MissingTermError(spec.response.variable)
            y = _transform(spec.response, raw_y)
            row = design_row(spec, values)
        except (MissingTermError, TransformationDomainError) as e:
            dropped.append(DroppedRow(record.id, str(e)))
            continue
        ys.append(y)
        rows.append(row)
        groups.append(_group_label(record, spec.grouping))
        ids.append(record.id)

    logger.info("Design %s: %d rows used, %d dropped", spec, len(ys), len(dropped))
    if not ys:
        raise ValidationError(f"no complete rows for {spec} ({len(dropped)} dropped)")
    return Design(
        spec=spec,
        y=np.asarray(ys, dtype=float),
        X=np.vstack(rows),
        groups=np.asarray(groups, dtype=object),
        column_names=tuple(spec.column_names),
        record_ids=tuple(ids),
        dropped=tuple(dropped),
    )
