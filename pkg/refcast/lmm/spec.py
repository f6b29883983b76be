"""Model specifications: response, fixed-effect terms, interactions and grouping factor."""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from ..exceptions import ModelSpecError
from ..stats.registry import TransformationEnum
from ..utils import value_to_enum
from .variables import VariableEnum, variable_name

INTERCEPT = "(Intercept)"
GROUPINGS = ("country", "region", "project_type")


@dataclass(frozen=True)
class Term:
    """A variable entering the model through a transformation.

    ``name`` is the design column name, e.g. ``log(wall_length_m)``; identity
    terms are named by their variable.
    """

    variable: str
    transformation: TransformationEnum = TransformationEnum.IDENTITY

    def __post_init__(self):
        object.__setattr__(self, "variable", variable_name(self.variable))
        object.__setattr__(self, "transformation", value_to_enum(self.transformation, TransformationEnum))

    @property
    def name(self) -> str:
        return self.transformation.value.column_name(self.variable)

    @property
    def source(self) -> VariableEnum:
        return VariableEnum[self.variable.upper()]

    @property
    def dummy(self) -> bool:
        return self.source.value.dummy and self.transformation is TransformationEnum.IDENTITY

    def to_dict(self) -> Dict[str, object]:
        return {"variable": self.variable, "transformation": self.transformation.name.lower()}


@dataclass(frozen=True)
class InteractionTerm:
    """Elementwise product of two or more declared terms, named ``a:b``."""

    components: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if len(self.components) < 2:
            raise ModelSpecError("an interaction needs at least 2 components")

    @property
    def name(self) -> str:
        return ":".join(self.components)

    def to_dict(self) -> Dict[str, object]:
        return {"interaction": list(self.components)}


AnyTerm = Term | InteractionTerm


def _resolve_reference(reference: str, terms: Sequence[Term]) -> str:
    for term in terms:
        if term.name == reference:
            return term.name
    matches = [t.name for t in terms if t.variable == reference]
    if len(matches) == 1:
        return matches[0]
    if not matches:
        raise ModelSpecError(f'interaction references undeclared term "{reference}"')
    raise ModelSpecError(f'interaction reference "{reference}" is ambiguous: {matches}')


@dataclass(frozen=True)
class ModelSpec:
    """A mixed model specification.

    Parameters
    ----------
    response : Term
        The response variable and its transformation.
    terms : Sequence[Term | InteractionTerm]
        Fixed-effect terms in declaration order. Interaction components may
        name a declared term by column name or by variable.
    grouping : str, optional
        Random-intercept grouping factor: "country" (default), "region",
        "project_type", or None for a fixed-effects-only model.
    intercept : bool, optional
        Whether to include a fixed intercept, by default True.

    Raises
    ------
    ModelSpecError
        On duplicate terms, dangling interaction references or an unknown grouping.
    """

    response: Term
    terms: Tuple[AnyTerm, ...] = ()
    grouping: Optional[str] = "country"
    intercept: bool = True

    def __post_init__(self):
        mains = [t for t in self.terms if isinstance(t, Term)]
        resolved: List[AnyTerm] = []
        for term in self.terms:
            if isinstance(term, InteractionTerm):
                term = InteractionTerm(tuple(_resolve_reference(c, mains) for c in term.components))
                if len(set(term.components)) != len(term.components):
                    raise ModelSpecError(f"interaction {term.name} repeats a component")
            elif not isinstance(term, Term):
                raise ModelSpecError(f"unsupported term {term!r}")
            resolved.append(term)

        names = [t.name for t in resolved]
        duplicates = sorted({n for n in names if names.count(n) > 1})
        if duplicates:
            raise ModelSpecError(f"duplicate terms: {', '.join(duplicates)}")
        if self.grouping is not None and self.grouping not in GROUPINGS:
            raise ModelSpecError(f'unknown grouping "{self.grouping}".\nSupported values: {list(GROUPINGS)}')
        object.__setattr__(self, "terms", tuple(resolved))

    @property
    def column_names(self) -> List[str]:
        return ([INTERCEPT] if self.intercept else []) + [t.name for t in self.terms]

    def term(self, name: str) -> AnyTerm:
        for t in self.terms:
            if t.name == name:
                return t
        raise KeyError(name)

    def protected(self) -> set:
        """Names of main terms that a declared interaction depends on."""
        return {c for t in self.terms if isinstance(t, InteractionTerm) for c in t.components}

    def without(self, name: str) -> "ModelSpec":
        """A copy with one term removed.

        Raises
        ------
        ModelSpecError
            If an interaction still depends on the term.
        """
        if name in self.protected():
            raise ModelSpecError(f"{name} is required by an interaction")
        self.term(name)
        return ModelSpec(
            response=self.response,
            terms=tuple(t for t in self.terms if t.name != name),
            grouping=self.grouping,
            intercept=self.intercept,
        )

    def to_dict(self) -> Dict[str, object]:
        return {
            "response": self.response.to_dict(),
            "terms": [t.to_dict() for t in self.terms],
            "grouping": self.grouping,
            "intercept": self.intercept,
        }

    def __str__(self) -> str:
        rhs = " + ".join(self.column_names) or "0"
        group = f" + (1 | {self.grouping})" if self.grouping else ""
        return f"{self.response.name} ~ {rhs}{group}"
