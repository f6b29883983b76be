import inspect
from typing import Any, Dict, List, Optional

from ..exceptions import ModelSpecError
from ..stats.registry import TransformationEnum
from .spec import AnyTerm, InteractionTerm, ModelSpec, Term


class ModelSpecBuilder:
    """A builder for constructing ModelSpec instances.

    Terms are added step by step and in declaration order, or loaded from a
    configuration dictionary with the same shape as ``ModelSpec.to_dict``.
    """

    def __init__(self) -> None:
        self._response: Optional[Term] = None
        self._terms: List[AnyTerm] = []
        self._grouping: Optional[str] = "country"
        self._intercept: bool = True

    def __repr__(self) -> str:
        val = f"ModelSpecBuilder(\nresponse={self._response},\nterms=["
        for term in self._terms:
            val += f"\n\t{term}"
        val += f"\n],\ngrouping={self._grouping!r},\nintercept={self._intercept})"
        return val

    def response(
        self, variable: str, transformation: str | TransformationEnum = TransformationEnum.IDENTITY
    ) -> "ModelSpecBuilder":
        """Set the response variable and its transformation.

        Returns
        -------
        ModelSpecBuilder
            The builder instance for chaining.
        """
        self._response = Term(variable, transformation)
        return self

    def add_term(
        self, variable: str, transformation: str | TransformationEnum = TransformationEnum.IDENTITY
    ) -> "ModelSpecBuilder":
        """Add a fixed-effect term.

        Variables and transformations can be given by enum or by
        case-insensitive name, e.g. ``add_term("wall_length_m", "natural_log")``.

        Returns
        -------
        ModelSpecBuilder
            The builder instance for chaining.
        """
        self._terms.append(Term(variable, transformation))
        return self

    def add_interaction(self, *components: str) -> "ModelSpecBuilder":
        """Add an interaction of already declared terms.

        Components name a declared term by column name or by variable.

        Returns
        -------
        ModelSpecBuilder
            The builder instance for chaining.
        """
        self._terms.append(InteractionTerm(tuple(components)))
        return self

    def grouping(self, name: Optional[str]) -> "ModelSpecBuilder":
        self._grouping = name
        return self

    def intercept(self, include: bool = True) -> "ModelSpecBuilder":
        self._intercept = bool(include)
        return self

    def from_dict(self, cfg: Dict[str, Any]) -> "ModelSpecBuilder":
        """Configure the builder from a dictionary.

        Parameters
        ----------
        cfg : dict
            The configuration dictionary.

        Returns
        -------
        ModelSpecBuilder
            The builder instance for chaining.

        Raises
        ------
        TypeError
            If a section or term carries unsupported keys; valid keys are listed.

        Examples
        --------
        >>> cfg = {
        ...     "response": {"variable": "cost_overrun", "transformation": "reciprocal"},
        ...     "terms": [{"variable": "estimated_schedule_months", "transformation": "natural_log"},
        ...               {"interaction": ["democracy", "south_asia"]}],
        ...     "grouping": "country",
        ... }
        >>> builder = ModelSpecBuilder().from_dict(cfg)
        """
        _check_keys("model spec", cfg.keys(), {"response", "terms", "grouping", "intercept"})
        if "response" in cfg:
            self.response(**_term_kwargs("response", cfg["response"], self.response))
        for entry in cfg.get("terms", []):
            if "interaction" in entry:
                _check_keys("interaction", entry.keys(), {"interaction"})
                self.add_interaction(*entry["interaction"])
            else:
                self.add_term(**_term_kwargs("term", entry, self.add_term))
        if "grouping" in cfg:
            self.grouping(cfg["grouping"])
        if "intercept" in cfg:
            self.intercept(cfg["intercept"])
        return self

    def build(self) -> ModelSpec:
        """Execute the builder and produce a ModelSpec.

        Raises
        ------
        ModelSpecError
            If no response was set or the terms are inconsistent.
        """
        if self._response is None:
            raise ModelSpecError("a model spec needs a response")
        return ModelSpec(
            response=self._response,
            terms=tuple(self._terms),
            grouping=self._grouping,
            intercept=self._intercept,
        )


def _check_keys(what: str, keys, valid: set):
    invalid = set(keys) - valid
    if invalid:
        raise TypeError(
            f"{what} got unexpected key(s): {', '.join(sorted(invalid))}. "
            f"Valid keys are: {', '.join(sorted(valid))}"
        )


def _term_kwargs(what: str, entry: Dict[str, Any], method) -> Dict[str, Any]:
    valid = set(inspect.signature(method).parameters.keys())
    _check_keys(what, entry.keys(), valid)
    return dict(entry)
