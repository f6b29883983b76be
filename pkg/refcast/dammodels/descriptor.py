"""The candidate project a forecast is made for."""

import json
import math
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

from ..exceptions import InputError, ValidationError
from ..utils import parse_bool

_POSITIVE = (
    "estimated_cost",
    "estimated_schedule_months",
    "long_term_inflation_pct",
    "per_capita_income_2000usd",
    "wall_height_m",
    "wall_length_m",
    "installed_capacity_mw",
    "estimated_bcr",
)


@dataclass(frozen=True)
class ProjectDescriptor:
    """Features of a planned dam.

    Every feature is optional; each published model checks the ones it needs
    when it is evaluated. Inflation is in percent per year.
    """

    name: str
    country: str = ""
    estimated_cost: Optional[float] = None
    currency: str = ""
    estimated_schedule_months: Optional[float] = None
    long_term_inflation_pct: Optional[float] = None
    democracy: Optional[bool] = None
    south_asia: Optional[bool] = None
    per_capita_income_2000usd: Optional[float] = None
    wall_height_m: Optional[float] = None
    wall_length_m: Optional[float] = None
    installed_capacity_mw: Optional[float] = None
    estimated_bcr: Optional[float] = None
    year_decision: Optional[int] = None
    year_completion: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "country", self.country.strip().upper())
        for name in ("democracy", "south_asia"):
            object.__setattr__(self, name, parse_bool(getattr(self, name)))
        for name in _POSITIVE:
            value = getattr(self, name)
            if value is None:
                continue
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ValidationError(f"{name} must be a number, got {value!r}")
            if not math.isfinite(value) or value <= 0:
                raise ValidationError(f"{name} must be positive, got {value}")
        if (
            self.year_decision is not None
            and self.year_completion is not None
            and self.year_completion < self.year_decision
        ):
            raise ValidationError(
                f"year_completion {self.year_completion} precedes year_decision {self.year_decision}"
            )

    def values(self) -> Dict[str, Optional[float]]:
        """Raw model variable values keyed by variable name, None when missing."""

        def num(value):
            return None if value is None else float(value)

        return {
            "estimated_schedule_months": num(self.estimated_schedule_months),
            "long_term_inflation": num(self.long_term_inflation_pct),
            "democracy": num(self.democracy),
            "south_asia": num(self.south_asia),
            "per_capita_income_2000usd": num(self.per_capita_income_2000usd),
            "wall_height_m": num(self.wall_height_m),
            "wall_length_m": num(self.wall_length_m),
            "installed_capacity_mw": num(self.installed_capacity_mw),
            "year_decision": num(self.year_decision),
            "year_completion": num(self.year_completion),
        }

    def with_changes(self, **changes: Any) -> "ProjectDescriptor":
        """A copy with some features replaced, e.g. relocated to another country."""
        return replace(self, **changes)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ProjectDescriptor":
        """Build from a JSON-style mapping.

        Raises
        ------
        InputError
            If the mapping has unknown keys or no name.
        """
        valid = [f.name for f in fields(cls)]
        unknown = sorted(set(data) - set(valid))
        if unknown:
            raise InputError(f"Unknown descriptor fields {unknown}.\nValid keys: {valid}")
        if not data.get("name"):
            raise InputError("descriptor needs a name")
        return cls(**data)


def load_descriptor(path: str | Path) -> ProjectDescriptor:
    """Read a ProjectDescriptor from a JSON file.

    Raises
    ------
    InputError
        If the file cannot be read or is not a JSON object with valid keys.
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except OSError as e:
        raise InputError(f"cannot read descriptor {path}: {e}")
    except json.JSONDecodeError as e:
        raise InputError(f"invalid descriptor {path}: {e}")
    if not isinstance(data, dict):
        raise InputError(f"invalid descriptor {path}: expected a JSON object")
    return ProjectDescriptor.from_dict(data)
