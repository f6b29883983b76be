"""This module contains utility functions for the refcast toolbox."""

import re
from enum import Enum
from typing import Optional, TypeVar

E = TypeVar("E", bound=Enum)

_TRUE = {"true", "t", "yes", "y", "1"}
_FALSE = {"false", "f", "no", "n", "0"}


def value_to_enum(value: str | Enum, enum_class: type[E]) -> E:
    """Convert a string value to Enum.

    If the value is already an enum, it is returned as is.
    String values are uppercased, stripped, and runs of spaces, hyphens, slashes
    and ampersands are collapsed to a single underscore to match enum names,
    so ``"East Asia & Pacific"`` resolves to ``EAST_ASIA_PACIFIC``.

    Parameters
    ----------
    value : str | Enum
        The string representation of the enum value.
    enum_class : type[Enum]
        The enum class to convert to.

    Raises
    ------
    ValueError
        If the value cannot be converted to the specified enum class,
        supported values are listed in the error message.

    Returns
    -------
    Enum
        The corresponding enum value.
    """
    if isinstance(value, enum_class):
        return value

    key = re.sub(r"[\s\-/&]+", "_", str(value).upper().strip()).strip("_")
    try:
        return enum_class[key]
    except Exception:
        raise ValueError(
            f'Cannot convert "{value}" to {enum_class}.\nSupported values: {[e.name for e in enum_class]}'
        )


def parse_bool(value: str | bool | int | None) -> Optional[bool]:
    """Parse a CSV or JSON boolean cell.

    Parameters
    ----------
    value : str | bool | int | None
        Cell content. Empty strings and None are treated as missing.

    Returns
    -------
    Optional[bool]
        The parsed flag, or None when the cell is empty.

    Raises
    ------
    ValueError
        If the cell is not a recognised boolean spelling.
    """
    if value is None or isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text == "":
        return None
    if text in _TRUE:
        return True
    if text in _FALSE:
        return False
    raise ValueError(f'Cannot parse "{value}" as a boolean')
