"""
This module contains the:

- **TransformationEnum:** The main end user enumeration of variable transformations.

Model specifications refer to transformations by enum or by case-insensitive
name, e.g. ``"natural_log"`` or ``TransformationEnum.RECIPROCAL``.
"""

from enum import Enum

from .transformations import (
    CbrtTransformation,
    FourthRootTransformation,
    IdentityTransformation,
    NaturalLogTransformation,
    ReciprocalTransformation,
    SqrtTransformation,
)


class TransformationEnum(Enum):
    """Enumeration of available Transformation types."""

    IDENTITY = IdentityTransformation()
    RECIPROCAL = ReciprocalTransformation()
    NATURAL_LOG = NaturalLogTransformation()
    SQRT = SqrtTransformation()
    CBRT = CbrtTransformation()
    FOURTH_ROOT = FourthRootTransformation()
