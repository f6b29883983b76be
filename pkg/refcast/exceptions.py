"""Errors and warnings raised by the refcast toolbox.

Every error subclasses ``ValueError`` through ``RefcastError``, so callers that
already guard toolbox calls with ``except ValueError`` keep working. The two
top-level branches map to the command-line exit codes:

- **InputError:** the input could not be read or parsed (exit code 2).

- **ValidationError:** the input was read but a model or validation rule
  rejected it (exit code 3).
"""

from typing import Sequence


class RefcastError(ValueError):
    """Base class for all refcast errors."""


# --------------------------- Input errors --------------------------- #
class InputError(RefcastError):
    """Unreadable or malformed input."""


class IngestError(InputError):
    """A CSV source could not be ingested.

    Parameters
    ----------
    message : str
        Human readable reason.
    diagnostics : Sequence, optional
        Row level diagnostics collected before the failure.
    """

    def __init__(self, message: str, diagnostics: Sequence = ()):
        super().__init__(message)
        self.diagnostics = list(diagnostics)


class EmptyReferenceClassError(IngestError):
    """No usable record was found."""

    def __init__(self, diagnostics: Sequence = ()):
        super().__init__("empty reference class", diagnostics)


class FixtureError(InputError):
    """A bundled fixture is missing or invalid."""


# --------------------------- Validation errors --------------------------- #
class ValidationError(RefcastError):
    """Input was read but failed a model or validation rule."""


class MissingDeflatorYearError(ValidationError):
    """The deflator series has no value for a required year."""

    def __init__(self, year: int):
        super().__init__(f"deflator missing for year {year}")
        self.year = year


class UndefinedRatioError(ValidationError):
    """A ratio was requested with a zero or absent denominator."""


class TransformationDomainError(ValidationError):
    """A value lies outside the domain of a transformation."""


class PredictionDomainError(ValidationError):
    """A linear predictor cannot be back-transformed."""

    def __init__(self, detail: str = ""):
        message = "prediction outside response domain"
        super().__init__(f"{message}: {detail}" if detail else message)


class MissingTermError(ValidationError):
    """A model term could not be resolved from the supplied values."""

    def __init__(self, term: str):
        super().__init__(f"missing term: {term}")
        self.term = term


class SingularDesignError(ValidationError):
    """The fixed-effects design matrix is rank deficient."""

    def __init__(self, columns: Sequence[str]):
        super().__init__(f"singular design, collinear columns: {', '.join(columns)}")
        self.columns = list(columns)


class ConvergenceError(ValidationError):
    """The variance-ratio search did not converge."""

    def __init__(self, message: str, trace: Sequence = ()):
        super().__init__(message)
        self.trace = list(trace)


class ModelSpecError(ValidationError):
    """A model specification is internally inconsistent."""


# --------------------------- Warnings --------------------------- #
class RefcastWarning(UserWarning):
    """Base class for data-quality warnings."""


class SmallSampleWarning(RefcastWarning):
    """A quantile was read from a class representing fewer than 20 projects."""


class SingleGroupWarning(RefcastWarning):
    """A mixed model whose groups cannot identify a group variance was fitted as ordinary least squares."""


class InterceptOnlyWarning(RefcastWarning):
    """Stepwise selection eliminated every candidate term."""
