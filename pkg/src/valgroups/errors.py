"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class ValuedGroupError(Exception):
    """Base class for every error raised by this package."""


class MalformedElementError(ValuedGroupError):
    pass


class InvalidSubgroupError(ValuedGroupError):
    pass


class BudgetError(ValuedGroupError):
    """An enumeration bound was exceeded.

    ``partial`` carries whatever was produced before the bound was hit.
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class AxiomViolation(ValuedGroupError):
    """A table failed one of the value/semivalue/modulus axioms.

    ``axiom`` names the failed condition (e.g. ``"V3"``) and ``witness``
    holds the offending element(s).
    """

    def __init__(self, axiom: str, witness, message: str | None = None):
        self.axiom = axiom
        self.witness = witness
        super().__init__(message or f"{axiom} violated at {witness!r}")


class AdmissibilityError(ValuedGroupError):
    """A Katetov map cannot be realized in the requested class."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class PreconditionError(ValuedGroupError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class PostconditionError(ValuedGroupError):
    """Internal consistency check failed; indicates a bug, not bad input."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class SchemaError(ValuedGroupError):
    """Malformed JSON input; ``path`` locates the offending node."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")
