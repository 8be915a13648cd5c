"""Exception hierarchy.

Every domain error raised by this package derives from PolyharmError, so the
CLI can map them to exit code 1 and report the concrete class name.
"""

from __future__ import annotations


class PolyharmError(Exception):
    """Base class for all domain errors."""

    @property
    def error_name(self) -> str:
        return type(self).__name__


# --- algebra validation ---

class NonPositiveEigenvalue(PolyharmError):
    pass


class NonIncreasingEigenvalues(PolyharmError):
    pass


class GradingViolation(PolyharmError):
    pass


class JacobiViolation(PolyharmError):
    pass


class IndexOutOfRange(PolyharmError):
    pass


class DuplicateBracket(PolyharmError):
    """Both orientations (or a repeat) of the same bracket pair were supplied."""


class UnknownCatalogName(PolyharmError):
    pass


class BadParams(PolyharmError):
    pass


# --- polynomial / expression layer ---

class MissingAssignment(PolyharmError):
    """An evaluation point does not assign a variable that occurs in the polynomial."""


class ParseError(PolyharmError):
    """Syntax error in an expression or seed description.

    `position` is a 0-based offset into the input text when known.
    """

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


# --- operator / tension layer ---

class WrongLayer(PolyharmError):
    """A fast-path operator was applied to a function outside its layer class."""


class DepthExceeded(PolyharmError):
    pass


class InternalClosureError(PolyharmError):
    """The image of a t-independent function under the operator left the expected
    span of t^(2*lambda_k) components.  Indicates an operator bug, never user error."""


class UnsupportedSpan(PolyharmError):
    """A radial function falls outside the admissible power/log span."""


class KindMismatch(PolyharmError):
    pass


# --- construction / certification layer ---

class Resonance(PolyharmError):
    """2*Lambda^k = n on a branch with a nonzero node: the log-family coefficient
    is undefined there.  Callers should fall back to the t^n-family."""

    def __init__(self, alpha: tuple[int, ...], k: int):
        super().__init__(
            f"branch {alpha}: 2*Lambda^{k} equals the homogeneous dimension; "
            "the log-family function is undefined (use the t^n family)"
        )
        self.alpha = alpha
        self.k = k


class DependentNodes(PolyharmError):
    """Formal verification needed linear independence of the tree nodes but the
    actual node functions are linearly dependent."""


class ZeroCombination(PolyharmError):
    pass
