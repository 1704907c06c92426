"""Exception types for homcx.

Library code raises these; only the command line turns them into exit codes.
"""

from typing import Optional


class HomcxError(Exception):
    """Base class for every error raised by homcx."""

    exit_code = 4


class ParseError(HomcxError, ValueError):
    """Malformed input: interchange documents, permutations, vertex lists."""

    exit_code = 1


class HypothesisFailure(HomcxError):
    """An operation's precondition does not hold for the given input.

    ``code`` is a short machine-readable tag (e.g. ``"tau_trivial"``).
    """

    exit_code = 2

    def __init__(self, message: str, code: str = "hypothesis"):
        super().__init__(message)
        self.code = code


class DegenerateMapError(HypothesisFailure):
    """A vertex map is not simplicial or not injective on some simplex."""

    def __init__(self, message: str):
        super().__init__(message, code="degenerate_map")


class NotAdjacentError(HypothesisFailure):
    """Two simplices share no codimension-one face and are not equal."""

    def __init__(self, message: str):
        super().__init__(message, code="not_adjacent")


class NotPureError(HypothesisFailure):
    """A search that needs a pure complex was handed a non-pure one."""

    def __init__(self, message: str):
        super().__init__(message, code="not_pure")


class FoldError(HypothesisFailure):
    """The fold condition v -> u fails."""

    def __init__(self, message: str):
        super().__init__(message, code="fold_condition")


class PhiCertificationError(HypothesisFailure):
    """A (complex, involution, simplex) triple is not a Phi_d certificate."""


class ResourceCapExceeded(HomcxError):
    """An enumeration hit its cap (or was cancelled) before finishing."""

    exit_code = 3

    def __init__(self, message: str, reached: int = 0, cap: Optional[int] = None):
        super().__init__(message)
        self.reached = reached
        self.cap = cap


class InvariantViolation(HomcxError):
    """An internal consistency check failed (sign bug, bad chain map, ...)."""

    exit_code = 4
