"""Shared exception types.

Every error that library code can raise on bad input or on a broken internal
assumption lives here, so call sites can catch them without import cycles.
"""


class QgrouError(Exception):
    """Base class for all library errors."""


class ConfigError(QgrouError):
    """Malformed CLI or suite configuration."""


class InvalidEll(QgrouError):
    """The requested root-of-unity order is excluded for this datum."""


class InvalidOrientation(QgrouError):
    """A Dynkin-graph edge was left unoriented or oriented twice."""


class PoleAtEpsilon(QgrouError):
    """A reduced denominator vanishes at the chosen root of unity."""


class IntegralityError(QgrouError):
    """A scalar left the allowed localized coefficient ring."""


class ImpurityError(QgrouError):
    """A root-vector expansion kept mixed E/F letters that should cancel."""


class NotInSpan(QgrouError):
    """Coordinates were requested in a lattice the element does not live in."""


class HalfMismatch(QgrouError):
    """A pairing argument is not in the required triangular half."""


class SingularBlock(QgrouError):
    """A diagonal pairing block that must be invertible is not."""


class NotLusztigForm(QgrouError):
    """Divided-power coordinates are not integral, so the element is outside
    the divided-power integral form."""


class NotInZFr(QgrouError):
    """The element is not expressed over the Frobenius-central generators."""


class NotDivisible(QgrouError):
    """An exact division by (v - epsilon) left a remainder."""


class NotZeroWeight(QgrouError):
    """A weight-zero element was required."""


class NotCartan(QgrouError):
    """A purely Cartan (no E/F letters) element was required."""


class CapExceeded(QgrouError):
    """A height or dimension cap was exceeded."""


class BlockSolveFailure(QgrouError):
    """A linear solve against pairing blocks failed; the blocks should be
    perfect, so this signals an internal inconsistency."""
