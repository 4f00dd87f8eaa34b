"""Exception taxonomy shared by the whole toolkit.

Every operation distinguishes bad inputs (validation), mixed algebraic
contexts (domain), unmet mathematical hypotheses (precondition) and
computations cut off by a configured bound (truncation).
"""


class ToolkitError(Exception):
    pass


class DomainMismatchError(ToolkitError):
    """Operands live over different fields or rings."""


class ValidationError(ToolkitError):
    """Structured input fails its declared invariants."""


class PreconditionError(ToolkitError):
    """A mathematical hypothesis of the operation does not hold."""


class TruncationError(ToolkitError):
    """A bounded-degree computation could not certify its answer."""
