"""Exception types shared across the package."""


class ParameterError(ValueError):
    """Invalid system parameters or violated operation preconditions."""


class SingularSystemError(ValueError):
    """A linear system was singular or inconsistent."""


class FormatError(ValueError):
    """An encoded file or report could not be parsed."""


class VerificationError(RuntimeError):
    """Decoded or repaired data failed a consistency check."""
