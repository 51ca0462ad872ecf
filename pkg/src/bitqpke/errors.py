"""Exception types shared across the package."""


class BitQPKEError(Exception):
    """Base class for all package errors."""


class DimensionError(BitQPKEError, ValueError):
    """Operands have incompatible lengths or shapes."""


class ParameterError(BitQPKEError, ValueError):
    """A parameter is outside the range an operation accepts."""


class CapacityError(BitQPKEError, ValueError):
    """Requested dense computation exceeds the configured qubit limit."""


class KeyMismatchError(BitQPKEError):
    """Ciphertext does not match key."""

    def __init__(self, detail: str = ""):
        msg = "ciphertext does not match key"
        super().__init__(f"{msg}: {detail}" if detail else msg)


class SingleUseError(BitQPKEError):
    """A public key was fetched for encryption a second time."""


class IssuanceError(BitQPKEError):
    """The private key admits no valid k1 (regenerate the private key)."""


class InconsistentObservations(BitQPKEError):
    """GF(2) observations contradict each other."""


class ConvergenceError(BitQPKEError, RuntimeError):
    """An iterative routine failed to reach its tolerance."""
