class FusionKitError(Exception):
    """Base class for all errors raised by fusionkit."""

    exit_code = 1
    kind = "error"


class InputError(FusionKitError, ValueError):
    """Malformed or inconsistent input."""

    exit_code = 1
    kind = "input"


class CapacityError(FusionKitError):
    """A configured size cap would be exceeded."""

    exit_code = 2
    kind = "capacity"


class InternalError(FusionKitError):
    """A computation reached a state that signals a bug or a broken hypothesis."""

    exit_code = 3
    kind = "internal"
