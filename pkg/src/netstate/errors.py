"""Exception hierarchy.

Every error raised by the library derives from :class:`NetstateError`.  The
three intermediate classes map one-to-one onto CLI exit codes.
"""


class NetstateError(Exception):
    exit_code = 1


class ConfigError(NetstateError, ValueError):
    """Configuration could not be parsed or violates a parameter invariant."""

    exit_code = 2


class DataError(NetstateError, ValueError):
    """Input data is malformed or inconsistent."""

    exit_code = 3


class DegeneracyError(NetstateError, ArithmeticError):
    """A numerical quantity needed downstream vanished."""

    exit_code = 4


class InvalidInputError(DataError):
    pass


class InvalidPairError(InvalidInputError):
    pass


class InvalidModeError(InvalidInputError):
    pass


class InvalidRankError(InvalidInputError):
    pass


class InvalidIndexError(InvalidInputError):
    pass


class EmptyBandError(InvalidInputError):
    pass


class GeometryMismatchError(InvalidInputError):
    pass


class ZeroNormError(DegeneracyError):
    pass


class DegenerateCoreError(DegeneracyError):
    pass
