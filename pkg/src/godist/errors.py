"""Exception hierarchy shared by every godist module."""


class GoDistError(Exception):
    """Base class for all errors raised by godist."""


class MalformedCoordinateError(GoDistError, ValueError):
    def __init__(self, code, char=None):
        self.code = code
        self.char = char
        if char is None:
            msg = f"malformed coordinate {code!r}"
        else:
            msg = f"malformed coordinate {code!r}: character {char!r} is outside the board alphabet"
        super().__init__(msg)


class SGFError(GoDistError):
    """Anything that prevents an SGF game tree from becoming a GameRecord."""


class SGFParseError(SGFError, ValueError):
    def __init__(self, message, offset=None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at byte {offset})"
        super().__init__(message)


class UnsupportedGameError(SGFError):
    """GM property names a game other than Go."""


class UnsupportedBoardSizeError(SGFError):
    """Board is not 19x19."""


class UngroupedError(GoDistError, ValueError):
    """Record cannot be assigned to a date-based group."""


class MergeError(GoDistError, ValueError):
    pass


class EmptyDistributionError(GoDistError, ValueError):
    pass


class SamplingError(GoDistError, ValueError):
    pass


class InvalidThresholdError(GoDistError, ValueError):
    pass


class InsufficientTailError(GoDistError, ValueError):
    pass


class InsufficientVariationError(InsufficientTailError):
    """Every tail sample sits exactly at x_min, so the MLE diverges."""
