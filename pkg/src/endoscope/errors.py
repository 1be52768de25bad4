"""Exception hierarchy shared by the engine modules and the command-line driver."""


class EndoscopeError(Exception):
    """Base class; ``code`` is the machine-readable tag used in failure records."""

    code = "ENGINE_ERROR"


class PrecisionExhausted(EndoscopeError):
    code = "PRECISION_EXHAUSTED"


class Infeasible(EndoscopeError):
    code = "INFEASIBLE"


class InvalidExtension(EndoscopeError):
    code = "INVALID_SUBEXTENSION"


class RankDeficient(EndoscopeError):
    code = "RANK_DEFICIENT"


class BoxUnstable(EndoscopeError):
    code = "BOX_UNSTABLE"


class InfeasibleGrid(EndoscopeError):
    code = "INFEASIBLE_GRID"


class ConfigParseError(EndoscopeError):
    code = "CONFIG_PARSE"


class ParseError(ConfigParseError):
    code = "PARSE_ERROR"

    def __init__(self, message, position=None):
        super().__init__(message if position is None else f"{message} (at position {position})")
        self.position = position


class DuplicatePlace(ConfigParseError):
    code = "DUPLICATE_PLACE"


class GridExceeded(EndoscopeError):
    code = "GRID_EXCEEDED"
