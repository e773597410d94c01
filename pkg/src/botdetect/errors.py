"""Exception hierarchy. The CLI maps the three base classes to exit codes."""


class BotDetectError(Exception):
    exit_code = 1


class ConfigError(BotDetectError):
    """Invalid configuration or incompatible option combination."""

    exit_code = 2


class DataError(BotDetectError):
    """Problem with input data: files, schemas, degenerate class structure."""

    exit_code = 3


class TrainingError(BotDetectError):
    """Training could not produce a model."""

    exit_code = 4


class EmptyInput(DataError):
    pass


class EmptyClass(DataError):
    pass


class SingleClass(DataError):
    pass


class HeaderMismatch(DataError):
    pass


class ExcessiveBadRows(DataError):
    pass


class ParseError(DataError):
    pass


class DimensionMismatch(DataError):
    pass


class SchemaMismatch(DataError):
    pass


class InsufficientRows(DataError):
    pass


class DegenerateMinority(DataError):
    pass


class DegenerateData(DataError):
    pass
