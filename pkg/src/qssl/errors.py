"""Exception hierarchy shared by every qssl module."""


class QsslError(Exception):
    """Base class for all qssl errors."""


class ContractError(QsslError, ValueError):
    """An argument violates a documented precondition (shape, range, index)."""


class ParseError(QsslError):
    """A dataset file could not be parsed.

    ``line`` is the 1-based line number of the offending row when known.
    """

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SamplingError(QsslError):
    """Raised when a distribution to sample from has no mass."""


class ConfigError(QsslError):
    """Experiment configuration is invalid. ``problems`` lists every violation."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))
