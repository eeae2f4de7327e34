"""Exception hierarchy shared across the package.

Each error carries the process exit code used by the command line front end.
"""


class OptrelError(Exception):
    exit_code = 1


class PlpSyntaxError(OptrelError):
    """Source could not be parsed or failed a static validity check."""

    exit_code = 2

    def __init__(self, message, line=None, column=None, source_name=None):
        self.line = line
        self.column = column
        self.source_name = source_name
        where = ""
        if source_name is not None:
            where += f"{source_name}:"
        if line is not None:
            where += f"{line}:"
            if column is not None:
                where += f"{column}:"
        super().__init__(f"{where} {message}" if where else message)


class GroundingError(OptrelError):
    exit_code = 3


class InconsistentEvidenceError(OptrelError):
    exit_code = 4


class WorldCapExceededError(OptrelError):
    exit_code = 5


class NoInterpretationError(OptrelError):
    """Every candidate interpretation was eliminated; the search is abandoned."""

    exit_code = 6
