"""
Error Module for t-Improper Colouring

Exception hierarchy shared by the library and the command-line surface.
Validation errors stay ValueError-compatible so callers that only know about
ValueError keep working.
"""


class ColouringToolsError(Exception):
    """Root of every error raised on purpose by this package."""

    exit_code = 1


class ValidationError(ColouringToolsError, ValueError):
    """Bad arguments or inputs rejected before any computation."""

    exit_code = 2


class GraphFormatError(ValidationError):
    """Malformed graph file content."""

    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class ConfigError(ValidationError):
    """
    Experiment configuration failed validation.

    Parameters:
    problems: list of (json_path, message) tuples
    """

    def __init__(self, problems):
        self.problems = list(problems)
        lines = [f"{path}: {message}" for path, message in self.problems]
        super().__init__("invalid configuration:\n  " + "\n  ".join(lines))


class CapExceededError(ColouringToolsError):
    """An exact solver was asked for an instance above its size cap."""

    exit_code = 4


class ResultsIOError(ColouringToolsError, OSError):
    """Reading or writing an output file failed."""

    exit_code = 3


def exit_code_for(error):
    """
    Map an exception to the process exit code used by the CLI

    Parameters:
    error: exception instance

    Returns:
    int: exit code (2 validation, 3 I/O, 4 cap exceeded, 1 otherwise)
    """
    if isinstance(error, ColouringToolsError):
        return error.exit_code
    if isinstance(error, OSError):
        return 3
    if isinstance(error, ValueError):
        return 2
    return 1
