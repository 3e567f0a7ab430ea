"""Exception hierarchy shared by the algebra, the solvers and the CLI.

Every exception carries the process exit code the CLI maps it to, the same way
the HTTP layer of a service maps domain errors onto status codes.
"""

from typing import Any

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_NOT_KAHLERIAN = 3
EXIT_NOT_PARALLEL = 4
EXIT_INSUFFICIENT_ORDER = 5


class WeilforgeError(ValueError):
    exit_code = EXIT_VERIFY_FAILED

    def __init__(self, message: str, *, details: dict[str, Any] | None = None):
        super().__init__(message)
        self.details = details or {}


class VerificationError(WeilforgeError):
    exit_code = EXIT_VERIFY_FAILED


class JetFileError(WeilforgeError):
    exit_code = EXIT_USAGE


class DegenerateMetricError(WeilforgeError):
    exit_code = EXIT_USAGE


class NotKahlerianError(WeilforgeError):
    exit_code = EXIT_NOT_KAHLERIAN


class FormNotParallelError(WeilforgeError):
    exit_code = EXIT_NOT_PARALLEL


class InsufficientOrderError(WeilforgeError):
    exit_code = EXIT_INSUFFICIENT_ORDER


class FlatnessObstructionError(WeilforgeError):
    pass


class HomotopyDegenerateError(WeilforgeError):
    pass


class NotWeaklyHodgeError(WeilforgeError):
    pass


class MissingGeneratorImageError(WeilforgeError):
    pass


class NonUniqueSolutionError(WeilforgeError):
    pass
