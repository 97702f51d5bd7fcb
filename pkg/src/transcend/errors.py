"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class TranscendError(Exception):
    exit_code = 2

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details

    def to_json(self):
        out = {"error": type(self).__name__, "message": str(self), "exit_code": self.exit_code}
        out.update({k: str(v) if not isinstance(v, (int, bool, list, dict)) else v
                    for k, v in self.details.items()})
        return out


class UsageError(TranscendError, ValueError):
    exit_code = 1


class SpecParseError(UsageError):
    pass


class DimensionMismatch(UsageError):
    pass


class PreconditionViolation(UsageError):
    pass


class KindMismatch(UsageError):
    pass


class InsufficientInitialData(TranscendError):
    """Raised with ``index`` = first coefficient the recurrence cannot determine."""


class InconsistentInitialData(TranscendError):
    """Raised with ``index`` = first coefficient equation that fails."""


class SingularPoint(TranscendError):
    pass


class PInIdeal(TranscendError):
    pass


class NoSolution(TranscendError):
    pass


class PrecisionExhausted(TranscendError, ArithmeticError):
    exit_code = 3


class CannotCertify(PrecisionExhausted):
    pass


class TruncationTooSmall(TranscendError):
    exit_code = 3


class TailBoundUnavailable(TranscendError):
    pass
