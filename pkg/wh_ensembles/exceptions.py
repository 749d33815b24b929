from enum import IntEnum
from typing import Optional

from wh_ensembles import utils


class EnsembleException(Exception):
    def __init__(self, msg: str, apply_fmt: bool = True) -> None:
        self.msg: str = utils.fmt(msg) if apply_fmt else msg

    def __str__(self) -> str:
        return str(self.msg)


class UnexpectedEnsembleException(EnsembleException):
    def __init__(self, msg: str) -> None:
        super().__init__(f"{msg}\n\nThis is an internal invariant violation, please report it together with the `--debug` output.")


class ArgumentDomainError(EnsembleException):
    """Raised when an argument lies outside the domain of the operation (e.g. negative `s`, `j + alpha < 0`)."""


class DegeneratePolygonError(EnsembleException):
    pass


class DescriptorError(EnsembleException):
    """Raised for malformed window/domain descriptors and unreadable descriptor files."""


class RankDeficiencyError(EnsembleException):
    pass


class ConvergenceError(EnsembleException):
    pass


class RejectionCapExceeded(EnsembleException):
    def __init__(self, point_index: int, proposals: int, accepted_so_far: int) -> None:
        self.point_index = point_index
        self.proposals = proposals
        self.accepted_so_far = accepted_so_far
        super().__init__(
            f"Rejection cap exceeded while drawing point {point_index}: "
            f"{proposals} proposals rejected, {accepted_so_far} point(s) accepted before. "
            "The bounding disk is probably far too large for the kernel.")


class InsufficientSamplesError(EnsembleException):
    pass


class NumericalWarningEscalated(EnsembleException):
    def __init__(self, warning: str) -> None:
        super().__init__(f"Numerical warning escalated to an error (strict mode):\n{warning}")


class AcceptanceFailure(EnsembleException):
    def __init__(self, check: str, detail: Optional[str] = None) -> None:
        self.check = check
        super().__init__(f"Check `{check}` failed" + (f": {detail}" if detail else ""))


class ExitCode(IntEnum):
    SUCCESS = 0
    ENSEMBLE_EXCEPTION = 1
    ARGUMENT_ERROR = 2
    NUMERICAL_WARNING = 3
    ACCEPTANCE_FAILURE = 4
    KEYBOARD_INTERRUPT = 130
