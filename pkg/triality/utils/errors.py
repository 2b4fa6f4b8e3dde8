"""
Exception hierarchy for the triality toolkit

Verification predicates report mathematical failures through their result
objects; these exceptions signal invalid input, exceeded caps and bugs.
"""

from typing import Optional


class TrialityError(ValueError):
    """Base class for every error raised by the toolkit"""


class FormatError(TrialityError):
    """Malformed input file"""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NotLatinSquareError(TrialityError):
    def __init__(self, kind: str, index: int, value: int):
        self.kind = kind
        self.index = index
        self.value = value
        super().__init__(f"not a Latin square: {kind} {index + 1} repeats entry {value + 1}")


class NoUnitError(TrialityError):
    pass


class NotAGroupError(TrialityError):
    pass


class NotAutomorphismError(TrialityError):
    pass


class DimensionMismatchError(TrialityError):
    pass


class CapExceededError(TrialityError):
    pass


class UnknownCheckError(TrialityError):
    pass


class UnsupportedInputError(TrialityError):
    pass


class VerificationError(TrialityError):
    """Two computations that must agree did not; indicates a bug, not bad input"""
