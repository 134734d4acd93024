from enum import Enum
from typing import Optional


class CobhamError(Exception):
    """Base class for every domain failure raised by cobhamkit."""


class DfaoDefect(Enum):
    BAD_HEADER = "bad_header"
    DUPLICATE_TRANSITION = "duplicate_transition"
    MISSING_TRANSITION = "missing_transition"
    STATE_OUT_OF_RANGE = "state_out_of_range"
    DIGIT_OUT_OF_ALPHABET = "digit_out_of_alphabet"
    LEADING_ZERO_UNSTABLE = "leading_zero_unstable"
    BAD_OUTPUT_COUNT = "bad_output_count"
    BAD_OUTPUT_TOKEN = "bad_output_token"
    NONCANONICAL_DIGITS = "noncanonical_digits"


class DfaoValidationError(CobhamError):
    def __init__(self, defect: DfaoDefect, message: str, line_number: Optional[int] = None):
        self.defect = defect
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class InvalidDigitError(CobhamError):
    def __init__(self, position: int, digit: int):
        self.position = position
        self.digit = digit
        super().__init__(f"digit {digit} at position {position} is not in the automaton's alphabet")


class InvalidArgumentError(CobhamError, ValueError):
    pass


class ResourceLimitError(CobhamError):
    def __init__(self, what: str, cap: int):
        self.what = what
        self.cap = cap
        super().__init__(f"{what} exceeded the cap of {cap}")


class WindowOverflowError(CobhamError):
    pass


class MergePreconditionError(CobhamError):
    def __init__(self, intersection_size: int, required: int):
        self.intersection_size = intersection_size
        self.required = required
        super().__init__(
            f"claims overlap in {intersection_size} points but p+q = {required} are required"
        )


class GlueChainError(CobhamError):
    def __init__(self, index: int, cause: MergePreconditionError):
        self.index = index
        self.cause = cause
        super().__init__(f"merge of claim {index} into the chain failed: {cause}")


class DependentBasesError(CobhamError):
    def __init__(self, a: int, b: int):
        self.a = a
        self.b = b
        super().__init__(f"bases {a} and {b} are multiplicatively dependent")


class SequenceMismatchError(CobhamError):
    def __init__(self, index: int, output_a: str, output_b: str):
        self.index = index
        self.output_a = output_a
        self.output_b = output_b
        super().__init__(
            f"automata disagree at index {index}: {output_a!r} versus {output_b!r}"
        )


class CertificateError(CobhamError):
    pass


class CertificateFormatError(CobhamError):
    pass


class ConfigError(CobhamError):
    pass
