"""Exception types shared across the package."""

from __future__ import annotations


class CsvParseError(ValueError):
    """A CSV row could not be parsed; the message names the offending row."""


class InvalidDatasetError(ValueError):
    """The data cannot form a usable labeled dataset (e.g. fewer than two classes)."""


class CapacityLimitError(RuntimeError):
    """The labeling space C**holdout_size is too large to enumerate.

    Carries the offending sizes so callers can report actionable guidance.
    """

    def __init__(self, num_classes: int, holdout_size: int, limit: int):
        self.num_classes = num_classes
        self.holdout_size = holdout_size
        self.limit = limit
        super().__init__(
            f"labeling space {num_classes}**{holdout_size} = "
            f"{num_classes**holdout_size} exceeds the enumerable limit {limit}; "
            "reduce the holdout size or the number of classes"
        )


class FitNumericalError(ArithmeticError):
    """A numerical fitting routine produced non-finite intermediates."""

    def __init__(self, message: str, iterations: int):
        self.iterations = iterations
        super().__init__(f"{message} (after {iterations} iterations)")
