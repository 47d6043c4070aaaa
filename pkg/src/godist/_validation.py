"""Small input-checking helpers used by the estimators."""

import numbers

from .sgf import GameRecord


def check_records(X):
    """Materialize ``X`` as a list of GameRecords, rejecting anything else."""
    if isinstance(X, GameRecord):
        raise TypeError("expected an iterable of GameRecord, got a single GameRecord")
    try:
        records = list(X)
    except TypeError:
        raise TypeError(f"expected an iterable of GameRecord, got {type(X).__name__}") from None
    for i, g in enumerate(records):
        if not isinstance(g, GameRecord):
            raise TypeError(f"element {i} is {type(g).__name__}, not GameRecord")
    return records


def check_choice(name, value, choices):
    if value not in choices:
        raise ValueError(f"{name} must be one of {choices}, got {value!r}")
    return value


def check_positive_int(name, value, minimum=1):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < minimum:
        raise ValueError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)


def check_real(name, value, low=None, high=None, low_inclusive=True, high_inclusive=True):
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise ValueError(f"{name} must be a real number, got {value!r}")
    value = float(value)
    if value != value:
        raise ValueError(f"{name} must not be NaN")
    if low is not None and (value < low or (value == low and not low_inclusive)):
        raise ValueError(f"{name} must be {'>=' if low_inclusive else '>'} {low}, got {value}")
    if high is not None and (value > high or (value == high and not high_inclusive)):
        raise ValueError(f"{name} must be {'<=' if high_inclusive else '<'} {high}, got {value}")
    return value
