"""Power-law tail fits and two-sample KS separation between cohorts."""

from dataclasses import dataclass
from itertools import combinations
import math

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .errors import (
    EmptyDistributionError,
    InsufficientTailError,
    InsufficientVariationError,
    InvalidThresholdError,
)
from .histogram import DistanceHistogram, to_distribution


@dataclass(frozen=True)
class PowerLawFit:
    alpha: float
    stderr: float
    x_min: float
    n_tail: int

    def to_dict(self):
        return {"alpha": self.alpha, "stderr": self.stderr, "x_min": self.x_min,
                "n_tail": self.n_tail}

    def contains(self, alpha, n_sigma=3.0):
        return abs(self.alpha - alpha) <= n_sigma * self.stderr


def _check_x_min(x_min):
    try:
        x_min = float(x_min)
    except (TypeError, ValueError):
        raise InvalidThresholdError(f"x_min must be a number, got {x_min!r}") from None
    if not x_min > 0 or math.isinf(x_min):
        raise InvalidThresholdError(f"x_min must be a positive finite number, got {x_min}")
    return x_min


def _mle(n_tail, log_sum, x_min):
    if n_tail < 2:
        raise InsufficientTailError(f"only {n_tail} samples at or above x_min={x_min}; need at least 2")
    if log_sum <= 0:
        raise InsufficientVariationError(f"all {n_tail} tail samples equal x_min={x_min}")
    alpha = 1.0 + n_tail / log_sum
    return PowerLawFit(alpha, (alpha - 1.0) / math.sqrt(n_tail), x_min, int(n_tail))


def fit_power_law_samples(samples, x_min):
    """Continuous MLE ``alpha = 1 + n / sum(ln(x_i / x_min))`` over x_i >= x_min."""
    x_min = _check_x_min(x_min)
    x = np.asarray(samples, dtype=float)
    tail = x[x >= x_min]
    return _mle(tail.size, float(np.sum(np.log(tail / x_min))), x_min)


def fit_power_law(hist, x_min):
    """Fit the tail of a distance histogram.

    Each bin contributes ``count`` samples at distance ``sqrt(d2)``.
    """
    x_min = _check_x_min(x_min)
    n = 0
    log_sum = 0.0
    for d2, c in hist.sorted_bins():
        x = math.sqrt(d2)
        if x >= x_min:
            n += c
            log_sum += c * math.log(x / x_min)
    return _mle(n, log_sum, x_min)


class PowerLawTail(BaseEstimator):
    """Power-law tail exponent by maximum likelihood.

    ``fit`` accepts a DistanceHistogram or a 1-d array of raw distances.
    """

    def __init__(self, x_min=2.0):
        self.x_min = x_min

    def fit(self, X, y=None):
        if isinstance(X, DistanceHistogram):
            fit = fit_power_law(X, self.x_min)
        else:
            x = np.asarray(X, dtype=float)
            if x.ndim != 1:
                raise ValueError(f"expected a 1-d array of distances, got shape {x.shape}")
            fit = fit_power_law_samples(x, self.x_min)
        self.fit_ = fit
        self.alpha_ = fit.alpha
        self.stderr_ = fit.stderr
        self.n_tail_ = fit.n_tail
        return self

    def ccdf(self, x):
        """Fitted ``P(X >= x)`` for x >= x_min."""
        check_is_fitted(self, "fit_")
        x = np.asarray(x, dtype=float)
        return (x / self.fit_.x_min) ** (1.0 - self.alpha_)


@dataclass(frozen=True)
class SeparationReport:
    ks: float
    pair: tuple
    n_a: int
    n_b: int


def ks_statistic(a, b):
    """Largest absolute gap between two step-function CDFs on their joint axis."""
    if a.total_pairs == 0 or len(a.d2) == 0 or b.total_pairs == 0 or len(b.d2) == 0:
        raise EmptyDistributionError("KS statistic needs two non-empty distributions")
    axis = np.union1d(a.d2, b.d2)
    ks = float(np.max(np.abs(a.cdf_at(axis) - b.cdf_at(axis))))
    return SeparationReport(min(max(ks, 0.0), 1.0), (a.group, b.group), a.total_pairs, b.total_pairs)


def compare_cohorts(hists):
    """Pairwise KS over all cohorts, largest separation first."""
    hists = list(hists)
    if len(hists) < 2:
        raise ValueError(f"need at least 2 cohorts to compare, got {len(hists)}")
    dists = [to_distribution(h) for h in hists]
    reports = [ks_statistic(a, b) for a, b in combinations(dists, 2)]
    reports.sort(key=lambda r: -r.ks)
    return reports
