"""Fixed-size game resampling and per-bin moment bands.

Iteration ``i`` draws its sample from its own generator (see ``rng``), so
iterations can be computed in any order or in parallel. Moments are always
reduced in iteration order, which keeps the floating-point result identical
whatever the schedule.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from . import _validation
from .board import distinct_squared_distances
from .errors import SamplingError
from .histogram import count_matrix
from .rng import check_seed, stream_rng
from .sgf import ALL


@dataclass(frozen=True)
class ResamplePlan:
    k: int = 55
    iterations: int = 10_000
    seed: int = 0
    replacement: bool = False

    def __post_init__(self):
        _validation.check_positive_int("k", self.k)
        _validation.check_positive_int("iterations", self.iterations)
        check_seed(self.seed)

    def check_corpus(self, n):
        if n < 1:
            raise SamplingError("cannot resample an empty corpus")
        if not self.replacement and self.k > n:
            raise SamplingError(f"sample size k={self.k} exceeds corpus size {n} (sampling without replacement)")

    def to_dict(self):
        return {"k": self.k, "iterations": self.iterations, "seed": self.seed,
                "replacement": self.replacement}


def sample_indices(n, k, rng, replacement=False):
    """Indices of a uniform sample of ``k`` out of ``n``.

    Without replacement this is a partial Fisher-Yates shuffle over
    ``range(n)``; only the touched slots are stored.
    """
    if replacement:
        return rng.integers(0, n, size=k)
    if k > n:
        raise SamplingError(f"sample size k={k} exceeds corpus size {n}")
    swaps = rng.integers(np.arange(k), n).tolist()
    moved = {}
    out = np.empty(k, dtype=np.int64)
    for j, s in enumerate(swaps):
        out[j] = moved.get(s, s)
        moved[s] = moved.get(j, j)
    return out


def sample_games(corpus, k, rng, replacement=False):
    return [corpus[i] for i in sample_indices(len(corpus), k, rng, replacement)]


class MomentAccumulator:
    """Streaming per-bin mean and population variance (Welford)."""

    def __init__(self, size):
        self.n = 0
        self.mean = np.zeros(size)
        self.m2 = np.zeros(size)

    def update(self, x):
        self.n += 1
        delta = x - self.mean
        self.mean += delta / self.n
        self.m2 += delta * (x - self.mean)

    def merge(self, other):
        """Combine with an accumulator over disjoint observations."""
        out = MomentAccumulator(self.mean.size)
        n = self.n + other.n
        if n == 0:
            return out
        delta = other.mean - self.mean
        out.n = n
        out.mean = self.mean + delta * (other.n / n)
        out.m2 = self.m2 + other.m2 + delta * delta * (self.n * other.n / n)
        return out

    @property
    def var(self):
        if self.n == 0:
            return np.full_like(self.mean, np.nan)
        return np.maximum(self.m2 / self.n, 0.0)


@dataclass
class BootstrapBands:
    d2: np.ndarray
    mean_ccdf: np.ndarray
    var_ccdf: np.ndarray
    mean_cdf: np.ndarray
    var_cdf: np.ndarray
    mean_pdf: np.ndarray
    var_pdf: np.ndarray
    plan: ResamplePlan
    group: object = ALL
    empty_samples: int = 0

    @property
    def distance(self):
        return np.sqrt(self.d2)

    @property
    def std_ccdf(self):
        return np.sqrt(self.var_ccdf)

    @property
    def std_cdf(self):
        return np.sqrt(self.var_cdf)


class _Moments:
    def __init__(self, size):
        self.pdf = MomentAccumulator(size)
        self.cdf = MomentAccumulator(size)
        self.ccdf = MomentAccumulator(size)
        self.empty = 0

    def merge(self, other):
        out = _Moments(0)
        out.pdf = self.pdf.merge(other.pdf)
        out.cdf = self.cdf.merge(other.cdf)
        out.ccdf = self.ccdf.merge(other.ccdf)
        out.empty = self.empty + other.empty
        return out


def _union_axis(counts):
    occupied = counts.sum(axis=0) > 0
    axis = np.array(distinct_squared_distances(), dtype=np.int64)
    return axis[occupied], counts[:, occupied]


def _iteration_values(counts, plan, i):
    """pdf, cdf, ccdf of iteration ``i``'s sample on the union axis."""
    rng = stream_rng(plan.seed, i)
    idx = sample_indices(counts.shape[0], plan.k, rng, plan.replacement)
    c = counts[idx].sum(axis=0)
    total = c.sum()
    if total == 0:
        zeros = np.zeros(c.size)
        ccdf = zeros.copy()
        ccdf[:1] = 1.0
        return zeros, zeros, ccdf, True
    cum = np.cumsum(c)
    return c / total, cum / total, (total - (cum - c)) / total, False


def _moments(counts, plan, start, stop, n_jobs=1, chunk=512):
    acc = _Moments(counts.shape[1])

    def block(lo):
        return [_iteration_values(counts, plan, i) for i in range(lo, min(lo + chunk, stop))]

    starts = range(start, stop, chunk)
    if n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            blocks = pool.map(block, starts)
            _reduce(acc, blocks)
    else:
        _reduce(acc, map(block, starts))
    return acc


def _reduce(acc, blocks):
    for values in blocks:
        for pdf, cdf, ccdf, empty in values:
            acc.pdf.update(pdf)
            acc.cdf.update(cdf)
            acc.ccdf.update(ccdf)
            acc.empty += empty


def _as_counts(corpus):
    if isinstance(corpus, np.ndarray):
        if corpus.ndim != 2 or corpus.shape[1] != len(distinct_squared_distances()):
            raise ValueError("count matrix must have shape (n_games, n_canonical_bins)")
        return corpus
    return count_matrix(_validation.check_records(corpus))


def _bands(d2, acc, plan, group):
    return BootstrapBands(
        d2=d2,
        mean_ccdf=acc.ccdf.mean.copy(), var_ccdf=acc.ccdf.var,
        mean_cdf=acc.cdf.mean.copy(), var_cdf=acc.cdf.var,
        mean_pdf=acc.pdf.mean.copy(), var_pdf=acc.pdf.var,
        plan=plan, group=group, empty_samples=acc.empty,
    )


def bootstrap(corpus, plan, group=ALL, n_jobs=1, iteration_range=None):
    """Resample ``plan.k`` games ``plan.iterations`` times.

    ``corpus`` is a sequence of GameRecords in scan order, or the matching
    per-game count matrix from ``count_matrix``. Cumulatives are evaluated on
    the union of the bins occupied anywhere in the corpus. ``iteration_range``
    restricts the run to ``range(*iteration_range)`` of the plan's streams.
    """
    counts = _as_counts(corpus)
    plan.check_corpus(counts.shape[0])
    d2, counts = _union_axis(counts)
    start, stop = iteration_range or (0, plan.iterations)
    acc = _moments(counts, plan, start, stop, n_jobs=n_jobs)
    return _bands(d2, acc, plan, group)


def bootstrap_moments(corpus, plan, start, stop):
    """Raw moment accumulators for iterations ``[start, stop)``."""
    counts = _as_counts(corpus)
    plan.check_corpus(counts.shape[0])
    d2, counts = _union_axis(counts)
    return d2, _moments(counts, plan, start, stop)


def pooled_bands(d2, parts, plan, group=ALL):
    """Bands from accumulators of disjoint iteration ranges, merged in order."""
    acc = parts[0]
    for p in parts[1:]:
        acc = acc.merge(p)
    return _bands(d2, acc, plan, group)


class CohortBootstrap(BaseEstimator):
    """Mean and variance of cumulative distance distributions over random
    fixed-size game samples of one cohort.

    Attributes
    ----------
    bands_ : BootstrapBands
    reference_ : tuple of (pdf, cdf, ccdf) arrays
        The full-corpus distribution on the same union axis as ``bands_``.
    """

    def __init__(self, sample_games=55, iterations=10_000, seed=0, replacement=False, n_jobs=1):
        self.sample_games = sample_games
        self.iterations = iterations
        self.seed = seed
        self.replacement = replacement
        self.n_jobs = n_jobs

    def fit(self, X, y=None):
        _validation.check_positive_int("n_jobs", self.n_jobs)
        plan = ResamplePlan(self.sample_games, self.iterations, self.seed, bool(self.replacement))
        counts = _as_counts(X)
        self.bands_ = bootstrap(counts, plan, n_jobs=self.n_jobs)
        total = counts.sum(axis=0)
        total = total[total > 0]
        n = total.sum()
        if n:
            cum = np.cumsum(total)
            self.reference_ = (total / n, cum / n, (n - (cum - total)) / n)
        else:
            self.reference_ = None
        self.n_games_ = counts.shape[0]
        return self

    def coverage(self, n_sigma=3.0):
        """Fraction of bins whose mean CCDF lies within ``n_sigma`` standard
        deviations of the full-corpus CCDF."""
        check_is_fitted(self, "bands_")
        ref = self.reference_[2]
        ok = np.abs(self.bands_.mean_ccdf - ref) <= n_sigma * self.bands_.std_ccdf
        return float(ok.mean())
