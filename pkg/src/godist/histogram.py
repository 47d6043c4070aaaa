"""Consecutive-placement distance histograms and their distributions.

A histogram holds exact integer counts keyed by squared distance. Histograms
for the same group merge by addition, so shards of a corpus can be counted
independently and combined without changing a single count.
"""

from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import _validation
from .board import bin_index, distinct_squared_distances
from .errors import EmptyDistributionError, MergeError, UngroupedError
from .sgf import ALL, GroupKey, group_key_for


def consecutive_pairs(moves):
    """Squared distances between each pair of adjacent placements.

    Colour is ignored. A pass produces no point, so it breaks the chain on
    both sides.
    """
    out = []
    prev = None
    for m in moves:
        p = m[1]
        if p is None:
            prev = None
            continue
        if prev is not None:
            dc = p[0] - prev[0]
            dr = p[1] - prev[1]
            out.append(dc * dc + dr * dr)
        prev = p
    return out


@dataclass
class DistanceHistogram:
    group: GroupKey = ALL
    counts: dict = field(default_factory=dict)
    total_pairs: int = 0
    game_count: int = 0
    # Zero-distance pairs (a stone placed on an occupied point) are not
    # binned; they only show up here.
    quarantined: int = 0

    def copy(self):
        return DistanceHistogram(self.group, dict(self.counts), self.total_pairs,
                                 self.game_count, self.quarantined)

    def add_game(self, game):
        """In-place accumulate; only for a histogram owned by one writer."""
        counts = self.counts
        n = 0
        for d2 in consecutive_pairs(game.moves):
            if d2 == 0:
                self.quarantined += 1
                continue
            counts[d2] = counts.get(d2, 0) + 1
            n += 1
        self.total_pairs += n
        self.game_count += 1
        return self

    def sorted_bins(self):
        return sorted((d2, c) for d2, c in self.counts.items() if c)

    def to_dict(self):
        d = {
            "group": self.group.to_dict(),
            "game_count": self.game_count,
            "total_pairs": self.total_pairs,
            "bins": [{"d2": d2, "count": c} for d2, c in self.sorted_bins()],
        }
        if self.quarantined:
            d["quarantined"] = self.quarantined
        return d

    @classmethod
    def from_dict(cls, d):
        axis = bin_index()
        counts = {}
        for b in d["bins"]:
            d2, c = int(b["d2"]), int(b["count"])
            if d2 not in axis:
                raise ValueError(f"d2={d2} is not a reachable squared distance")
            if c < 0:
                raise ValueError(f"negative count for d2={d2}")
            if c:
                counts[d2] = counts.get(d2, 0) + c
        hist = cls(
            group=GroupKey.from_dict(d["group"]),
            counts=counts,
            total_pairs=int(d["total_pairs"]),
            game_count=int(d["game_count"]),
            quarantined=int(d.get("quarantined", 0)),
        )
        if hist.total_pairs != sum(counts.values()):
            raise ValueError(
                f"total_pairs {hist.total_pairs} does not match bin counts {sum(counts.values())}"
            )
        return hist

    def __eq__(self, other):
        if not isinstance(other, DistanceHistogram):
            return NotImplemented
        return (self.group == other.group and self.sorted_bins() == other.sorted_bins()
                and self.total_pairs == other.total_pairs
                and self.game_count == other.game_count
                and self.quarantined == other.quarantined)


def accumulate(hist, game):
    return hist.copy().add_game(game)


def merge(a, b):
    if a.group != b.group:
        raise MergeError(f"cannot merge histograms of groups {a.group.label!r} and {b.group.label!r}")
    counts = dict(a.counts)
    for d2, c in b.counts.items():
        counts[d2] = counts.get(d2, 0) + c
    return DistanceHistogram(a.group, counts, a.total_pairs + b.total_pairs,
                             a.game_count + b.game_count, a.quarantined + b.quarantined)


@dataclass(frozen=True)
class EmpiricalDistribution:
    d2: np.ndarray
    pdf: np.ndarray
    cdf: np.ndarray
    ccdf: np.ndarray
    total_pairs: int
    group: GroupKey = ALL

    @property
    def distance(self):
        return np.sqrt(self.d2)

    @property
    def points(self):
        return list(zip(self.distance.tolist(), self.pdf.tolist(), self.cdf.tolist(),
                        self.ccdf.tolist()))

    def cdf_at(self, d2):
        """Step-function CDF evaluated at arbitrary squared distances."""
        idx = np.searchsorted(self.d2, d2, side="right")
        out = np.zeros(np.shape(idx), dtype=float)
        hit = idx > 0
        out[hit] = self.cdf[idx[hit] - 1]
        return out


def to_distribution(hist):
    """PDF, CDF and inclusive CCDF ``P(D >= d)`` over the occupied bins."""
    bins = hist.sorted_bins()
    total = sum(c for _, c in bins)
    if total == 0:
        raise EmptyDistributionError(f"histogram for group {hist.group.label!r} has no pairs")
    d2 = np.array([b[0] for b in bins], dtype=np.int64)
    counts = np.array([b[1] for b in bins], dtype=np.int64)
    cum = np.cumsum(counts)
    below = cum - counts
    return EmpiricalDistribution(
        d2=d2,
        pdf=counts / total,
        cdf=cum / total,
        ccdf=(total - below) / total,
        total_pairs=int(total),
        group=hist.group,
    )


def histogram_of(records, group=ALL):
    hist = DistanceHistogram(group)
    for g in records:
        hist.add_game(g)
    return hist


def sharded_histogram(records, n_shards, group=ALL):
    """Count contiguous shards independently, then merge in shard order."""
    records = list(records)
    n_shards = max(1, min(int(n_shards), len(records) or 1))
    bounds = np.linspace(0, len(records), n_shards + 1).round().astype(int)
    parts = [histogram_of(records[lo:hi], group) for lo, hi in zip(bounds[:-1], bounds[1:])]
    out = DistanceHistogram(group)
    for p in parts:
        out = merge(out, p)
    return out


def count_matrix(records):
    """Per-game pair counts on the canonical bin axis, shape (n_games, n_bins)."""
    axis = bin_index()
    records = list(records)
    out = np.zeros((len(records), len(axis)), dtype=np.int64)
    for i, g in enumerate(records):
        row = out[i]
        for d2 in consecutive_pairs(g.moves):
            j = axis.get(d2)
            if j is not None:
                row[j] += 1
    return out


class ConsecutiveDistanceHistogram(TransformerMixin, BaseEstimator):
    """Group games into cohorts and count consecutive-placement distances.

    Parameters
    ----------
    group_by : {"all", "year", "decade"}
        Cohort scheme. Date-based schemes need a dated record.
    on_ungrouped : {"skip", "raise"}
        What to do with an undated record under a date-based scheme.
    n_shards : int
        Count the corpus in this many contiguous shards and merge them.
        The result is identical for every value.

    Attributes
    ----------
    histograms_ : dict of GroupKey -> DistanceHistogram, sorted by key
    n_ungrouped_ : int
    """

    def __init__(self, group_by="all", on_ungrouped="skip", n_shards=1):
        self.group_by = group_by
        self.on_ungrouped = on_ungrouped
        self.n_shards = n_shards

    def fit(self, X, y=None):
        _validation.check_choice("group_by", self.group_by, ("all", "year", "decade"))
        _validation.check_choice("on_ungrouped", self.on_ungrouped, ("skip", "raise"))
        _validation.check_positive_int("n_shards", self.n_shards)
        records = _validation.check_records(X)
        buckets = {}
        self.n_ungrouped_ = 0
        for g in records:
            try:
                key = group_key_for(g, self.group_by)
            except UngroupedError:
                if self.on_ungrouped == "raise":
                    raise
                self.n_ungrouped_ += 1
                continue
            buckets.setdefault(key, []).append(g)
        self.histograms_ = {
            key: sharded_histogram(buckets[key], self.n_shards, key) for key in sorted(buckets)
        }
        self.n_games_ = len(records)
        return self

    def transform(self, X):
        """Per-game count matrix on the canonical axis of ``bins_``."""
        return count_matrix(_validation.check_records(X))

    @property
    def bins_(self):
        return np.array(distinct_squared_distances(), dtype=np.int64)

    def distributions(self):
        check_is_fitted(self, "histograms_")
        return {k: to_distribution(h) for k, h in self.histograms_.items() if h.total_pairs}
