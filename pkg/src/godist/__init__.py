"""Consecutive-move distance statistics for Go game records."""

from .board import Point, distance, distinct_squared_distances, point_from_display, point_from_sgf, squared_distance
from .histogram import (
    ConsecutiveDistanceHistogram,
    DistanceHistogram,
    EmpiricalDistribution,
    accumulate,
    consecutive_pairs,
    merge,
    to_distribution,
)
from .resampling import BootstrapBands, CohortBootstrap, ResamplePlan, bootstrap, sample_games
from .sgf import GameRecord, GroupKey, IngestReport, Move, group_key_for, parse_sgf, scan_corpus
from .synth import SynthParams, generate_corpus, generate_game, serialize_sgf
from .tail import PowerLawFit, PowerLawTail, SeparationReport, compare_cohorts, fit_power_law, ks_statistic

__version__ = "0.1.0"

__all__ = [
    "BootstrapBands",
    "CohortBootstrap",
    "ConsecutiveDistanceHistogram",
    "DistanceHistogram",
    "EmpiricalDistribution",
    "GameRecord",
    "GroupKey",
    "IngestReport",
    "Move",
    "Point",
    "PowerLawFit",
    "PowerLawTail",
    "ResamplePlan",
    "SeparationReport",
    "SynthParams",
    "accumulate",
    "bootstrap",
    "compare_cohorts",
    "consecutive_pairs",
    "distance",
    "distinct_squared_distances",
    "fit_power_law",
    "generate_corpus",
    "generate_game",
    "group_key_for",
    "ks_statistic",
    "merge",
    "parse_sgf",
    "point_from_display",
    "point_from_sgf",
    "sample_games",
    "scan_corpus",
    "serialize_sgf",
    "squared_distance",
    "to_distribution",
]
