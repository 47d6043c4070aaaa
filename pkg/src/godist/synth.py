"""Synthetic Go-like game records with a known step-length law.

Each game is a walk on the board: the first stone lands uniformly at
random, and every later stone is placed at a distance drawn from a power
law truncated to the board diagonal, snapped to the nearest distance shell
around the previous stone that still has a free point. It is a ground-truth
generator for testing the statistics, not a model of how Go is played.
"""

from bisect import bisect_left
from dataclasses import dataclass
import datetime
from functools import lru_cache
import json
import math
from pathlib import Path

import numpy as np

from . import _validation
from .board import ALL_POINTS, BOARD_SIZE, MAX_SQUARED_DISTANCE
from .rng import check_seed, stream_rng
from .sgf import BLACK, WHITE, GameRecord, Move

N_POINTS = BOARD_SIZE * BOARD_SIZE
DIAGONAL = math.sqrt(MAX_SQUARED_DISTANCE)


@dataclass(frozen=True)
class SynthParams:
    tail_alpha: float = 2.5
    min_step: float = 1.0
    moves_per_game: tuple = (150, 250)
    pass_rate: float = 0.0
    seed: int = 0
    date_range: tuple = (2016, 2016)

    def __post_init__(self):
        _validation.check_real("tail_alpha", self.tail_alpha, low=1.0, low_inclusive=False)
        _validation.check_real("min_step", self.min_step, low=1.0, high=DIAGONAL, high_inclusive=False)
        lo, hi = self.moves_per_game
        _validation.check_positive_int("moves_per_game[0]", lo, minimum=2)
        _validation.check_positive_int("moves_per_game[1]", hi, minimum=lo)
        if hi > N_POINTS:
            raise ValueError(f"moves_per_game upper bound {hi} exceeds {N_POINTS}")
        _validation.check_real("pass_rate", self.pass_rate, low=0.0, high=1.0, high_inclusive=False)
        check_seed(self.seed)
        y0, y1 = self.date_range
        if not (1 <= y0 <= y1 <= 9999):
            raise ValueError(f"bad date_range {self.date_range!r}")

    def to_dict(self):
        return {
            "tail_alpha": self.tail_alpha,
            "min_step": self.min_step,
            "moves_per_game": list(self.moves_per_game),
            "pass_rate": self.pass_rate,
            "seed": self.seed,
            "date_range": list(self.date_range),
        }


def draw_step_lengths(alpha, min_step, u, max_step=DIAGONAL):
    """Inverse CDF of ``p(x) ~ x**-alpha`` on ``[min_step, max_step]``."""
    u = np.asarray(u, dtype=float)
    a = 1.0 - alpha
    lo = min_step ** a
    hi = max_step ** a
    return (lo - u * (lo - hi)) ** (1.0 / a)


def step_length_cdf(x, alpha, min_step, max_step=DIAGONAL):
    a = 1.0 - alpha
    x = np.clip(np.asarray(x, dtype=float), min_step, max_step)
    return (min_step ** a - x ** a) / (min_step ** a - max_step ** a)


@lru_cache(maxsize=None)
def _shells():
    """For every point, the distance shells around it.

    Returns a list indexed by point index of ``(distances, members)`` where
    ``distances`` ascends and ``members[k]`` lists point indices at
    ``distances[k]`` in (col, row) order.
    """
    out = []
    for a in ALL_POINTS:
        by_d2 = {}
        for b in ALL_POINTS:
            if b is a:
                continue
            dc = a.col - b.col
            dr = a.row - b.row
            by_d2.setdefault(dc * dc + dr * dr, []).append(b.index)
        keys = sorted(by_d2)
        out.append(([math.sqrt(k) for k in keys], [tuple(by_d2[k]) for k in keys]))
    return out


def _random_date(rng, date_range):
    first = datetime.date(date_range[0], 1, 1).toordinal()
    last = datetime.date(date_range[1], 12, 31).toordinal()
    return datetime.date.fromordinal(first + int(rng.integers(0, last - first + 1)))


def generate_game(params, rng):
    lo, hi = params.moves_per_game
    n_moves = int(rng.integers(lo, hi + 1))
    game_date = _random_date(rng, params.date_range)
    u = rng.random((3, n_moves))
    radii = draw_step_lengths(params.tail_alpha, params.min_step, u[0]).tolist()
    picks = u[1].tolist()
    passes = (u[2] < params.pass_rate).tolist()

    shells = _shells()
    occupied = bytearray(N_POINTS)
    n_occupied = 0
    prev = -1
    moves = []
    for i in range(n_moves):
        color = BLACK if i % 2 == 0 else WHITE
        if passes[i]:
            moves.append(Move(color, None, i + 1))
            continue
        if n_occupied == N_POINTS:
            break
        if prev < 0:
            free = [j for j in range(N_POINTS) if not occupied[j]]
        else:
            dists, members = shells[prev]
            r = radii[i]
            hi_k = bisect_left(dists, r)
            lo_k = hi_k - 1
            n_shells = len(dists)
            while True:
                if lo_k < 0:
                    k = hi_k
                    hi_k += 1
                elif hi_k >= n_shells or r - dists[lo_k] <= dists[hi_k] - r:
                    k = lo_k
                    lo_k -= 1
                else:
                    k = hi_k
                    hi_k += 1
                free = [j for j in members[k] if not occupied[j]]
                if free:
                    break
        idx = free[int(picks[i] * len(free))]
        occupied[idx] = 1
        n_occupied += 1
        prev = idx
        moves.append(Move(color, ALL_POINTS[idx], i + 1))
    return GameRecord(moves=tuple(moves), date=game_date)


def generate_corpus(n, params):
    _validation.check_positive_int("n", n)
    return [generate_game(params, stream_rng(params.seed, i)) for i in range(n)]


def serialize_sgf(record):
    if record.board_size != BOARD_SIZE:
        raise ValueError(f"only {BOARD_SIZE}x{BOARD_SIZE} records can be serialized")
    parts = [f"(;GM[1]FF[4]SZ[{BOARD_SIZE}]"]
    if record.date is not None:
        parts.append(f"DT[{record.date.isoformat()}]")
    if record.handicap_stones:
        parts.append("AB" + "".join(f"[{p.to_sgf()}]" for p in record.handicap_stones))
    for m in record.moves:
        parts.append(f";{m.color}[{'' if m.point is None else m.point.to_sgf()}]")
    parts.append(")")
    return "".join(parts).encode("ascii")


def write_corpus(records, out_dir, manifest=None):
    """One zero-padded ``.sgf`` file per game, so scan order is game order."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    width = max(6, len(str(len(records) - 1)))
    paths = []
    for i, rec in enumerate(records):
        path = out_dir / f"{i:0{width}d}.sgf"
        path.write_bytes(serialize_sgf(rec))
        paths.append(path)
    if manifest is not None:
        (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return paths
