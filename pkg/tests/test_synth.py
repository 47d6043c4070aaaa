import datetime
import math

import numpy as np
import pytest
from scipy import stats

from godist.board import ALL_POINTS, Point
from godist.histogram import consecutive_pairs, histogram_of, to_distribution
from godist.rng import stream_rng
from godist.sgf import GameRecord, Move, parse_sgf
from godist.synth import (
    DIAGONAL,
    SynthParams,
    draw_step_lengths,
    generate_corpus,
    generate_game,
    serialize_sgf,
    step_length_cdf,
    write_corpus,
)


def test_two_move_game():
    g = generate_game(SynthParams(moves_per_game=(2, 2)), stream_rng(1, 0))
    assert len(g.moves) == 2 and all(not m.is_pass for m in g.moves)
    assert len(consecutive_pairs(g.moves)) == 1
    assert [m.color for m in g.moves] == ["B", "W"]


def test_mostly_passes():
    p = SynthParams(moves_per_game=(300, 300), pass_rate=0.999, seed=4)
    pairs = sum(len(consecutive_pairs(g.moves)) for g in generate_corpus(20, p))
    assert pairs <= 1


def test_corpus_of_one_is_stream_zero():
    p = SynthParams(seed=77)
    assert generate_corpus(1, p) == [generate_game(p, stream_rng(77, 0))]


def test_determinism():
    p = SynthParams(seed=3, pass_rate=0.1)
    assert generate_corpus(20, p) == generate_corpus(20, p)
    assert generate_corpus(5, p) != generate_corpus(5, SynthParams(seed=4, pass_rate=0.1))


def test_no_repeated_occupancy_and_alternation():
    for g in generate_corpus(50, SynthParams(seed=9, moves_per_game=(300, 361), pass_rate=0.05)):
        pts = [m.point for m in g.moves if m.point is not None]
        assert len(pts) == len(set(pts))
        assert [m.color for m in g.moves] == ["BW"[i % 2] for i in range(len(g.moves))]
        assert [m.ordinal for m in g.moves] == list(range(1, len(g.moves) + 1))


def test_full_board_game():
    g = generate_game(SynthParams(moves_per_game=(361, 361)), stream_rng(0, 0))
    assert len({m.point for m in g.moves}) == 361


def test_dates_within_range():
    p = SynthParams(seed=2, date_range=(1940, 1949))
    for g in generate_corpus(50, p):
        assert datetime.date(1940, 1, 1) <= g.date <= datetime.date(1949, 12, 31)


@pytest.mark.parametrize(
    "kw",
    [
        {"tail_alpha": 1.0},
        {"min_step": 0.5},
        {"min_step": 30.0},
        {"moves_per_game": (1, 5)},
        {"moves_per_game": (10, 5)},
        {"moves_per_game": (2, 362)},
        {"pass_rate": 1.0},
        {"seed": -1},
        {"date_range": (2010, 2000)},
    ],
)
def test_param_validation(kw):
    with pytest.raises((ValueError, TypeError)):
        SynthParams(**kw)


def test_serialize_two_moves():
    g = GameRecord(moves=(Move("B", Point(15, 3), 1), Move("W", Point(3, 15), 2)),
                   date=datetime.date(2016, 1, 1))
    assert serialize_sgf(g) == b"(;GM[1]FF[4]SZ[19]DT[2016-01-01];B[pd];W[dp])"


def test_serialize_pass_and_setup():
    g = GameRecord(moves=(Move("B", None, 1), Move("W", Point(0, 0), 2), Move("B", None, 3)),
                   handicap_stones=(Point(3, 3), Point(15, 15)))
    assert serialize_sgf(g) == b"(;GM[1]FF[4]SZ[19]AB[dd][pp];B[];W[aa];B[])"
    assert parse_sgf(serialize_sgf(g)) == [g]


def test_serialize_rejects_other_sizes():
    with pytest.raises(ValueError):
        serialize_sgf(GameRecord(board_size=13))


def test_round_trip_generated():
    corpus = generate_corpus(200, SynthParams(seed=12, pass_rate=0.1, date_range=(1950, 2020)))
    assert [parse_sgf(serialize_sgf(g))[0] for g in corpus] == corpus


def test_write_corpus(tmp_path):
    corpus = generate_corpus(3, SynthParams(moves_per_game=(2, 4)))
    paths = write_corpus(corpus, tmp_path, manifest={"n": 3})
    assert [p.name for p in paths] == ["000000.sgf", "000001.sgf", "000002.sgf"]
    assert (tmp_path / "manifest.json").exists()


def test_step_draws_follow_truncated_power_law():
    alpha, m = 2.5, 1.0
    x = draw_step_lengths(alpha, m, np.random.default_rng(5).random(100_000))
    assert x.min() >= m and x.max() <= DIAGONAL
    # 20 equal-probability cells of the truncated law
    edges = np.concatenate([[m], [_inv(q, alpha, m) for q in np.arange(1, 20) / 20], [DIAGONAL]])
    observed, _ = np.histogram(x, edges)
    assert stats.chisquare(observed).pvalue > 1e-3
    np.testing.assert_allclose(step_length_cdf(edges, alpha, m), np.arange(21) / 20, atol=1e-12)


def _inv(q, alpha, m):
    # bisection on the closed-form CDF, independent of the sampler's inversion
    lo, hi = m, DIAGONAL
    for _ in range(200):
        mid = (lo + hi) / 2
        if step_length_cdf(mid, alpha, m) < q:
            lo = mid
        else:
            hi = mid
    return lo


def test_placements_snap_to_nearest_free_shell():
    p = SynthParams(seed=31, moves_per_game=(40, 120), pass_rate=0.1)
    for i in range(30):
        rng = stream_rng(p.seed, i)
        game = generate_game(p, stream_rng(p.seed, i))
        # replay the generator's draws
        n = int(rng.integers(p.moves_per_game[0], p.moves_per_game[1] + 1))
        rng.integers(0, 366)
        u = rng.random((3, n))
        radii = draw_step_lengths(p.tail_alpha, p.min_step, u[0])
        occupied = set()
        prev = None
        for k, m in enumerate(game.moves):
            if m.point is None:
                continue
            if prev is not None:
                r = radii[k]
                free = [q for q in ALL_POINTS if q not in occupied]
                best = min(free, key=lambda q: (abs(math.dist(q, prev) - r), math.dist(q, prev)))
                assert math.dist(m.point, prev) == math.dist(best, prev)
            occupied.add(m.point)
            prev = m.point


def _ccdf_at(dist, d2):
    pos = np.searchsorted(dist.d2, d2, side="left")
    out = np.zeros(len(d2))
    ok = pos < len(dist.d2)
    out[ok] = dist.ccdf[pos[ok]]
    return out


def test_lower_exponent_gives_heavier_tail(tail_cohorts):
    heavy = to_distribution(histogram_of(tail_cohorts[2.0]))
    light = to_distribution(histogram_of(tail_cohorts[3.0]))
    axis = np.union1d(heavy.d2, light.d2)
    axis = axis[axis >= 100]
    assert np.all(_ccdf_at(heavy, axis) >= _ccdf_at(light, axis))
    assert _ccdf_at(heavy, np.array([100]))[0] > 2 * _ccdf_at(light, np.array([100]))[0]
