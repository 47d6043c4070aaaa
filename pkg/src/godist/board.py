"""Board coordinates and exact distances on the 19x19 grid.

Display codes use the contiguous alphabet ``A``..``S`` (no skipped ``I``) and
SGF codes use ``a``..``s``. In both, the first character is the column and
the second the row. Distances are kept as integer squared distances so that
binning never touches floating point.
"""

from collections import namedtuple
from functools import lru_cache
import math

from .errors import MalformedCoordinateError

BOARD_SIZE = 19
MAX_SQUARED_DISTANCE = 2 * (BOARD_SIZE - 1) ** 2

SquaredDistance = int

_DISPLAY_LETTERS = "ABCDEFGHIJKLMNOPQRS"
_SGF_LETTERS = _DISPLAY_LETTERS.lower()

_PointBase = namedtuple("_PointBase", ["col", "row"])


class Point(_PointBase):
    """An intersection of the board, ``0 <= col, row <= 18``."""

    __slots__ = ()

    def __new__(cls, col, row):
        if not (isinstance(col, int) and isinstance(row, int)):
            raise TypeError(f"Point coordinates must be integers, got {col!r}, {row!r}")
        if not (0 <= col < BOARD_SIZE and 0 <= row < BOARD_SIZE):
            raise ValueError(f"Point ({col}, {row}) is off the {BOARD_SIZE}x{BOARD_SIZE} board")
        return super().__new__(cls, col, row)

    @property
    def index(self):
        return self.col * BOARD_SIZE + self.row

    def to_sgf(self):
        return _SGF_LETTERS[self.col] + _SGF_LETTERS[self.row]

    def to_display(self):
        return _DISPLAY_LETTERS[self.col] + _DISPLAY_LETTERS[self.row]


ALL_POINTS = tuple(Point(c, r) for c in range(BOARD_SIZE) for r in range(BOARD_SIZE))

# Code -> Point lookups; the parser hits these millions of times.
SGF_POINTS = {p.to_sgf(): p for p in ALL_POINTS}
SGF_POINTS_BYTES = {k.encode("ascii"): v for k, v in SGF_POINTS.items()}


def _decode(code, letters):
    if not isinstance(code, str) or len(code) != 2:
        raise MalformedCoordinateError(code)
    idx = []
    for ch in code:
        i = letters.find(ch)
        if i < 0:
            raise MalformedCoordinateError(code, ch)
        idx.append(i)
    return ALL_POINTS[idx[0] * BOARD_SIZE + idx[1]]


def point_from_display(code):
    """Parse a display code such as ``"AA"`` or ``"pd"`` (case-insensitive)."""
    if not isinstance(code, str):
        raise MalformedCoordinateError(code)
    return _decode(code.upper(), _DISPLAY_LETTERS)


def point_from_sgf(code):
    """Parse a lowercase SGF move code; ``"tt"`` is not a point on 19x19."""
    p = SGF_POINTS.get(code)
    if p is not None:
        return p
    return _decode(code, _SGF_LETTERS)


def squared_distance(p, q):
    dc = p[0] - q[0]
    dr = p[1] - q[1]
    return dc * dc + dr * dr


def distance(sq):
    return math.sqrt(sq)


@lru_cache(maxsize=None)
def distinct_squared_distances():
    """All nonzero squared distances reachable on the board, ascending.

    This is the canonical histogram bin axis.
    """
    values = set()
    for i in range(BOARD_SIZE):
        for j in range(i, BOARD_SIZE):
            values.add(i * i + j * j)
    values.discard(0)
    return tuple(sorted(values))


@lru_cache(maxsize=None)
def bin_index():
    """Map squared distance -> position on the canonical axis."""
    return {d2: i for i, d2 in enumerate(distinct_squared_distances())}
