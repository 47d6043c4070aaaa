"""SGF ingestion: game trees to GameRecords, directory scans, cohort keys.

Only the subset of SGF needed for move geometry is interpreted (B, W, AB,
AW, SZ, DT, GM). Everything else is tokenized and ignored. Only the main
variation (first child at every branch) is kept.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
import datetime
import logging
import os
from pathlib import Path
import re
from typing import NamedTuple, Optional

from .board import BOARD_SIZE, SGF_POINTS_BYTES, Point
from .errors import (
    SGFError,
    SGFParseError,
    UngroupedError,
    UnsupportedBoardSizeError,
    UnsupportedGameError,
)

log = logging.getLogger(__name__)

BLACK = "B"
WHITE = "W"


class Move(NamedTuple):
    color: str
    point: Optional[Point]  # None is a pass
    ordinal: int

    @property
    def is_pass(self):
        return self.point is None


@dataclass(frozen=True)
class GameRecord:
    moves: tuple = ()
    date: Optional[datetime.date] = None
    source_tag: str = ""
    handicap_stones: tuple = ()
    board_size: int = BOARD_SIZE
    # Where the record came from; informational, not part of equality.
    origin: str = field(default="", compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "moves", tuple(self.moves))
        object.__setattr__(self, "handicap_stones", tuple(self.handicap_stones))
        if len(set(self.handicap_stones)) != len(self.handicap_stones):
            raise ValueError("handicap stones must be distinct points")

    @property
    def points(self):
        """Placement points in move order, ``None`` for passes."""
        return [m.point for m in self.moves]


SCHEMES = ("year", "decade", "all")
_LABEL_RE = {
    "year": re.compile(r"^\d{4}$"),
    "decade": re.compile(r"^\d{3}0s$"),
    "all": re.compile(r"^all$"),
}


@dataclass(frozen=True, order=True)
class GroupKey:
    scheme: str
    label: str

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown grouping scheme {self.scheme!r}; expected one of {SCHEMES}")
        if not _LABEL_RE[self.scheme].match(self.label):
            raise ValueError(f"label {self.label!r} does not match scheme {self.scheme!r}")

    def to_dict(self):
        return {"scheme": self.scheme, "label": self.label}

    @classmethod
    def from_dict(cls, d):
        return cls(d["scheme"], d["label"])


ALL = GroupKey("all", "all")


def group_key_for(record, scheme):
    scheme = scheme.lower()
    if scheme == "all":
        return ALL
    if scheme not in SCHEMES:
        raise ValueError(f"unknown grouping scheme {scheme!r}")
    if record.date is None:
        raise UngroupedError(f"record has no parseable date; cannot group by {scheme}")
    year = record.date.year
    if scheme == "year":
        return GroupKey("year", f"{year:04d}")
    return GroupKey("decade", f"{year - year % 10:04d}s")


# --------------------------------------------------------------------------
# Parsing

# Alternatives: a node holding nothing but one move (the overwhelmingly
# common case, one token instead of two); punctuation; a property.
_TOKEN = re.compile(
    rb"\s*(?:;\s*([BW])\[([a-s]{2}|tt)?\]\s*(?=[;()])"
    rb"|([();])"
    rb"|([A-Za-z]+)\s*((?:\[(?:[^\\\]]|\\.)*\]\s*)+))",
    re.S,
)
_VALUE = re.compile(rb"\[((?:[^\\\]]|\\.)*)\]", re.S)
_DATE_TOKEN = re.compile(r"^(\d{4})(?:-(\d{1,2})(?:-(\d{1,2}))?)?")
_COLORS = {b"B": BLACK, b"W": WHITE}
_LOWER = bytes(range(ord("a"), ord("z") + 1))


def parse_date(value):
    """First valid ``YYYY``, ``YYYY-MM`` or ``YYYY-MM-DD`` token, else None.

    Missing month or day default to 1.
    """
    for tok in re.split(r"[,\s;/]+", value.strip()):
        m = _DATE_TOKEN.match(tok)
        if not m:
            continue
        y, mo, d = m.groups()
        try:
            return datetime.date(int(y), int(mo or 1), int(d or 1))
        except ValueError:
            continue
    return None


def _values(raw):
    if raw.count(b"[") == 1:
        return [raw[1 : raw.rindex(b"]")]]
    return _VALUE.findall(raw)


def _text(value):
    return value.decode("utf-8", errors="replace")


class _Tree:
    __slots__ = ("moves", "setup", "gm", "sz", "dt", "error", "nodes", "offset")

    def __init__(self, offset):
        self.moves = []
        self.setup = []
        self.gm = None
        self.sz = None
        self.dt = None
        self.error = None
        self.nodes = 0
        self.offset = offset

    def fail(self, exc):
        if self.error is None:
            self.error = exc

    def finish(self, source_tag, origin):
        if self.gm is not None and self.gm != 1:
            return UnsupportedGameError(f"GM[{self.gm}] is not Go (GM[1])")
        size = BOARD_SIZE if self.sz is None else self.sz
        if size != BOARD_SIZE:
            return UnsupportedBoardSizeError(f"board size {size} is not {BOARD_SIZE}x{BOARD_SIZE}")
        if self.error is not None:
            return self.error
        setup = list(dict.fromkeys(self.setup))
        return GameRecord(
            moves=tuple(self.moves),
            date=self.dt,
            source_tag=source_tag,
            handicap_stones=tuple(setup),
            board_size=size,
            origin=origin,
        )


def _expand_setup(value, offset):
    if b":" not in value:
        p = SGF_POINTS_BYTES.get(value.strip())
        if p is None:
            raise SGFParseError(f"bad setup coordinate {_text(value)!r}", offset)
        return [p]
    a, _, b = value.partition(b":")
    pa = SGF_POINTS_BYTES.get(a.strip())
    pb = SGF_POINTS_BYTES.get(b.strip())
    if pa is None or pb is None:
        raise SGFParseError(f"bad setup rectangle {_text(value)!r}", offset)
    c0, c1 = sorted((pa.col, pb.col))
    r0, r1 = sorted((pa.row, pb.row))
    return [Point(c, r) for c in range(c0, c1 + 1) for r in range(r0, r1 + 1)]


def parse_collection(data, source_tag="", origin=""):
    """Parse an SGF collection, one entry per game tree.

    Entries are either a GameRecord or the SGFError explaining why that tree
    was rejected (unsupported game, non-19x19 board, bad coordinate). Errors
    in the collection's structure itself (unbalanced parentheses, nodes
    outside a tree, property syntax) raise SGFParseError with a byte offset.
    """
    if isinstance(data, str):
        data = data.encode("utf-8")
    start = data.find(b"(")
    if start < 0:
        raise SGFParseError("no game tree found", 0)

    results = []
    # Each frame: [on_main_line, children_seen, has_node]
    stack = []
    tree = None
    node_on_main = False
    node_is_root = False
    pos = start
    points = SGF_POINTS_BYTES

    for m in _TOKEN.finditer(data, start):
        if m.start() != pos:
            raise SGFParseError("unexpected characters", pos)
        pos = m.end()
        kind = m.lastindex
        if kind <= 2:
            if not stack:
                raise SGFParseError("node outside of a game tree", m.start())
            frame = stack[-1]
            if frame[1]:
                raise SGFParseError("node after a variation", m.start())
            frame[2] = True
            node_on_main = frame[0]
            if node_on_main:
                tree.nodes += 1
                node_is_root = tree.nodes == 1
                v = m.group(2)
                p = None if v is None or v == b"tt" else points[v]
                tree.moves.append(Move(_COLORS[m.group(1)], p, len(tree.moves) + 1))
            continue
        if kind == 3:
            punct = m.group(3)
            if punct == b";":
                if not stack:
                    raise SGFParseError("node outside of a game tree", m.start(3))
                frame = stack[-1]
                if frame[1]:
                    raise SGFParseError("node after a variation", m.start(3))
                node_on_main = frame[0]
                tree.nodes += 1
                node_is_root = tree.nodes == 1
                frame[2] = True
            elif punct == b"(":
                if stack:
                    parent = stack[-1]
                    if not parent[2]:
                        raise SGFParseError("game tree without a root node", m.start(3))
                    stack.append([parent[0] and parent[1] == 0, 0, False])
                    parent[1] += 1
                else:
                    tree = _Tree(m.start(3))
                    stack.append([True, 0, False])
                node_on_main = False
            else:
                if not stack:
                    raise SGFParseError("unbalanced ')'", m.start(3))
                frame = stack.pop()
                if not frame[2]:
                    raise SGFParseError("game tree without a root node", m.start(3))
                node_on_main = False
                if not stack:
                    results.append(tree.finish(source_tag, origin))
                    tree = None
            continue

        if not stack or not stack[-1][2]:
            raise SGFParseError("property outside of a node", m.start(4))
        if not node_on_main:
            continue
        ident = m.group(4)
        if not ident.isupper():
            ident = ident.translate(None, _LOWER)
        raw = m.group(5)
        if ident == b"B" or ident == b"W":
            vals = _values(raw)
            if len(vals) != 1:
                tree.fail(SGFParseError(f"move property {ident.decode()} has {len(vals)} values", m.start(4)))
                continue
            v = vals[0]
            if v == b"" or v == b"tt":
                p = None
            else:
                p = points.get(v)
                if p is None:
                    p = points.get(v.strip())
                    if p is None:
                        tree.fail(SGFParseError(f"bad move coordinate {_text(v)!r}", m.start(5)))
                        continue
            tree.moves.append(Move(ident.decode(), p, len(tree.moves) + 1))
        elif ident == b"AB" or ident == b"AW":
            for v in _values(raw):
                if v.strip() == b"":
                    continue
                try:
                    tree.setup.extend(_expand_setup(v, m.start(5)))
                except SGFParseError as exc:
                    tree.fail(exc)
        elif node_is_root:
            if ident == b"GM":
                v = _text(_values(raw)[0]).strip()
                try:
                    tree.gm = int(v)
                except ValueError:
                    tree.fail(SGFParseError(f"GM value {v!r} is not an integer", m.start(5)))
            elif ident == b"SZ":
                v = _text(_values(raw)[0]).strip()
                cols, _, rows = v.partition(":")
                try:
                    size = int(cols)
                    if rows and int(rows) != size:
                        size = -1
                except ValueError:
                    tree.fail(SGFParseError(f"SZ value {v!r} is not a board size", m.start(5)))
                else:
                    tree.sz = size if size > 0 else 0
            elif ident == b"DT":
                tree.dt = parse_date(_text(_values(raw)[0]))

    if data[pos:].strip():
        raise SGFParseError("unexpected characters", pos)
    if stack:
        raise SGFParseError("unbalanced parentheses: unterminated game tree", len(data))
    return results


def parse_sgf(data, source_tag="", origin=""):
    """Parse SGF bytes into GameRecords, raising the first per-tree error."""
    records = []
    for item in parse_collection(data, source_tag, origin):
        if isinstance(item, SGFError):
            raise item
        records.append(item)
    return records


# --------------------------------------------------------------------------
# Corpus scanning


@dataclass
class IngestReport:
    parsed_count: int = 0
    skipped_count: int = 0
    skip_reasons: list = field(default_factory=list)

    def skip(self, path, reason):
        self.skipped_count += 1
        self.skip_reasons.append((str(path), reason))

    def summary(self):
        return {"parsed_count": self.parsed_count, "skipped_count": self.skipped_count}


def _reason(exc):
    return f"{type(exc).__name__}: {exc}"


def _load_file(args):
    path, source_tag = args
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        return [_reason(exc)]
    try:
        items = parse_collection(data, source_tag, path)
    except SGFError as exc:
        return [_reason(exc)]
    if not items:
        return [_reason(SGFParseError("no game tree found", 0))]
    return [it if isinstance(it, GameRecord) else _reason(it) for it in items]


def find_files(root, pattern="*.sgf"):
    """Matching files under ``root`` in lexicographic relative-path order."""
    root = Path(root)
    if not root.is_dir():
        if not root.exists():
            raise FileNotFoundError(f"corpus root {root} does not exist")
        raise NotADirectoryError(f"corpus root {root} is not a directory")
    if not os.access(root, os.R_OK | os.X_OK):
        raise PermissionError(f"corpus root {root} is not readable")
    files = [p for p in root.rglob(pattern) if p.is_file()]
    files.sort(key=lambda p: p.relative_to(root).as_posix())
    return files


def _source_tag(root, path):
    parts = path.relative_to(root).parts
    return parts[0] if len(parts) > 1 else root.name


def scan_corpus(root, pattern="*.sgf", workers=1):
    """Scan a directory tree for SGF files.

    Returns ``(records, report)``. ``records`` is a lazy iterator in
    deterministic path order; ``report`` is filled in as it is consumed and
    is complete once the iterator is exhausted. A missing or unreadable root
    raises immediately; per-file problems only become skips.
    """
    root = Path(root)
    files = find_files(root, pattern)
    report = IngestReport()
    jobs = [(str(p), _source_tag(root, p)) for p in files]

    def stream():
        if workers > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = pool.map(_load_file, jobs, chunksize=64)
                yield from _emit(jobs, results, report)
        else:
            yield from _emit(jobs, map(_load_file, jobs), report)

    return stream(), report


def _emit(jobs, results, report):
    for (path, _), items in zip(jobs, results):
        multi = len(items) > 1
        for i, item in enumerate(items):
            if isinstance(item, GameRecord):
                report.parsed_count += 1
                yield item
            else:
                where = f"{path}#{i}" if multi else path
                log.debug("skipping %s: %s", where, item)
                report.skip(where, item)
