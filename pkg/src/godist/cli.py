"""``godist`` command line.

Exit codes: 0 success, 1 usage or fatal error, 2 success with an empty
result. Data outputs are deterministic for fixed flags and inputs; run
timing lives only in the ``<out>.manifest.json`` sidecar.
"""

import argparse
import datetime
import logging
from pathlib import Path
import re
import sys
import time

import numpy as np

from . import __version__, io
from .board import bin_index
from .errors import GoDistError, InsufficientTailError, InvalidThresholdError, UngroupedError
from .histogram import DistanceHistogram, consecutive_pairs, to_distribution
from .resampling import ResamplePlan, bootstrap
from .sgf import ALL, group_key_for, scan_corpus
from .synth import SynthParams, generate_corpus, write_corpus
from .tail import compare_cohorts, fit_power_law

log = logging.getLogger("godist")

EXIT_OK, EXIT_ERROR, EXIT_EMPTY = 0, 1, 2


class CLIError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


class _Run:
    """Collects the reproducibility manifest of one invocation."""

    def __init__(self, command, argv, args):
        self.started = time.time()
        self.manifest = {
            "tool": "godist",
            "version": __version__,
            "command": command,
            "argv": list(argv),
            "parameters": {k: (str(v) if isinstance(v, Path) else v)
                           for k, v in sorted(vars(args).items()) if k != "func"},
        }

    def write(self, out_path, **extra):
        self.manifest.update(extra)
        self.manifest["started_at"] = datetime.datetime.fromtimestamp(
            self.started, datetime.timezone.utc).isoformat()
        self.manifest["duration_s"] = round(time.time() - self.started, 6)
        io.write_json(Path(f"{out_path}.manifest.json"), self.manifest)


def _scan(path, pattern, threads):
    try:
        return scan_corpus(path, pattern, workers=threads)
    except OSError as exc:
        raise CLIError(f"cannot read input directory: {exc}") from exc


def cmd_hist(args, run):
    records, report = _scan(args.input, args.glob, args.threads)
    hists = {}
    for rec in records:
        try:
            key = group_key_for(rec, args.group_by)
        except UngroupedError as exc:
            report.parsed_count -= 1
            report.skip(rec.origin, f"UngroupedError: {exc}")
            continue
        hist = hists.get(key)
        if hist is None:
            hist = hists[key] = DistanceHistogram(key)
        hist.add_game(rec)
    ordered = [hists[k] for k in sorted(hists)]
    io.write_histograms(args.out, ordered)
    io.write_skips(Path(f"{args.out}.skips.jsonl"), report)
    quarantined = {h.group.label: h.quarantined for h in ordered if h.quarantined}
    if quarantined:
        log.warning("zero-distance pairs excluded: %s", quarantined)
    run.write(args.out, inputs=[str(args.input)], ingest=report.summary(),
              quarantined=quarantined)
    log.info("%d records parsed, %d skipped, %d groups", report.parsed_count,
             report.skipped_count, len(ordered))
    return EXIT_OK if ordered else EXIT_EMPTY


def _read_hists(path):
    try:
        return io.read_histograms(path)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise CLIError(f"cannot read histogram file {path}: {exc}") from exc


def cmd_dist(args, run):
    written = []
    for hist in _read_hists(args.hist):
        if hist.total_pairs == 0:
            log.warning("group %s has no distance pairs; no distribution written", hist.group.label)
            continue
        out = io.suffixed(args.out, hist.group.label)
        io.write_distribution(out, to_distribution(hist))
        written.append(str(out))
    run.write(args.out, inputs=[str(args.hist)], outputs=written)
    return EXIT_OK if written else EXIT_EMPTY


def cmd_bootstrap(args, run):
    records, report = _scan(args.input, args.glob, args.threads)
    axis = bin_index()
    rows = []
    for rec in records:
        row = np.zeros(len(axis), dtype=np.int64)
        for d2 in consecutive_pairs(rec.moves):
            j = axis.get(d2)
            if j is not None:
                row[j] += 1
        rows.append(row)
    n = len(rows)
    if n == 0:
        raise CLIError(f"no games could be read from {args.input}")
    if not args.replacement and args.k > n:
        raise CLIError(f"--k {args.k} exceeds the corpus size of {n} games")
    plan = ResamplePlan(args.k, args.iters, args.seed, args.replacement)
    bands = bootstrap(np.vstack(rows), plan, group=ALL, n_jobs=args.threads)
    io.write_bands(args.out, bands)
    meta = {"plan": plan.to_dict(), "n_games": n, "empty_samples": bands.empty_samples,
            "group": ALL.to_dict()}
    io.write_json(Path(f"{args.out}.plan.json"), meta)
    run.write(args.out, inputs=[str(args.input)], ingest=report.summary(), plan=plan.to_dict())
    return EXIT_OK


def cmd_fit(args, run):
    written = []
    hists = _read_hists(args.hist)
    for hist in hists:
        try:
            fit = fit_power_law(hist, args.xmin)
        except InvalidThresholdError as exc:
            raise CLIError(f"invalid threshold: {exc}") from exc
        except InsufficientTailError as exc:
            raise CLIError(f"group {hist.group.label}: {exc}") from exc
        out = io.suffixed(args.out, hist.group.label)
        io.write_fit(out, fit)
        written.append(str(out))
    run.write(args.out, inputs=[str(args.hist)], outputs=written)
    return EXIT_OK if written else EXIT_EMPTY


def cmd_compare(args, run):
    hists = _read_hists(args.hist)
    if len(hists) < 2:
        raise CLIError(f"need at least 2 groups to compare, found {len(hists)}")
    empty = [h.group.label for h in hists if h.total_pairs == 0]
    if empty:
        raise CLIError(f"groups without distance pairs cannot be compared: {', '.join(empty)}")
    reports = compare_cohorts(hists)
    io.write_separation(args.out, reports)
    run.write(args.out, inputs=[str(args.hist)])
    return EXIT_OK


_SYNTH_FILE = re.compile(r"^\d+\.sgf$")


def cmd_synth(args, run):
    out = Path(args.out)
    if out.exists() and not out.is_dir():
        raise CLIError(f"{out} exists and is not a directory")
    if out.is_dir() and any(out.iterdir()):
        if not args.force:
            raise CLIError(f"output directory {out} is not empty; pass --force to overwrite")
        for p in out.iterdir():
            if p.is_file() and (_SYNTH_FILE.match(p.name) or p.name == "manifest.json"):
                p.unlink()
    try:
        params = SynthParams(
            tail_alpha=args.alpha,
            min_step=args.min_step,
            moves_per_game=(args.moves_min, args.moves_max),
            pass_rate=args.pass_rate,
            seed=args.seed,
            date_range=(args.year_min, args.year_max),
        )
    except (TypeError, ValueError) as exc:
        raise CLIError(f"invalid synthesis parameters: {exc}") from exc
    records = generate_corpus(args.n, params)
    manifest = {"tool": "godist", "version": __version__, "n": args.n, "params": params.to_dict()}
    write_corpus(records, out, manifest=manifest)
    run.write(out, outputs=[str(out)])
    return EXIT_OK


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"{text!r} must be >= 1")
    return value


def _seed(text):
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def build_parser():
    parser = _Parser(prog="godist", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help):
        p = sub.add_parser(name, help=help, description=help)
        p.add_argument("--version", action="version", version=f"godist {__version__}")
        p.add_argument("--threads", type=_positive_int, default=1,
                       help="worker count; never changes results")
        p.set_defaults(func=func)
        return p

    p = add("hist", cmd_hist, "count consecutive-placement distances per group")
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--glob", default="*.sgf")
    p.add_argument("--group-by", choices=("year", "decade", "all"), default="all")
    p.add_argument("--out", type=Path, required=True)

    p = add("dist", cmd_dist, "turn histograms into PDF/CDF/CCDF tables")
    p.add_argument("--hist", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)

    p = add("bootstrap", cmd_bootstrap, "mean/variance bands over random game samples")
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--glob", default="*.sgf")
    p.add_argument("--k", type=_positive_int, default=55)
    p.add_argument("--iters", type=_positive_int, default=10_000)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--replacement", action="store_true")
    p.add_argument("--out", type=Path, required=True)

    p = add("fit", cmd_fit, "maximum-likelihood power-law tail per group")
    p.add_argument("--hist", type=Path, required=True)
    p.add_argument("--xmin", type=float, default=2.0)
    p.add_argument("--out", type=Path, required=True)

    p = add("compare", cmd_compare, "pairwise KS separation between groups")
    p.add_argument("--hist", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)

    p = add("synth", cmd_synth, "write a synthetic SGF corpus")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--alpha", type=float, default=2.5)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--min-step", type=float, default=1.0)
    p.add_argument("--moves-min", type=int, default=150)
    p.add_argument("--moves-max", type=int, default=250)
    p.add_argument("--pass-rate", type=float, default=0.0)
    p.add_argument("--year-min", type=int, default=2016)
    p.add_argument("--year-max", type=int, default=2016)
    p.add_argument("--force", action="store_true")
    p.add_argument("--out", type=Path, required=True)
    return parser


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="godist: %(levelname)s: %(message)s")
    run = _Run(args.command, argv, args)
    try:
        return args.func(args, run)
    except (CLIError, GoDistError) as exc:
        print(f"godist {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
