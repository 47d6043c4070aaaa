"""Readers and writers for the on-disk formats.

Reals are written with 12 significant digits so files diff cleanly across
runs and machines.
"""

import csv
import json
from pathlib import Path

from .histogram import DistanceHistogram


def fmt(x):
    return format(float(x), ".12g")


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _write_json(path, obj):
    Path(path).write_text(json.dumps(obj, indent=2) + "\n")


def write_histograms(path, hists):
    _write_json(path, [h.to_dict() for h in hists])


def read_histograms(path):
    data = json.loads(Path(path).read_text())
    if not isinstance(data, list):
        raise ValueError("histogram file must contain a JSON array")
    return [DistanceHistogram.from_dict(d) for d in data]


def write_skips(path, report):
    with open(path, "w") as fh:
        for p, reason in report.skip_reasons:
            fh.write(json.dumps({"path": p, "reason": reason}) + "\n")


def write_distribution(path, dist):
    rows = (
        [fmt(x), int(d2), fmt(pdf), fmt(cdf), fmt(ccdf)]
        for x, d2, pdf, cdf, ccdf in zip(dist.distance, dist.d2, dist.pdf, dist.cdf, dist.ccdf)
    )
    _write_csv(path, ["distance", "d2", "pdf", "cdf", "ccdf"], rows)


def read_distribution_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def write_bands(path, bands):
    rows = (
        [int(d2), fmt(x), fmt(mc), fmt(sc), fmt(md), fmt(sd)]
        for d2, x, mc, sc, md, sd in zip(bands.d2, bands.distance, bands.mean_ccdf,
                                         bands.std_ccdf, bands.mean_cdf, bands.std_cdf)
    )
    _write_csv(path, ["d2", "distance", "mean_ccdf", "std_ccdf", "mean_cdf", "std_cdf"], rows)


def write_fit(path, fit):
    _write_json(path, fit.to_dict())


def write_separation(path, reports):
    rows = ([r.pair[0].label, r.pair[1].label, fmt(r.ks), r.n_a, r.n_b] for r in reports)
    _write_csv(path, ["group_a", "group_b", "ks", "n_a", "n_b"], rows)


def write_json(path, obj):
    _write_json(path, obj)


def suffixed(path, label):
    """``out.csv`` + ``2016`` -> ``out_2016.csv``."""
    path = Path(path)
    return path.with_name(f"{path.stem}_{label}{path.suffix}")
