import csv
import json

import pytest

from godist.cli import main
from godist.synth import SynthParams, generate_corpus, write_corpus


def run(*argv):
    return main([str(a) for a in argv])


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def write_hist(path, groups):
    data = [
        {"group": {"scheme": s, "label": l}, "game_count": 1, "total_pairs": sum(c.values()),
         "bins": [{"d2": k, "count": v} for k, v in sorted(c.items())]}
        for (s, l), c in groups
    ]
    path.write_text(json.dumps(data))
    return path


@pytest.fixture(scope="module")
def decades(tmp_path_factory):
    root = tmp_path_factory.mktemp("pro")
    for i, decade in enumerate(range(1940, 2020, 10)):
        corpus = generate_corpus(4, SynthParams(seed=i, moves_per_game=(20, 40),
                                                date_range=(decade, decade + 9)))
        write_corpus(corpus, root / f"{decade}s")
    return root


def test_hist_by_decade(decades, tmp_path):
    out = tmp_path / "h.json"
    assert run("hist", "--input", decades, "--group-by", "decade", "--out", out) == 0
    hists = json.loads(out.read_text())
    assert [h["group"]["label"] for h in hists] == [f"{d}s" for d in range(1940, 2020, 10)]
    assert all(h["game_count"] == 4 for h in hists)
    assert (tmp_path / "h.json.skips.jsonl").read_text() == ""
    manifest = json.loads((tmp_path / "h.json.manifest.json").read_text())
    assert manifest["ingest"] == {"parsed_count": 32, "skipped_count": 0}
    assert "duration_s" in manifest


def test_hist_by_year_reports_skips(tmp_path):
    root = tmp_path / "tygem"
    write_corpus(generate_corpus(3, SynthParams(seed=1, moves_per_game=(5, 9))), root)
    (root / "bad.sgf").write_bytes(b"(;GM[1];B[aa]")
    (root / "undated.sgf").write_bytes(b"(;GM[1];B[aa];W[bb])")
    (root / "small.sgf").write_bytes(b"(;SZ[13];B[aa])")
    out = tmp_path / "h.json"
    assert run("hist", "--input", root, "--group-by", "year", "--out", out) == 0
    assert [h["group"]["label"] for h in json.loads(out.read_text())] == ["2016"]
    skips = [json.loads(line) for line in (tmp_path / "h.json.skips.jsonl").read_text().splitlines()]
    assert sorted(s["path"].rsplit("/", 1)[1] for s in skips) == ["bad.sgf", "small.sgf", "undated.sgf"]
    assert all(set(s) == {"path", "reason"} for s in skips)


def test_hist_empty_dir(tmp_path):
    (tmp_path / "in").mkdir()
    out = tmp_path / "h.json"
    assert run("hist", "--input", tmp_path / "in", "--out", out) == 2
    assert json.loads(out.read_text()) == []


def test_hist_all_skipped(tmp_path):
    (tmp_path / "in").mkdir()
    (tmp_path / "in" / "x.sgf").write_bytes(b"((")
    assert run("hist", "--input", tmp_path / "in", "--out", tmp_path / "h.json") == 2


def test_hist_missing_input(tmp_path, capsys):
    assert run("hist", "--input", tmp_path / "missing", "--out", tmp_path / "h.json") == 1
    assert "cannot read input directory" in capsys.readouterr().err


def test_hist_threads_do_not_change_output(decades, tmp_path):
    run("hist", "--input", decades, "--out", tmp_path / "a.json")
    run("hist", "--input", decades, "--out", tmp_path / "b.json", "--threads", "3")
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_dist_example(tmp_path):
    h = write_hist(tmp_path / "h.json", [(("all", "all"), {1: 3, 4: 1})])
    assert run("dist", "--hist", h, "--out", tmp_path / "d.csv") == 0
    assert sorted(p.name for p in tmp_path.glob("d*.csv")) == ["d_all.csv"]
    assert (tmp_path / "d_all.csv").read_text() == (
        "distance,d2,pdf,cdf,ccdf\n1,1,0.75,0.75,1\n2,4,0.25,1,0.25\n"
    )


def test_dist_twelve_significant_digits(tmp_path):
    h = write_hist(tmp_path / "h.json", [(("all", "all"), {2: 1, 648: 2})])
    run("dist", "--hist", h, "--out", tmp_path / "d.csv")
    rows = read_csv(tmp_path / "d_all.csv")
    assert rows[0]["distance"] == "1.41421356237"
    assert rows[1]["distance"] == "25.4558441227"
    assert rows[0]["pdf"] == "0.333333333333"


def test_dist_per_decade(decades, tmp_path):
    run("hist", "--input", decades, "--group-by", "decade", "--out", tmp_path / "h.json")
    assert run("dist", "--hist", tmp_path / "h.json", "--out", tmp_path / "d.csv") == 0
    assert len(list(tmp_path.glob("d_*.csv"))) == 8


@pytest.mark.parametrize("content", ["not json", "{}", '[{"group": {"scheme": "all"}}]',
                                     '[{"group": {"scheme": "all", "label": "all"}, "game_count": 1, '
                                     '"total_pairs": 5, "bins": [{"d2": 1, "count": 1}]}]'])
def test_dist_malformed(tmp_path, content):
    (tmp_path / "h.json").write_text(content)
    assert run("dist", "--hist", tmp_path / "h.json", "--out", tmp_path / "d.csv") == 1


@pytest.fixture(scope="module")
def small_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("c")
    write_corpus(generate_corpus(12, SynthParams(seed=4, moves_per_game=(20, 40))), root)
    return root


def test_bootstrap_full_corpus_once(small_dir, tmp_path):
    out = tmp_path / "b.csv"
    assert run("bootstrap", "--input", small_dir, "--k", 12, "--iters", 1, "--out", out) == 0
    rows = read_csv(out)
    assert list(rows[0]) == ["d2", "distance", "mean_ccdf", "std_ccdf", "mean_cdf", "std_cdf"]
    assert all(r["std_ccdf"] == "0" and r["std_cdf"] == "0" for r in rows)
    meta = json.loads((tmp_path / "b.csv.plan.json").read_text())
    assert meta["plan"] == {"k": 12, "iterations": 1, "seed": 0, "replacement": False}


def test_bootstrap_reproducible(small_dir, tmp_path):
    for name in ("a.csv", "b.csv"):
        run("bootstrap", "--input", small_dir, "--k", 5, "--iters", 300, "--seed", 9, "--out", tmp_path / name)
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    assert (tmp_path / "a.csv.plan.json").read_bytes() == (tmp_path / "b.csv.plan.json").read_bytes()
    run("bootstrap", "--input", small_dir, "--k", 5, "--iters", 300, "--seed", 9,
        "--threads", 4, "--out", tmp_path / "c.csv")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "c.csv").read_bytes()


def test_bootstrap_k_too_large(small_dir, tmp_path, capsys):
    assert run("bootstrap", "--input", small_dir, "--k", 55, "--out", tmp_path / "b.csv") == 1
    err = capsys.readouterr().err
    assert "55" in err and "12" in err


def test_bootstrap_defaults():
    from godist.cli import build_parser

    args = build_parser().parse_args(["bootstrap", "--input", "x", "--out", "y"])
    assert (args.k, args.iters) == (55, 10_000)
    args = build_parser().parse_args(["fit", "--hist", "x", "--out", "y"])
    assert args.xmin == 2.0


def test_fit(small_dir, tmp_path):
    run("hist", "--input", small_dir, "--out", tmp_path / "h.json")
    assert run("fit", "--hist", tmp_path / "h.json", "--out", tmp_path / "f.json") == 0
    fit = json.loads((tmp_path / "f_all.json").read_text())
    assert set(fit) == {"alpha", "stderr", "x_min", "n_tail"}
    assert fit["x_min"] == 2.0 and fit["alpha"] > 1


def test_fit_duplicated_corpus(small_dir, tmp_path):
    doubled = tmp_path / "doubled"
    for sub in ("a", "b"):
        write_corpus(generate_corpus(12, SynthParams(seed=4, moves_per_game=(20, 40))), doubled / sub)
    run("hist", "--input", small_dir, "--out", tmp_path / "h1.json")
    run("hist", "--input", doubled, "--out", tmp_path / "h2.json")
    run("fit", "--hist", tmp_path / "h1.json", "--out", tmp_path / "f1.json")
    run("fit", "--hist", tmp_path / "h2.json", "--out", tmp_path / "f2.json")
    f1 = json.loads((tmp_path / "f1_all.json").read_text())
    f2 = json.loads((tmp_path / "f2_all.json").read_text())
    assert f2["alpha"] == pytest.approx(f1["alpha"], rel=1e-12)
    assert f2["stderr"] < f1["stderr"]
    assert f2["n_tail"] == 2 * f1["n_tail"]


def test_fit_bad_threshold(tmp_path, capsys):
    h = write_hist(tmp_path / "h.json", [(("all", "all"), {1: 3, 25: 4, 100: 2})])
    assert run("fit", "--hist", h, "--xmin", 0, "--out", tmp_path / "f.json") == 1
    assert "threshold" in capsys.readouterr().err


def test_fit_insufficient_tail_names_group(tmp_path, capsys):
    h = write_hist(tmp_path / "h.json", [(("year", "2015"), {1: 3, 25: 4, 100: 2}),
                                         (("year", "2016"), {1: 3, 25: 1})])
    assert run("fit", "--hist", h, "--xmin", 4, "--out", tmp_path / "f.json") == 1
    assert "2016" in capsys.readouterr().err


def test_compare(tmp_path):
    h = write_hist(tmp_path / "h.json", [(("year", "2001"), {1: 5, 4: 5}),
                                         (("year", "2002"), {1: 5, 4: 5}),
                                         (("year", "2003"), {100: 3})])
    assert run("compare", "--hist", h, "--out", tmp_path / "c.csv") == 0
    rows = read_csv(tmp_path / "c.csv")
    assert list(rows[0]) == ["group_a", "group_b", "ks", "n_a", "n_b"]
    assert len(rows) == 3
    assert [r["ks"] for r in rows] == ["1", "1", "0"]
    assert (rows[2]["group_a"], rows[2]["group_b"]) == ("2001", "2002")
    assert (rows[2]["n_a"], rows[2]["n_b"]) == ("10", "10")


def test_compare_needs_two_groups(tmp_path):
    h = write_hist(tmp_path / "h.json", [(("all", "all"), {1: 5})])
    assert run("compare", "--hist", h, "--out", tmp_path / "c.csv") == 1


def test_synth_one_file(tmp_path):
    assert run("synth", "--n", 1, "--out", tmp_path / "s") == 0
    assert sorted(p.name for p in (tmp_path / "s").iterdir()) == ["000000.sgf", "manifest.json"]


def test_synth_force_is_reproducible(tmp_path):
    out = tmp_path / "s"
    args = ["synth", "--n", 5, "--alpha", 2.2, "--seed", 3, "--pass-rate", 0.1, "--out", out]
    assert run(*args) == 0
    first = {p.name: p.read_bytes() for p in out.iterdir()}
    assert run(*args) == 1  # non-empty without --force
    assert run(*args, "--force") == 0
    assert {p.name: p.read_bytes() for p in out.iterdir()} == first
    assert len(first) == 6


@pytest.mark.parametrize("flags", [["--alpha", "1"], ["--pass-rate", "1.5"], ["--moves-min", "1"]])
def test_synth_bad_params(tmp_path, flags):
    assert run("synth", "--n", 1, *flags, "--out", tmp_path / "s") == 1


@pytest.mark.parametrize("sub", ["hist", "dist", "bootstrap", "fit", "compare", "synth", None])
def test_version_and_help(sub, capsys):
    prefix = [sub] if sub else []
    for flag in ("--version", "--help"):
        with pytest.raises(SystemExit) as exc:
            main(prefix + [flag])
        assert exc.value.code == 0
    out = capsys.readouterr().out
    assert "godist 0.1.0" in out


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["hist"])
    assert exc.value.code == 1
