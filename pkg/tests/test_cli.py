import csv
import math
import subprocess
import sys

import numpy as np
import pytest

from fairga.cli import (TRACE_HEADER, ExperimentSpec, UsageError, main,
                        parse_config_text, summarize_trace_files)


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_run_fairga_schwefel(tmp_path):
    assert main(["run", "--algorithm", "fairga", "--objective", "schwefel",
                 "--n-max", "100", "--l-min", "10", "--out", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "fairga_schwefel_0.csv")
    assert tuple(rows[0]) == TRACE_HEADER
    assert len(rows) == 101
    stages = [r[1] for r in rows[1:]]
    assert stages == ["rampup"] * 50 + ["core"] * 40 + ["exit"] * 10
    assert (tmp_path / "fairga_schwefel_summary.csv").exists()


def test_run_ga_berlich_au(tmp_path):
    assert main(["run", "--algorithm", "ga", "--objective", "berlich", "--n-max", "100",
                 "--s-max", "50", "--out", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "ga_berlich_0.csv")
    assert rows[-1][-1] == "5000"


def test_invalid_config_exit_1_and_no_files(tmp_path, capsys):
    out = tmp_path / "results"
    code = main(["run", "--s-max", "50", "--r-rampup", "0.5", "--s-dispose", "10",
                 "--out", str(out)])
    assert code == 1
    assert "RampExceedsDisposal" in capsys.readouterr().err
    assert not out.exists()


def test_unwritable_output_exit_2(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("not a directory")
    assert main(["run", "--n-max", "5", "--l-min", "1", "--out", str(blocker / "sub")]) == 2
    assert "I/O" in capsys.readouterr().err


def test_replicate_seeds_and_summary(tmp_path):
    assert main(["run", "--algorithm", "both", "--replicates", "3", "--seed", "40",
                 "--n-max", "12", "--l-min", "2", "--out", str(tmp_path)]) == 0
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == sorted([f"{a}_schwefel_{s}.csv" for a in ("fairga", "ga") for s in (40, 41, 42)]
                           + ["fairga_schwefel_summary.csv", "ga_schwefel_summary.csv"])
    files = [tmp_path / f"fairga_schwefel_{s}.csv" for s in (40, 41, 42)]
    summary = read_csv(tmp_path / "fairga_schwefel_summary.csv")
    assert summary[0] == ["iteration", "median_best", "q25_best", "q75_best"]
    best = np.array([[float(r[3]) for r in read_csv(f)[1:]] for f in files])
    assert [float(r[1]) for r in summary[1:]] == list(np.median(best, axis=0))
    # summary is a pure function of the replicate files
    assert (tmp_path / "fairga_schwefel_summary.csv").read_text() == summarize_trace_files(files)


def test_csv_well_formed(tmp_path):
    main(["run", "--algorithm", "both", "--replicates", "2", "--n-max", "20",
          "--l-min", "3", "--out", str(tmp_path)])
    for path in tmp_path.glob("*.csv"):
        rows = read_csv(path)
        assert len({len(r) for r in rows}) == 1
        for r in rows[1:]:
            for i, field in enumerate(r):
                if rows[0][i] != "stage":
                    assert math.isfinite(float(field))


def test_byte_identical_reruns(tmp_path):
    argv = ["run", "--algorithm", "both", "--replicates", "2", "--n-max", "30",
            "--l-min", "5"]
    main(argv + ["--out", str(tmp_path / "a")])
    main(argv + ["--out", str(tmp_path / "b")])
    a = {p.name: p.read_bytes() for p in (tmp_path / "a").iterdir()}
    b = {p.name: p.read_bytes() for p in (tmp_path / "b").iterdir()}
    assert a == b and len(a) == 6


def test_config_file_and_cli_precedence(tmp_path):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text("# experiment\nobjective = berlich\nn_max = 7  # short\n"
                   "s-max = 12\nl_min = 1\ns_dispose = 6\n\nreplicates = 2\n")
    assert main(["run", "--config", str(cfg), "--n-max", "9", "--out", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "fairga_berlich_1.csv")
    assert len(rows) == 10
    assert max(int(r[2]) for r in rows[1:]) <= 12


def test_config_file_errors(tmp_path):
    with pytest.raises(UsageError):
        parse_config_text("no equals sign")
    with pytest.raises(UsageError):
        parse_config_text("colour = blue")
    with pytest.raises(UsageError):
        parse_config_text("s_max = many")
    bad = tmp_path / "bad.cfg"
    bad.write_text("bogus = 1\n")
    assert main(["run", "--config", str(bad), "--out", str(tmp_path / "o")]) == 1
    assert main(["run", "--config", str(tmp_path / "missing.cfg")]) == 1


def test_compare_sentinel(tmp_path, capsys):
    # tolerance 0 on a continuous objective is never met exactly
    assert main(["compare", "--objective", "schwefel", "--replicates", "2", "--n-max", "10",
                 "--l-min", "2", "--tolerance", "0", "--out", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "compare_schwefel.csv")
    assert rows[0] == ["algorithm", "replicate", "seed", "iterations_to_threshold",
                       "au_to_threshold", "final_best"]
    assert {r[3] for r in rows[1:]} == {"n/a"} and {r[4] for r in rows[1:]} == {"n/a"}
    report = capsys.readouterr().out
    assert "n/a" in report
    assert (tmp_path / "compare_schwefel_report.txt").read_text() == report


def _compare_rows(tmp_path, objective):
    assert main(["compare", "--objective", objective, "--replicates", "20",
                 "--out", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / f"compare_{objective}.csv")[1:]
    by_algo = {}
    for r in rows:
        by_algo.setdefault(r[0], []).append(r)
    return by_algo


def _median(values):
    return float(np.median([math.inf if v == "n/a" else float(v) for v in values]))


@pytest.mark.slow
def test_compare_berlich_medians(tmp_path):
    by_algo = _compare_rows(tmp_path, "berlich")
    for algo in ("fairga", "ga"):
        assert _median([r[5] for r in by_algo[algo]]) < 0.01
        assert _median([r[3] for r in by_algo[algo]]) <= 100


@pytest.mark.slow
@pytest.mark.xfail(strict=False, reason=(
    "FairGA charges s_max a.u. per core iteration and refreshes at most s_dispose "
    "members, so with the default settings its median a.u.-to-threshold on schwefel "
    "exceeds the GA's"))
def test_compare_schwefel_au_direction(tmp_path):
    by_algo = _compare_rows(tmp_path, "schwefel")
    assert _median([r[4] for r in by_algo["fairga"]]) < _median([r[4] for r in by_algo["ga"]])


class TestSustainability:
    def test_worked_example(self, capsys):
        assert main(["sustainability"]) == 0
        out = capsys.readouterr().out
        for value in ("0.76", "0.51", "0.24", "0.16"):
            assert value in out

    def test_csv_flag(self, tmp_path, capsys):
        assert main(["sustainability", "--csv", "--out", str(tmp_path)]) == 0
        out = capsys.readouterr().out
        assert out.splitlines()[0] == "flow,baseline,fairga"
        assert (tmp_path / "sustainability.csv").read_text() == out
        rows = list(csv.reader(out.splitlines()))
        assert float(rows[1][1]) == pytest.approx(0.76) and float(rows[2][2]) == pytest.approx(0.16)

    def test_no_lifetime_extension(self, capsys):
        main(["sustainability", "--life-r", "1"])
        lines = capsys.readouterr().out.splitlines()
        for line in lines[1:3]:
            _, base, fair = line.split()
            assert base == fair

    def test_perfect_circularity(self, capsys):
        main(["sustainability", "--recy-r", "1", "--res-rec", "1"])
        extraction = capsys.readouterr().out.splitlines()[1].split()
        assert extraction[1:] == ["0.00", "0.00"]

    def test_invalid_params(self, capsys):
        assert main(["sustainability", "--life-r", "0.5"]) == 1
        assert "InvalidParams" in capsys.readouterr().err

    def test_from_config_file(self, tmp_path, capsys):
        cfg = tmp_path / "flow.cfg"
        cfg.write_text("res_r = 2\nprod_vol = 10\nlife_0 = 4\nrecy_r = 0.5\nres_rec = 0.5\nlife_r = 2\n")
        assert main(["sustainability", "--config", str(cfg)]) == 0
        # 2*10*(1-0.25)/4 = 3.75 and /2 = 1.875
        assert "3.75" in capsys.readouterr().out


def test_experiment_spec_seed_derivation():
    spec = ExperimentSpec(replicates=3, seed_base=10)
    assert spec.seeds() == [10, 11, 12]
    assert spec.config_for(11).rng_seed == 11


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "fairga", "sustainability"],
                          capture_output=True, text=True, check=True)
    assert "0.51" in proc.stdout
