import subprocess
import sys

from hybridcs.cli import main
from hybridcs.experiment import AGGREGATE_COLUMNS, TRIALS_COLUMNS


def run_cli(args):
    """Run the CLI in-process, capturing nothing; returns the exit code."""
    return main(args)


class TestExperimentCommand:
    def test_creates_csvs_with_exact_headers(self, tmp_path, capsys):
        code = run_cli(
            ["experiment", "--id", "2", "--nv", "1", "--seed", "7",
             "--out", str(tmp_path), "--s-grid", "4", "--snr-grid", "0"]
        )
        assert code == 0
        trials = (tmp_path / "trials.csv").read_text().splitlines()
        agg = (tmp_path / "aggregate.csv").read_text().splitlines()
        assert trials[0] == ",".join(TRIALS_COLUMNS)
        assert agg[0] == ",".join(AGGREGATE_COLUMNS)
        assert len(trials) == 1 + 5  # five algorithms, one trial
        assert len(agg) == 1 + 5
        manifest = (tmp_path / "run-manifest.txt").read_text()
        assert "master_seed=7" in manifest
        assert "csv_schema_version=" in manifest
        out = capsys.readouterr().out
        assert "master_seed=7" in out  # resolved config echoed

    def test_identical_invocations_identical_files(self, tmp_path):
        args = ["experiment", "--id", "2", "--nv", "1", "--seed", "3",
                "--s-grid", "4", "--snr-grid", "10", "--algorithms", "omp,sp"]
        run_cli(args + ["--out", str(tmp_path / "a")])
        run_cli(args + ["--out", str(tmp_path / "b")])
        assert (tmp_path / "a" / "aggregate.csv").read_bytes() == (
            tmp_path / "b" / "aggregate.csv"
        ).read_bytes()
        # trials differ only in wall time; strip that column before comparing
        strip = lambda p: [
            ",".join(line.split(",")[:-1]) for line in p.read_text().splitlines()
        ]
        assert strip(tmp_path / "a" / "trials.csv") == strip(tmp_path / "b" / "trials.csv")

    def test_unknown_algorithm_rejected(self, tmp_path, capsys):
        code = run_cli(
            ["experiment", "--id", "1", "--nv", "1", "--out", str(tmp_path),
             "--algorithms", "alg1,bogus"]
        )
        assert code == 2
        err = capsys.readouterr().err
        assert "bogus" in err
        assert "--algorithms" in err  # errors name the offending flag


class TestRecoverCommand:
    def test_noiseless_recovery(self, capsys):
        code = run_cli(
            ["recover", "--alg", "alg1", "--n", "32", "--s", "2",
             "--mr", "8", "--mo", "128", "--snr", "inf", "--seed", "5"]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "detected_support=" in out
        assert "recovery_snr_db=" in out

    def test_baseline_uses_bit_matched_m(self, capsys):
        code = run_cli(
            ["recover", "--alg", "omp", "--n", "32", "--s", "2",
             "--mr", "8", "--mo", "64", "--seed", "5"]
        )
        assert code == 0
        assert "m=10" in capsys.readouterr().out  # (32*8 + 64) / 32

    def test_invalid_sparsity_exit_code(self, capsys):
        code = run_cli(
            ["recover", "--alg", "alg1", "--n", "8", "--s", "0",
             "--mr", "4", "--mo", "16"]
        )
        assert code == 2
        assert "--s" in capsys.readouterr().err


class TestBoundCommand:
    def test_detection_bound_at_most_one(self, capsys):
        code = run_cli(
            ["bound", "--theorem", "5", "--magnitudes", "3,2,1",
             "--n", "16", "--mo", "256"]
        )
        assert code == 0
        out = capsys.readouterr().out
        raw = float(next(l.split("=")[1] for l in out.splitlines() if l.startswith("raw_bound")))
        assert raw <= 1.0

    def test_modification_bound_nothing_missed(self, capsys):
        code = run_cli(
            ["bound", "--theorem", "6", "--magnitudes", "3,2,1",
             "--n", "16", "--mo", "256", "--s-missed", "0"]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "raw_bound=1" in out

    def test_missing_required_flag(self, capsys):
        code = run_cli(
            ["bound", "--theorem", "6", "--magnitudes", "3,2,1", "--n", "16", "--mo", "64"]
        )
        assert code == 2
        assert "--s-missed" in capsys.readouterr().err


class TestOtherCommands:
    def test_tessellate(self, capsys):
        code = run_cli(
            ["tessellate", "--n", "32", "--s", "3", "--mo", "128",
             "--trials", "10", "--seed", "1"]
        )
        assert code == 0
        assert "holds_rate=" in capsys.readouterr().out

    def test_width(self, capsys):
        code = run_cli(["width", "--n", "16", "--s", "2", "--samples", "2000"])
        assert code == 0
        assert "width=" in capsys.readouterr().out


class TestParserSurface:
    def test_version_flag(self):
        proc = subprocess.run(
            [sys.executable, "-m", "hybridcs.cli", "--version"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0
        assert "hybridcs 0.1.0" in proc.stdout
        assert "csv-schema 1" in proc.stdout

    def test_unknown_flag_rejected(self):
        proc = subprocess.run(
            [sys.executable, "-m", "hybridcs.cli", "width", "--n", "4", "--s", "1",
             "--bogus-flag", "3"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 2
        assert "--bogus-flag" in proc.stderr

    def test_help_lists_subcommands(self):
        proc = subprocess.run(
            [sys.executable, "-m", "hybridcs.cli", "--help"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0
        for name in ("experiment", "recover", "bound", "tessellate", "width"):
            assert name in proc.stdout
