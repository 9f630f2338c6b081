"""
Tests for the seqdiff command-line interface
"""

import csv
import io
import json
from pathlib import Path

import pytest
import torch

from seqdiff.cli import main as cli_main
from seqdiff.cli.commands import UsageError
from seqdiff.cli.main import build_parser, configure_threads, run
from seqdiff.core.sampling import select_mbr


def _write_config(directory: Path, run_dir: Path, **training) -> str:
    raw = {
        "task": {"kind": "copy", "vocab_size": 10, "max_length": 5, "count": 80},
        "model": {
            "latent_dim": 4,
            "d_model": 8,
            "heads": 2,
            "ffn_dim": 16,
            "enc_layers": 1,
            "dec_layers": 1,
        },
        "training": {
            "batch_size": 4,
            "iterations": 4,
            "validation_interval": 2,
            "log_interval": 2,
            "checkpoint_interval": 2,
            **training,
        },
        "generation": {"nfe": 3},
        "paths": {"run_dir": str(run_dir)},
    }
    path = directory / "config.json"
    path.write_text(json.dumps(raw), encoding="utf-8")
    return str(path)


@pytest.fixture(scope="module")
def checkpoint(tmp_path_factory):
    directory = tmp_path_factory.mktemp("cli")
    config = _write_config(directory, directory / "run")
    assert run(["train", config]) == 0
    return str(directory / "run" / "checkpoint.bin")


class TestParser:
    """Test cases for argument parsing"""

    def test_requires_command(self):
        """Should exit with status 2 without a subcommand"""
        with pytest.raises(SystemExit) as exc:
            build_parser().parse_args([])

        assert exc.value.code == 2

    def test_rejects_unknown_sc_mode(self):
        """Should exit with status 2 for an unknown self-conditioning mode"""
        with pytest.raises(SystemExit) as exc:
            build_parser().parse_args(["generate", "ckpt", "--sc-mode", "fresh"])

        assert exc.value.code == 2

    def test_eval_accepts_nfe_sweep(self):
        """Should collect several step counts for eval"""
        args = build_parser().parse_args(["eval", "ckpt", "--nfe", "1", "2", "5"])

        assert args.nfe == [1, 2, 5]
        assert args.split == "test"

    def test_analyze_requires_output(self):
        """Should exit with status 2 when analyze has no -o"""
        with pytest.raises(SystemExit) as exc:
            build_parser().parse_args(["analyze", "gap", "ckpt"])

        assert exc.value.code == 2


class TestThreads:
    """Test cases for thread configuration"""

    def test_flag_sets_threads(self, monkeypatch):
        """Should pass --threads to torch"""
        seen = []
        monkeypatch.setattr(torch, "set_num_threads", seen.append)

        configure_threads(3)

        assert seen == [3]

    def test_environment_fallback(self, monkeypatch):
        """Should read the thread count from the environment"""
        seen = []
        monkeypatch.setattr(torch, "set_num_threads", seen.append)
        monkeypatch.setenv(cli_main.THREADS_ENV, "2")

        configure_threads(None)

        assert seen == [2]

    def test_unset_leaves_torch_alone(self, monkeypatch):
        """Should not touch torch without a flag or variable"""
        seen = []
        monkeypatch.setattr(torch, "set_num_threads", seen.append)
        monkeypatch.delenv(cli_main.THREADS_ENV, raising=False)

        configure_threads(None)

        assert seen == []

    def test_invalid_values(self, monkeypatch):
        """Should reject non-integer and non-positive counts"""
        monkeypatch.setenv(cli_main.THREADS_ENV, "many")

        with pytest.raises(UsageError):
            configure_threads(None)
        with pytest.raises(UsageError):
            configure_threads(0)

    def test_invalid_environment_exit_status(self, monkeypatch, capsys):
        """Should exit with status 2 for a bad thread variable"""
        monkeypatch.setenv(cli_main.THREADS_ENV, "many")

        assert run(["dump-schedule", "--points", "2"]) == 2
        assert "SEQDIFF_NUM_THREADS" in capsys.readouterr().err


class TestTrainCommand:
    """Test cases for 'seqdiff train'"""

    def test_missing_config(self, tmp_path, capsys):
        """Should exit with status 2 when the configuration is missing"""
        status = run(["train", str(tmp_path / "absent.json")])

        assert status == 2
        assert "not found" in capsys.readouterr().err

    def test_invalid_config(self, tmp_path, capsys):
        """Should exit with status 2 and name the invalid field"""
        config = _write_config(tmp_path, tmp_path / "run", batch_size=0)

        status = run(["train", config])

        assert status == 2
        assert "batch_size" in capsys.readouterr().err

    def test_trains_and_reports(self, tmp_path, capsys):
        """Should print a JSON summary of the final iteration"""
        config = _write_config(tmp_path, tmp_path / "run")

        status = run(["train", config, "--iterations", "2"])

        report = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
        assert status == 0
        assert report["iteration"] == 2
        assert report["validation_loss"] is not None
        assert (tmp_path / "run" / "checkpoint.bin").is_file()
        assert (tmp_path / "run" / "metrics.jsonl").is_file()

    def test_run_dir_override(self, tmp_path, capsys):
        """Should write into the --run-dir directory"""
        config = _write_config(tmp_path, tmp_path / "run")
        other = tmp_path / "other"

        status = run(["train", config, "--iterations", "1", "--run-dir", str(other)])

        assert status == 0
        assert (other / "checkpoint.bin").is_file()

    def test_resume_completed_run(self, tmp_path, capsys):
        """Should report nothing to do when the checkpoint is already complete"""
        config = _write_config(tmp_path, tmp_path / "run")
        run(["train", config, "--iterations", "2"])
        capsys.readouterr()

        status = run(["train", config, "--iterations", "2", "--resume"])

        assert status == 0
        assert capsys.readouterr().out.startswith("Nothing to do")


class TestGenerateCommand:
    """Test cases for 'seqdiff generate'"""

    def test_one_line_per_input_line(self, checkpoint, tmp_path, capsys):
        """Should keep line alignment and leave blank lines blank"""
        source = tmp_path / "input.txt"
        source.write_text("0 1 2\n\n3 4\n", encoding="utf-8")

        status = run(["generate", checkpoint, str(source)])

        lines = capsys.readouterr().out.split("\n")
        assert status == 0
        assert len(lines) == 4
        assert lines[1] == ""
        assert lines[3] == ""

    def test_empty_input(self, checkpoint, tmp_path, capsys):
        """Should write nothing for an empty input"""
        source = tmp_path / "input.txt"
        source.write_text("", encoding="utf-8")

        status = run(["generate", checkpoint, str(source)])

        assert status == 0
        assert capsys.readouterr().out == ""

    def test_reads_stdin(self, checkpoint, monkeypatch, capsys):
        """Should read source lines from stdin by default"""
        monkeypatch.setattr("sys.stdin", io.StringIO("0 1\n"))

        status = run(["generate", checkpoint])

        assert status == 0
        assert len(capsys.readouterr().out.splitlines()) == 1

    def test_deterministic(self, checkpoint, tmp_path, capsys):
        """Should produce identical output on repeated runs"""
        source = tmp_path / "input.txt"
        source.write_text("0 1 2\n3 4 5 0\n", encoding="utf-8")

        run(["generate", checkpoint, str(source), "--noise-beam", "2"])
        first = capsys.readouterr().out
        run(["generate", checkpoint, str(source), "--noise-beam", "2"])

        assert capsys.readouterr().out == first

    def test_dump_candidates(self, checkpoint, tmp_path, capsys):
        """Should record every length and noise beam candidate"""
        source = tmp_path / "input.txt"
        source.write_text("0 1 2\n", encoding="utf-8")
        dump = tmp_path / "candidates.jsonl"

        status = run(
            [
                "generate",
                checkpoint,
                str(source),
                "--length-beam",
                "3",
                "--noise-beam",
                "2",
                "--dump-candidates",
                str(dump),
            ]
        )

        records = [json.loads(line) for line in dump.read_text().splitlines()]
        output = capsys.readouterr().out.splitlines()
        assert status == 0
        assert len(records) == 1
        candidates = records[0]["candidates"]
        assert len(candidates) == 6
        assert [c["beam"] for c in candidates] == [0, 1, 0, 1, 0, 1]
        assert output[0] == candidates[records[0]["chosen"]]["text"]
        assert records[0]["chosen"] == select_mbr([c["tokens"] for c in candidates])

    def test_dump_trajectory(self, checkpoint, tmp_path, capsys):
        """Should record one entry per denoising step"""
        source = tmp_path / "input.txt"
        source.write_text("0 1 2\n", encoding="utf-8")
        dump = tmp_path / "trajectory.jsonl"

        run(
            [
                "generate",
                checkpoint,
                str(source),
                "--nfe",
                "4",
                "--dump-trajectory",
                str(dump),
            ]
        )

        record = json.loads(dump.read_text().splitlines()[0])
        assert record["line"] == 1
        assert len(record["steps"]) == 4

    def test_source_too_long(self, checkpoint, tmp_path, capsys):
        """Should fail with status 1 for a source the model cannot accept"""
        source = tmp_path / "input.txt"
        source.write_text("0 1 2 3 4 5\n", encoding="utf-8")

        assert run(["generate", checkpoint, str(source)]) == 1
        assert "at most 5" in capsys.readouterr().err

    def test_corrupt_checkpoint(self, tmp_path, capsys):
        """Should fail with status 1 for an unreadable checkpoint"""
        bogus = tmp_path / "bogus.bin"
        bogus.write_bytes(b"not a checkpoint")

        assert run(["generate", str(bogus), "-"]) == 1


class TestEvalCommand:
    """Test cases for 'seqdiff eval'"""

    def test_record_per_nfe(self, checkpoint, capsys):
        """Should print one JSON record per requested step count"""
        status = run(["eval", checkpoint, "--nfe", "2", "4", "--limit", "2"])

        records = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
        assert status == 0
        assert [r["nfe"] for r in records] == [2, 4]
        assert all(r["examples"] == 2 for r in records)
        assert all(0.0 <= r["bleu"] <= 1.0 for r in records)
        assert [r["mean_denoiser_calls"] for r in records] == [2.0, 4.0]

    def test_corrected_mode_doubles_calls(self, checkpoint, capsys):
        """Should count two denoiser calls per step in corrected mode"""
        run(["eval", checkpoint, "--nfe", "3", "--sc-mode", "corrected"])

        record = json.loads(capsys.readouterr().out.splitlines()[0])
        assert record["mean_denoiser_calls"] == 6.0
        assert record["examples"] == 3

    def test_defaults_to_configured_nfe(self, checkpoint, tmp_path):
        """Should evaluate the checkpoint's configured step count"""
        output = tmp_path / "eval.jsonl"

        run(["eval", checkpoint, "-o", str(output)])

        record = json.loads(output.read_text().splitlines()[0])
        assert record["nfe"] == 3

    def test_empty_dataset(self, checkpoint, capsys):
        """Should exit with status 2 for an empty evaluation set"""
        assert run(["eval", checkpoint, "--limit", "0"]) == 2


class TestAnalyzeCommand:
    """Test cases for 'seqdiff analyze'"""

    def test_gap_rejects_small_nfe(self, tmp_path, capsys):
        """Should exit with status 2 before loading when nfe < 3"""
        status = run(
            [
                "analyze",
                "gap",
                str(tmp_path / "absent.bin"),
                "--nfe",
                "2",
                "-o",
                str(tmp_path / "gap.csv"),
            ]
        )

        assert status == 2
        assert "nfe >= 3" in capsys.readouterr().err

    def test_gap_report(self, checkpoint, tmp_path):
        """Should write one row per interior step of every nfe"""
        output = tmp_path / "gap.csv"

        status = run(
            ["analyze", "gap", checkpoint, "--nfe", "3", "4", "-o", str(output)]
        )

        with open(output, newline="") as handle:
            rows = list(csv.DictReader(handle))
        assert status == 0
        assert [(r["nfe"], r["step"]) for r in rows] == [
            ("3", "1"),
            ("4", "1"),
            ("4", "2"),
        ]
        assert all(float(r["gap"]) >= 0.0 for r in rows)

    def test_sc_compare_report(self, checkpoint, tmp_path):
        """Should write one row per nfe with both BLEU scores"""
        output = tmp_path / "compare.csv"

        run(["analyze", "sc-compare", checkpoint, "--nfe", "2", "-o", str(output)])

        with open(output, newline="") as handle:
            rows = list(csv.DictReader(handle))
        assert len(rows) == 1
        assert set(rows[0]) == {"nfe", "bleu_original", "bleu_correct"}


class TestDumpScheduleCommand:
    """Test cases for 'seqdiff dump-schedule'"""

    def test_default_table(self, capsys):
        """Should tabulate the built-in schedules on 101 points"""
        status = run(["dump-schedule"])

        rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
        assert status == 0
        assert len(rows) == 101
        assert float(rows[-1]["t"]) == 1.0
        assert float(rows[-1]["lambda"]) == pytest.approx(0.90)

    def test_kind_override(self, tmp_path):
        """Should tabulate the requested noise kind"""
        output = tmp_path / "schedule.csv"

        run(["dump-schedule", "--kind", "linear", "--points", "5", "-o", str(output)])

        with open(output, newline="") as handle:
            rows = list(csv.DictReader(handle))
        assert len(rows) == 5
        assert list(rows[0]) == ["t", "alpha", "sigma", "lambda", "gamma"]

    def test_from_config(self, tmp_path, capsys):
        """Should read the schedules of a configuration file"""
        config = _write_config(tmp_path, tmp_path / "run")

        status = run(["dump-schedule", "--config", config, "--points", "3"])

        assert status == 0
        assert len(capsys.readouterr().out.splitlines()) == 4
