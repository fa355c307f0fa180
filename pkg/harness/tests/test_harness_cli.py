"""Command-line behavior: flag parsing, exit codes, emitted files."""

from __future__ import annotations

import csv

from biasharness.cli import run

from support import minimal_row, write_rows

QUICK = ["--seeds", "0", "--max-epochs", "1", "--encoder", "scratch",
         "--max-seq-len", "64", "--batch-size", "16"]


class TestExitCodes:
    def test_missing_dataset_flag_is_usage_error(self, capsys):
        assert run([]) == 2
        capsys.readouterr()

    def test_bad_seed_list_is_usage_error(self, tiny_dataset, capsys):
        code = run(["--dataset", str(tiny_dataset), "--seeds", "a,b"])
        assert code == 2
        assert "comma-separated integers" in capsys.readouterr().err

    def test_invalid_config_value_is_usage_error(self, tiny_dataset, capsys):
        code = run(["--dataset", str(tiny_dataset), "--batch-size", "0"])
        assert code == 2
        assert "usage error" in capsys.readouterr().err

    def test_schema_error_exits_one(self, tmp_path, capsys):
        bad = write_rows(tmp_path / "bad.jsonl", [minimal_row(split="dev")])
        code = run(["--dataset", str(bad), *QUICK,
                    "--out", str(tmp_path / "m.csv")])
        assert code == 1
        assert "error[SchemaMismatch]" in capsys.readouterr().err


class TestHappyPath:
    def test_writes_metrics_and_audit(self, tiny_dataset, tmp_path, capsys):
        out = tmp_path / "metrics.csv"
        code = run(["--dataset", str(tiny_dataset), *QUICK,
                    "--out", str(out)])
        assert code == 0
        printed = capsys.readouterr().out
        assert "seed 0:" in printed and "mean micro-F1" in printed

        with open(out, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
        assert rows[0][0] == "seed" and rows[-1][0] == "mean"

        audit = tmp_path / "metrics.audit.csv"
        with open(audit, newline="", encoding="utf-8") as fh:
            entries = list(csv.reader(fh))[1:]
        assert all(split != "test" or phase == "test-eval"
                   for phase, _, split in entries)

    def test_explicit_audit_path(self, tiny_dataset, tmp_path):
        out = tmp_path / "m.csv"
        audit = tmp_path / "reads.csv"
        code = run(["--dataset", str(tiny_dataset), *QUICK,
                    "--out", str(out), "--audit-log", str(audit)])
        assert code == 0
        assert audit.exists() and out.exists()
