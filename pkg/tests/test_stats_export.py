from __future__ import annotations

import csv
import json

import pytest

from biasctx import (
    BiasKind,
    Task,
    build_all_target_contexts,
    build_task_dataset,
    corpus_digest,
    emit_dataset,
    make_folds,
    report_stats,
)
from biasctx.backtranslate import BtPolicy, IdentityProvider
from biasctx.errors import IoFailure
from biasctx.stats_export import EXPORT_FIELDS, load_dataset_lines, render_stats

from helpers import synth_corpus


def all_contexts(corpus):
    out = []
    for kind in (BiasKind.INF, BiasKind.LEX):
        out.extend(build_all_target_contexts(corpus, kind))
    return out


class TestReportStats:
    def test_kind_totals(self, e18e22):
        report = report_stats(e18e22, all_contexts(e18e22))
        assert report.kind_totals["INF"] == (24, 58)  # 23 + 35 pair contexts
        assert report.kind_totals["LEX"] == (3, 3)

    def test_per_event_blocks(self, e18e22):
        report = report_stats(e18e22, all_contexts(e18e22))
        blocks = {(ev.event_id, ev.kind): (ev.abta, ev.ebta, ev.total)
                  for ev in report.per_event}
        assert blocks[("18", "INF")] == (14, 9, 23)
        assert blocks[("22", "INF")] == (16, 19, 35)

    def test_rows_ranked_by_sentence_count(self, e18e22):
        report = report_stats(e18e22, all_contexts(e18e22), top_n=2)
        assert [r.target for r in report.rows] == [
            "Barack Obama", "Barack Obama", "Hillary Clinton", "Hillary Clinton"]
        inf = {(r.target, r.kind): r for r in report.rows}
        row = inf[("Barack Obama", "INF")]
        assert (row.sentence_count, row.abta, row.ebta, row.total) == (10, 13, 9, 22)
        row = inf[("Hillary Clinton", "INF")]
        assert (row.sentence_count, row.abta, row.ebta, row.total) == (8, 13, 15, 28)

    def test_top_n_limits_targets_not_rows(self, e18e22):
        report = report_stats(e18e22, all_contexts(e18e22), top_n=1)
        assert {r.target for r in report.rows} == {"Barack Obama"}

    def test_render_contains_event_totals(self, e18e22):
        text = render_stats(report_stats(e18e22, all_contexts(e18e22)))
        assert "event 18 [INF]: ABTA 14 + EBTA 9 = 23" in text
        assert "event 22 [INF]: ABTA 16 + EBTA 19 = 35" in text


@pytest.fixture(scope="module")
def dataset():
    corpus = synth_corpus(10, seed=6)
    plan = make_folds(corpus, k=5, seed=1)
    ds = build_task_dataset(corpus, plan, 0, Task.INF_OTH,
                            aug=frozenset({"BANC", "ABTA", "EBTA"}), fraction=50,
                            bt=BtPolicy.BOTH_KINDS, provider=IdentityProvider(),
                            seed=1)
    return corpus, ds


class TestEmitLines:
    def test_field_order_every_line(self, dataset, tmp_path):
        _, ds = dataset
        path = tmp_path / "ds.jsonl"
        emit_dataset(ds, path)
        for line in path.read_text(encoding="utf-8").splitlines():
            row = json.loads(line)
            assert tuple(row) == EXPORT_FIELDS

    def test_sorted_by_split_then_id(self, dataset, tmp_path):
        _, ds = dataset
        path = tmp_path / "ds.jsonl"
        emit_dataset(ds, path)
        rows = load_dataset_lines(path)
        order = {"train": 0, "val": 1, "test": 2}
        keys = [(order[r["split"]], r["id"]) for r in rows]
        assert keys == sorted(keys)
        assert len(rows) == len(ds.records)

    def test_manifest_counts_and_digest(self, dataset, tmp_path):
        corpus, ds = dataset
        path = tmp_path / "ds.jsonl"
        manifest = emit_dataset(ds, path, corpus_digest=corpus_digest(corpus))
        sidecar = json.loads((tmp_path / "ds.manifest.json").read_text(encoding="utf-8"))
        assert sidecar["run_id"] == manifest.run_id
        assert sidecar["corpus_digest"] == corpus_digest(corpus)
        assert sidecar["files"][0]["records"] == len(ds.records)
        import hashlib
        assert sidecar["files"][0]["sha256"] == hashlib.sha256(
            path.read_bytes()).hexdigest()
        assert sidecar["flags"]["task"] == "inf-oth"

    def test_byte_identical_reruns(self, dataset, tmp_path):
        corpus, ds = dataset
        digest = corpus_digest(corpus)
        m1 = emit_dataset(ds, tmp_path / "a" / "ds.jsonl", corpus_digest=digest)
        m2 = emit_dataset(ds, tmp_path / "b" / "ds.jsonl", corpus_digest=digest)
        assert m1.run_id == m2.run_id
        assert (tmp_path / "a" / "ds.jsonl").read_bytes() == \
               (tmp_path / "b" / "ds.jsonl").read_bytes()
        assert (tmp_path / "a" / "ds.manifest.json").read_bytes() == \
               (tmp_path / "b" / "ds.manifest.json").read_bytes()

    def test_load_round_trip(self, dataset, tmp_path):
        _, ds = dataset
        path = tmp_path / "ds.jsonl"
        emit_dataset(ds, path)
        rows = load_dataset_lines(path)
        assert {r["id"] for r in rows} == {r.id for r in ds.records}


class TestEmitTabular:
    def test_csv_mirror(self, dataset, tmp_path):
        _, ds = dataset
        path = tmp_path / "ds.csv"
        emit_dataset(ds, path, format="tabular")
        with path.open(encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == list(EXPORT_FIELDS)
        assert len(rows) - 1 == len(ds.records)
        id_col = [r[0] for r in rows[1:]]
        assert set(id_col) == {r.id for r in ds.records}

    def test_multi_member_fields_joined(self, dataset, tmp_path):
        _, ds = dataset
        path = tmp_path / "ds.csv"
        emit_dataset(ds, path, format="tabular")
        with path.open(encoding="utf-8", newline="") as fh:
            rows = list(csv.DictReader(fh))
        paired = [r for r in rows if "+" in r["sentence_ids"]]
        assert paired, "expected at least one multi-sentence record"

    def test_unknown_format(self, dataset, tmp_path):
        _, ds = dataset
        with pytest.raises(ValueError):
            emit_dataset(ds, tmp_path / "ds.bin", format="parquet")


class TestIoFailure:
    def test_unwritable_path(self, dataset, tmp_path):
        _, ds = dataset
        blocker = tmp_path / "blocked"
        blocker.write_text("in the way", encoding="utf-8")
        with pytest.raises(IoFailure):
            emit_dataset(ds, blocker / "ds.jsonl")

    def test_unreadable_load(self, tmp_path):
        with pytest.raises(IoFailure):
            load_dataset_lines(tmp_path / "missing.jsonl")
