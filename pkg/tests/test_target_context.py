from __future__ import annotations

import itertools

import pytest

from biasctx import (
    BiasKind,
    Scope,
    build_abta,
    build_all_target_contexts,
    build_ebta,
    collect_target_groups,
)
from biasctx.errors import UnknownTarget
from biasctx.model import SOURCE_ORDER
from biasctx.target_context import per_target_counts

from helpers import build_corpus, synth_corpus


def oracle_pairs(group):
    """Reference enumeration using itertools, straight from the counting rules."""
    abta = []
    for src in SOURCE_ORDER:
        uids = [s.uid for s in group.per_source.get(src, ())]
        if len(uids) == 1:
            abta.append((uids[0],))
        else:
            abta.extend(itertools.combinations(uids, 2))
    ebta = []
    for src_a, src_b in itertools.combinations(SOURCE_ORDER, 2):
        ebta.extend(itertools.product(
            (s.uid for s in group.per_source.get(src_a, ())),
            (s.uid for s in group.per_source.get(src_b, ())),
        ))
    return abta, ebta


class TestFixtureTable:
    """Pair counts for the two-event fixture, checked cell by cell."""

    def test_event_18_cells(self, e18e22):
        counts = self.per_event_target(e18e22, "18")
        assert counts["Benjamin Netanyahu"] == (1, 0)
        assert counts["Barack Obama"] == (11, 5)       # 10 + 1 within, 5x1 across
        assert counts["Secure America Now"] == (2, 4)  # 1 + 1 within, 2x2 across
        assert self.event_totals(e18e22, "18") == (14, 9, 23)

    def test_event_22_cells(self, e18e22):
        counts = self.per_event_target(e18e22, "22")
        assert counts["Hillary Clinton"] == (13, 15)   # 10 + 3 within, 5x3 across
        assert counts["Barack Obama"] == (2, 4)        # 1 + 1 within, 2x2 across
        assert counts["Nancy Pelosi"] == (1, 0)
        assert self.event_totals(e18e22, "22") == (16, 19, 35)

    @staticmethod
    def per_event_target(corpus, event_id):
        examples = [e for e in build_all_target_contexts(corpus, BiasKind.INF)
                    if e.event_id == event_id]
        out = {}
        for target in {e.target for e in examples}:
            mine = [e for e in examples if e.target == target]
            out[target] = (sum(e.scope is Scope.ABTA for e in mine),
                           sum(e.scope is Scope.EBTA for e in mine))
        return out

    @staticmethod
    def event_totals(corpus, event_id):
        examples = [e for e in build_all_target_contexts(corpus, BiasKind.INF)
                    if e.event_id == event_id]
        abta = sum(e.scope is Scope.ABTA for e in examples)
        ebta = sum(e.scope is Scope.EBTA for e in examples)
        return abta, ebta, abta + ebta

    def test_per_target_counts_helper(self, e18e22):
        counts = per_target_counts(build_all_target_contexts(e18e22, BiasKind.INF))
        assert counts["Hillary Clinton"] == {"ABTA": 13, "EBTA": 15, "total": 28}


class TestGrouping:
    def test_sentence_with_two_targets_joins_two_groups(self):
        corpus = build_corpus({("1", "FOX"): [
            ("Two names share this sentence.",
             [("INF", "Avery Cole"), ("INF", "Harbor Trust")]),
        ]})
        groups = collect_target_groups(corpus)
        assert {(g.target, g.kind) for g in groups} == {
            ("Avery Cole", BiasKind.INF), ("Harbor Trust", BiasKind.INF)}

    def test_repeated_annotation_counts_once(self):
        corpus = build_corpus({("1", "FOX"): [
            ("The same target twice, same kind.",
             [("INF", "Avery Cole"), ("INF", "Avery Cole")]),
        ]})
        groups = collect_target_groups(corpus)
        assert len(groups) == 1
        assert groups[0].source_counts() == {SOURCE_ORDER[0]: 1}

    def test_groups_sorted_and_kind_separated(self, e18e22):
        groups = collect_target_groups(e18e22)
        keys = [(g.event_id, g.kind.value, g.target) for g in groups]
        assert keys == sorted(keys)
        assert all(len(set(k)) == 1
                   for g in groups
                   for k in [[s.article_id.split("_")[0] for ss in g.per_source.values()
                              for s in ss]])


class TestAgainstOracle:
    def test_synthetic_groups_match_reference(self):
        corpus = synth_corpus(12, seed=3)
        groups = collect_target_groups(corpus)
        assert groups, "synthetic corpus produced no groups"
        for group in groups:
            want_abta, want_ebta = oracle_pairs(group)
            got_abta = [e.members for e in build_abta(group)]
            got_ebta = [e.members for e in build_ebta(group)]
            assert got_abta == want_abta
            assert got_ebta == want_ebta

    def test_no_duplicate_member_multisets_within_scope(self):
        corpus = synth_corpus(8, seed=11)
        for kind in (BiasKind.INF, BiasKind.LEX):
            examples = build_all_target_contexts(corpus, kind)
            seen = set()
            for ex in examples:
                key = (ex.event_id, ex.target, ex.scope, frozenset(ex.members))
                assert key not in seen
                seen.add(key)

    def test_members_share_event_target_kind(self):
        corpus = synth_corpus(6, seed=5)
        by_uid = {s.uid: s for s in corpus.iter_sentences()}
        for kind in (BiasKind.INF, BiasKind.LEX):
            for ex in build_all_target_contexts(corpus, kind):
                assert len(ex.members) in (1, 2)
                for uid in ex.members:
                    sentence = by_uid[uid]
                    assert any(a.kind == kind and a.target == ex.target
                               for a in sentence.annotations)
                    assert uid.split("_")[0] == ex.event_id


class TestOrdering:
    def test_within_article_lower_index_first(self, e18e22):
        for ex in build_all_target_contexts(e18e22, BiasKind.INF):
            if ex.scope is Scope.ABTA and len(ex.members) == 2:
                a, b = (int(m.split(":")[1]) for m in ex.members)
                assert a < b

    def test_across_articles_source_order(self, e18e22):
        order = {src: i for i, src in enumerate(SOURCE_ORDER)}
        for ex in build_all_target_contexts(e18e22, BiasKind.INF):
            if ex.scope is Scope.EBTA:
                assert order[ex.sources[0]] < order[ex.sources[1]]

    def test_text_is_member_concatenation(self, e18e22):
        by_uid = {s.uid: s.text for s in e18e22.iter_sentences()}
        for ex in build_all_target_contexts(e18e22, BiasKind.INF, separator=" "):
            assert ex.text == " ".join(by_uid[m] for m in ex.members)

    def test_singleton_text_is_sentence_text(self, e18e22):
        by_uid = {s.uid: s.text for s in e18e22.iter_sentences()}
        singletons = [ex for ex in build_all_target_contexts(e18e22, BiasKind.INF)
                      if len(ex.members) == 1]
        assert singletons
        for ex in singletons:
            assert ex.text == by_uid[ex.members[0]]


class TestTargetFilter:
    def test_filter_restricts_output(self, e18e22):
        examples = build_all_target_contexts(
            e18e22, BiasKind.INF, target_filter={"Hillary Clinton"})
        assert {e.target for e in examples} == {"Hillary Clinton"}
        assert len(examples) == 28

    def test_unknown_target_raises(self, e18e22):
        with pytest.raises(UnknownTarget):
            build_all_target_contexts(
                e18e22, BiasKind.INF, target_filter={"Hillary Clinton", "Nobody Here"})

    def test_filter_may_name_other_kind_targets(self, e18e22):
        # a target that only carries LEX annotations is still a known target
        examples = build_all_target_contexts(
            e18e22, BiasKind.LEX, target_filter={"Benjamin Netanyahu"})
        assert len(examples) == 1
