import datetime as dt
import io
import math

import pytest

from risklab.corpus import Event, EventSet
from risklab.detector import (
    InsufficientLabels,
    LabelDecision,
    NegativeSampling,
    STOPWORDS,
    build_training,
    detect_candidates,
    live_verdicts,
    load_decisions,
    propose_keywords,
    run_iteration,
    save_decisions,
)
from risklab.forest import FeatureRanking, ForestParams
from risklab.lexicon import MergePair, merge_pairs


def ev(event_id, sentence, story=None, day=1):
    return Event(id=event_id, sentence=sentence, story=story, date=dt.date(2004, 1, day))


def dec(event, risk, tag, verdict):
    return LabelDecision(event=event, risk=risk, tag=tag, verdict=verdict,
                         decided_at="2026-01-01T00:00:00+00:00", decided_by="t")


# Filler words hand-checked against every seed root: none occurs as a
# substring of any of them and no root occurs inside any of these.
SAFE_FILLER = "delegates gather for annual summit on regional cooperation"


class TestDetectCandidates:
    def test_fig_trio_all_candidates(self, fig_events, seed_lexicon):
        detection = detect_candidates(fig_events, seed_lexicon)
        assert detection.candidate_ids == [4359, 4571, 4622]
        assert detection.filtered == []
        assert detection.filter_rate == 0.0

    def test_no_keyword_corpus_fully_filtered(self, seed_lexicon):
        events = EventSet([ev(i, f"{SAFE_FILLER} {i}") for i in range(10)])
        detection = detect_candidates(events, seed_lexicon)
        assert detection.n_candidates == 0
        assert detection.filter_rate == 1.0

    def test_partition_is_exact(self, fig_events, seed_lexicon):
        detection = detect_candidates(fig_events, seed_lexicon)
        assert sorted(detection.candidate_ids + detection.filtered) == fig_events.ids()

    def test_synthetic_850_of_1000_filtered(self, seed_lexicon):
        events = EventSet(
            [ev(i, f"storm alert over the gulf {i}") for i in range(150)]
            + [ev(i, f"{SAFE_FILLER} {i}") for i in range(150, 1000)]
        )
        detection = detect_candidates(events, seed_lexicon)
        assert detection.n_candidates == 150
        assert len(detection.filtered) == 850
        assert detection.filter_rate == pytest.approx(0.85)


class TestBuildTraining:
    def _events(self):
        return EventSet(
            [
                ev(1, "storm hits the coast", day=1),
                ev(2, "storm floods the valley", day=2),
                ev(3, "storm drill on schedule", day=3),
                ev(4, "storm film wins award", day=4),
                ev(5, "storm parade is colorful", day=5),
                ev(6, SAFE_FILLER + " one", day=6),
                ev(7, SAFE_FILLER + " two", day=7),
                ev(8, SAFE_FILLER + " three", day=8),
            ]
        )

    def _decisions(self):
        return [
            dec(1, 10, "storm", "accepted"),
            dec(2, 10, "storm", "accepted"),
            dec(3, 10, "storm", "rejected"),
            dec(4, 10, "storm", "rejected"),
            dec(5, 10, "storm", "rejected"),
        ]

    def test_counts_without_sampling(self):
        ts = build_training(
            (10, "storm"), self._decisions(), self._events(), policy=NegativeSampling(0.0)
        )
        assert len(ts.positives) == 2
        assert len(ts.negatives) == 3
        assert ts.pos_ids == [1, 2] and ts.neg_ids == [3, 4, 5]

    def test_vocabulary_is_union_of_bags(self):
        ts = build_training(
            (10, "storm"), self._decisions(), self._events(), policy=NegativeSampling(0.0)
        )
        words = set()
        for bag in ts.positives + ts.negatives:
            words.update(bag)
        assert ts.vocabulary == sorted(words)

    def test_negative_sampling_reproducible(self):
        pool = [6, 7, 8]
        first = build_training(
            (10, "storm"), self._decisions(), self._events(),
            policy=NegativeSampling(1.0), seed=99, unmatched=pool,
        )
        second = build_training(
            (10, "storm"), self._decisions(), self._events(),
            policy=NegativeSampling(1.0), seed=99, unmatched=pool,
        )
        assert len(first.negatives) == 3 + 2  # rejected + ratio * |positives|
        assert first.neg_ids == second.neg_ids

    def test_infinite_ratio_takes_whole_pool(self):
        ts = build_training(
            (10, "storm"), self._decisions(), self._events(),
            policy=NegativeSampling(math.inf), seed=0, unmatched=[6, 7, 8],
        )
        assert set(ts.neg_ids) == {3, 4, 5, 6, 7, 8}

    def test_zero_positives_raises(self):
        with pytest.raises(InsufficientLabels):
            build_training((10, "flood"), self._decisions(), self._events())

    def test_supersede_uses_latest_verdict(self):
        decisions = self._decisions() + [dec(1, 10, "storm", "rejected")]
        ts = build_training(
            (10, "storm"), decisions, self._events(), policy=NegativeSampling(0.0)
        )
        assert ts.pos_ids == [2]
        assert 1 in ts.neg_ids

    def test_unknown_event_rejected(self):
        with pytest.raises(KeyError, match="unknown event"):
            build_training((10, "storm"), [dec(99, 10, "storm", "accepted")], self._events())


class TestProposeKeywords:
    def test_filters_existing_stopwords_and_short(self, seed_lexicon):
        ranking = FeatureRanking(
            entries=[("storm", 0.4), ("temblor", 0.3), ("the", 0.2), ("quake", 0.05), ("x", 0.05)]
        )
        proposal = propose_keywords(ranking, seed_lexicon, (13, "earthquake"), a=5)
        # "temblor" already a root of risk 13, "the" is a stop word, "x" too short
        assert proposal.candidates == ["storm", "quake"]

    def test_empty_ranking(self, seed_lexicon):
        proposal = propose_keywords(FeatureRanking([]), seed_lexicon, (13, "earthquake"))
        assert proposal.candidates == []

    def test_a_one_returns_single_top(self, seed_lexicon):
        ranking = FeatureRanking(entries=[("beta", 0.6), ("gamma", 0.4)])
        proposal = propose_keywords(ranking, seed_lexicon, (13, "earthquake"), a=1)
        assert proposal.candidates == ["beta"]

    def test_a_must_be_positive(self, seed_lexicon):
        with pytest.raises(ValueError):
            propose_keywords(FeatureRanking([]), seed_lexicon, (13, "earthquake"), a=0)

    def test_stopword_list_plausible(self):
        assert {"the", "and", "of", "with"} <= STOPWORDS
        assert len(STOPWORDS) >= 140


class TestRunIteration:
    def _corpus(self):
        return EventSet(
            [
                ev(1, "massive earthquake strikes coastal town causing aftershocks", day=1),
                ev(2, "strong earthquake rocks remote villages with aftershocks", day=2),
                ev(3, "earthquake drill scheduled at school", day=3),
                ev(4, "earthquake film wins festival award", day=4),
                ev(5, SAFE_FILLER, day=5),
            ]
        )

    def _decisions(self):
        return [
            dec(1, 13, "earthquake", "accepted"),
            dec(2, 13, "earthquake", "accepted"),
            dec(3, 13, "earthquake", "rejected"),
            dec(4, 13, "earthquake", "rejected"),
        ]

    def test_no_decisions_all_skipped(self, fig_events, seed_lexicon):
        proposals, report = run_iteration(fig_events, seed_lexicon, [])
        assert proposals == []
        assert report.per_tag == []
        assert len(report.skipped) == len(seed_lexicon.tags)
        assert all(s["reason"] == "no positives" for s in report.skipped)

    def test_learned_word_proposed(self, seed_lexicon):
        proposals, report = run_iteration(
            self._corpus(), seed_lexicon, self._decisions(),
            params=ForestParams(n_trees=30), seed=11, policy=NegativeSampling(0.0),
        )
        trained = {(p["risk"], p["tag"]): p for p in report.per_tag}
        assert (13, "earthquake") in trained
        assert trained[(13, "earthquake")]["n_pos"] == 2
        assert trained[(13, "earthquake")]["n_neg"] == 2
        # "aftershocks" separates the accepted events from the rejected ones
        assert "aftershocks" in trained[(13, "earthquake")]["proposals"]

    def test_tags_without_negatives_skipped(self, fig_events, seed_lexicon):
        decisions = [dec(4359, 10, "storm", "accepted"), dec(4571, 10, "storm", "accepted")]
        _, report = run_iteration(
            fig_events, seed_lexicon, decisions, policy=NegativeSampling(0.0)
        )
        skipped = {(s["risk"], s["tag"]): s["reason"] for s in report.skipped}
        assert skipped[(10, "storm")] == "no negatives"
        assert report.per_tag == []

    def test_reports_byte_identical_across_runs(self, seed_lexicon):
        kwargs = dict(
            params=ForestParams(n_trees=20), seed=21, policy=NegativeSampling(1.0), iteration=3
        )
        _, first = run_iteration(self._corpus(), seed_lexicon, self._decisions(), **kwargs)
        _, second = run_iteration(self._corpus(), seed_lexicon, self._decisions(), **kwargs)
        assert first.to_bytes() == second.to_bytes()

    def test_accepting_proposal_never_shrinks_candidates(self, seed_lexicon):
        corpus = self._corpus()
        before = detect_candidates(corpus, seed_lexicon)
        proposals, _ = run_iteration(
            corpus, seed_lexicon, self._decisions(),
            params=ForestParams(n_trees=10), seed=2, policy=NegativeSampling(0.0),
        )
        merged = merge_pairs(
            seed_lexicon,
            [MergePair(root=p.candidates[0], risk=p.tag[0], tag=p.tag[1])
             for p in proposals if p.candidates],
            iteration=1,
        )
        after = detect_candidates(corpus, merged)
        assert set(before.candidate_ids) <= set(after.candidate_ids)
        for eid in before.candidate_ids:
            assert before.candidate_tags(eid) <= after.candidate_tags(eid)


def test_decisions_round_trip():
    decisions = [dec(1, 10, "storm", "accepted"), dec(2, 10, "storm", "rejected")]
    buf = io.StringIO()
    save_decisions(decisions, buf)
    again = load_decisions(buf.getvalue())
    assert again == decisions


def test_live_verdicts_supersede():
    decisions = [dec(1, 10, "storm", "accepted"), dec(1, 10, "storm", "rejected")]
    live = live_verdicts(decisions)
    assert live[(1, 10, "storm")].verdict == "rejected"


def test_verdict_validation():
    with pytest.raises(ValueError, match="verdict"):
        dec(1, 10, "storm", "maybe")
