"""The auto-detection loop: candidate filtering, per-tag training sets from
analyst verdicts, forest training, entropy ranking, and top-a keyword
proposals that feed back into the dictionary.
"""
from __future__ import annotations

import hashlib
import json
import math
import random
from dataclasses import dataclass, field
from importlib import resources
from typing import IO, Iterable, Sequence

import numpy as np

from .corpus import EventSet, bag_of_words
from .forest import FeatureRanking, ForestParams, rank_features, train_forest
from .lexicon import KeywordMatch, Lexicon, match_keywords, validate_risk_id

__all__ = [
    "LabelDecision",
    "InsufficientLabels",
    "DetectionResult",
    "NegativeSampling",
    "TrainingSet",
    "KeywordProposal",
    "IterationReport",
    "load_decisions",
    "save_decisions",
    "live_verdicts",
    "load_stopwords",
    "detect_candidates",
    "build_training",
    "propose_keywords",
    "run_iteration",
]

VERDICTS = ("accepted", "rejected")


@dataclass(frozen=True)
class LabelDecision:
    """One analyst verdict on an (event, tag) candidate."""

    event: int
    risk: int
    tag: str
    verdict: str
    decided_at: str = ""
    decided_by: str = ""

    def __post_init__(self):
        validate_risk_id(self.risk)
        if self.verdict not in VERDICTS:
            raise ValueError(f"verdict must be one of {VERDICTS}, got {self.verdict!r}")

    def to_record(self) -> dict:
        return {
            "event": self.event,
            "risk": self.risk,
            "tag": self.tag,
            "verdict": self.verdict,
            "decided_at": self.decided_at,
            "decided_by": self.decided_by,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "LabelDecision":
        return cls(
            event=rec["event"],
            risk=rec["risk"],
            tag=rec["tag"],
            verdict=rec["verdict"],
            decided_at=rec.get("decided_at", ""),
            decided_by=rec.get("decided_by", ""),
        )


class InsufficientLabels(ValueError):
    """Training cannot proceed: the tag has no positive instances."""


def load_decisions(source: IO[bytes] | IO[str] | str) -> list[LabelDecision]:
    raw = source if isinstance(source, str) else source.read()
    if isinstance(raw, bytes):
        raw = raw.decode("utf-8")
    decisions = []
    for line in raw.splitlines():
        if line.strip():
            decisions.append(LabelDecision.from_record(json.loads(line)))
    return decisions


def save_decisions(decisions: Iterable[LabelDecision], sink: IO[str]) -> None:
    for dec in decisions:
        sink.write(json.dumps(dec.to_record(), ensure_ascii=False) + "\n")


def live_verdicts(decisions: Iterable[LabelDecision]) -> dict[tuple[int, int, str], LabelDecision]:
    """Latest decision per (event, risk, tag); later entries supersede."""
    live: dict[tuple[int, int, str], LabelDecision] = {}
    for dec in decisions:
        live[(dec.event, dec.risk, dec.tag)] = dec
    return live


def load_stopwords() -> frozenset[str]:
    text = resources.files("risklab.data").joinpath("stopwords.txt").read_text("utf-8")
    return frozenset(
        line.strip() for line in text.splitlines() if line.strip() and not line.startswith("#")
    )


STOPWORDS = load_stopwords()


# -- Step 3: candidate detection --------------------------------------------


@dataclass
class DetectionResult:
    """Partition of an event set into keyword candidates and filtered-out."""

    matches: dict[int, list[KeywordMatch]]  # candidate event id -> its matches
    filtered: list[int]  # ids with no keyword match
    n_events: int

    @property
    def candidate_ids(self) -> list[int]:
        return sorted(self.matches)

    @property
    def n_candidates(self) -> int:
        return len(self.matches)

    @property
    def filter_rate(self) -> float:
        return len(self.filtered) / self.n_events if self.n_events else 0.0

    def candidate_tags(self, event_id: int) -> set[tuple[int, str]]:
        return {(m.risk, m.tag) for m in self.matches.get(event_id, [])}

    def summary(self) -> dict:
        return {
            "events": self.n_events,
            "candidates": self.n_candidates,
            "filtered": len(self.filtered),
            "filter_rate": self.filter_rate,
        }


def detect_candidates(events: EventSet, lexicon: Lexicon) -> DetectionResult:
    """An event is a candidate iff at least one keyword root fires on it."""
    matches: dict[int, list[KeywordMatch]] = {}
    filtered: list[int] = []
    for event in events:
        found = match_keywords(event, lexicon)
        if found:
            matches[event.id] = sorted(found)
        else:
            filtered.append(event.id)
    return DetectionResult(matches=matches, filtered=filtered, n_events=len(events))


# -- Steps 4-5: training sets ------------------------------------------------


@dataclass(frozen=True)
class NegativeSampling:
    """How many never-matched events to draw into B-: up to ratio*|B+|.

    ratio=0 disables sampling; ratio=math.inf takes the whole pool (the
    literal everything-else-is-negative reading).
    """

    ratio: float = 1.0

    def sample_size(self, n_positives: int, pool_size: int) -> int:
        if math.isinf(self.ratio):
            return pool_size
        return min(pool_size, math.floor(self.ratio * n_positives))


@dataclass
class TrainingSet:
    """Per-tag positive/negative bags plus their shared vocabulary."""

    tag: tuple[int, str]
    pos_ids: list[int]
    neg_ids: list[int]
    positives: list[dict[str, int]]
    negatives: list[dict[str, int]]
    vocabulary: list[str] = field(default_factory=list)

    def __post_init__(self):
        overlap = set(self.pos_ids) & set(self.neg_ids)
        if overlap:
            raise ValueError(f"events on both sides of the training set: {sorted(overlap)}")
        if not self.vocabulary:
            words: set[str] = set()
            for bag in self.positives + self.negatives:
                words.update(bag)
            self.vocabulary = sorted(words)

    def design_matrix(self) -> tuple[np.ndarray, np.ndarray]:
        """Dense (samples x vocabulary) count matrix and 0/1 labels."""
        index = {w: i for i, w in enumerate(self.vocabulary)}
        bags = self.positives + self.negatives
        X = np.zeros((len(bags), len(self.vocabulary)), dtype=np.int64)
        for r, bag in enumerate(bags):
            for word, count in bag.items():
                X[r, index[word]] = count
        y = np.array([1] * len(self.positives) + [0] * len(self.negatives), dtype=np.int64)
        return X, y


def build_training(
    tag: tuple[int, str],
    decisions: Iterable[LabelDecision],
    events: EventSet,
    policy: NegativeSampling = NegativeSampling(),
    seed: int = 0,
    unmatched: Sequence[int] = (),
) -> TrainingSet:
    """Assemble B+ and B- for one tag from analyst decisions.

    B+ holds bags of events accepted for the tag; B- holds bags of rejected
    events plus a seeded sample of ``unmatched`` (events no keyword fired
    on, hence trivially negative). Raises InsufficientLabels when there are
    no positives.
    """
    risk, name = tag
    pos_ids: list[int] = []
    neg_ids: list[int] = []
    for (event_id, dec_risk, dec_tag), dec in sorted(live_verdicts(decisions).items()):
        if (dec_risk, dec_tag) != (risk, name):
            continue
        if event_id not in events:
            raise KeyError(f"decision references unknown event {event_id}")
        (pos_ids if dec.verdict == "accepted" else neg_ids).append(event_id)
    if not pos_ids:
        raise InsufficientLabels(f"no accepted events for tag {name!r} (risk {risk})")

    decided = set(pos_ids) | set(neg_ids)
    pool = sorted(e for e in unmatched if e in events and e not in decided)
    want = policy.sample_size(len(pos_ids), len(pool))
    if want:
        neg_ids = neg_ids + sorted(random.Random(seed).sample(pool, want))

    return TrainingSet(
        tag=tag,
        pos_ids=pos_ids,
        neg_ids=neg_ids,
        positives=[bag_of_words(events.get(e).sentence) for e in pos_ids],
        negatives=[bag_of_words(events.get(e).sentence) for e in neg_ids],
    )


# -- Step 6: proposals --------------------------------------------------------


@dataclass
class KeywordProposal:
    """Top-a ranked words worth promoting to keyword roots of one tag."""

    tag: tuple[int, str]
    candidates: list[str]
    a: int = 5


def propose_keywords(
    ranking: FeatureRanking,
    lexicon: Lexicon,
    tag: tuple[int, str],
    a: int = 5,
    stopwords: frozenset[str] = STOPWORDS,
) -> KeywordProposal:
    """Highest-ranked a words that are new to the tag's risk, not stop
    words, and at least two characters long. May return fewer than a."""
    if a < 1:
        raise ValueError("a must be >= 1")
    existing = lexicon.risk_roots(tag[0])
    candidates = []
    for word, _importance in ranking.entries:
        if word in existing or word in stopwords or len(word) < 2:
            continue
        candidates.append(word)
        if len(candidates) == a:
            break
    return KeywordProposal(tag=tag, candidates=candidates, a=a)


# -- the full iteration --------------------------------------------------------


@dataclass
class IterationReport:
    iteration: int
    per_tag: list[dict]
    skipped: list[dict]
    filter_rate: float
    seed: int

    def to_json(self) -> dict:
        return {
            "iteration": self.iteration,
            "per_tag": self.per_tag,
            "skipped": self.skipped,
            "filter_rate": self.filter_rate,
            "seed": self.seed,
        }

    def to_bytes(self) -> bytes:
        return json.dumps(self.to_json(), ensure_ascii=False, sort_keys=True).encode("utf-8")


def _tag_seed(seed: int, risk: int, name: str) -> int:
    # Stable across processes; hash() is salted and unusable here.
    digest = hashlib.sha256(f"{seed}|{risk}|{name}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def run_iteration(
    events: EventSet,
    lexicon: Lexicon,
    decisions: Iterable[LabelDecision],
    params: ForestParams = ForestParams(),
    seed: int = 0,
    policy: NegativeSampling = NegativeSampling(),
    a: int = 5,
    iteration: int = 1,
) -> tuple[list[KeywordProposal], IterationReport]:
    """One pass of the learning loop over every tag with usable labels.

    Tags lacking a positive or a negative instance are skipped and listed
    in the report. The caller terminates the loop by accepting none of the
    proposals.
    """
    decisions = list(decisions)
    detection = detect_candidates(events, lexicon)
    proposals: list[KeywordProposal] = []
    per_tag: list[dict] = []
    skipped: list[dict] = []
    for tag in lexicon.tags:
        key = (tag.risk, tag.name)
        try:
            ts = build_training(
                key,
                decisions,
                events,
                policy=policy,
                seed=_tag_seed(seed, tag.risk, tag.name),
                unmatched=detection.filtered,
            )
        except InsufficientLabels:
            skipped.append({"risk": tag.risk, "tag": tag.name, "reason": "no positives"})
            continue
        if not ts.negatives:
            skipped.append({"risk": tag.risk, "tag": tag.name, "reason": "no negatives"})
            continue
        model = train_forest(ts, params, seed=_tag_seed(seed, tag.risk, tag.name))
        ranking = rank_features(model, ts)
        proposal = propose_keywords(ranking, lexicon, key, a=a)
        proposals.append(proposal)
        importances = dict(ranking.entries)
        per_tag.append(
            {
                "risk": tag.risk,
                "tag": tag.name,
                "n_pos": len(ts.positives),
                "n_neg": len(ts.negatives),
                "proposals": proposal.candidates,
                "importances": {w: importances[w] for w in proposal.candidates},
            }
        )
    report = IterationReport(
        iteration=iteration,
        per_tag=per_tag,
        skipped=skipped,
        filter_rate=detection.filter_rate,
        seed=seed,
    )
    return proposals, report
