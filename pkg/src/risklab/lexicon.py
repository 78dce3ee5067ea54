"""The 29-risk taxonomy: tags, keyword roots, dictionary merging, and
substring matching of roots against event sentences.

Matching is case-insensitive substring search over the whitespace-normalized
sentence (an Aho-Corasick automaton over all roots), not token-prefix search:
the root "employ" must fire inside "unemployment" and "commodit" inside
"commodities". False positives such as "march" inside "March" are the
analyst's to reject, not the matcher's to guess.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from importlib import resources
from typing import IO, Iterable

from .corpus import Event, normalize_sentence

__all__ = [
    "CATEGORIES",
    "CATEGORY_RANGES",
    "LexiconError",
    "KeywordRoot",
    "Tag",
    "Lexicon",
    "KeywordMatch",
    "MergePair",
    "category_of",
    "validate_risk_id",
    "load_lexicon",
    "load_seed_lexicon",
    "save_lexicon",
    "merge_pairs",
    "remove_keyword",
    "match_keywords",
]

CATEGORIES = ("economic", "environmental", "geopolitical", "societal", "technological")

# Risk ids are fixed: 1-9 economic, 10-14 environmental, 15-19 geopolitical,
# 20-25 societal, 26-29 technological.
CATEGORY_RANGES = {
    "economic": range(1, 10),
    "environmental": range(10, 15),
    "geopolitical": range(15, 20),
    "societal": range(20, 26),
    "technological": range(26, 30),
}

N_RISKS = 29


class LexiconError(ValueError):
    """Raised for malformed lexicon files or invalid merge requests."""


def validate_risk_id(risk: int) -> int:
    if not isinstance(risk, int) or isinstance(risk, bool) or not 1 <= risk <= N_RISKS:
        raise LexiconError(f"unknown risk id: {risk!r}")
    return risk


def category_of(risk: int) -> str:
    validate_risk_id(risk)
    for cat, ids in CATEGORY_RANGES.items():
        if risk in ids:
            return cat
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class KeywordRoot:
    """A lowercase keyword root (printed trailing hyphens already stripped)."""

    root: str
    origin: str = "seed"  # "seed" or "learned"
    iteration: int | None = None

    def __post_init__(self):
        if not self.root or any(ch.isspace() for ch in self.root):
            raise LexiconError(f"invalid keyword root: {self.root!r}")
        if self.origin not in ("seed", "learned"):
            raise LexiconError(f"invalid keyword origin: {self.origin!r}")


@dataclass(frozen=True)
class Tag:
    """A named sub-phenomenon of one risk, owning keyword roots.

    The same tag name may recur under different risks ("urban pollution"
    lives under risks 14 and 20); within one risk, names are unique.
    """

    risk: int
    name: str
    keywords: tuple[KeywordRoot, ...] = ()

    @property
    def key(self) -> tuple[int, str]:
        return (self.risk, self.name)

    def roots(self) -> set[str]:
        return {kw.root for kw in self.keywords}


class Lexicon:
    """Immutable snapshot of the full taxonomy: 29 risks plus their tags."""

    def __init__(self, risks: dict[int, str], tags: Iterable[Tag]):
        if sorted(risks) != list(range(1, N_RISKS + 1)):
            missing = sorted(set(range(1, N_RISKS + 1)) - set(risks))
            extra = sorted(set(risks) - set(range(1, N_RISKS + 1)))
            raise LexiconError(f"risks must cover ids 1..29 (missing {missing}, unknown {extra})")
        self.risks: dict[int, str] = dict(sorted(risks.items()))
        self._tags: dict[tuple[int, str], Tag] = {}
        for tag in tags:
            validate_risk_id(tag.risk)
            if tag.key in self._tags:
                raise LexiconError(f"duplicate tag {tag.name!r} under risk {tag.risk}")
            self._tags[tag.key] = tag
        self._matcher: _Automaton | None = None

    @property
    def tags(self) -> list[Tag]:
        return sorted(self._tags.values(), key=lambda t: t.key)

    def tag(self, risk: int, name: str) -> Tag:
        return self._tags[(risk, name)]

    def has_tag(self, risk: int, name: str) -> bool:
        return (risk, name) in self._tags

    def risk_roots(self, risk: int) -> set[str]:
        """All keyword roots owned by any tag of the given risk."""
        return {kw.root for tag in self._tags.values() if tag.risk == risk for kw in tag.keywords}

    def root_targets(self) -> dict[str, list[tuple[int, str]]]:
        """root -> tags carrying it (one root may feed several tags)."""
        targets: dict[str, list[tuple[int, str]]] = {}
        for tag in self.tags:
            for kw in tag.keywords:
                targets.setdefault(kw.root, []).append(tag.key)
        return targets

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Lexicon)
            and self.risks == other.risks
            and self._tags == other._tags
        )

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "risks": [
                {"id": rid, "name": name, "category": category_of(rid)}
                for rid, name in self.risks.items()
            ],
            "tags": [
                {
                    "risk": tag.risk,
                    "name": tag.name,
                    "keywords": [
                        {"root": kw.root, "origin": kw.origin}
                        | ({"iteration": kw.iteration} if kw.iteration is not None else {})
                        for kw in tag.keywords
                    ],
                }
                for tag in self.tags
            ],
        }


@dataclass(frozen=True, order=True)
class KeywordMatch:
    """One keyword firing one tag on one event sentence."""

    event: int
    risk: int
    tag: str
    root: str
    position: int  # offset of the match in the normalized sentence


@dataclass(frozen=True)
class MergePair:
    """A (keyword root, tag) pair proposed for dictionary merge."""

    root: str
    risk: int
    tag: str
    new_tag: bool = False  # declare the tag if it does not exist yet


def load_lexicon(source: IO[bytes] | IO[str] | str | dict) -> Lexicon:
    """Parse a lexicon JSON document (stream, string, or parsed dict)."""
    if isinstance(source, dict):
        doc = source
    else:
        raw = source if isinstance(source, str) else source.read()
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
        try:
            doc = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise LexiconError(f"malformed lexicon JSON: {exc.msg}") from None

    if not isinstance(doc, dict) or "risks" not in doc:
        raise LexiconError("lexicon document must carry 'risks' and 'tags'")

    risks: dict[int, str] = {}
    for entry in doc["risks"]:
        rid = entry.get("id")
        validate_risk_id(rid)
        if rid in risks:
            raise LexiconError(f"duplicate risk id {rid}")
        name = entry.get("name")
        if not isinstance(name, str) or not name:
            raise LexiconError(f"risk {rid} needs a display name")
        declared = entry.get("category")
        if declared is not None and declared != category_of(rid):
            raise LexiconError(
                f"risk {rid} declares category {declared!r} but ids {rid} are {category_of(rid)!r}"
            )
        risks[rid] = name

    tags: list[Tag] = []
    for entry in doc.get("tags", []):
        rid = entry.get("risk")
        validate_risk_id(rid)
        name = entry.get("name")
        if not isinstance(name, str) or not name:
            raise LexiconError(f"tag under risk {rid} needs a name")
        keywords = []
        for kw in entry.get("keywords", []):
            keywords.append(
                KeywordRoot(
                    root=kw.get("root", ""),
                    origin=kw.get("origin", "seed"),
                    iteration=kw.get("iteration"),
                )
            )
        tags.append(Tag(risk=rid, name=name, keywords=tuple(keywords)))
    return Lexicon(risks, tags)


def load_seed_lexicon() -> Lexicon:
    """The shipped seed taxonomy (29 risks, 96 tags)."""
    data = resources.files("risklab.data").joinpath("seed_lexicon.json").read_text("utf-8")
    return load_lexicon(data)


def save_lexicon(lexicon: Lexicon, sink: IO[str] | None = None) -> str:
    text = json.dumps(lexicon.to_json(), ensure_ascii=False, indent=2, sort_keys=True)
    if sink is not None:
        sink.write(text)
        return ""
    return text


def merge_pairs(
    lexicon: Lexicon, pairs: Iterable[MergePair], iteration: int | None = None
) -> Lexicon:
    """Merge learned (keyword, tag) pairs into a new lexicon snapshot.

    Idempotent: a root already present on its tag is left untouched (its
    original origin survives), so merging twice equals merging once.
    """
    tags = {tag.key: tag for tag in lexicon.tags}
    for pair in pairs:
        validate_risk_id(pair.risk)
        key = (pair.risk, pair.tag)
        if key not in tags:
            if not pair.new_tag:
                raise LexiconError(
                    f"tag {pair.tag!r} does not exist under risk {pair.risk} "
                    "(set new_tag to declare it)"
                )
            tags[key] = Tag(risk=pair.risk, name=pair.tag)
        tag = tags[key]
        if pair.root in tag.roots():
            continue
        new_kw = KeywordRoot(root=pair.root, origin="learned", iteration=iteration)
        tags[key] = Tag(risk=tag.risk, name=tag.name, keywords=tag.keywords + (new_kw,))
    return Lexicon(lexicon.risks, tags.values())


def remove_keyword(lexicon: Lexicon, risk: int, tag_name: str, root: str) -> Lexicon:
    """Drop one root from one tag. Never invoked automatically."""
    key = (validate_risk_id(risk), tag_name)
    tags = {tag.key: tag for tag in lexicon.tags}
    if key not in tags:
        raise LexiconError(f"tag {tag_name!r} does not exist under risk {risk}")
    tag = tags[key]
    kept = tuple(kw for kw in tag.keywords if kw.root != root)
    if len(kept) == len(tag.keywords):
        raise LexiconError(f"root {root!r} not present on {tag_name!r}")
    tags[key] = Tag(risk=tag.risk, name=tag.name, keywords=kept)
    return Lexicon(lexicon.risks, tags.values())


# -- Aho-Corasick automaton over keyword roots ------------------------------


class _Automaton:
    """Dict-based Aho-Corasick automaton reporting (root, start offset)."""

    def __init__(self, patterns: Iterable[str]):
        self.goto: list[dict[str, int]] = [{}]
        self.fail: list[int] = [0]
        self.out: list[list[str]] = [[]]
        for pat in sorted(set(patterns)):
            self._insert(pat)
        self._link()

    def _insert(self, pattern: str) -> None:
        state = 0
        for ch in pattern:
            nxt = self.goto[state].get(ch)
            if nxt is None:
                nxt = len(self.goto)
                self.goto.append({})
                self.fail.append(0)
                self.out.append([])
                self.goto[state][ch] = nxt
            state = nxt
        self.out[state].append(pattern)

    def _link(self) -> None:
        queue: deque[int] = deque()
        for child in self.goto[0].values():
            queue.append(child)
        while queue:
            state = queue.popleft()
            for ch, child in self.goto[state].items():
                queue.append(child)
                fallback = self.fail[state]
                while fallback and ch not in self.goto[fallback]:
                    fallback = self.fail[fallback]
                self.fail[child] = self.goto[fallback].get(ch, 0)
                if self.fail[child] == child:
                    self.fail[child] = 0
                self.out[child].extend(self.out[self.fail[child]])

    def finditer(self, text: str):
        state = 0
        for pos, ch in enumerate(text):
            while state and ch not in self.goto[state]:
                state = self.fail[state]
            state = self.goto[state].get(ch, 0)
            for pat in self.out[state]:
                yield pat, pos - len(pat) + 1


def _matcher(lexicon: Lexicon) -> _Automaton:
    # Lexicon snapshots are immutable, so the automaton is built once.
    if lexicon._matcher is None:
        lexicon._matcher = _Automaton(lexicon.root_targets())
    return lexicon._matcher


def match_keywords(event: Event, lexicon: Lexicon) -> set[KeywordMatch]:
    """All (tag, keyword) pairs whose root occurs in the event sentence.

    Every tag carrying a fired root is reported ("pipe" fires both the
    oil/gas and the water-supply tag); per (tag, root) the first occurrence
    offset is kept.
    """
    text = normalize_sentence(event.sentence).lower()
    targets = lexicon.root_targets()
    first_hit: dict[str, int] = {}
    for root, pos in _matcher(lexicon).finditer(text):
        if root not in first_hit or pos < first_hit[root]:
            first_hit[root] = pos
    matches: set[KeywordMatch] = set()
    for root, pos in first_hit.items():
        for risk, tag_name in targets[root]:
            matches.add(KeywordMatch(event=event.id, risk=risk, tag=tag_name, root=root, position=pos))
    return matches
