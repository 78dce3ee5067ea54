"""Structured news-event records: JSON-Lines loading, validation, and the
tokenization / bag-of-words primitives the detector trains on.

An event file carries one JSON object per line with fields ``id``,
``sentence``, ``story``, ``category``, ``date``, ``entities``, and
``references``. Records that fail validation land in a rejection report
instead of aborting the load; real crawled corpora contain noise.
"""
from __future__ import annotations

import datetime as dt
import io
import json
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator

__all__ = [
    "Event",
    "EventSet",
    "Rejection",
    "LoadResult",
    "normalize_sentence",
    "tokenize",
    "bag_of_words",
    "load_events",
    "save_events",
    "save_rejections",
]

# Letter/digit runs are tokens; "$" and "€" stand alone because they are
# lexicon keywords; every other character (hyphens included) separates.
_TOKEN_RE = re.compile(r"[^\W_]+|[$€]")

_EVENT_FIELDS = ("id", "sentence", "story", "category", "date", "entities", "references")


def normalize_sentence(text: str) -> str:
    """Collapse whitespace runs to single spaces and strip the ends."""
    return " ".join(text.split())


def tokenize(sentence: str) -> list[str]:
    """Lowercase token list of a sentence. Deterministic; '' -> []."""
    return _TOKEN_RE.findall(sentence.lower())


def bag_of_words(sentence: str) -> dict[str, int]:
    """Word -> count map over ``tokenize(sentence)``.

    The counts always sum to the token count of the sentence.
    """
    return dict(Counter(tokenize(sentence)))


@dataclass(frozen=True)
class Event:
    """One structured news-event record."""

    id: int
    sentence: str
    date: dt.date
    story: str | None = None
    category: str | None = None
    entities: tuple[str, ...] = ()
    references: tuple[str, ...] = ()

    def to_record(self) -> dict:
        return {
            "id": self.id,
            "sentence": self.sentence,
            "story": self.story,
            "category": self.category,
            "date": self.date.isoformat(),
            "entities": list(self.entities),
            "references": list(self.references),
        }


@dataclass(frozen=True)
class Rejection:
    """One rejected input line: where it was and why it was dropped."""

    line: int
    reason: str


class EventSet:
    """Immutable ordered collection of events, indexed by id and by story."""

    def __init__(self, events: Iterable[Event]):
        self._events: tuple[Event, ...] = tuple(events)
        self._by_id: dict[int, Event] = {}
        self._by_story: dict[str, list[Event]] = {}
        for ev in self._events:
            if ev.id in self._by_id:
                raise ValueError(f"duplicate event id {ev.id}")
            self._by_id[ev.id] = ev
            if ev.story:
                self._by_story.setdefault(ev.story, []).append(ev)

    def __len__(self) -> int:
        return len(self._events)

    def __iter__(self) -> Iterator[Event]:
        return iter(self._events)

    def __contains__(self, event_id: int) -> bool:
        return event_id in self._by_id

    def __eq__(self, other: object) -> bool:
        return isinstance(other, EventSet) and self._events == other._events

    def get(self, event_id: int) -> Event:
        return self._by_id[event_id]

    def ids(self) -> list[int]:
        return [ev.id for ev in self._events]

    def story(self, name: str) -> list[Event]:
        """Events belonging to a story, in load order."""
        return list(self._by_story[name])

    def stories(self) -> list[str]:
        return list(self._by_story)


@dataclass
class LoadResult:
    events: EventSet
    rejections: list[Rejection] = field(default_factory=list)


def _parse_record(obj: dict) -> Event:
    if not isinstance(obj, dict):
        raise ValueError("record is not a JSON object")
    unknown = set(obj) - set(_EVENT_FIELDS)
    if unknown:
        raise ValueError(f"unknown fields: {sorted(unknown)}")

    event_id = obj.get("id")
    if not isinstance(event_id, int) or isinstance(event_id, bool):
        raise ValueError("id must be an integer")

    sentence = obj.get("sentence")
    if not isinstance(sentence, str):
        raise ValueError("sentence must be a string")
    sentence = normalize_sentence(sentence)
    if not sentence:
        raise ValueError("sentence is empty after whitespace normalization")

    raw_date = obj.get("date")
    if not isinstance(raw_date, str):
        raise ValueError("date must be an ISO 8601 string")
    try:
        date = dt.date.fromisoformat(raw_date)
    except ValueError as exc:
        raise ValueError(f"invalid date {raw_date!r}: {exc}") from None

    story = obj.get("story")
    if story is not None and not isinstance(story, str):
        raise ValueError("story must be a string or null")
    category = obj.get("category")
    if category is not None and not isinstance(category, str):
        raise ValueError("category must be a string or null")

    def _string_list(key: str) -> tuple[str, ...]:
        value = obj.get(key, [])
        if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
            raise ValueError(f"{key} must be an array of strings")
        return tuple(value)

    return Event(
        id=event_id,
        sentence=sentence,
        date=date,
        story=story or None,
        category=category or None,
        entities=_string_list("entities"),
        references=_string_list("references"),
    )


def load_events(source: IO[bytes] | IO[str], format: str = "jsonl") -> LoadResult:
    """Load events from a JSON-Lines stream.

    Bad lines (malformed JSON, failed field validation, duplicate ids) are
    collected as :class:`Rejection` entries and the load continues; the
    first record wins on duplicate ids.
    """
    if format != "jsonl":
        raise ValueError(f"unsupported event-file format: {format!r}")
    raw = source.read()
    if isinstance(raw, bytes):
        text = raw.decode("utf-8")
    else:
        text = raw

    events: list[Event] = []
    seen: set[int] = set()
    rejections: list[Rejection] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            rejections.append(Rejection(lineno, f"malformed JSON: {exc.msg}"))
            continue
        try:
            event = _parse_record(obj)
        except ValueError as exc:
            rejections.append(Rejection(lineno, str(exc)))
            continue
        if event.id in seen:
            rejections.append(Rejection(lineno, f"duplicate id {event.id}"))
            continue
        seen.add(event.id)
        events.append(event)
    return LoadResult(EventSet(events), rejections)


def load_events_file(path) -> LoadResult:
    with open(path, "rb") as fh:
        return load_events(fh)


def save_events(events: EventSet, sink: IO[str] | None = None) -> str:
    """Serialize back to JSON-Lines; round-trips through ``load_events``."""
    out = sink or io.StringIO()
    for ev in events:
        out.write(json.dumps(ev.to_record(), ensure_ascii=False) + "\n")
    return out.getvalue() if sink is None else ""


def save_rejections(rejections: Iterable[Rejection], sink: IO[str] | None = None) -> str:
    out = sink or io.StringIO()
    for rej in rejections:
        out.write(json.dumps({"line": rej.line, "reason": rej.reason}) + "\n")
    return out.getvalue() if sink is None else ""
