"""Risk knowledge graph: event, date, location, and risk nodes joined by
at-date-of, at-location-of, prior-to, and in-risk-of edges.

Locations come from the event entity list via a gazetteer (entity ->
country); free-text geoparsing is out of scope. Prior-to holds between two
events of the same story whose dates strictly increase, so per story it is
a strict partial order.
"""
from __future__ import annotations

import csv
import datetime as dt
import io
import json
from dataclasses import dataclass, field
from importlib import resources
from itertools import combinations
from typing import IO, Iterable

from .corpus import Event, EventSet
from .detector import LabelDecision, live_verdicts
from .lexicon import validate_risk_id

__all__ = [
    "Gazetteer",
    "GraphError",
    "KnowledgeGraph",
    "load_gazetteer",
    "load_default_gazetteer",
    "canonical_countries",
    "resolve_locations",
    "build_graph",
    "prior_pairs",
    "save_graph",
    "load_graph",
]


class GraphError(ValueError):
    pass


def canonical_countries() -> frozenset[str]:
    text = resources.files("risklab.data").joinpath("countries.txt").read_text("utf-8")
    return frozenset(line.strip() for line in text.splitlines() if line.strip())


class Gazetteer:
    """Case-insensitive entity -> canonical country lookup."""

    def __init__(self, entries: dict[str, str], canonical: frozenset[str] | None = None):
        allowed = canonical if canonical is not None else canonical_countries()
        self._entries: dict[str, str] = {}
        for entity, country in entries.items():
            if country not in allowed:
                raise GraphError(f"country {country!r} is not on the canonical list")
            self._entries[entity.lower()] = country
        self.countries = frozenset(self._entries.values())

    def lookup(self, entity: str) -> str | None:
        return self._entries.get(entity.strip().lower())

    def __len__(self) -> int:
        return len(self._entries)


def load_gazetteer(source: IO[str] | IO[bytes] | str) -> Gazetteer:
    """Parse a two-column ``entity,country`` CSV (header optional)."""
    raw = source if isinstance(source, str) else source.read()
    if isinstance(raw, bytes):
        raw = raw.decode("utf-8")
    entries: dict[str, str] = {}
    for row in csv.reader(io.StringIO(raw)):
        if not row or row[0].startswith("#"):
            continue
        if [c.strip().lower() for c in row[:2]] == ["entity", "country"]:
            continue
        if len(row) < 2:
            raise GraphError(f"gazetteer row needs two columns: {row!r}")
        entries[row[0].strip()] = row[1].strip()
    return Gazetteer(entries)


def load_default_gazetteer() -> Gazetteer:
    """The shipped starter gazetteer: countries, aliases, US states, and a
    handful of frequently reported cities/regions."""
    data = resources.files("risklab.data").joinpath("gazetteer.csv").read_text("utf-8")
    return load_gazetteer(data)


def resolve_locations(event: Event, gazetteer: Gazetteer) -> tuple[set[str], list[str]]:
    """Distinct countries of the event's resolvable entities, plus the
    entities the gazetteer does not know (persons, organizations, ...)."""
    countries: set[str] = set()
    unresolved: list[str] = []
    for entity in event.entities:
        country = gazetteer.lookup(entity)
        if country is None:
            unresolved.append(entity)
        else:
            countries.add(country)
    return countries, unresolved


@dataclass
class KnowledgeGraph:
    """Immutable product of ``build_graph``; every edge kind is explicit.

    ``in_risk`` groups the accepted tags of each event into risk nodes;
    ``prior_to`` holds the strict same-story date order.
    """

    event_dates: dict[int, dt.date] = field(default_factory=dict)
    event_stories: dict[int, str | None] = field(default_factory=dict)
    in_risk: dict[int, frozenset[int]] = field(default_factory=dict)
    at_location: dict[int, frozenset[str]] = field(default_factory=dict)
    prior_to: list[tuple[int, int]] = field(default_factory=list)
    unresolved: dict[int, tuple[str, ...]] = field(default_factory=dict)

    @property
    def event_ids(self) -> list[int]:
        return sorted(self.event_dates)

    @property
    def date_nodes(self) -> set[dt.date]:
        return set(self.event_dates.values())

    @property
    def location_nodes(self) -> set[str]:
        return {loc for locs in self.at_location.values() for loc in locs}

    @property
    def risk_nodes(self) -> set[int]:
        # Only risks with at least one in-risk edge appear.
        return {r for risks in self.in_risk.values() for r in risks}

    def stories(self) -> list[str]:
        return sorted({s for s in self.event_stories.values() if s})

    def to_json(self) -> dict:
        nodes: list[dict] = []
        for e in self.event_ids:
            nodes.append(
                {
                    "type": "event",
                    "id": e,
                    "date": self.event_dates[e].isoformat(),
                    "story": self.event_stories[e],
                }
            )
        nodes += [{"type": "date", "date": d.isoformat()} for d in sorted(self.date_nodes)]
        nodes += [{"type": "location", "name": loc} for loc in sorted(self.location_nodes)]
        nodes += [{"type": "risk", "id": r} for r in sorted(self.risk_nodes)]
        edges: list[dict] = []
        for e in self.event_ids:
            edges.append({"type": "at_date", "event": e, "date": self.event_dates[e].isoformat()})
            for loc in sorted(self.at_location.get(e, ())):
                edges.append({"type": "at_location", "event": e, "location": loc})
            for r in sorted(self.in_risk.get(e, ())):
                edges.append({"type": "in_risk", "event": e, "risk": r})
        for e1, e2 in sorted(self.prior_to):
            edges.append({"type": "prior_to", "earlier": e1, "later": e2})
        return {
            "nodes": nodes,
            "edges": edges,
            "unresolved": {str(e): list(v) for e, v in sorted(self.unresolved.items()) if v},
        }


def build_graph(
    events: EventSet,
    labels: Iterable[LabelDecision],
    gazetteer: Gazetteer,
) -> KnowledgeGraph:
    """Assemble the graph from the accepted labels of an event set.

    ``labels`` may be a full decision history; the latest verdict per
    (event, tag) wins and only accepted ones contribute. Unresolvable
    entities are reported on the graph, never fatal.
    """
    risks_per_event: dict[int, set[int]] = {}
    for (event_id, risk, _tag), dec in live_verdicts(labels).items():
        if dec.verdict != "accepted":
            continue
        if event_id not in events:
            raise GraphError(f"label references unknown event {event_id}")
        risks_per_event.setdefault(event_id, set()).add(validate_risk_id(risk))

    graph = KnowledgeGraph()
    for event_id in sorted(risks_per_event):
        event = events.get(event_id)
        graph.event_dates[event_id] = event.date
        graph.event_stories[event_id] = event.story
        graph.in_risk[event_id] = frozenset(risks_per_event[event_id])
        countries, unresolved = resolve_locations(event, gazetteer)
        graph.at_location[event_id] = frozenset(countries)
        if unresolved:
            graph.unresolved[event_id] = tuple(unresolved)

    by_story: dict[str, list[int]] = {}
    for event_id, story in graph.event_stories.items():
        if story:
            by_story.setdefault(story, []).append(event_id)
    for story_events in by_story.values():
        for e1, e2 in combinations(sorted(story_events), 2):
            d1, d2 = graph.event_dates[e1], graph.event_dates[e2]
            if d1 < d2:
                graph.prior_to.append((e1, e2))
            elif d2 < d1:
                graph.prior_to.append((e2, e1))
            # equal dates: no within-day order is available, so no edge
    graph.prior_to.sort()
    return graph


def prior_pairs(graph: KnowledgeGraph, story: str) -> list[tuple[int, int]]:
    """All prior-to pairs of one story, sorted by (date1, date2, id1, id2)."""
    if story not in set(graph.stories()):
        raise GraphError(f"unknown story: {story!r}")
    members = {e for e, s in graph.event_stories.items() if s == story}
    pairs = [(e1, e2) for e1, e2 in graph.prior_to if e1 in members and e2 in members]
    pairs.sort(key=lambda p: (graph.event_dates[p[0]], graph.event_dates[p[1]], p[0], p[1]))
    return pairs


def save_graph(graph: KnowledgeGraph, sink: IO[str] | None = None) -> str:
    text = json.dumps(graph.to_json(), ensure_ascii=False, sort_keys=True, indent=2)
    if sink is not None:
        sink.write(text)
        return ""
    return text


def load_graph(source: IO[str] | IO[bytes] | str) -> KnowledgeGraph:
    raw = source if isinstance(source, str) else source.read()
    if isinstance(raw, bytes):
        raw = raw.decode("utf-8")
    doc = json.loads(raw)
    graph = KnowledgeGraph()
    for node in doc["nodes"]:
        if node["type"] == "event":
            graph.event_dates[node["id"]] = dt.date.fromisoformat(node["date"])
            graph.event_stories[node["id"]] = node["story"]
    locs: dict[int, set[str]] = {e: set() for e in graph.event_dates}
    risks: dict[int, set[int]] = {e: set() for e in graph.event_dates}
    for edge in doc["edges"]:
        if edge["type"] == "at_location":
            locs[edge["event"]].add(edge["location"])
        elif edge["type"] == "in_risk":
            risks[edge["event"]].add(edge["risk"])
        elif edge["type"] == "prior_to":
            graph.prior_to.append((edge["earlier"], edge["later"]))
    graph.at_location = {e: frozenset(v) for e, v in locs.items()}
    graph.in_risk = {e: frozenset(v) for e, v in risks.items()}
    graph.prior_to.sort()
    graph.unresolved = {int(e): tuple(v) for e, v in doc.get("unresolved", {}).items()}
    return graph
