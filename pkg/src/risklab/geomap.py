"""Per-country risk heat scores: count (category, country) occurrences in
the knowledge graph and log-normalize them to [0, 1].

score(R, L) = ln(count+1) / ln(max_count+1), taken per category, so the
busiest country scores 1.0 and absent countries score 0.0.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import IO

from .kgraph import KnowledgeGraph
from .lexicon import CATEGORIES, category_of

__all__ = [
    "OccurrenceTable",
    "HeatScoreTable",
    "count_occurrences",
    "heat_scores",
    "export_heatmap",
    "parse_heatmap_csv",
]


@dataclass
class OccurrenceTable:
    """(category, country) -> occurrence count."""

    counts: dict[tuple[str, str], int] = field(default_factory=dict)

    def __post_init__(self):
        for (category, _country), count in self.counts.items():
            if category not in CATEGORIES:
                raise ValueError(f"unknown risk category {category!r}")
            if count < 0:
                raise ValueError("counts must be non-negative")

    def count(self, category: str, country: str) -> int:
        return self.counts.get((category, country), 0)

    def category_max(self, category: str) -> int:
        values = [c for (cat, _), c in self.counts.items() if cat == category]
        return max(values, default=0)


@dataclass
class HeatScoreTable:
    """(category, country) -> normalized heat score in [0, 1]."""

    scores: dict[tuple[str, str], float] = field(default_factory=dict)

    def score(self, category: str, country: str) -> float:
        return self.scores.get((category, country), 0.0)


def count_occurrences(graph: KnowledgeGraph) -> OccurrenceTable:
    """Each event contributes at most 1 to each (category, country) pair it
    touches, however many same-category risks or same-country entities it
    carries."""
    counts: dict[tuple[str, str], int] = {}
    for event_id in graph.event_ids:
        categories = {category_of(r) for r in graph.in_risk.get(event_id, ())}
        countries = graph.at_location.get(event_id, frozenset())
        for category in categories:
            for country in countries:
                key = (category, country)
                counts[key] = counts.get(key, 0) + 1
    return OccurrenceTable(counts=counts)


def heat_scores(table: OccurrenceTable) -> HeatScoreTable:
    """Log-normalize counts per category; an all-zero category stays 0."""
    scores: dict[tuple[str, str], float] = {}
    maxima = {cat: table.category_max(cat) for cat in CATEGORIES}
    for (category, country), count in table.counts.items():
        cmax = maxima[category]
        if cmax == 0:
            scores[(category, country)] = 0.0
        else:
            scores[(category, country)] = math.log(count + 1) / math.log(cmax + 1)
    return HeatScoreTable(scores=scores)


def export_heatmap(
    counts: OccurrenceTable, scores: HeatScoreTable, format: str = "csv"
) -> bytes:
    """Render the scored table as CSV (category,country,count,score) or as
    a GeoJSON feature collection keyed by country for choropleth joins."""
    if format == "csv":
        out = io.StringIO()
        writer = csv.writer(out)
        writer.writerow(["category", "country", "count", "score"])
        for (category, country) in sorted(scores.scores):
            writer.writerow(
                [category, country, counts.count(category, country), repr(scores.score(category, country))]
            )
        return out.getvalue().encode("utf-8")
    if format == "geojson":
        countries = sorted({country for (_cat, country) in scores.scores})
        features = []
        for country in countries:
            per_cat_counts = {}
            per_cat_scores = {}
            for cat in CATEGORIES:
                if (cat, country) in scores.scores:
                    per_cat_counts[cat] = counts.count(cat, country)
                    per_cat_scores[cat] = scores.score(cat, country)
            features.append(
                {
                    "type": "Feature",
                    "geometry": None,  # the console joins on name to its own basemap
                    "properties": {
                        "country": country,
                        "counts": per_cat_counts,
                        "scores": per_cat_scores,
                    },
                }
            )
        doc = {"type": "FeatureCollection", "features": features}
        return json.dumps(doc, ensure_ascii=False, sort_keys=True).encode("utf-8")
    raise ValueError(f"unsupported heatmap format: {format!r}")


def parse_heatmap_csv(source: IO[bytes] | IO[str] | bytes | str) -> tuple[OccurrenceTable, HeatScoreTable]:
    raw = source if isinstance(source, (str, bytes)) else source.read()
    if isinstance(raw, bytes):
        raw = raw.decode("utf-8")
    counts: dict[tuple[str, str], int] = {}
    scores: dict[tuple[str, str], float] = {}
    reader = csv.reader(io.StringIO(raw))
    header = next(reader, None)
    if header != ["category", "country", "count", "score"]:
        raise ValueError(f"unexpected heatmap CSV header: {header!r}")
    for row in reader:
        if not row:
            continue
        category, country, count, score = row
        counts[(category, country)] = int(count)
        scores[(category, country)] = float(score)
    return OccurrenceTable(counts=counts), HeatScoreTable(scores=scores)
