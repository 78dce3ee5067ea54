"""Risk co-occurrence networks on the 29 risk nodes: extraction from the
knowledge graph, per-category edge and degree statistics, and edge-by-edge
comparison of two networks.

The extraction rule: for every prior-to event pair, connect every unordered
pair of distinct risks drawn from the union of the two events' risk sets.
Networks are undirected and unweighted; provenance records which event
pairs generated each edge.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import IO, Iterable, Mapping

from .kgraph import KnowledgeGraph
from .lexicon import CATEGORIES, CATEGORY_RANGES, N_RISKS, category_of, validate_risk_id

__all__ = [
    "Edge",
    "RiskNetwork",
    "CategoryEdgeStats",
    "CategoryDegreeStats",
    "NetworkComparison",
    "extract_network",
    "adjacency",
    "local_clustering",
    "average_clustering",
    "edge_stats",
    "degree_stats",
    "compare",
    "save_edgelist",
    "load_edgelist",
    "consistency_warnings",
]

Edge = tuple[int, int]  # always stored with a < b

RISK_NODES = tuple(range(1, N_RISKS + 1))


def _edge(a: int, b: int) -> Edge:
    validate_risk_id(a)
    validate_risk_id(b)
    if a == b:
        raise ValueError(f"self-loop on risk {a}")
    return (a, b) if a < b else (b, a)


@dataclass
class RiskNetwork:
    """Undirected, unweighted graph on the 29 risks."""

    edges: frozenset[Edge]
    provenance: dict[Edge, tuple[tuple[int, int], ...]] = field(default_factory=dict)

    @property
    def nodes(self) -> tuple[int, ...]:
        return RISK_NODES

    def __post_init__(self):
        self.edges = frozenset(_edge(*e) for e in self.edges)

    def degree(self, node: int) -> int:
        return sum(1 for a, b in self.edges if node in (a, b))

    def to_json(self) -> dict:
        return {
            "nodes": [
                {"id": r, "category": category_of(r), "degree": self.degree(r)}
                for r in self.nodes
            ],
            "edges": [
                {
                    "a": a,
                    "b": b,
                    "provenance": [list(p) for p in self.provenance.get((a, b), ())],
                }
                for a, b in sorted(self.edges)
            ],
        }


def extract_network(graph: KnowledgeGraph, lone_event_pairs: bool = False) -> RiskNetwork:
    """Extract the risk network from prior-to pairs of the knowledge graph.

    ``lone_event_pairs`` additionally connects risks co-occurring inside a
    single event even when no prior-to pair covers it; off by default (the
    literal pairwise rule).
    """
    provenance: dict[Edge, list[tuple[int, int]]] = {}
    for e1, e2 in graph.prior_to:
        union = set(graph.in_risk.get(e1, ())) | set(graph.in_risk.get(e2, ()))
        for a, b in combinations(sorted(union), 2):
            provenance.setdefault(_edge(a, b), []).append((e1, e2))
    if lone_event_pairs:
        for event_id, risks in graph.in_risk.items():
            for a, b in combinations(sorted(risks), 2):
                provenance.setdefault(_edge(a, b), []).append((event_id, event_id))
    return RiskNetwork(
        edges=frozenset(provenance),
        provenance={e: tuple(p) for e, p in provenance.items()},
    )


# -- statistics ---------------------------------------------------------------


def adjacency(edges: Iterable[tuple], nodes: Iterable) -> dict:
    """Node -> neighbor-set map over an arbitrary undirected edge set."""
    adj: dict = {n: set() for n in nodes}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    return adj


def local_clustering(adj: Mapping, node) -> float:
    """Fraction of the node's neighbor pairs that are themselves adjacent.

    Nodes of degree < 2 contribute 0 by convention.
    """
    neighbors = adj[node]
    k = len(neighbors)
    if k < 2:
        return 0.0
    links = sum(1 for u, v in combinations(sorted(neighbors), 2) if v in adj[u])
    return links / (k * (k - 1) / 2)


def average_clustering(adj: Mapping) -> float:
    if not adj:
        return 0.0
    return sum(local_clustering(adj, n) for n in adj) / len(adj)


@dataclass
class CategoryEdgeStats:
    """Intra/inter edge counts per risk category plus the network total."""

    intra: dict[str, int]
    inter: dict[str, int]
    total_edges: int

    def to_json(self) -> dict:
        return {
            "categories": {
                cat: {"intra": self.intra[cat], "inter": self.inter[cat]} for cat in CATEGORIES
            },
            "total_edges": self.total_edges,
        }


@dataclass
class CategoryDegreeStats:
    """Average degree and average clustering coefficient per category and
    for the whole 29-node network. Exports round to 2 decimals."""

    avg_degree: dict[str, float]
    avg_clustering: dict[str, float]
    whole_degree: float
    whole_clustering: float

    def to_json(self) -> dict:
        return {
            "categories": {
                cat: {
                    "avg_degree": round(self.avg_degree[cat], 2),
                    "avg_clustering": round(self.avg_clustering[cat], 2),
                }
                for cat in CATEGORIES
            },
            "whole": {
                "avg_degree": round(self.whole_degree, 2),
                "avg_clustering": round(self.whole_clustering, 2),
            },
        }


def edge_stats(net: RiskNetwork) -> CategoryEdgeStats:
    intra = {cat: 0 for cat in CATEGORIES}
    inter = {cat: 0 for cat in CATEGORIES}
    for a, b in net.edges:
        ca, cb = category_of(a), category_of(b)
        if ca == cb:
            intra[ca] += 1
        else:
            inter[ca] += 1
            inter[cb] += 1
    stats = CategoryEdgeStats(intra=intra, inter=inter, total_edges=len(net.edges))
    assert sum(intra.values()) + sum(inter.values()) / 2 == stats.total_edges
    return stats


def degree_stats(net: RiskNetwork) -> CategoryDegreeStats:
    adj = adjacency(net.edges, net.nodes)
    degrees = {n: len(adj[n]) for n in net.nodes}
    clustering = {n: local_clustering(adj, n) for n in net.nodes}
    avg_degree: dict[str, float] = {}
    avg_clustering: dict[str, float] = {}
    for cat in CATEGORIES:
        members = list(CATEGORY_RANGES[cat])
        avg_degree[cat] = sum(degrees[n] for n in members) / len(members)
        avg_clustering[cat] = sum(clustering[n] for n in members) / len(members)
    return CategoryDegreeStats(
        avg_degree=avg_degree,
        avg_clustering=avg_clustering,
        whole_degree=sum(degrees.values()) / N_RISKS,
        whole_clustering=sum(clustering.values()) / N_RISKS,
    )


def _row(net: RiskNetwork) -> dict:
    return {"edges": edge_stats(net).to_json(), "degrees": degree_stats(net).to_json()}


@dataclass
class NetworkComparison:
    """Edge partition of two networks plus stats for all five derived
    networks, in table order: common, a_only, a, b_only, b."""

    a: RiskNetwork
    b: RiskNetwork
    common: RiskNetwork
    only_a: RiskNetwork
    only_b: RiskNetwork

    def to_json(self) -> dict:
        return {
            "sizes": {
                "a": len(self.a.edges),
                "b": len(self.b.edges),
                "common": len(self.common.edges),
                "a_only": len(self.only_a.edges),
                "b_only": len(self.only_b.edges),
            },
            "common_edges": sorted(list(e) for e in self.common.edges),
            "a_only_edges": sorted(list(e) for e in self.only_a.edges),
            "b_only_edges": sorted(list(e) for e in self.only_b.edges),
            "rows": {
                "common": _row(self.common),
                "a_only": _row(self.only_a),
                "a": _row(self.a),
                "b_only": _row(self.only_b),
                "b": _row(self.b),
            },
        }


def compare(a: RiskNetwork, b: RiskNetwork) -> NetworkComparison:
    if a.nodes != b.nodes:
        raise ValueError("networks must share the same node set")
    common = a.edges & b.edges
    return NetworkComparison(
        a=a,
        b=b,
        common=RiskNetwork(edges=common),
        only_a=RiskNetwork(edges=a.edges - common),
        only_b=RiskNetwork(edges=b.edges - common),
    )


# -- edge-list files -----------------------------------------------------------


def save_edgelist(net: RiskNetwork, sink: IO[str] | None = None) -> str:
    out = io.StringIO()
    writer = csv.writer(out)
    writer.writerow(["risk_a", "risk_b"])
    for a, b in sorted(net.edges):
        writer.writerow([a, b])
    text = out.getvalue()
    if sink is not None:
        sink.write(text)
        return ""
    return text


def load_edgelist(source: IO[str] | IO[bytes] | str) -> RiskNetwork:
    raw = source if isinstance(source, str) else source.read()
    if isinstance(raw, bytes):
        raw = raw.decode("utf-8")
    edges: set[Edge] = set()
    for row in csv.reader(io.StringIO(raw)):
        if not row or row[0].strip().lower() == "risk_a":
            continue
        edges.add(_edge(int(row[0]), int(row[1])))
    return RiskNetwork(edges=frozenset(edges))


def consistency_warnings(
    intra: Mapping[str, int], inter: Mapping[str, int], total_edges: int
) -> list[str]:
    """Check externally supplied table counts against the edge identity
    sum(intra) + sum(inter)/2 = total. Published tables do not always obey
    it; the caller decides what to do with the warnings."""
    warnings = []
    s_intra = sum(intra.get(cat, 0) for cat in CATEGORIES)
    s_inter = sum(inter.get(cat, 0) for cat in CATEGORIES)
    if s_inter % 2:
        warnings.append(f"inter-edge endpoints sum to odd {s_inter}")
    implied = s_intra + s_inter / 2
    if implied != total_edges:
        warnings.append(
            f"intra/inter counts imply {implied:g} edges but the table claims {total_edges}"
        )
    return warnings


def comparison_to_json(comparison: NetworkComparison) -> str:
    return json.dumps(comparison.to_json(), sort_keys=True, indent=2)
