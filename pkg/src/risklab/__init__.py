"""risklab: label news events with global-risk tags through a
human-in-the-loop keyword-learning loop, assemble a risk knowledge graph,
extract and compare risk co-occurrence networks, and score per-country
risk heat.
"""

from .corpus import Event, EventSet, bag_of_words, load_events, tokenize
from .detector import (
    LabelDecision,
    NegativeSampling,
    detect_candidates,
    build_training,
    propose_keywords,
    run_iteration,
)
from .forest import ForestParams, rank_features, train_forest
from .geomap import count_occurrences, export_heatmap, heat_scores
from .kgraph import Gazetteer, build_graph, load_default_gazetteer, prior_pairs, resolve_locations
from .lexicon import Lexicon, MergePair, load_lexicon, load_seed_lexicon, match_keywords, merge_pairs
from .risknet import RiskNetwork, compare, degree_stats, edge_stats, extract_network

__version__ = "0.1.0"

__all__ = [
    "Event",
    "EventSet",
    "Gazetteer",
    "ForestParams",
    "LabelDecision",
    "Lexicon",
    "MergePair",
    "NegativeSampling",
    "RiskNetwork",
    "bag_of_words",
    "build_graph",
    "build_training",
    "compare",
    "count_occurrences",
    "degree_stats",
    "detect_candidates",
    "edge_stats",
    "export_heatmap",
    "extract_network",
    "heat_scores",
    "load_default_gazetteer",
    "load_events",
    "load_lexicon",
    "load_seed_lexicon",
    "match_keywords",
    "merge_pairs",
    "prior_pairs",
    "propose_keywords",
    "rank_features",
    "resolve_locations",
    "run_iteration",
    "tokenize",
    "train_forest",
]
