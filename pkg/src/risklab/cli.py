"""Headless command-line wrappers over the toolkit operations.

Every subcommand reads files, runs one pipeline stage, and prints
machine-readable JSON (or CSV for heat maps) to standard output.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .corpus import load_events, save_rejections
from .detector import NegativeSampling, detect_candidates, load_decisions, run_iteration
from .forest import ForestParams
from .geomap import count_occurrences, export_heatmap, heat_scores
from .kgraph import build_graph, load_default_gazetteer, load_gazetteer, save_graph
from .lexicon import load_lexicon, load_seed_lexicon
from .risknet import compare, extract_network, load_edgelist, save_edgelist


def _read_events(path: str):
    with open(path, "rb") as fh:
        return load_events(fh)


def _read_lexicon(path: str | None):
    if path is None:
        return load_seed_lexicon()
    return load_lexicon(Path(path).read_text("utf-8"))


def _read_gazetteer(path: str | None):
    if path is None:
        return load_default_gazetteer()
    return load_gazetteer(Path(path).read_text("utf-8"))


def _read_decisions(path: str):
    with open(path, "rb") as fh:
        return load_decisions(fh)


def _emit(doc) -> None:
    json.dump(doc, sys.stdout, ensure_ascii=False, sort_keys=True, indent=2)
    sys.stdout.write("\n")


def cmd_load(args) -> int:
    result = _read_events(args.corpus)
    if args.rejects:
        with open(args.rejects, "w", encoding="utf-8") as fh:
            save_rejections(result.rejections, fh)
    _emit(
        {
            "events": len(result.events),
            "rejected": [{"line": r.line, "reason": r.reason} for r in result.rejections],
        }
    )
    return 0


def cmd_detect(args) -> int:
    events = _read_events(args.corpus).events
    lexicon = _read_lexicon(args.lexicon)
    detection = detect_candidates(events, lexicon)
    doc = detection.summary()
    if args.per_event:
        doc["per_event"] = {
            str(eid): sorted([r, t] for r, t in detection.candidate_tags(eid))
            for eid in detection.candidate_ids
        }
    _emit(doc)
    return 0


def cmd_iterate(args) -> int:
    events = _read_events(args.corpus).events
    lexicon = _read_lexicon(args.lexicon)
    decisions = _read_decisions(args.decisions)
    params = ForestParams(
        n_trees=args.trees,
        max_depth=args.max_depth,
        features_per_split=args.features_per_split,
        bootstrap=not args.no_bootstrap,
    )
    _proposals, report = run_iteration(
        events,
        lexicon,
        decisions,
        params=params,
        seed=args.seed,
        policy=NegativeSampling(ratio=args.negative_ratio),
        a=args.top_a,
        iteration=args.iteration,
    )
    _emit(report.to_json())
    return 0


def cmd_graph(args) -> int:
    events = _read_events(args.corpus).events
    decisions = _read_decisions(args.decisions)
    gazetteer = _read_gazetteer(args.gazetteer)
    graph = build_graph(events, decisions, gazetteer)
    sys.stdout.write(save_graph(graph) + "\n")
    return 0


def cmd_network(args) -> int:
    events = _read_events(args.corpus).events
    decisions = _read_decisions(args.decisions)
    gazetteer = _read_gazetteer(args.gazetteer)
    net = extract_network(build_graph(events, decisions, gazetteer))
    if args.edgelist:
        with open(args.edgelist, "w", encoding="utf-8") as fh:
            save_edgelist(net, fh)
    _emit(net.to_json())
    return 0


def cmd_compare(args) -> int:
    a = load_edgelist(Path(args.a).read_text("utf-8"))
    b = load_edgelist(Path(args.b).read_text("utf-8"))
    _emit(compare(a, b).to_json())
    return 0


def cmd_heatmap(args) -> int:
    events = _read_events(args.corpus).events
    decisions = _read_decisions(args.decisions)
    gazetteer = _read_gazetteer(args.gazetteer)
    counts = count_occurrences(build_graph(events, decisions, gazetteer))
    payload = export_heatmap(counts, heat_scores(counts), format=args.format)
    sys.stdout.buffer.write(payload)
    if not payload.endswith(b"\n"):
        sys.stdout.buffer.write(b"\n")
    return 0


def cmd_serve(args) -> int:
    from .annotator import load_config, serve

    config = load_config(args.config)
    serve(config)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="risklab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("load", help="validate an event file, report rejects")
    p.add_argument("--corpus", required=True)
    p.add_argument("--rejects", help="write the rejection report to this JSONL file")
    p.set_defaults(func=cmd_load)

    p = sub.add_parser("detect", help="partition events into candidates and filtered-out")
    p.add_argument("--corpus", required=True)
    p.add_argument("--lexicon", help="lexicon JSON (defaults to the shipped seed)")
    p.add_argument("--per-event", action="store_true", help="include per-event candidate tags")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("iterate", help="run one keyword-learning iteration")
    p.add_argument("--corpus", required=True)
    p.add_argument("--lexicon")
    p.add_argument("--decisions", required=True, help="decisions JSONL file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--iteration", type=int, default=1)
    p.add_argument("--trees", type=int, default=100)
    p.add_argument("--max-depth", type=int, default=None)
    p.add_argument("--features-per-split", type=int, default=None)
    p.add_argument("--no-bootstrap", action="store_true")
    p.add_argument("--negative-ratio", type=float, default=1.0)
    p.add_argument("--top-a", type=int, default=5)
    p.set_defaults(func=cmd_iterate)

    p = sub.add_parser("graph", help="build the knowledge graph from accepted labels")
    p.add_argument("--corpus", required=True)
    p.add_argument("--decisions", required=True)
    p.add_argument("--gazetteer", help="entity,country CSV (defaults to the shipped starter)")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("network", help="extract the risk co-occurrence network")
    p.add_argument("--corpus", required=True)
    p.add_argument("--decisions", required=True)
    p.add_argument("--gazetteer")
    p.add_argument("--edgelist", help="also save the edge list CSV here")
    p.set_defaults(func=cmd_network)

    p = sub.add_parser("compare", help="compare two risk-network edge lists")
    p.add_argument("--a", required=True, help="edge-list CSV of network A")
    p.add_argument("--b", required=True, help="edge-list CSV of network B")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("heatmap", help="export per-country heat scores")
    p.add_argument("--corpus", required=True)
    p.add_argument("--decisions", required=True)
    p.add_argument("--gazetteer")
    p.add_argument("--format", choices=["csv", "geojson"], default="csv")
    p.set_defaults(func=cmd_heatmap)

    p = sub.add_parser("serve", help="run the annotation service")
    p.add_argument("--config", help="config JSON (RISKLAB_* env vars override)")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
