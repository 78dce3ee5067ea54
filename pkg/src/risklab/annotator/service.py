"""HTTP annotation service: candidate queues, decisions, learning-loop
iterations, keyword promotion, and read access to the network and heat-map
views of the current session.

State is event-sourced: the audit log is written before any mutation is
acknowledged, and a restarted service replays it to the identical session.
Mutations are serialized through one lock; reads see immutable snapshots.
"""
from __future__ import annotations

import threading
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

from fastapi import Depends, FastAPI, HTTPException, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from ..corpus import EventSet, load_events
from ..detector import (
    LabelDecision,
    NegativeSampling,
    VERDICTS,
    detect_candidates,
    run_iteration,
)
from ..forest import ForestParams
from ..geomap import count_occurrences, export_heatmap, heat_scores
from ..kgraph import Gazetteer, build_graph, load_default_gazetteer, load_gazetteer
from ..lexicon import Lexicon, MergePair, category_of, load_lexicon, load_seed_lexicon, merge_pairs
from ..risknet import compare, extract_network, load_edgelist
from .config import ServiceConfig
from .store import AuditLog

__all__ = ["SessionState", "create_app", "serve"]


class ConflictError(Exception):
    pass


class UnknownTagError(Exception):
    pass


class SessionState:
    """One analyst session: corpus, lexicon snapshot, decisions, counter."""

    def __init__(self, config: ServiceConfig):
        self.config = config
        if not Path(config.corpus).exists():
            raise FileNotFoundError(f"corpus file not found: {config.corpus}")
        with open(config.corpus, "rb") as fh:
            loaded = load_events(fh)
        self.events: EventSet = loaded.events
        self.load_rejections = loaded.rejections

        if config.lexicon is not None:
            if not Path(config.lexicon).exists():
                raise FileNotFoundError(f"lexicon file not found: {config.lexicon}")
            self.seed_lexicon = load_lexicon(Path(config.lexicon).read_text("utf-8"))
        else:
            self.seed_lexicon = load_seed_lexicon()

        if config.gazetteer is not None:
            if not Path(config.gazetteer).exists():
                raise FileNotFoundError(f"gazetteer file not found: {config.gazetteer}")
            self.gazetteer: Gazetteer = load_gazetteer(Path(config.gazetteer).read_text("utf-8"))
        else:
            self.gazetteer = load_default_gazetteer()

        self.references = dict(config.references)
        self.log = AuditLog(config.state_dir)
        self.lock = threading.Lock()

        self.lexicon: Lexicon = self.seed_lexicon
        self.decisions: list[LabelDecision] = []
        self.iteration = 0
        self._recover()
        self._refresh_detection()

    # -- event sourcing -----------------------------------------------------

    def _recover(self) -> None:
        snapshot = self.log.read_snapshot()
        since = 0
        if snapshot is not None:
            self.lexicon = load_lexicon(snapshot["lexicon"])
            self.decisions = [LabelDecision.from_record(r) for r in snapshot["decisions"]]
            self.iteration = snapshot["iteration"]
            since = snapshot["offset"]
        for entry in self.log.entries(since=since):
            self._apply(entry.kind, entry.payload)

    def _apply(self, kind: str, payload: dict) -> None:
        if kind == "decision":
            self.decisions.append(LabelDecision.from_record(payload))
        elif kind == "keyword":
            self.lexicon = merge_pairs(
                self.lexicon,
                [MergePair(root=payload["root"], risk=payload["risk"], tag=payload["tag"],
                           new_tag=payload.get("new_tag", False))],
                iteration=payload.get("iteration"),
            )
        elif kind == "iteration":
            self.iteration = payload["iteration"]

    def _record(self, kind: str, payload: dict) -> None:
        self.log.append(kind, payload)
        self._apply(kind, payload)
        if len(self.log) % self.config.snapshot_every == 0:
            self.log.write_snapshot(
                {
                    "offset": len(self.log),
                    "iteration": self.iteration,
                    "lexicon": self.lexicon.to_json(),
                    "decisions": [d.to_record() for d in self.decisions],
                }
            )

    def _refresh_detection(self) -> None:
        self.detection = detect_candidates(self.events, self.lexicon)

    # -- queue ----------------------------------------------------------------

    def _live(self) -> dict:
        live = {}
        for dec in self.decisions:
            live[(dec.event, dec.risk, dec.tag)] = dec
        return live

    def queue_items(self, status: Optional[str] = None, limit: Optional[int] = None) -> list[dict]:
        live = self._live()
        items = []
        for event_id in self.detection.candidate_ids:
            event = self.events.get(event_id)
            by_tag: dict[tuple[int, str], list] = {}
            for match in self.detection.matches[event_id]:
                by_tag.setdefault((match.risk, match.tag), []).append(match)
            for (risk, tag), matches in sorted(by_tag.items()):
                verdict = live.get((event_id, risk, tag))
                item_status = "decided" if verdict else "pending"
                if status and item_status != status:
                    continue
                items.append(
                    {
                        "event": {
                            "id": event.id,
                            "sentence": event.sentence,
                            "date": event.date.isoformat(),
                            "story": event.story,
                        },
                        "risk": risk,
                        "risk_name": self.lexicon.risks[risk],
                        "category": category_of(risk),
                        "tag": tag,
                        "matches": [
                            {"root": m.root, "start": m.position, "end": m.position + len(m.root)}
                            for m in sorted(matches)
                        ],
                        "status": item_status,
                        "verdict": verdict.verdict if verdict else None,
                    }
                )
                if limit is not None and len(items) >= limit:
                    return items
        return items

    # -- mutations --------------------------------------------------------------

    def decide(
        self, event: int, risk: int, tag: str, verdict: str,
        decided_by: str = "analyst", supersede: bool = False,
    ) -> LabelDecision:
        with self.lock:
            if not self.lexicon.has_tag(risk, tag):
                raise UnknownTagError(f"no tag {tag!r} under risk {risk}")
            if event not in self.events or (risk, tag) not in self.detection.candidate_tags(event):
                raise ConflictError(f"no queue item for event {event} and tag {tag!r}")
            if (event, risk, tag) in self._live() and not supersede:
                raise ConflictError(
                    f"event {event} already decided for tag {tag!r}; pass supersede to replace"
                )
            decision = LabelDecision(
                event=event, risk=risk, tag=tag, verdict=verdict,
                decided_at=datetime.now(timezone.utc).isoformat(),
                decided_by=decided_by,
            )
            self._record("decision", decision.to_record())
            return self.decisions[-1]

    def add_keyword(self, risk: int, tag: str, root: str, new_tag: bool = False) -> int:
        """Merge one learned keyword; returns how many queue items the new
        root put in front of the analyst."""
        with self.lock:
            if not new_tag and not self.lexicon.has_tag(risk, tag):
                raise UnknownTagError(f"no tag {tag!r} under risk {risk}")
            before = {
                (item["event"]["id"], item["risk"], item["tag"]) for item in self.queue_items()
            }
            self._record(
                "keyword",
                {"risk": risk, "tag": tag, "root": root, "new_tag": new_tag,
                 "iteration": self.iteration or None},
            )
            self._refresh_detection()
            after = {
                (item["event"]["id"], item["risk"], item["tag"]) for item in self.queue_items()
            }
            return len(after - before)

    def iterate(self, seed: int = 0, params: dict | None = None,
                negative_ratio: float = 1.0, top_a: int = 5) -> dict:
        with self.lock:
            forest_params = ForestParams.from_json(params or {})
            self._record(
                "iteration",
                {
                    "iteration": self.iteration + 1,
                    "seed": seed,
                    "params": forest_params.to_json(),
                    "negative_ratio": negative_ratio,
                    "top_a": top_a,
                },
            )
            _proposals, report = run_iteration(
                self.events,
                self.lexicon,
                self.decisions,
                params=forest_params,
                seed=seed,
                policy=NegativeSampling(ratio=negative_ratio),
                a=top_a,
                iteration=self.iteration,
            )
            return report.to_json()

    # -- read views ----------------------------------------------------------------

    def graph(self):
        return build_graph(self.events, self.decisions, self.gazetteer)

    def network_json(self) -> dict:
        return extract_network(self.graph()).to_json()

    def network_comparison(self, ref: str) -> dict:
        if ref not in self.references:
            raise UnknownTagError(f"unknown reference network {ref!r}")
        reference = load_edgelist(Path(self.references[ref]).read_text("utf-8"))
        ours = extract_network(self.graph())
        return compare(reference, ours).to_json()

    def heatmap(self, format: str) -> bytes:
        counts = count_occurrences(self.graph())
        return export_heatmap(counts, heat_scores(counts), format=format)

    def session_info(self) -> dict:
        live = self._live()
        pending = sum(1 for item in self.queue_items() if item["status"] == "pending")
        return {
            "iteration": self.iteration,
            "events": len(self.events),
            "candidates": self.detection.n_candidates,
            "filtered": len(self.detection.filtered),
            "filter_rate": self.detection.filter_rate,
            "decisions": len(live),
            "pending_items": pending,
            "log_offset": len(self.log),
        }


# -- HTTP layer --------------------------------------------------------------------


class DecisionIn(BaseModel):
    event: int
    risk: int
    tag: str
    verdict: str
    decided_by: str = "analyst"
    supersede: bool = False


class KeywordIn(BaseModel):
    risk: int
    tag: str
    root: str
    new_tag: bool = False


class IterationIn(BaseModel):
    seed: int = 0
    params: dict = Field(default_factory=dict)
    negative_ratio: float = 1.0
    top_a: int = 5


def create_app(config: ServiceConfig) -> FastAPI:
    state = SessionState(config)
    app = FastAPI(title="risklab annotator", version="0.1.0")
    app.state.session = state

    def check_token(request: Request) -> None:
        if config.token is None:
            return
        supplied = request.headers.get("x-auth-token")
        auth = request.headers.get("authorization", "")
        if auth.startswith("Bearer "):
            supplied = supplied or auth[len("Bearer "):]
        if supplied != config.token:
            raise HTTPException(status_code=401, detail="invalid or missing token")

    guarded = [Depends(check_token)]

    @app.exception_handler(RequestValidationError)
    async def malformed_body(_request, exc):
        return JSONResponse(status_code=400, content={"detail": exc.errors()})

    @app.get("/health", dependencies=guarded)
    def health() -> dict:
        return {"status": "ok"}

    @app.get("/session", dependencies=guarded)
    def session() -> dict:
        return state.session_info()

    @app.get("/queue", dependencies=guarded)
    def queue(status: Optional[str] = None, limit: Optional[int] = None) -> dict:
        if status not in (None, "pending", "decided"):
            raise HTTPException(status_code=400, detail="status must be pending or decided")
        return {"items": state.queue_items(status=status, limit=limit),
                "stats": state.detection.summary()}

    @app.post("/decisions", dependencies=guarded)
    def post_decision(body: DecisionIn) -> dict:
        if body.verdict not in VERDICTS:
            raise HTTPException(status_code=400, detail=f"verdict must be one of {VERDICTS}")
        try:
            decision = state.decide(
                body.event, body.risk, body.tag, body.verdict,
                decided_by=body.decided_by, supersede=body.supersede,
            )
        except UnknownTagError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except ConflictError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        return decision.to_record()

    @app.post("/iterations", dependencies=guarded)
    def post_iteration(body: IterationIn) -> dict:
        try:
            return state.iterate(
                seed=body.seed, params=body.params,
                negative_ratio=body.negative_ratio, top_a=body.top_a,
            )
        except (ValueError, TypeError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))

    @app.post("/keywords", dependencies=guarded)
    def post_keyword(body: KeywordIn) -> dict:
        try:
            newly_queued = state.add_keyword(body.risk, body.tag, body.root, body.new_tag)
        except UnknownTagError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return {"risk": body.risk, "tag": body.tag, "root": body.root,
                "newly_queued": newly_queued}

    @app.get("/network", dependencies=guarded)
    def network() -> dict:
        return state.network_json()

    @app.get("/network/compare", dependencies=guarded)
    def network_compare(ref: str) -> dict:
        try:
            return state.network_comparison(ref)
        except UnknownTagError as exc:
            raise HTTPException(status_code=404, detail=str(exc))

    @app.get("/heatmap", dependencies=guarded)
    def heatmap(format: str = "csv") -> Response:
        try:
            payload = state.heatmap(format)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        media = "text/csv" if format == "csv" else "application/geo+json"
        return Response(content=payload, media_type=media)

    @app.get("/audit", dependencies=guarded)
    def audit(since: int = 0) -> dict:
        return {"entries": [e.to_record() for e in state.log.entries(since=since)]}

    return app


def serve(config: ServiceConfig) -> None:
    """Run the service until interrupted."""
    import uvicorn

    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
