"""Service configuration: JSON file keys with RISKLAB_* environment
overrides."""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

__all__ = ["ServiceConfig", "load_config"]

ENV_PREFIX = "RISKLAB_"


@dataclass
class ServiceConfig:
    corpus: Path
    state_dir: Path
    lexicon: Path | None = None  # defaults to the packaged seed lexicon
    gazetteer: Path | None = None  # defaults to the packaged starter gazetteer
    bind: str = "127.0.0.1:8080"
    token: str | None = None
    references: dict[str, Path] = field(default_factory=dict)
    snapshot_every: int = 100

    @property
    def host(self) -> str:
        return self.bind.rsplit(":", 1)[0]

    @property
    def port(self) -> int:
        return int(self.bind.rsplit(":", 1)[1])


def load_config(path: str | Path | None = None, env: dict | None = None) -> ServiceConfig:
    """Read the config file (if any) and apply environment overrides."""
    env = os.environ if env is None else env
    doc: dict = {}
    if path is not None:
        doc = json.loads(Path(path).read_text("utf-8"))

    def pick(key: str, default=None):
        return env.get(ENV_PREFIX + key.upper(), doc.get(key, default))

    corpus = pick("corpus")
    state_dir = pick("state_dir")
    if not corpus or not state_dir:
        raise ValueError("config requires 'corpus' and 'state_dir'")
    lexicon = pick("lexicon")
    gazetteer = pick("gazetteer")
    references = {name: Path(p) for name, p in doc.get("references", {}).items()}
    return ServiceConfig(
        corpus=Path(corpus),
        state_dir=Path(state_dir),
        lexicon=Path(lexicon) if lexicon else None,
        gazetteer=Path(gazetteer) if gazetteer else None,
        bind=pick("bind", "127.0.0.1:8080"),
        token=pick("token"),
        references=references,
        snapshot_every=int(pick("snapshot_every", 100)),
    )
