from __future__ import annotations

from importlib import resources

import pytest

from risklab.corpus import load_events
from risklab.detector import LabelDecision
from risklab.kgraph import load_default_gazetteer
from risklab.lexicon import load_seed_lexicon


def pytest_runtest_logreport(report):
    # One visible pass/fail line per acceptance criterion.
    if report.when == "call" and "test_acceptance" in report.nodeid:
        status = "PASS" if report.passed else "FAIL"
        name = report.nodeid.split("::")[-1]
        print(f"\nACCEPTANCE {status}: {name}")


@pytest.fixture(scope="session")
def seed_lexicon():
    return load_seed_lexicon()


@pytest.fixture(scope="session")
def gazetteer():
    return load_default_gazetteer()


@pytest.fixture(scope="session")
def sample_corpus_text() -> str:
    return resources.files("risklab.data").joinpath("sample_events.jsonl").read_text("utf-8")


@pytest.fixture(scope="session")
def fig_events(sample_corpus_text):
    """The three worked hurricane-season events."""
    result = load_events(sample_corpus_text_io(sample_corpus_text))
    assert not result.rejections
    return result.events


def sample_corpus_text_io(text: str):
    import io

    return io.StringIO(text)


def _dec(event, risk, tag, verdict):
    return LabelDecision(
        event=event, risk=risk, tag=tag, verdict=verdict,
        decided_at="2026-01-01T00:00:00+00:00", decided_by="tester",
    )


@pytest.fixture(scope="session")
def fig_decisions():
    """Analyst verdicts matching the worked walkthrough: the trio carries
    risks {10}, {10, 11}, {22}; auto-matcher extras are rejected."""
    return [
        _dec(4359, 10, "storm", "accepted"),
        _dec(4359, 10, "flood", "accepted"),
        _dec(4359, 10, "torrential rain", "rejected"),
        _dec(4359, 8, "energy price shock", "rejected"),
        _dec(4571, 10, "storm", "accepted"),
        _dec(4571, 11, "death", "accepted"),
        _dec(4571, 11, "economic loss", "accepted"),
        _dec(4571, 11, "damage", "rejected"),
        _dec(4622, 22, "evacuation", "accepted"),
    ]
