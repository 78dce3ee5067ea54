import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from risklab.corpus import Event
from risklab.lexicon import (
    CATEGORIES,
    CATEGORY_RANGES,
    KeywordRoot,
    LexiconError,
    MergePair,
    load_lexicon,
    load_seed_lexicon,
    match_keywords,
    merge_pairs,
    remove_keyword,
    save_lexicon,
)

import datetime as dt


def make_event(sentence, event_id=1):
    return Event(id=event_id, sentence=sentence, date=dt.date(2004, 8, 30))


def minimal_doc(tags=()):
    return {
        "risks": [
            {"id": rid, "name": f"risk {rid}", "category": cat}
            for cat, ids in CATEGORY_RANGES.items()
            for rid in ids
        ],
        "tags": list(tags),
    }


class TestSeedLexicon:
    def test_29_risks_in_5_categories(self, seed_lexicon):
        assert len(seed_lexicon.risks) == 29
        sizes = {cat: len(list(ids)) for cat, ids in CATEGORY_RANGES.items()}
        assert [sizes[c] for c in CATEGORIES] == [9, 5, 5, 6, 4]

    def test_table_spot_checks(self, seed_lexicon):
        assert seed_lexicon.tag(1, "commodity bubble").roots() == {"commodit"}
        assert seed_lexicon.tag(13, "earthquake").roots() == {"earthquake", "temblor"}
        assert seed_lexicon.tag(6, "unemployment").roots() == {"employ", "job"}
        assert seed_lexicon.tag(11, "economic loss").roots() == {
            "cost", "loss", "dollar", "usd", "euro", "$", "€",
        }
        # one root feeding two tags of the same risk (4) and shared names
        assert seed_lexicon.tag(4, "oil/gas network failure").roots() == {"pipe"}
        assert seed_lexicon.tag(4, "water supply failure").roots() == {"pipe"}
        assert seed_lexicon.has_tag(14, "urban pollution")
        assert seed_lexicon.has_tag(20, "urban pollution")
        assert seed_lexicon.has_tag(14, "radioactive contamination")
        assert seed_lexicon.has_tag(26, "radioactive contamination")

    def test_risk_24_has_nine_tags(self, seed_lexicon):
        assert sum(1 for t in seed_lexicon.tags if t.risk == 24) == 9

    def test_no_root_keeps_printed_hyphen(self, seed_lexicon):
        for tag in seed_lexicon.tags:
            for kw in tag.keywords:
                assert not kw.root.endswith("-")
                assert kw.root == kw.root.lower()
                assert " " not in kw.root


class TestLoadLexicon:
    def test_unknown_risk_id(self):
        doc = minimal_doc()
        doc["risks"].append({"id": 30, "name": "nope", "category": "technological"})
        with pytest.raises(LexiconError, match="unknown risk id"):
            load_lexicon(doc)

    def test_duplicate_tag(self):
        doc = minimal_doc(
            tags=[
                {"risk": 1, "name": "x", "keywords": [{"root": "a"}]},
                {"risk": 1, "name": "x", "keywords": [{"root": "b"}]},
            ]
        )
        with pytest.raises(LexiconError, match="duplicate tag"):
            load_lexicon(doc)

    def test_empty_keyword(self):
        doc = minimal_doc(tags=[{"risk": 1, "name": "x", "keywords": [{"root": ""}]}])
        with pytest.raises(LexiconError, match="invalid keyword root"):
            load_lexicon(doc)

    def test_empty_tags_section(self):
        lexicon = load_lexicon(minimal_doc())
        assert len(lexicon.risks) == 29
        assert lexicon.tags == []

    def test_missing_risk(self):
        doc = minimal_doc()
        doc["risks"] = doc["risks"][:-1]
        with pytest.raises(LexiconError, match="must cover ids 1..29"):
            load_lexicon(doc)

    def test_category_mismatch(self):
        doc = minimal_doc()
        doc["risks"][0]["category"] = "societal"
        with pytest.raises(LexiconError, match="declares category"):
            load_lexicon(doc)

    def test_save_load_round_trip(self, seed_lexicon):
        again = load_lexicon(save_lexicon(seed_lexicon))
        assert again == seed_lexicon


class TestMergePairs:
    def test_merge_new_root(self, seed_lexicon):
        merged = merge_pairs(
            seed_lexicon, [MergePair(root="shaking", risk=13, tag="earthquake")], iteration=2
        )
        assert merged.tag(13, "earthquake").roots() == {"earthquake", "temblor", "shaking"}
        learned = [k for k in merged.tag(13, "earthquake").keywords if k.root == "shaking"]
        assert learned[0].origin == "learned" and learned[0].iteration == 2
        # original snapshot untouched
        assert seed_lexicon.tag(13, "earthquake").roots() == {"earthquake", "temblor"}

    def test_merge_existing_root_is_idempotent(self, seed_lexicon):
        once = merge_pairs(seed_lexicon, [MergePair(root="temblor", risk=13, tag="earthquake")])
        assert once == seed_lexicon
        twice = merge_pairs(
            merge_pairs(seed_lexicon, [MergePair(root="shaking", risk=13, tag="earthquake")]),
            [MergePair(root="shaking", risk=13, tag="earthquake")],
        )
        assert twice == merge_pairs(
            seed_lexicon, [MergePair(root="shaking", risk=13, tag="earthquake")]
        )

    def test_merge_empty_list_is_identity(self, seed_lexicon):
        assert merge_pairs(seed_lexicon, []) == seed_lexicon

    def test_unknown_tag_requires_declaration(self, seed_lexicon):
        with pytest.raises(LexiconError, match="does not exist"):
            merge_pairs(seed_lexicon, [MergePair(root="x", risk=13, tag="landslip")])
        merged = merge_pairs(
            seed_lexicon, [MergePair(root="landslip", risk=13, tag="landslip", new_tag=True)]
        )
        assert merged.tag(13, "landslip").roots() == {"landslip"}

    def test_remove_keyword(self, seed_lexicon):
        trimmed = remove_keyword(seed_lexicon, 13, "earthquake", "temblor")
        assert trimmed.tag(13, "earthquake").roots() == {"earthquake"}
        with pytest.raises(LexiconError, match="not present"):
            remove_keyword(trimmed, 13, "earthquake", "temblor")


class TestMatchKeywords:
    def test_fig_event_environmental_tags(self, seed_lexicon):
        event = make_event(
            "Tropical Storm Gaston douses Richmond, Virginia, with up to 14 inches of rain, "
            "causing widespread flooding",
            event_id=4359,
        )
        fired = {(m.risk, m.tag) for m in match_keywords(event, seed_lexicon)}
        assert {(10, "storm"), (10, "torrential rain"), (10, "flood")} <= fired

    def test_substring_not_prefix(self, seed_lexicon):
        fired = {(m.risk, m.tag) for m in match_keywords(make_event("Unemployment rises"), seed_lexicon)}
        assert (6, "unemployment") in fired

    def test_shared_root_fires_all_tags(self, seed_lexicon):
        fired = {(m.risk, m.tag) for m in match_keywords(make_event("a pipe burst"), seed_lexicon)}
        assert (4, "oil/gas network failure") in fired
        assert (4, "water supply failure") in fired

    def test_no_match(self, seed_lexicon):
        assert match_keywords(make_event("delegates gather quietly"), seed_lexicon) == set()

    def test_position_is_offset_in_normalized_sentence(self, seed_lexicon):
        event = make_event("A   storm  came")
        matches = {m.root: m.position for m in match_keywords(event, seed_lexicon)}
        assert matches["storm"] == 2  # "a storm came"

    def test_currency_root_matches(self, seed_lexicon):
        fired = {m.root for m in match_keywords(make_event("losses of US$2 billion"), seed_lexicon)}
        assert "$" in fired

    def test_match_set_deterministic(self, fig_events, seed_lexicon):
        for event in fig_events:
            assert match_keywords(event, seed_lexicon) == match_keywords(event, seed_lexicon)


WORDS = st.text(alphabet="abcdefghijklmnopqrstuvwxyz", min_size=1, max_size=8)


@given(
    sentence=st.lists(WORDS, max_size=12).map(" ".join),
    new_roots=st.lists(WORDS.filter(lambda w: len(w) >= 2), max_size=3),
)
def test_merging_only_adds_matches(sentence, new_roots):
    lexicon = load_seed_lexicon()
    event = make_event(sentence or "empty")
    before = match_keywords(event, lexicon)
    merged = merge_pairs(
        lexicon, [MergePair(root=r, risk=13, tag="earthquake") for r in new_roots], iteration=1
    )
    after = match_keywords(event, merged)
    assert before <= after


def test_lexicon_json_keyword_origins(seed_lexicon):
    doc = seed_lexicon.to_json()
    roots = [kw for tag in doc["tags"] for kw in tag["keywords"]]
    assert all(kw["origin"] == "seed" for kw in roots)
    assert json.dumps(doc)  # serializable


def test_keyword_root_validation():
    with pytest.raises(LexiconError):
        KeywordRoot(root="two words")
    with pytest.raises(LexiconError):
        KeywordRoot(root="x", origin="guessed")
