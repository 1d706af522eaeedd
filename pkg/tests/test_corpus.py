import json

import pytest

from talentsearch.corpus import (
    Dictionary,
    MemberProfile,
    Position,
    load_corpus,
    load_dictionaries,
    load_stopwords,
    normalize_text,
    profile_from_record,
    profile_to_record,
    save_corpus,
    save_dictionaries,
    standardize,
    tokenize,
    validate_corpus,
    validate_profile,
)


def test_normalize_text_strips_punctuation_and_case():
    assert normalize_text("  Sr. Software-Engineer!! ") == "sr software engineer"
    assert normalize_text("C++") == "c"
    assert normalize_text("") == ""


def test_tokenize_splits_normalized_words():
    assert tokenize("Senior Data Engineer") == ["senior", "data", "engineer"]
    assert tokenize("   ") == []


def test_dictionary_lookup_normalizes_raw_text():
    d = Dictionary(
        kind="title",
        entries={"software engineer": 1, "swe": 1},
        canonical={1: "Software Engineer"},
    )
    assert d.lookup("Software Engineer") == 1
    assert d.lookup("SWE!") == 1
    assert d.lookup("plumber") is None
    assert d.name(1) == "Software Engineer"


def test_dictionary_weight_is_symmetric_and_defaults_zero():
    d = Dictionary(
        kind="skill",
        entries={},
        canonical={1: "A", 2: "B", 3: "C"},
        similar={1: [(2, 0.8)]},
    )
    assert d.weight(1, 2) == 0.8
    assert d.weight(2, 1) == 0.8
    assert d.weight(1, 3) == 0.0


def test_dictionary_validate_flags_bad_edges():
    d = Dictionary(
        kind="skill",
        entries={"BadVariant": 1},
        canonical={1: "A", 2: "B"},
        similar={1: [(1, 0.5), (9, 2.0)]},
    )
    problems = "\n".join(d.validate())
    assert "not normalized" in problems
    assert "self-edge" in problems
    assert "unknown id 9" in problems
    assert "out of (0, 1]" in problems


def test_standardize_requires_known_kind(dictionaries):
    assert standardize(dictionaries, "skill", "python") is not None
    with pytest.raises(KeyError):
        standardize(dictionaries, "school", "mit")


def test_profile_accessors():
    profile = MemberProfile(
        member_id=1,
        name="A",
        headline="",
        skills=[(3, 10), (7, 0)],
        positions=[
            Position(raw_title="Engineer", start="2018-01", end="2020-01"),
            Position(raw_title="Senior Engineer", start="2020-02"),
        ],
    )
    assert profile.skill_ids() == frozenset({3, 7})
    assert profile.current_position().raw_title == "Senior Engineer"
    assert MemberProfile(member_id=2, name="B", headline="").current_position() is None


def test_validate_profile_catches_violations():
    bad = MemberProfile(
        member_id=1,
        name="A",
        headline="",
        skills=[(3, 10), (3, 2), (-1, -5)],
        positions=[
            Position(raw_title="X", start="2020-13"),
            Position(raw_title="Y", start="2019-01", end="2018-01", seniority=42),
        ],
    )
    problems = "\n".join(validate_profile(bad))
    assert "duplicate skill id 3" in problems
    assert "negative endorsement" in problems
    assert "is not YYYY-MM" in problems
    assert "ends before it starts" in problems
    assert "out of chronological order" in problems
    assert "seniority 42 out of range" in problems


def test_profile_record_round_trip():
    profile = MemberProfile(
        member_id=9,
        name="Ana Ruiz",
        headline="Data things",
        skills=[(1, 4)],
        positions=[
            Position(
                raw_title="Data Engineer",
                start="2019-05",
                end="2022-01",
                title_id=3,
                company_id=2,
                industry_id=1,
                description="pipelines",
                seniority=4,
            )
        ],
        location="Lisbon",
    )
    assert profile_from_record(profile_to_record(profile)) == profile


def test_profile_from_record_rejects_bad_shapes():
    with pytest.raises(ValueError):
        profile_from_record([])
    with pytest.raises(ValueError):
        profile_from_record({"member_id": "x", "name": "A", "headline": ""})
    with pytest.raises(ValueError):
        profile_from_record(
            {"member_id": 1, "name": "A", "headline": "", "skills": [[1]]}
        )
    with pytest.raises(ValueError):
        profile_from_record(
            {"member_id": 1, "name": "A", "headline": "", "positions": [{"start": "2020-01"}]}
        )


def test_load_corpus_skips_bad_lines_and_duplicates(tmp_path):
    path = tmp_path / "corpus.jsonl"
    good = json.dumps({"member_id": 1, "name": "A", "headline": "h"})
    dup = json.dumps({"member_id": 1, "name": "B", "headline": "h"})
    path.write_text(good + "\nnot json\n" + dup + "\n\n", encoding="utf-8")
    corpus = load_corpus(path)
    assert len(corpus) == 1
    assert corpus.get(1).name == "A"
    assert len(corpus.errors) == 2
    assert corpus.errors[0].line_no == 2
    assert "duplicate member_id" in corpus.errors[1].message


def test_corpus_save_load_round_trip(tmp_path, corpus):
    path = tmp_path / "corpus.jsonl"
    save_corpus(corpus, path)
    back = load_corpus(path)
    assert not back.errors
    assert back.member_ids() == corpus.member_ids()
    sample = corpus.member_ids()[::97]
    for member_id in sample:
        assert back.get(member_id) == corpus.get(member_id)


def test_validate_corpus_resolves_all_entities(corpus, dictionaries):
    assert validate_corpus(corpus, dictionaries) == []


def test_validate_corpus_flags_unknown_ids(dictionaries):
    from talentsearch.corpus import Corpus

    bad = Corpus(
        profiles={
            1: MemberProfile(member_id=1, name="A", headline="", skills=[(999999, 1)])
        }
    )
    problems = validate_corpus(bad, dictionaries)
    assert any("unknown skill 999999" in p for p in problems)


def test_bundled_dictionaries_load_and_validate():
    bundled = load_dictionaries()
    assert set(bundled) == {"skill", "title", "company", "industry"}
    for dictionary in bundled.values():
        assert dictionary.validate() == []


def test_dictionaries_directory_round_trip(tmp_path, dictionaries):
    save_dictionaries(dictionaries, tmp_path / "dicts")
    back = load_dictionaries(tmp_path / "dicts")
    for kind in dictionaries:
        assert back[kind].entries == dictionaries[kind].entries
        assert back[kind].canonical == dictionaries[kind].canonical
        assert back[kind].similar == dictionaries[kind].similar


def test_stopwords_lowercase_and_exclude_seniority_words():
    stopwords = load_stopwords()
    assert "the" in stopwords
    assert all(w == w.lower() for w in stopwords)
    assert "senior" not in stopwords
    assert "staff" not in stopwords
