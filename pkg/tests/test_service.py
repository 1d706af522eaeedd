"""HTTP service: search, refresh, suggestions, member lookup, snapshots."""

import numpy as np
import pytest
from fastapi.testclient import TestClient

from talentsearch.features import FEATURE_NAMES
from talentsearch.ltr import LinearModel
from talentsearch.query_builder import QueryConfig
from talentsearch.service import build_snapshot, create_app

CAPS = {
    "skill": QueryConfig.max_skills,
    "title": QueryConfig.max_titles,
    "company": QueryConfig.max_companies,
    "industry": QueryConfig.max_industries,
}


@pytest.fixture(scope="module")
def model():
    return LinearModel(
        feature_names=FEATURE_NAMES, weights=np.ones(len(FEATURE_NAMES))
    )


@pytest.fixture(scope="module")
def snapshot(corpus, dictionaries, expertise, index, priors, model):
    return build_snapshot(
        corpus, dictionaries, expertise, model, priors=priors, index=index
    )


@pytest.fixture(scope="module")
def client(snapshot):
    return TestClient(create_app(snapshot))


@pytest.fixture(scope="module")
def anchor_ids(corpus):
    return corpus.member_ids()[:3]


def search(client, ids, **extra):
    payload = {"ideal_candidate_ids": list(ids)}
    payload.update(extra)
    return client.post("/api/search", json=payload)


# ---------------------------------------------------------------- basics


def test_health_reports_snapshot(client, snapshot, corpus):
    response = client.get("/api/health")
    assert response.status_code == 200
    body = response.json()
    assert body["status"] == "ok"
    assert body["snapshot_version"] == snapshot.version
    assert body["members"] == len(corpus.profiles)


def test_search_returns_ranked_page(client, snapshot, anchor_ids):
    response = search(client, anchor_ids[:1])
    assert response.status_code == 200
    body = response.json()
    assert body["snapshot_version"] == snapshot.version
    assert body["offset"] == 0
    assert body["limit"] == 25
    results = body["results"]
    assert 0 < len(results) <= 25
    assert body["total"] >= len(results)

    scores = [row["score"] for row in results]
    ids = [row["member_id"] for row in results]
    for previous, current in zip(results, results[1:]):
        assert (previous["score"], -previous["member_id"]) >= (
            current["score"],
            -current["member_id"],
        )
    assert anchor_ids[0] not in ids
    assert len(set(ids)) == len(ids)
    for row in results:
        assert set(row) >= {"member_id", "score", "name", "headline", "current_title"}

    facets = body["query"]["facets"]
    assert set(facets) == {"skill", "title", "company", "industry"}
    for kind, entries in facets.items():
        assert len(entries) <= CAPS[kind]
        for entry in entries:
            assert set(entry) == {"id", "score", "name"}
    assert facets["skill"]


def test_search_excludes_every_ideal_candidate(client, anchor_ids):
    response = search(client, anchor_ids, limit=100)
    assert response.status_code == 200
    returned = {row["member_id"] for row in response.json()["results"]}
    assert not returned & set(anchor_ids)


def test_search_pagination_is_disjoint_and_stable(client, anchor_ids):
    full = search(client, anchor_ids[:1], offset=0, limit=20).json()
    first = search(client, anchor_ids[:1], offset=0, limit=10).json()
    second = search(client, anchor_ids[:1], offset=10, limit=10).json()
    first_ids = [row["member_id"] for row in first["results"]]
    second_ids = [row["member_id"] for row in second["results"]]
    assert not set(first_ids) & set(second_ids)
    assert first_ids + second_ids == [row["member_id"] for row in full["results"]]
    assert first["total"] == second["total"] == full["total"]


def test_search_validation_codes(client, anchor_ids):
    assert search(client, []).status_code == 422
    assert search(client, list(anchor_ids) + [anchor_ids[0]]).status_code == 422
    assert search(client, [99999999]).status_code == 404
    assert search(client, anchor_ids[:1], offset=-1).status_code == 422
    assert search(client, anchor_ids[:1], limit=0).status_code == 422
    assert search(client, anchor_ids[:1], limit=101).status_code == 422


# ---------------------------------------------------------------- refresh


def test_refresh_reproduces_search_page(client, anchor_ids):
    original = search(client, anchor_ids[:2]).json()
    response = client.post(
        "/api/refresh",
        json={
            "query": original["query"],
            "ideal_candidate_ids": list(anchor_ids[:2]),
        },
    )
    assert response.status_code == 200
    body = response.json()
    assert body["results"] == original["results"]
    assert body["total"] == original["total"]


def test_refresh_without_candidates_keeps_query(client, anchor_ids):
    original = search(client, anchor_ids[:1]).json()
    response = client.post(
        "/api/refresh", json={"query": original["query"], "ideal_candidate_ids": []}
    )
    assert response.status_code == 200
    body = response.json()
    assert body["total"] > 0
    facets = body["query"]["facets"]
    assert facets == original["query"]["facets"]


def test_refresh_widens_when_a_facet_is_dropped(client, anchor_ids):
    original = search(client, anchor_ids[:1]).json()
    narrowed = {
        "facets": {
            kind: entries if kind == "skill" else []
            for kind, entries in original["query"]["facets"].items()
        }
    }
    response = client.post(
        "/api/refresh",
        json={"query": narrowed, "ideal_candidate_ids": list(anchor_ids[:1])},
    )
    assert response.status_code == 200
    assert response.json()["total"] >= original["total"]


def test_refresh_validation_codes(client, anchor_ids):
    good_query = search(client, anchor_ids[:1]).json()["query"]
    too_many = client.post(
        "/api/refresh",
        json={"query": good_query, "ideal_candidate_ids": [1, 2, 3, 4]},
    )
    assert too_many.status_code == 422
    unknown_kind = client.post(
        "/api/refresh", json={"query": {"facets": {"bogus": []}}}
    )
    assert unknown_kind.status_code == 422
    empty = client.post(
        "/api/refresh",
        json={"query": {"facets": {k: [] for k in ("skill", "title", "company", "industry")}}},
    )
    assert empty.status_code == 422
    malformed = client.post("/api/refresh", json={"query": {"facets": {"skill": [{"id": 1}]}}})
    assert malformed.status_code == 422


# ---------------------------------------------------------------- suggest


def test_suggest_excludes_present_entries(client, anchor_ids):
    query = search(client, anchor_ids[:1]).json()["query"]
    present = [entry["id"] for entry in query["facets"]["skill"]]
    response = client.get(
        "/api/suggest",
        params={"facet": "skill", "skills": ",".join(str(s) for s in present)},
    )
    assert response.status_code == 200
    body = response.json()
    assert body["facet"] == "skill"
    suggested = [entry["id"] for entry in body["suggestions"]]
    assert not set(suggested) & set(present)
    scores = [entry["score"] for entry in body["suggestions"]]
    assert scores == sorted(scores, reverse=True)
    for entry in body["suggestions"]:
        assert entry["name"]


def test_suggest_rejects_unknown_facet(client):
    response = client.get("/api/suggest", params={"facet": "location", "skills": "1"})
    assert response.status_code == 422


def test_suggest_respects_limit(client, anchor_ids):
    query = search(client, anchor_ids[:1]).json()["query"]
    present = ",".join(str(e["id"]) for e in query["facets"]["skill"])
    response = client.get(
        "/api/suggest", params={"facet": "skill", "skills": present, "limit": 2}
    )
    assert len(response.json()["suggestions"]) <= 2


# ---------------------------------------------------------------- members


def test_member_detail_round_trip(client, corpus, anchor_ids):
    profile = corpus.get(anchor_ids[0])
    response = client.get(f"/api/members/{anchor_ids[0]}")
    assert response.status_code == 200
    body = response.json()
    assert body["member_id"] == profile.member_id
    assert body["name"] == profile.name
    assert len(body["skills"]) == len(profile.skills)
    assert len(body["positions"]) == len(profile.positions)
    for entry in body["skills"]:
        assert set(entry) == {"id", "name", "endorsements"}


def test_member_detail_unknown_is_404(client):
    assert client.get("/api/members/99999999").status_code == 404


def test_member_typeahead_finds_by_name(client, corpus, anchor_ids):
    profile = corpus.get(anchor_ids[0])
    needle = profile.name[:6].lower()
    response = client.get("/api/members", params={"q": needle, "limit": 50})
    assert response.status_code == 200
    members = response.json()["members"]
    assert any(hit["member_id"] == profile.member_id for hit in members)
    assert len(members) <= 50


# ---------------------------------------------------------------- snapshots


def test_snapshot_version_tracks_model(corpus, dictionaries, expertise, index, priors, model):
    same = build_snapshot(corpus, dictionaries, expertise, model, priors=priors, index=index)
    other_model = LinearModel(
        feature_names=FEATURE_NAMES, weights=np.full(len(FEATURE_NAMES), 0.5)
    )
    other = build_snapshot(
        corpus, dictionaries, expertise, other_model, priors=priors, index=index
    )
    assert len(same.version) == 16
    assert same.version != other.version


def test_snapshot_swap_is_atomic_and_reversible(
    corpus, dictionaries, expertise, index, priors, model, anchor_ids
):
    app = create_app(
        build_snapshot(corpus, dictionaries, expertise, model, priors=priors, index=index)
    )
    client = TestClient(app)
    before = search(client, anchor_ids[:1]).json()

    doubled = LinearModel(
        feature_names=FEATURE_NAMES, weights=np.full(len(FEATURE_NAMES), 2.0)
    )
    second = build_snapshot(
        corpus, dictionaries, expertise, doubled, priors=priors, index=index
    )
    state = app.state.service
    original = state.snapshot
    state.swap(second)
    swapped = search(client, anchor_ids[:1]).json()
    assert swapped["snapshot_version"] == second.version
    assert swapped["snapshot_version"] != before["snapshot_version"]

    state.swap(original)
    restored = search(client, anchor_ids[:1]).json()
    assert restored == before
