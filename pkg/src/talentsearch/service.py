"""HTTP service for the interactive search loop.

Serves query generation, retrieval, ranking, facet suggestions, and
member lookup over an immutable snapshot bundle. Snapshots swap
atomically: every request reads the snapshot reference once, so a
response never mixes two versions.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field as dataclass_field
from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException, Query
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .corpus import Corpus, Dictionaries
from .expertise import ExpertiseMatrix
from .features import FeatureModels, extract_features
from .ltr import LinearModel
from .query_builder import (
    FACET_KINDS,
    QueryConfig,
    QueryContext,
    StructuredQuery,
    build_query,
    suggest_facet_values,
)
from .retrieval import InvertedIndex, build_index, retrieve


@dataclass(frozen=True)
class Snapshot:
    """Immutable bundle of everything a request needs."""

    corpus: Corpus
    dictionaries: Dictionaries
    expertise: ExpertiseMatrix
    index: InvertedIndex
    model: LinearModel
    feature_models: FeatureModels
    query_cfg: QueryConfig
    version: str


def build_snapshot(
    corpus: Corpus,
    dictionaries: Dictionaries,
    expertise: ExpertiseMatrix,
    model: LinearModel,
    priors: dict[int, float] | None = None,
    query_cfg: QueryConfig | None = None,
    index: InvertedIndex | None = None,
) -> Snapshot:
    """Assemble a snapshot and stamp it with a content-derived version."""
    index = index or build_index(corpus)
    feature_models = FeatureModels(dictionaries=dictionaries, priors=priors or {})
    digest = hashlib.sha256()
    digest.update(str(len(corpus.profiles)).encode())
    digest.update(str(index.doc_count).encode())
    digest.update(np.asarray(model.weights).tobytes())
    digest.update(",".join(model.feature_names).encode())
    digest.update(str(expertise.n_cells()).encode())
    return Snapshot(
        corpus=corpus,
        dictionaries=dictionaries,
        expertise=expertise,
        index=index,
        model=model,
        feature_models=feature_models,
        query_cfg=query_cfg or QueryConfig(),
        version=digest.hexdigest()[:16],
    )


class ServiceState:
    """Holds the live snapshot; assignment swaps it atomically."""

    def __init__(self, snapshot: Snapshot):
        self.snapshot = snapshot

    def swap(self, snapshot: Snapshot) -> None:
        self.snapshot = snapshot


def _resolve_candidates(snapshot: Snapshot, member_ids: list[int]) -> QueryContext:
    profiles = []
    for member_id in member_ids:
        profile = snapshot.corpus.get(member_id)
        if profile is None:
            raise HTTPException(status_code=404, detail=f"unknown member {member_id}")
        profiles.append(profile)
    return QueryContext(ideal_candidates=profiles)


def _facet_entry_records(snapshot: Snapshot, query: StructuredQuery) -> dict:
    facets = {}
    for kind in FACET_KINDS:
        dictionary = snapshot.dictionaries[kind]
        facets[kind] = [
            {"id": entity_id, "score": round(score, 6), "name": dictionary.name(entity_id)}
            for entity_id, score in query.facets.get(kind, [])
        ]
    return facets


def _member_facet_ids(profile, kind: str) -> frozenset[int]:
    if kind == "skill":
        return profile.skill_ids()
    ids = set()
    for position in profile.positions:
        value = getattr(position, f"{kind}_id")
        if value is not None:
            ids.add(value)
    return frozenset(ids)


def _result_row(snapshot: Snapshot, member_id: int, score: float, query: StructuredQuery) -> dict:
    profile = snapshot.corpus.get(member_id)
    current = profile.current_position()
    matched = {}
    for kind in FACET_KINDS:
        entry_ids = set(query.entry_ids(kind))
        if not entry_ids:
            continue
        hits = sorted(entry_ids & _member_facet_ids(profile, kind))
        if hits:
            matched[kind] = hits
    return {
        "member_id": member_id,
        "score": round(float(score), 6),
        "name": profile.name,
        "headline": profile.headline,
        "current_title": current.raw_title if current else "",
        "seniority": current.seniority if current else None,
        "location": profile.location,
        "matched": matched,
    }


def _rank_and_page(
    snapshot: Snapshot,
    ctx: QueryContext | None,
    query: StructuredQuery,
    offset: int,
    limit: int,
) -> dict:
    exclude = set(ctx.member_ids()) if ctx is not None else set()
    retrieved = retrieve(snapshot.index, query)
    scored = []
    for member_id in retrieved:
        if member_id in exclude:
            continue
        fv = extract_features(
            ctx,
            query,
            snapshot.corpus.get(member_id),
            snapshot.expertise,
            snapshot.feature_models,
        )
        scored.append((member_id, snapshot.model.score(fv)))
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    page = scored[offset : offset + limit]
    return {
        "query": {"facets": _facet_entry_records(snapshot, query)},
        "results": [_result_row(snapshot, m, s, query) for m, s in page],
        "total": len(scored),
        "offset": offset,
        "limit": limit,
        "snapshot_version": snapshot.version,
    }


def handle_search(
    snapshot: Snapshot, ideal_candidate_ids: list[int], offset: int = 0, limit: int = 25
) -> dict:
    """Generate a query from the ideal candidates and rank the matches."""
    if not 1 <= len(ideal_candidate_ids) <= 3:
        raise HTTPException(status_code=422, detail="expected 1 to 3 ideal candidates")
    ctx = _resolve_candidates(snapshot, ideal_candidate_ids)
    query = build_query(ctx, snapshot.expertise, snapshot.dictionaries, snapshot.query_cfg)
    return _rank_and_page(snapshot, ctx, query, offset, limit)


def handle_refresh(
    snapshot: Snapshot,
    query_record: dict,
    ideal_candidate_ids: list[int],
    offset: int = 0,
    limit: int = 25,
) -> dict:
    """Re-rank with an edited query, keeping the candidate context."""
    if len(ideal_candidate_ids) > 3:
        raise HTTPException(status_code=422, detail="expected at most 3 ideal candidates")
    try:
        query = StructuredQuery.from_record(query_record)
    except (ValueError, KeyError, TypeError) as exc:
        raise HTTPException(status_code=422, detail=f"invalid query: {exc}")
    problems = query.validate()
    if problems:
        raise HTTPException(status_code=422, detail="; ".join(problems))
    if query.is_empty():
        raise HTTPException(status_code=422, detail="query has no facet entries")
    ctx = _resolve_candidates(snapshot, ideal_candidate_ids) if ideal_candidate_ids else None
    return _rank_and_page(snapshot, ctx, query, offset, limit)


def handle_suggest(snapshot: Snapshot, query: StructuredQuery, facet: str, limit: int = 5) -> dict:
    """Related facet values not already present in the query."""
    if facet not in FACET_KINDS:
        raise HTTPException(status_code=422, detail=f"unknown facet kind {facet!r}")
    suggestions = suggest_facet_values(query, facet, snapshot.dictionaries, limit=limit)
    dictionary = snapshot.dictionaries[facet]
    return {
        "facet": facet,
        "suggestions": [
            {"id": entity_id, "score": round(weight, 6), "name": dictionary.name(entity_id)}
            for entity_id, weight in suggestions
        ],
        "snapshot_version": snapshot.version,
    }


def member_record(snapshot: Snapshot, member_id: int) -> dict:
    profile = snapshot.corpus.get(member_id)
    if profile is None:
        raise HTTPException(status_code=404, detail=f"unknown member {member_id}")
    skill_dict = snapshot.dictionaries["skill"]
    company_dict = snapshot.dictionaries["company"]
    industry_dict = snapshot.dictionaries["industry"]
    return {
        "member_id": profile.member_id,
        "name": profile.name,
        "headline": profile.headline,
        "location": profile.location,
        "skills": [
            {"id": sk, "name": skill_dict.name(sk), "endorsements": count}
            for sk, count in profile.skills
        ],
        "positions": [
            {
                "raw_title": p.raw_title,
                "start": p.start,
                "end": p.end,
                "seniority": p.seniority,
                "company": company_dict.name(p.company_id) if p.company_id is not None else None,
                "industry": industry_dict.name(p.industry_id) if p.industry_id is not None else None,
                "description": p.description,
            }
            for p in profile.positions
        ],
    }


def search_members(snapshot: Snapshot, text: str, limit: int = 10) -> list[dict]:
    """Case-insensitive name/headline substring match for typeahead."""
    needle = text.strip().lower()
    if not needle:
        return []
    hits = []
    for member_id in snapshot.corpus.member_ids():
        profile = snapshot.corpus.get(member_id)
        if needle in profile.name.lower() or needle in profile.headline.lower():
            current = profile.current_position()
            hits.append(
                {
                    "member_id": member_id,
                    "name": profile.name,
                    "headline": profile.headline,
                    "current_title": current.raw_title if current else "",
                }
            )
            if len(hits) >= limit:
                break
    return hits


class SearchRequest(BaseModel):
    ideal_candidate_ids: list[int] = Field(min_length=1, max_length=3)
    offset: int = Field(default=0, ge=0)
    limit: int = Field(default=25, ge=1, le=100)


class RefreshRequest(BaseModel):
    query: dict
    ideal_candidate_ids: list[int] = Field(default_factory=list, max_length=3)
    offset: int = Field(default=0, ge=0)
    limit: int = Field(default=25, ge=1, le=100)


def _parse_id_csv(raw: str | None) -> list[tuple[int, float]]:
    if not raw:
        return []
    entries = []
    for chunk in raw.split(","):
        chunk = chunk.strip()
        if chunk:
            entries.append((int(chunk), 1.0))
    return entries


def create_app(snapshot: Snapshot, static_dir: str | Path | None = None) -> FastAPI:
    """Wire the handlers into a web application over a live snapshot."""
    app = FastAPI(title="talentsearch")
    state = ServiceState(snapshot)
    app.state.service = state

    @app.post("/api/search")
    def search(request: SearchRequest) -> dict:
        snap = state.snapshot
        return handle_search(
            snap, request.ideal_candidate_ids, request.offset, request.limit
        )

    @app.post("/api/refresh")
    def refresh(request: RefreshRequest) -> dict:
        snap = state.snapshot
        return handle_refresh(
            snap, request.query, request.ideal_candidate_ids, request.offset, request.limit
        )

    @app.get("/api/suggest")
    def suggest(
        facet: str,
        skills: str | None = Query(default=None),
        titles: str | None = Query(default=None),
        companies: str | None = Query(default=None),
        industries: str | None = Query(default=None),
        limit: int = Query(default=5, ge=1, le=25),
    ) -> dict:
        snap = state.snapshot
        try:
            query = StructuredQuery(
                facets={
                    "skill": _parse_id_csv(skills),
                    "title": _parse_id_csv(titles),
                    "company": _parse_id_csv(companies),
                    "industry": _parse_id_csv(industries),
                }
            )
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return handle_suggest(snap, query, facet, limit)

    @app.get("/api/members/{member_id}")
    def member_detail(member_id: int) -> dict:
        return member_record(state.snapshot, member_id)

    @app.get("/api/members")
    def member_search(q: str = Query(default=""), limit: int = Query(default=10, ge=1, le=50)) -> dict:
        return {"members": search_members(state.snapshot, q, limit)}

    @app.get("/api/health")
    def health() -> dict:
        snap = state.snapshot
        return {
            "status": "ok",
            "snapshot_version": snap.version,
            "members": len(snap.corpus.profiles),
        }

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="static")

    return app
