"""Ranking features: profile-to-profile similarities and query matching.

The first block of features compares a result against the searcher's
ideal candidates directly (skill sets, expertise vectors, titles, and
aligned career paths). The second block scores the result against the
structured query the way keyword-era rankers did: summed expertise over
the skill facet, text matching, tagged-entity title matching, and a
stored click-through prior.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .corpus import (
    Corpus,
    Dictionaries,
    MemberProfile,
    Position,
    load_stopwords,
    standardize,
    tokenize,
)
from .expertise import ExpertiseMatrix
from .query_builder import QueryContext, StructuredQuery

NODE_SIGNALS = (
    "company_match",
    "company_similarity",
    "industry_match",
    "industry_similarity",
    "title_match",
    "title_similarity",
    "description_similarity",
    "seniority_similarity",
)

FEATURE_NAMES = (
    "skill_jaccard",
    "skill_cosine",
    "title_jaccard",
    "title_cosine",
    "career_path",
    "skill_expertise",
    "text_match",
    "entity_title_match",
    "ctr_prior",
)

SENIORITY_SPAN = 9  # widest possible gap on the 1..10 scale


@dataclass
class NodeSimilarityModel:
    """Weighted blend of position-pair signals, clamped to [0, 1]."""

    weights: dict[str, float] = field(
        default_factory=lambda: {name: 1.0 / len(NODE_SIGNALS) for name in NODE_SIGNALS}
    )

    def __post_init__(self) -> None:
        unknown = set(self.weights) - set(NODE_SIGNALS)
        if unknown:
            raise ValueError(f"unknown node signals: {sorted(unknown)}")
        if any(w < 0 for w in self.weights.values()):
            raise ValueError("node signal weights must be non-negative")
        total = sum(self.weights.values())
        if not math.isclose(total, 1.0, rel_tol=1e-9, abs_tol=1e-9):
            raise ValueError(f"node signal weights must sum to 1, got {total}")


@dataclass(frozen=True)
class CareerPathConfig:
    """Alignment settings: non-positive gap penalty, optional normalization."""

    gap_penalty: float = -0.1
    normalize: bool = True

    def __post_init__(self) -> None:
        if self.gap_penalty > 0:
            raise ValueError("gap penalty must be non-positive")


@dataclass
class FeatureVector:
    """Values aligned with the shared FEATURE_NAMES registry."""

    values: np.ndarray

    def validate(self) -> list[str]:
        problems = []
        if len(self.values) != len(FEATURE_NAMES):
            problems.append(
                f"expected {len(FEATURE_NAMES)} values, got {len(self.values)}"
            )
        if not np.all(np.isfinite(self.values)):
            problems.append("non-finite feature value")
        return problems

    def as_dict(self) -> dict[str, float]:
        return {name: float(v) for name, v in zip(FEATURE_NAMES, self.values)}


@dataclass
class FeatureModels:
    """Everything feature extraction needs beyond the query itself."""

    dictionaries: Dictionaries
    node_model: NodeSimilarityModel = field(default_factory=NodeSimilarityModel)
    career: CareerPathConfig = field(default_factory=CareerPathConfig)
    priors: dict[int, float] = field(default_factory=dict)
    stopwords: frozenset[str] = field(default_factory=lambda: frozenset(load_stopwords()))


def _jaccard(a: set, b: set) -> float:
    if not a and not b:
        return 0.0
    union = len(a | b)
    return len(a & b) / union if union else 0.0


def _counter_cosine(a: Counter, b: Counter) -> float:
    if not a or not b:
        return 0.0
    dot = sum(count * b[token] for token, count in a.items() if token in b)
    norm = math.sqrt(sum(c * c for c in a.values())) * math.sqrt(
        sum(c * c for c in b.values())
    )
    return dot / norm if norm else 0.0


def skill_jaccard(ctx: QueryContext, result: MemberProfile) -> float:
    """Mean Jaccard overlap between listed skill-id sets."""
    result_set = result.skill_ids()
    sims = [
        _jaccard(candidate.skill_ids(), result_set)
        for candidate in ctx.ideal_candidates
    ]
    return sum(sims) / len(sims)


def skill_cosine(
    ctx: QueryContext, result: MemberProfile, expertise: ExpertiseMatrix
) -> float:
    """Mean cosine between expertise-weighted skill vectors."""
    result_row = expertise.row(result.member_id)
    sims = []
    for candidate in ctx.ideal_candidates:
        row = expertise.row(candidate.member_id)
        dot = sum(v * result_row[s] for s, v in row.items() if s in result_row)
        norm = math.sqrt(sum(v * v for v in row.values())) * math.sqrt(
            sum(v * v for v in result_row.values())
        )
        sims.append(dot / norm if norm else 0.0)
    return sum(sims) / len(sims)


def _cached_tokens(position: Position, stopwords: frozenset[str], kind: str) -> object:
    """Token views of a position, cached on the instance.

    Positions are immutable in practice once a corpus is loaded, and
    feature extraction revisits the same positions many times per
    search, so the tokenizations are worth keeping.
    """
    cache = getattr(position, "_token_cache", None)
    if cache is None:
        cache = {}
        position._token_cache = cache
    key = (kind, stopwords if kind == "description" else None)
    value = cache.get(key)
    if value is None:
        if kind == "title_words":
            value = frozenset(tokenize(position.raw_title))
        else:
            value = Counter(
                t for t in tokenize(position.description) if t not in stopwords
            )
        cache[key] = value
    return value


def _stopworded_title(position: Position | None, stopwords: frozenset[str]) -> frozenset[str]:
    if position is None:
        return frozenset()
    return frozenset(t for t in tokenize(position.raw_title) if t not in stopwords)


def title_similarity(
    ctx: QueryContext, result: MemberProfile, stopwords: frozenset[str]
) -> tuple[float, float]:
    """Jaccard and binary cosine over stop-worded current-title words."""
    result_words = _stopworded_title(result.current_position(), stopwords)
    jaccards = []
    cosines = []
    for candidate in ctx.ideal_candidates:
        words = _stopworded_title(candidate.current_position(), stopwords)
        jaccards.append(_jaccard(words, result_words))
        if words and result_words:
            cosines.append(
                len(words & result_words)
                / math.sqrt(len(words) * len(result_words))
            )
        else:
            cosines.append(0.0)
    n = len(ctx.ideal_candidates)
    return sum(jaccards) / n, sum(cosines) / n


def _pair_similarity(dictionary, a: int | None, b: int | None) -> float:
    """1.0 on an exact match, else the dictionary edge weight, else 0."""
    if a is None or b is None:
        return 0.0
    if a == b:
        return 1.0
    return dictionary.weight(a, b)


def node_similarity(
    p: Position,
    q: Position,
    model: NodeSimilarityModel,
    dictionaries: Dictionaries,
    stopwords: frozenset[str] | None = None,
) -> float:
    """Blend of company, industry, title, description, seniority signals."""
    if stopwords is None:
        stopwords = frozenset(load_stopwords())
    p_title = _cached_tokens(p, stopwords, "title_words")
    q_title = _cached_tokens(q, stopwords, "title_words")
    signals = {
        "company_match": 1.0
        if p.company_id is not None and p.company_id == q.company_id
        else 0.0,
        "company_similarity": _pair_similarity(
            dictionaries["company"], p.company_id, q.company_id
        ),
        "industry_match": 1.0
        if p.industry_id is not None and p.industry_id == q.industry_id
        else 0.0,
        "industry_similarity": _pair_similarity(
            dictionaries["industry"], p.industry_id, q.industry_id
        ),
        "title_match": 1.0 if p_title and p_title == q_title else 0.0,
        "title_similarity": _jaccard(set(p_title), set(q_title)),
        "description_similarity": _counter_cosine(
            _cached_tokens(p, stopwords, "description"),
            _cached_tokens(q, stopwords, "description"),
        ),
        "seniority_similarity": 1.0 - abs(p.seniority - q.seniority) / SENIORITY_SPAN,
    }
    score = sum(model.weights.get(name, 0.0) * signals[name] for name in NODE_SIGNALS)
    return min(1.0, max(0.0, score))


def career_path_similarity(
    path_p: list[Position],
    path_q: list[Position],
    model: NodeSimilarityModel,
    cfg: CareerPathConfig,
    dictionaries: Dictionaries,
    stopwords: frozenset[str] | None = None,
) -> float:
    """Best global alignment score between two position sequences.

    The recurrence pairs positions for their node similarity or skips
    one side at the gap penalty, so dissimilar detours cost little. The
    normalized form divides by the longer length and clamps at zero.
    """
    n, m = len(path_p), len(path_q)
    if n == 0 or m == 0:
        return 0.0
    if stopwords is None:
        stopwords = frozenset(load_stopwords())
    gap = cfg.gap_penalty
    table = np.empty((n + 1, m + 1))
    table[0, :] = np.arange(m + 1) * gap
    table[:, 0] = np.arange(n + 1) * gap
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            pair = node_similarity(
                path_p[i - 1], path_q[j - 1], model, dictionaries, stopwords
            )
            table[i, j] = max(
                table[i - 1, j - 1] + pair,
                table[i - 1, j] + gap,
                table[i, j - 1] + gap,
            )
    score = float(table[n, m])
    if cfg.normalize:
        return max(0.0, score / max(n, m))
    return score


def _profile_text_tokens(
    profile: MemberProfile, dictionaries: Dictionaries, stopwords: frozenset[str]
) -> frozenset[str]:
    """Every searchable token on the profile, cached on the instance."""
    cached = getattr(profile, "_text_tokens", None)
    if cached is not None:
        return cached
    tokens: set[str] = set(tokenize(profile.headline))
    for skill_id, _ in profile.skills:
        tokens.update(tokenize(dictionaries["skill"].name(skill_id)))
    for position in profile.positions:
        tokens.update(tokenize(position.raw_title))
        tokens.update(tokenize(position.description))
        if position.company_id is not None:
            tokens.update(tokenize(dictionaries["company"].name(position.company_id)))
        if position.industry_id is not None:
            tokens.update(
                tokenize(dictionaries["industry"].name(position.industry_id))
            )
    tokens -= stopwords
    result = frozenset(tokens)
    profile._text_tokens = result
    return result


def _standardized_titles(
    profile: MemberProfile, dictionaries: Dictionaries
) -> set[int]:
    titles = set()
    for position in profile.positions:
        title_id = position.title_id
        if title_id is None:
            title_id = standardize(dictionaries, "title", position.raw_title)
        if title_id is not None:
            titles.add(title_id)
    return titles


def baseline_features(
    query: StructuredQuery,
    result: MemberProfile,
    expertise: ExpertiseMatrix,
    models: FeatureModels,
) -> dict[str, float]:
    """Query-against-profile features from the keyword-search era."""
    row = expertise.row(result.member_id)
    skill_expertise = sum(
        row.get(skill_id, 0.0) for skill_id in query.entry_ids("skill")
    )

    facet_tokens: set[str] = set()
    for kind, entries in query.facets.items():
        dictionary = models.dictionaries[kind]
        for entity_id, _ in entries:
            facet_tokens.update(tokenize(dictionary.name(entity_id)))
    facet_tokens -= models.stopwords
    profile_tokens = _profile_text_tokens(result, models.dictionaries, models.stopwords)
    text_match = (
        len(facet_tokens & profile_tokens) / len(facet_tokens) if facet_tokens else 0.0
    )

    query_titles = set(query.entry_ids("title"))
    entity_title_match = (
        1.0
        if query_titles & _standardized_titles(result, models.dictionaries)
        else 0.0
    )

    return {
        "skill_expertise": skill_expertise,
        "text_match": text_match,
        "entity_title_match": entity_title_match,
        "ctr_prior": models.priors.get(result.member_id, 0.0),
    }


def extract_features(
    ctx: QueryContext | None,
    query: StructuredQuery,
    result: MemberProfile,
    expertise: ExpertiseMatrix,
    models: FeatureModels,
) -> FeatureVector:
    """Assemble the full vector in FEATURE_NAMES order.

    Without ideal candidates (keyword-era sessions) the candidate
    similarity block is zero and only the query-based features carry
    signal.
    """
    values = dict.fromkeys(FEATURE_NAMES, 0.0)
    if ctx is not None:
        values["skill_jaccard"] = skill_jaccard(ctx, result)
        values["skill_cosine"] = skill_cosine(ctx, result, expertise)
        jaccard, cosine = title_similarity(ctx, result, models.stopwords)
        values["title_jaccard"] = jaccard
        values["title_cosine"] = cosine
        career = [
            career_path_similarity(
                candidate.positions,
                result.positions,
                models.node_model,
                models.career,
                models.dictionaries,
                models.stopwords,
            )
            for candidate in ctx.ideal_candidates
        ]
        values["career_path"] = sum(career) / len(career)
    values.update(baseline_features(query, result, expertise, models))
    return FeatureVector(values=np.array([values[name] for name in FEATURE_NAMES]))


def default_priors(corpus: Corpus) -> dict[int, float]:
    """Zero prior for every member; a stand-in when no table is loaded."""
    return {member_id: 0.0 for member_id in corpus.member_ids()}
