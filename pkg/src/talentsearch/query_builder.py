"""Build structured queries from ideal candidates and apply searcher edits.

A query is a conjunction across facet kinds and a disjunction within
each facet. The skill facet comes from summed expertise scores over the
ideal candidates; title, company, and industry facets aggregate the
candidates' positions and expand them through the dictionaries'
similarity edges. Searchers then add or remove individual entities.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .corpus import FACET_KINDS, Dictionaries, MemberProfile, standardize
from .expertise import ExpertiseMatrix

logger = logging.getLogger(__name__)

FacetEntry = tuple[int, float]


@dataclass
class StructuredQuery:
    """Facet kind mapped to (entity id, score) pairs, best first.

    Within a facet, ids are unique and scores non-increasing. Retrieval
    treats facets as a conjunction and entries within one as a
    disjunction; an empty facet is simply absent from the conjunction.
    """

    facets: dict[str, list[FacetEntry]] = field(
        default_factory=lambda: {kind: [] for kind in FACET_KINDS}
    )

    def validate(self) -> list[str]:
        problems = []
        for kind in self.facets:
            if kind not in FACET_KINDS:
                problems.append(f"unknown facet kind {kind!r}")
        for kind, entries in self.facets.items():
            ids = [entity_id for entity_id, _ in entries]
            if len(ids) != len(set(ids)):
                problems.append(f"duplicate entity ids in facet {kind!r}")
            scores = [score for _, score in entries]
            if any(a < b for a, b in zip(scores, scores[1:])):
                problems.append(f"scores increase within facet {kind!r}")
        return problems

    def is_empty(self) -> bool:
        return all(not entries for entries in self.facets.values())

    def entry_ids(self, kind: str) -> list[int]:
        return [entity_id for entity_id, _ in self.facets.get(kind, [])]

    def to_record(self) -> dict:
        return {
            "facets": {
                kind: [
                    {"id": entity_id, "score": round(score, 6)}
                    for entity_id, score in self.facets.get(kind, [])
                ]
                for kind in FACET_KINDS
            }
        }

    @classmethod
    def from_record(cls, record: dict) -> "StructuredQuery":
        facets: dict[str, list[FacetEntry]] = {kind: [] for kind in FACET_KINDS}
        for kind, entries in record.get("facets", {}).items():
            if kind not in FACET_KINDS:
                raise ValueError(f"unknown facet kind {kind!r}")
            facets[kind] = [
                (int(entry["id"]), float(entry["score"])) for entry in entries
            ]
        query = cls(facets=facets)
        problems = query.validate()
        if problems:
            raise ValueError("; ".join(problems))
        return query


@dataclass
class QueryContext:
    """The searcher's input: one to three ideal candidates."""

    ideal_candidates: list[MemberProfile]
    searcher_id: int | None = None

    def __post_init__(self) -> None:
        if not 1 <= len(self.ideal_candidates) <= 3:
            raise ValueError(
                f"expected 1..3 ideal candidates, got {len(self.ideal_candidates)}"
            )

    def member_ids(self) -> list[int]:
        return [profile.member_id for profile in self.ideal_candidates]


@dataclass(frozen=True)
class QueryEdit:
    """A single searcher interaction with one facet entry."""

    action: str  # "add" or "remove"
    facet: str
    entity_id: int

    def __post_init__(self) -> None:
        if self.action not in ("add", "remove"):
            raise ValueError(f"unknown edit action {self.action!r}")
        if self.facet not in FACET_KINDS:
            raise ValueError(f"unknown facet kind {self.facet!r}")


@dataclass(frozen=True)
class QueryConfig:
    """Facet size caps for generated queries."""

    max_skills: int = 10
    max_titles: int = 3
    max_companies: int = 10
    max_industries: int = 3


def rank_skills(
    ctx: QueryContext, expertise: ExpertiseMatrix
) -> list[FacetEntry]:
    """Rank skills by total expertise across the ideal candidates.

    Skills that score zero are dropped; ties break toward the lower
    skill id so the ordering is deterministic.
    """
    totals: dict[int, float] = {}
    for member_id in ctx.member_ids():
        for skill_id, score in expertise.row(member_id).items():
            totals[skill_id] = totals.get(skill_id, 0.0) + score
    ranked = [(skill_id, total) for skill_id, total in totals.items() if total > 0.0]
    ranked.sort(key=lambda entry: (-entry[1], entry[0]))
    return ranked


def _cut(scored: dict[int, float], cap: int) -> list[FacetEntry]:
    """Order a scored pool best-first and apply the facet cap."""
    entries = sorted(scored.items(), key=lambda entry: (-entry[1], entry[0]))
    return [(entity_id, score) for entity_id, score in entries[:cap]]


def _expand(
    direct: dict[int, float], dictionaries: Dictionaries, kind: str
) -> dict[int, float]:
    """Add dictionary-similar entities, scored by source score x edge weight."""
    scored = dict(direct)
    for entity_id, base in direct.items():
        for neighbor_id, weight in dictionaries[kind].neighbors(entity_id):
            if neighbor_id in direct:
                continue
            scored[neighbor_id] = scored.get(neighbor_id, 0.0) + base * weight
    return scored


def build_query(
    ctx: QueryContext,
    expertise: ExpertiseMatrix,
    dictionaries: Dictionaries,
    cfg: QueryConfig | None = None,
) -> StructuredQuery:
    """Aggregate the ideal candidates into a full structured query.

    Skills take the top expertise-ranked entries. Titles come from the
    candidates' current positions, companies and industries from all
    their positions; each counts distinct candidates as frequency,
    expands through dictionary similarity, and keeps the top entries.
    Candidates whose titles cannot be standardized contribute nothing
    to the title facet; if nobody's can, the facet stays empty and
    retrieval simply drops it from the conjunction.
    """
    cfg = cfg or QueryConfig()
    query = StructuredQuery()

    query.facets["skill"] = rank_skills(ctx, expertise)[: cfg.max_skills]

    title_freq: dict[int, float] = {}
    company_freq: dict[int, float] = {}
    industry_freq: dict[int, float] = {}
    for profile in ctx.ideal_candidates:
        current = profile.current_position()
        if current is not None:
            title_id = current.title_id
            if title_id is None:
                title_id = standardize(dictionaries, "title", current.raw_title)
            if title_id is not None:
                title_freq[title_id] = title_freq.get(title_id, 0.0) + 1.0
        companies = {
            pos.company_id for pos in profile.positions if pos.company_id is not None
        }
        for company_id in companies:
            company_freq[company_id] = company_freq.get(company_id, 0.0) + 1.0
        industries = {
            pos.industry_id for pos in profile.positions if pos.industry_id is not None
        }
        for industry_id in industries:
            industry_freq[industry_id] = industry_freq.get(industry_id, 0.0) + 1.0

    query.facets["title"] = _cut(
        _expand(title_freq, dictionaries, "title"), cfg.max_titles
    )
    query.facets["company"] = _cut(
        _expand(company_freq, dictionaries, "company"), cfg.max_companies
    )
    query.facets["industry"] = _cut(
        _expand(industry_freq, dictionaries, "industry"), cfg.max_industries
    )
    if not query.facets["title"]:
        logger.info(
            "no standardizable titles among candidates %s; title facet left empty",
            ctx.member_ids(),
        )
    return query


def apply_edit(query: StructuredQuery, edit: QueryEdit) -> StructuredQuery:
    """Return a new query with one entity added or removed.

    Added entities score 1.0 and land ahead of existing entries with
    the same score. Adding an entity already present is a logged no-op;
    removing an absent one is an error.
    """
    facets = {kind: list(entries) for kind, entries in query.facets.items()}
    entries = facets.setdefault(edit.facet, [])
    present = any(entity_id == edit.entity_id for entity_id, _ in entries)
    if edit.action == "add":
        if present:
            logger.info(
                "entity %d already in facet %s; add ignored",
                edit.entity_id,
                edit.facet,
            )
            return StructuredQuery(facets=facets)
        position = next(
            (i for i, (_, score) in enumerate(entries) if score <= 1.0),
            len(entries),
        )
        entries.insert(position, (edit.entity_id, 1.0))
    else:
        if not present:
            raise ValueError(
                f"entity {edit.entity_id} not present in facet {edit.facet!r}"
            )
        facets[edit.facet] = [
            (entity_id, score)
            for entity_id, score in entries
            if entity_id != edit.entity_id
        ]
    return StructuredQuery(facets=facets)


def suggest_facet_values(
    query: StructuredQuery, facet: str, dictionaries: Dictionaries, limit: int = 5
) -> list[tuple[int, float]]:
    """Suggest entities similar to a facet's current members.

    Aggregates dictionary edge weights from every facet entry, skips
    entities already present, and returns the strongest few as
    (entity_id, aggregate_weight) pairs. An empty facet yields no
    suggestions.
    """
    if facet not in FACET_KINDS:
        raise ValueError(f"unknown facet kind {facet!r}")
    present = set(query.entry_ids(facet))
    weights: dict[int, float] = {}
    for entity_id in present:
        for neighbor_id, weight in dictionaries[facet].neighbors(entity_id):
            if neighbor_id in present:
                continue
            weights[neighbor_id] = weights.get(neighbor_id, 0.0) + weight
    ranked = sorted(weights.items(), key=lambda entry: (-entry[1], entry[0]))
    return ranked[:limit]
