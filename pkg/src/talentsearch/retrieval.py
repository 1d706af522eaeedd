"""Inverted index over standardized profile attributes.

Retrieval is pure boolean set generation: a member matches when, for
every non-empty facet of the query, at least one facet entity appears
among the member's standardized attributes. Ranking happens elsewhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .corpus import Corpus, EntityId
from .query_builder import StructuredQuery


@dataclass
class InvertedIndex:
    """Postings from (facet kind, entity id) to ascending member ids."""

    postings: dict[EntityId, list[int]] = field(default_factory=dict)
    doc_count: int = 0

    def __post_init__(self) -> None:
        self._sets: dict[EntityId, frozenset[int]] = {}

    def members_for(self, kind: str, entity_id: int) -> frozenset[int]:
        key = EntityId(kind, entity_id)
        cached = self._sets.get(key)
        if cached is None:
            cached = frozenset(self.postings.get(key, ()))
            self._sets[key] = cached
        return cached

    def validate(self) -> list[str]:
        problems = []
        for key, members in self.postings.items():
            if list(members) != sorted(set(members)):
                problems.append(f"postings for {key} not sorted and duplicate-free")
        return problems


def build_index(corpus: Corpus) -> InvertedIndex:
    """Post every member under each standardized attribute they hold.

    Skills come from the profile's skill list; titles, companies, and
    industries from every position, not just the current one, so past
    roles stay searchable.
    """
    sets: dict[EntityId, set[int]] = {}

    def post(kind: str, entity_id: int, member_id: int) -> None:
        sets.setdefault(EntityId(kind, entity_id), set()).add(member_id)

    for profile in corpus.members():
        member_id = profile.member_id
        for skill_id, _ in profile.skills:
            post("skill", skill_id, member_id)
        for position in profile.positions:
            if position.title_id is not None:
                post("title", position.title_id, member_id)
            if position.company_id is not None:
                post("company", position.company_id, member_id)
            if position.industry_id is not None:
                post("industry", position.industry_id, member_id)

    index = InvertedIndex(doc_count=len(corpus))
    index.postings = {key: sorted(members) for key, members in sets.items()}
    return index


def retrieve(index: InvertedIndex, query: StructuredQuery) -> list[int]:
    """Intersect per-facet disjunctions; empty facets drop out.

    Raises on a fully empty query, which would otherwise match the
    whole corpus.
    """
    if query.is_empty():
        raise ValueError("cannot retrieve with an empty query")
    result: frozenset[int] | None = None
    for kind, entries in query.facets.items():
        if not entries:
            continue
        matched: frozenset[int] = frozenset()
        for entity_id, _ in entries:
            matched = matched | index.members_for(kind, entity_id)
        result = matched if result is None else (result & matched)
        if not result:
            return []
    assert result is not None
    return sorted(result)
