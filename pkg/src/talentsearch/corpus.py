"""Member profile data model, entity dictionaries, and corpus ingestion.

A corpus is a line-delimited JSON file of member profiles. Entity
dictionaries map raw text variants ("tech lead", "technical lead") to
numeric ids per entity kind and carry similarity edges between entities
(related titles, company browse map, derived industry affinities).
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterator, NamedTuple

logger = logging.getLogger(__name__)

FACET_KINDS = ("title", "skill", "company", "industry")

SENIORITY_MIN = 1
SENIORITY_MAX = 10

_PUNCT_RE = re.compile(r"[^\w\s]")
_WS_RE = re.compile(r"\s+")
_YEAR_MONTH_RE = re.compile(r"^\d{4}-(0[1-9]|1[0-2])$")


def normalize_text(raw: str) -> str:
    """Lowercase, strip punctuation, and collapse whitespace."""
    cleaned = _PUNCT_RE.sub(" ", raw.lower())
    return _WS_RE.sub(" ", cleaned).strip()


def tokenize(raw: str) -> list[str]:
    """Split normalized text into word tokens."""
    norm = normalize_text(raw)
    return norm.split(" ") if norm else []


class EntityId(NamedTuple):
    """A standardized entity reference: kind plus numeric id within that kind."""

    kind: str
    id: int


@dataclass
class Position:
    """One entry of a member's work history.

    ``start`` and ``end`` are "YYYY-MM" strings; ``end`` is None for the
    current position. The ``*_id`` fields hold standardized entity ids and
    stay None when the raw value did not standardize.
    """

    raw_title: str
    start: str
    end: str | None = None
    title_id: int | None = None
    company_id: int | None = None
    industry_id: int | None = None
    description: str = ""
    seniority: int = 5


@dataclass
class MemberProfile:
    """A member record: identity, free text, explicit skills, and work history.

    ``skills`` holds (skill_id, endorsement_count) pairs; ``positions`` are
    ordered by start date ascending, so the last one is the current role.
    """

    member_id: int
    name: str
    headline: str
    skills: list[tuple[int, int]] = field(default_factory=list)
    positions: list[Position] = field(default_factory=list)
    location: str | None = None

    def skill_ids(self) -> frozenset[int]:
        cached = getattr(self, "_skill_ids", None)
        if cached is None:
            cached = frozenset(sk for sk, _ in self.skills)
            self._skill_ids = cached
        return cached

    def current_position(self) -> Position | None:
        return self.positions[-1] if self.positions else None


@dataclass
class Dictionary:
    """Standardization table for one entity kind.

    ``entries`` maps normalized raw variants to entity ids, ``canonical``
    maps ids to display names, and ``similar`` holds weighted edges to
    related entities (weights in (0, 1], sorted by descending weight).
    """

    kind: str
    entries: dict[str, int]
    canonical: dict[int, str]
    similar: dict[int, list[tuple[int, float]]] = field(default_factory=dict)

    def lookup(self, raw: str) -> int | None:
        return self.entries.get(normalize_text(raw))

    def name(self, entity_id: int) -> str:
        return self.canonical[entity_id]

    def neighbors(self, entity_id: int) -> list[tuple[int, float]]:
        return self.similar.get(entity_id, [])

    def weight(self, a: int, b: int) -> float:
        """Similarity edge weight between two entities, 0.0 when absent."""
        table = getattr(self, "_weight_table", None)
        if table is None:
            table = {
                (src, dst): w
                for src, edges in self.similar.items()
                for dst, w in edges
            }
            self._weight_table = table
        return table.get((a, b), table.get((b, a), 0.0))

    def ids(self) -> frozenset[int]:
        return frozenset(self.canonical)

    def validate(self) -> list[str]:
        """Return human-readable descriptions of integrity violations."""
        problems: list[str] = []
        for variant, ent in self.entries.items():
            if variant != normalize_text(variant):
                problems.append(f"variant {variant!r} is not normalized")
            if ent not in self.canonical:
                problems.append(f"variant {variant!r} maps to unknown id {ent}")
        for src, edges in self.similar.items():
            if src not in self.canonical:
                problems.append(f"similarity edges from unknown id {src}")
            weights = [w for _, w in edges]
            if any(w <= 0.0 or w > 1.0 for w in weights):
                problems.append(f"edge weight out of (0, 1] for id {src}")
            if weights != sorted(weights, reverse=True):
                problems.append(f"edges for id {src} not sorted by weight")
            for dst, _ in edges:
                if dst == src:
                    problems.append(f"self-edge on id {src}")
                if dst not in self.canonical:
                    problems.append(f"edge from {src} to unknown id {dst}")
        return problems


Dictionaries = dict[str, Dictionary]


def standardize(dictionaries: Dictionaries, kind: str, raw: str) -> int | None:
    """Resolve raw text to an entity id of the given kind, None when unknown."""
    if kind not in dictionaries:
        raise KeyError(f"no dictionary loaded for kind {kind!r}")
    return dictionaries[kind].lookup(raw)


@dataclass
class LoadError:
    """A skipped corpus line: line number plus the reason."""

    line_no: int
    message: str


@dataclass
class Corpus:
    """All valid profiles from one corpus file, plus per-line load errors."""

    profiles: dict[int, MemberProfile] = field(default_factory=dict)
    errors: list[LoadError] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.profiles)

    def get(self, member_id: int) -> MemberProfile | None:
        return self.profiles.get(member_id)

    def members(self) -> Iterator[MemberProfile]:
        return iter(self.profiles.values())

    def member_ids(self) -> list[int]:
        return sorted(self.profiles)


def validate_profile(profile: MemberProfile) -> list[str]:
    """Return human-readable descriptions of profile invariant violations."""
    problems: list[str] = []
    if profile.member_id < 0:
        problems.append("member_id must be non-negative")
    seen: set[int] = set()
    for sk, endorsements in profile.skills:
        if sk < 0:
            problems.append(f"skill id {sk} is negative")
        if sk in seen:
            problems.append(f"duplicate skill id {sk}")
        seen.add(sk)
        if endorsements < 0:
            problems.append(f"negative endorsement count on skill {sk}")
    prev_start: str | None = None
    for i, pos in enumerate(profile.positions):
        if not _YEAR_MONTH_RE.match(pos.start):
            problems.append(f"position {i} start {pos.start!r} is not YYYY-MM")
        if pos.end is not None:
            if not _YEAR_MONTH_RE.match(pos.end):
                problems.append(f"position {i} end {pos.end!r} is not YYYY-MM")
            elif pos.end < pos.start:
                problems.append(f"position {i} ends before it starts")
        if prev_start is not None and pos.start < prev_start:
            problems.append(f"position {i} out of chronological order")
        prev_start = pos.start
        if not SENIORITY_MIN <= pos.seniority <= SENIORITY_MAX:
            problems.append(f"position {i} seniority {pos.seniority} out of range")
    return problems


def validate_corpus(corpus: Corpus, dictionaries: Dictionaries) -> list[str]:
    """Check that every standardized id in the corpus resolves in its dictionary."""
    problems: list[str] = []
    known = {kind: d.ids() for kind, d in dictionaries.items()}
    for profile in corpus.members():
        for sk, _ in profile.skills:
            if sk not in known["skill"]:
                problems.append(f"member {profile.member_id}: unknown skill {sk}")
        for i, pos in enumerate(profile.positions):
            for kind, ent in (
                ("title", pos.title_id),
                ("company", pos.company_id),
                ("industry", pos.industry_id),
            ):
                if ent is not None and ent not in known[kind]:
                    problems.append(
                        f"member {profile.member_id}: position {i} has "
                        f"unknown {kind} {ent}"
                    )
    return problems


def profile_from_record(record: dict) -> MemberProfile:
    """Build a profile from one decoded corpus line, raising on bad shape."""
    if not isinstance(record, dict):
        raise ValueError("record is not an object")
    try:
        member_id = record["member_id"]
        name = record["name"]
        headline = record["headline"]
    except KeyError as exc:
        raise ValueError(f"missing field {exc.args[0]!r}") from None
    if not isinstance(member_id, int) or isinstance(member_id, bool):
        raise ValueError("member_id must be an integer")
    if not isinstance(name, str) or not isinstance(headline, str):
        raise ValueError("name and headline must be strings")
    skills: list[tuple[int, int]] = []
    for item in record.get("skills", []):
        if (
            not isinstance(item, (list, tuple))
            or len(item) != 2
            or not all(isinstance(v, int) and not isinstance(v, bool) for v in item)
        ):
            raise ValueError(f"bad skill entry {item!r}")
        skills.append((item[0], item[1]))
    positions: list[Position] = []
    for pos in record.get("positions", []):
        if not isinstance(pos, dict):
            raise ValueError("position is not an object")
        try:
            raw_title = pos["raw_title"]
            start = pos["start"]
        except KeyError as exc:
            raise ValueError(f"position missing field {exc.args[0]!r}") from None
        if not isinstance(raw_title, str) or not isinstance(start, str):
            raise ValueError("raw_title and start must be strings")
        positions.append(
            Position(
                raw_title=raw_title,
                start=start,
                end=pos.get("end"),
                title_id=pos.get("title_id"),
                company_id=pos.get("company_id"),
                industry_id=pos.get("industry_id"),
                description=pos.get("description", ""),
                seniority=pos.get("seniority", 5),
            )
        )
    profile = MemberProfile(
        member_id=member_id,
        name=name,
        headline=headline,
        skills=skills,
        positions=positions,
        location=record.get("location"),
    )
    problems = validate_profile(profile)
    if problems:
        raise ValueError("; ".join(problems))
    return profile


def profile_to_record(profile: MemberProfile) -> dict:
    """Serialize a profile to the corpus line format, omitting null fields."""
    record: dict = {
        "member_id": profile.member_id,
        "name": profile.name,
        "headline": profile.headline,
        "skills": [[sk, e] for sk, e in profile.skills],
        "positions": [],
    }
    for pos in profile.positions:
        entry: dict = {"raw_title": pos.raw_title, "start": pos.start}
        if pos.end is not None:
            entry["end"] = pos.end
        for key, value in (
            ("title_id", pos.title_id),
            ("company_id", pos.company_id),
            ("industry_id", pos.industry_id),
        ):
            if value is not None:
                entry[key] = value
        if pos.description:
            entry["description"] = pos.description
        entry["seniority"] = pos.seniority
        record["positions"].append(entry)
    if profile.location is not None:
        record["location"] = profile.location
    return record


def load_corpus(path: str | Path) -> Corpus:
    """Load a line-delimited JSON corpus, skipping and reporting bad lines."""
    corpus = Corpus()
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
                profile = profile_from_record(record)
            except (json.JSONDecodeError, ValueError, TypeError) as exc:
                corpus.errors.append(LoadError(line_no, str(exc)))
                continue
            if profile.member_id in corpus.profiles:
                corpus.errors.append(
                    LoadError(line_no, f"duplicate member_id {profile.member_id}")
                )
                continue
            corpus.profiles[profile.member_id] = profile
    if corpus.errors:
        logger.warning(
            "corpus %s: skipped %d of %d lines",
            path,
            len(corpus.errors),
            len(corpus.errors) + len(corpus.profiles),
        )
    return corpus


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    """Write a corpus back out as line-delimited JSON, sorted by member id."""
    with open(path, "w", encoding="utf-8") as handle:
        for member_id in sorted(corpus.profiles):
            record = profile_to_record(corpus.profiles[member_id])
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")


def dictionary_from_record(record: dict) -> Dictionary:
    return Dictionary(
        kind=record["kind"],
        entries={variant: int(ent) for variant, ent in record["entries"].items()},
        canonical={int(ent): name for ent, name in record["canonical"].items()},
        similar={
            int(ent): [(int(dst), float(w)) for dst, w in edges]
            for ent, edges in record.get("similar", {}).items()
        },
    )


def dictionary_to_record(dictionary: Dictionary) -> dict:
    return {
        "kind": dictionary.kind,
        "entries": dict(sorted(dictionary.entries.items())),
        "canonical": {str(k): v for k, v in sorted(dictionary.canonical.items())},
        "similar": {
            str(src): [[dst, w] for dst, w in edges]
            for src, edges in sorted(dictionary.similar.items())
            if edges
        },
    }


def load_dictionary(path: str | Path) -> Dictionary:
    with open(path, encoding="utf-8") as handle:
        return dictionary_from_record(json.load(handle))


def save_dictionaries(dictionaries: Dictionaries, directory: str | Path) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for kind, dictionary in dictionaries.items():
        with open(directory / f"{kind}.json", "w", encoding="utf-8") as handle:
            json.dump(dictionary_to_record(dictionary), handle, ensure_ascii=False)
            handle.write("\n")


def load_dictionaries(directory: str | Path | None = None) -> Dictionaries:
    """Load the four entity dictionaries, defaulting to the bundled taxonomy."""
    dictionaries: Dictionaries = {}
    if directory is None:
        data = resources.files("talentsearch").joinpath("data")
        for kind in FACET_KINDS:
            record = json.loads(data.joinpath(f"{kind}.json").read_text("utf-8"))
            dictionaries[kind] = dictionary_from_record(record)
    else:
        directory = Path(directory)
        for kind in FACET_KINDS:
            dictionaries[kind] = load_dictionary(directory / f"{kind}.json")
    return dictionaries


def load_stopwords() -> frozenset[str]:
    """Load the bundled stop-word list used for text similarity features."""
    text = (
        resources.files("talentsearch").joinpath("data/stopwords.txt").read_text("utf-8")
    )
    return frozenset(w.strip() for w in text.splitlines() if w.strip())
