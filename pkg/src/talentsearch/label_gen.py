"""Turn search-session logs into graded training lists.

The labeling scheme reads a recruiting session's outcomes as relevance:
contacting a result is the strongest signal, clicking is weaker, and
skipping is none. A few contacted results are withheld as the "ideal
candidates" that a query-by-example searcher would have started from,
and the rest become a graded list. Since no production log exists here,
a simulator fabricates keyword-era sessions from the synthetic corpus
with actions drawn from a hidden position-need archetype.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .corpus import Corpus, Dictionaries, MemberProfile, tokenize
from .expertise import ExpertiseMatrix
from .features import FeatureModels, extract_features
from .ltr import VALID_GRADES, RankingList
from .query_builder import QueryConfig, QueryContext, StructuredQuery, build_query
from .retrieval import InvertedIndex

logger = logging.getLogger(__name__)

ACTIONS = ("inmailed", "clicked", "skipped")
GRADE_FOR_ACTION = {"inmailed": 5, "clicked": 2, "skipped": 0}
ORIGINS = ("coinmail", "randomized_bucket", "keyword")


@dataclass
class Session:
    """One logged search: ordered results, one action per result."""

    session_id: int
    searcher_id: int
    keyword_query: str
    results: list[int]
    actions: dict[int, str]
    randomized: bool = False

    def validate(self) -> list[str]:
        problems = []
        if not self.results:
            problems.append("session has no results")
        if len(set(self.results)) != len(self.results):
            problems.append("duplicate results in session")
        for member_id in self.results:
            action = self.actions.get(member_id)
            if action not in ACTIONS:
                problems.append(f"result {member_id} has invalid action {action!r}")
        if set(self.actions) - set(self.results):
            problems.append("actions recorded for members not in results")
        return problems

    def inmailed(self) -> list[int]:
        return [m for m in self.results if self.actions[m] == "inmailed"]


@dataclass
class LabeledRow:
    member_id: int
    grade: int
    features: np.ndarray | None = None


@dataclass
class LabeledList:
    """A graded list with the withheld ideal candidates that seeded it."""

    ideal_candidates: list[int]
    rows: list[LabeledRow]
    origin: str
    session_id: int
    keyword_query: str = ""

    def validate(self) -> list[str]:
        problems = []
        if self.origin not in ORIGINS:
            problems.append(f"unknown origin {self.origin!r}")
        if self.origin != "keyword" and not 1 <= len(self.ideal_candidates) <= 3:
            problems.append("expected 1..3 ideal candidates")
        overlap = set(self.ideal_candidates) & {r.member_id for r in self.rows}
        if overlap:
            problems.append(f"ideal candidates appear as rows: {sorted(overlap)}")
        bad = {r.grade for r in self.rows} - set(VALID_GRADES)
        if bad:
            problems.append(f"grades outside {VALID_GRADES}: {sorted(bad)}")
        return problems

    def grades(self) -> list[int]:
        return [row.grade for row in self.rows]

    def to_ranking_list(self) -> RankingList:
        if any(row.features is None for row in self.rows):
            raise ValueError("attach features before building ranking lists")
        return RankingList(
            member_ids=np.array([row.member_id for row in self.rows]),
            grades=np.array(self.grades()),
            features=np.stack([row.features for row in self.rows]),
        )


def derive_coinmail_labels(
    session: Session, n_ic: int, rng: np.random.Generator
) -> LabeledList | None:
    """Withhold contacted results as ideal candidates, grade the rest.

    Sessions with fewer than two contacted results carry too little
    signal and yield nothing, as do sessions where withholding would
    leave no graded rows. The withheld set is a uniform draw; the
    remaining results keep session order with grades 5 (contacted),
    2 (clicked), 0 (skipped).
    """
    if not 1 <= n_ic <= 3:
        raise ValueError(f"n_ic must be in 1..3, got {n_ic}")
    inmailed = session.inmailed()
    if len(inmailed) < 2:
        return None
    take = min(n_ic, len(inmailed))
    if len(session.results) - take < 1:
        return None
    chosen = rng.choice(len(inmailed), size=take, replace=False)
    ideal = sorted(inmailed[i] for i in chosen)
    ideal_set = set(ideal)
    rows = [
        LabeledRow(member_id=m, grade=GRADE_FOR_ACTION[session.actions[m]])
        for m in session.results
        if m not in ideal_set
    ]
    origin = "randomized_bucket" if session.randomized else "coinmail"
    return LabeledList(
        ideal_candidates=ideal,
        rows=rows,
        origin=origin,
        session_id=session.session_id,
        keyword_query=session.keyword_query,
    )


def derive_keyword_labels(session: Session) -> LabeledList:
    """Grade every result by click-level engagement, no withholding.

    The keyword-era training pipeline logged clicks as its relevance
    signal, so any engagement grades 2 and the contact distinction that
    co-inmail lists rely on is deliberately absent.
    """
    rows = [
        LabeledRow(member_id=m, grade=0 if session.actions[m] == "skipped" else 2)
        for m in session.results
    ]
    return LabeledList(
        ideal_candidates=[],
        rows=rows,
        origin="keyword",
        session_id=session.session_id,
        keyword_query=session.keyword_query,
    )


def randomize_top_k(
    results: list[int], k: int, rng: np.random.Generator
) -> list[int]:
    """Uniformly shuffle the first min(k, n) items; the tail keeps order."""
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    head = list(results[:k])
    order = rng.permutation(len(head))
    return [head[i] for i in order] + list(results[k:])


@dataclass(frozen=True)
class Archetype:
    """The hidden position need behind a simulated session."""

    skills: frozenset[int]
    title_words: frozenset[str]
    seniority: int


def archetype_similarity(archetype: Archetype, profile: MemberProfile) -> float:
    """Ground-truth match against explicit profile data only.

    Deliberately independent of the expertise matrix so that evaluation
    of expertise-driven components is never judged by its own output.
    """
    skills = profile.skill_ids()
    union = archetype.skills | skills
    skill_sim = len(archetype.skills & skills) / len(union) if union else 0.0
    current = profile.current_position()
    words = frozenset(tokenize(current.raw_title)) if current else frozenset()
    wunion = archetype.title_words | words
    title_sim = len(archetype.title_words & words) / len(wunion) if wunion else 0.0
    seniority = current.seniority if current else 5
    seniority_sim = 1.0 - abs(archetype.seniority - seniority) / 9
    return 0.6 * skill_sim + 0.25 * title_sim + 0.15 * seniority_sim


def snippet_similarity(archetype: Archetype, profile: MemberProfile) -> float:
    """Match visible in a result row alone: headline plus top skills.

    A searcher scanning a page sees the current title and the handful of
    most endorsed skills, not the full profile, so click decisions key
    on this shallower score while contact decisions key on the full
    archetype similarity.
    """
    current = profile.current_position()
    words = frozenset(tokenize(current.raw_title)) if current else frozenset()
    wunion = archetype.title_words | words
    title_sim = len(archetype.title_words & words) / len(wunion) if wunion else 0.0
    ranked = sorted(profile.skills, key=lambda pair: (-pair[1], pair[0]))
    top = frozenset(skill_id for skill_id, _ in ranked[:3])
    top_sim = len(archetype.skills & top) / 3.0
    seniority = current.seniority if current else 5
    seniority_sim = 1.0 - abs(archetype.seniority - seniority) / 9
    return 0.45 * title_sim + 0.4 * top_sim + 0.15 * seniority_sim


def profile_strength(profile: MemberProfile, cap: int = 150) -> float:
    """Visible profile weight in [0, 1] from total endorsements."""
    total = sum(count for _, count in profile.skills)
    return min(1.0, float(np.log1p(total) / np.log1p(cap)))


def action_probabilities(
    similarity: float,
    strength: float,
    cfg: "SimulatorConfig",
    surface: float | None = None,
) -> tuple[float, float]:
    """(P[contact], P[click]) for one result.

    Contacting keys on full archetype similarity and favors heavily
    endorsed profiles, the way searchers reserve outreach for
    candidates whose whole profile fits. Clicking keys on ``surface``,
    the shallower row-level impression, which defaults to the full
    similarity when the caller does not separate the two.
    """
    if surface is None:
        surface = similarity
    band = min(1.0, max(0.0, (similarity - 0.2) / 0.6))
    p_inmail = min(1.0, cfg.inmail_scale * band * band * (0.35 + 0.65 * strength))
    p_click = cfg.click_scale * min(1.0, max(0.0, (surface - 0.1) / 0.7))
    p_click = min(p_click, 1.0 - p_inmail)
    return p_inmail, p_click


@dataclass(frozen=True)
class SimulatorConfig:
    """Shape of the fabricated keyword-search traffic.

    ``examine_decay`` is the per-rank survival rate of attention: the
    chance a searcher examines the result at display rank r is
    decay ** r. Unexamined results are always skipped, so sessions kept
    in ranker order carry position-confounded labels while shuffled
    sessions spread attention over a random page.

    A ``careless_rate`` fraction of sessions are exploratory browses
    whose clicks land at a flat rate regardless of fit and whose
    contacts are rare. Their junk engagement stays in raw session logs
    but almost never survives a two-contact filter, which is what makes
    contact-derived labels cleaner than click labels.
    """

    n_sessions: int = 600
    top_k: int = 100
    page_size: int = 25
    randomize: bool = True
    inmail_scale: float = 1.3
    click_scale: float = 0.45
    ranker_noise: float = 0.2
    examine_decay: float = 0.97
    careless_rate: float = 0.3
    careless_click: float = 0.25
    careless_inmail: float = 0.02
    session_id_base: int = 0


def _keyword_query_text(
    anchor: MemberProfile, dictionaries: Dictionaries, rng: np.random.Generator
) -> str:
    """Typed queries are terse: a title and at most two skills.

    Searchers articulate only a sliver of the need in the query box,
    which is what leaves keyword-session logs a poor stand-in for the
    full hiring intent.
    """
    parts = []
    current = anchor.current_position()
    if current is not None:
        parts.append(current.raw_title)
    by_endorsement = sorted(anchor.skills, key=lambda sk: (-sk[1], sk[0]))
    for skill_id, _ in by_endorsement[: int(rng.integers(0, 3))]:
        parts.append(dictionaries["skill"].name(skill_id))
    return " ".join(parts).lower()


def simulate_sessions(
    corpus: Corpus,
    index: InvertedIndex,
    dictionaries: Dictionaries,
    cfg: SimulatorConfig | None = None,
    seed: int = 0,
    priors: dict[int, float] | None = None,
) -> list[Session]:
    """Fabricate keyword-era sessions from hidden position needs.

    Each session picks an anchor member, treats their explicit profile
    as the need archetype, types a terse keyword query, retrieves and
    ranks members by how many typed entities they match, optionally
    shuffles the top block for unbiased evaluation, and draws actions.
    In engaged sessions contacts follow full archetype similarity while
    clicks follow the shallower row-level impression; a careless_rate
    fraction of sessions browse with flat action rates instead.
    Attention decays down the page,
    so unshuffled sessions confound labels with the keyword ranker's
    ordering. Because retrieval saturates exactly the entities the
    query names, the logged lists carry little variance on them; the
    unexpressed remainder of the need is what separates the graded
    rows. Every session has its own spawned generator, so the batch is
    reproducible regardless of ordering.

    When ``priors`` maps members to historical click-through rates,
    every click probability scales with the target's prior while
    contact probabilities do not: clicking is impulsive and compounds
    on whatever drew clicks before, whereas outreach is a deliberate
    act. Click logs therefore inherit the legacy popularity loop, one
    more reason contact-derived labels are the cleaner signal.
    """
    cfg = cfg or SimulatorConfig()
    root = np.random.default_rng(seed)
    seeds = root.integers(0, 2**63 - 1, size=cfg.n_sessions)
    member_ids = corpus.member_ids()
    sessions = []
    for i in range(cfg.n_sessions):
        rng = np.random.default_rng(seeds[i])
        anchor_id = int(member_ids[int(rng.integers(len(member_ids)))])
        anchor = corpus.get(anchor_id)
        current = anchor.current_position()
        archetype = Archetype(
            skills=frozenset(anchor.skill_ids()),
            title_words=frozenset(tokenize(current.raw_title)) if current else frozenset(),
            seniority=current.seniority if current else 5,
        )

        careless = float(rng.random()) < cfg.careless_rate
        query_text = _keyword_query_text(anchor, dictionaries, rng)
        tagged = tag_keyword_query(dictionaries, query_text)
        typed_skills = {entity_id for entity_id, _ in tagged.facets["skill"]}
        typed_titles = {entity_id for entity_id, _ in tagged.facets["title"]}
        pool: set[int] = set()
        for skill_id in typed_skills:
            pool |= index.members_for("skill", skill_id)
        for title_id in typed_titles:
            pool |= index.members_for("title", title_id)
        pool.discard(anchor_id)
        if not pool:
            continue
        candidates = sorted(pool)
        n_typed = len(typed_skills) + len(typed_titles)
        scores = []
        for member_id in candidates:
            profile = corpus.get(member_id)
            matched = len(typed_skills & profile.skill_ids())
            held = profile.current_position()
            if held is not None and held.title_id in typed_titles:
                matched += 1
            scores.append(matched / n_typed + cfg.ranker_noise * float(rng.random()))
        order = np.lexsort((candidates, -np.asarray(scores)))
        ranked = [candidates[j] for j in order[: cfg.top_k]]
        if cfg.randomize:
            ranked = randomize_top_k(ranked, cfg.top_k, rng)
        page = ranked[: cfg.page_size]

        actions = {}
        for rank, member_id in enumerate(page):
            examined = float(rng.random()) < cfg.examine_decay**rank
            u = float(rng.random())
            if not examined:
                actions[member_id] = "skipped"
                continue
            profile = corpus.get(member_id)
            if careless:
                p_inmail, p_click = cfg.careless_inmail, cfg.careless_click
            else:
                sim = archetype_similarity(archetype, profile)
                surface = snippet_similarity(archetype, profile)
                p_inmail, p_click = action_probabilities(
                    sim, profile_strength(profile), cfg, surface=surface
                )
            if priors is not None:
                pop = 0.25 + 5.0 * priors.get(member_id, 0.0)
                p_click = min(p_click * pop, 1.0 - p_inmail)
            if u < p_inmail:
                actions[member_id] = "inmailed"
            elif u < p_inmail + p_click:
                actions[member_id] = "clicked"
            else:
                actions[member_id] = "skipped"

        sessions.append(
            Session(
                session_id=cfg.session_id_base + i,
                searcher_id=anchor_id,
                keyword_query=query_text,
                results=page,
                actions=actions,
                randomized=cfg.randomize,
            )
        )
    return sessions


def tag_keyword_query(
    dictionaries: Dictionaries, text: str, max_ngram: int = 4
) -> StructuredQuery:
    """Greedy longest-match entity tagging of free keyword text.

    Scans left to right, preferring the longest n-gram that any
    dictionary recognizes; titles win over skills, then companies, then
    industries, mirroring how specific job phrases beat single words.
    """
    tokens = tokenize(text)
    facets: dict[str, list[tuple[int, float]]] = {
        kind: [] for kind in ("title", "skill", "company", "industry")
    }
    seen: dict[str, set[int]] = {kind: set() for kind in facets}
    i = 0
    while i < len(tokens):
        matched = False
        for length in range(min(max_ngram, len(tokens) - i), 0, -1):
            phrase = " ".join(tokens[i : i + length])
            for kind in ("title", "skill", "company", "industry"):
                entity_id = dictionaries[kind].lookup(phrase)
                if entity_id is not None:
                    if entity_id not in seen[kind]:
                        facets[kind].append((entity_id, 1.0))
                        seen[kind].add(entity_id)
                    i += length
                    matched = True
                    break
            if matched:
                break
        if not matched:
            i += 1
    return StructuredQuery(facets=facets)


def attach_features(
    lists: list[LabeledList],
    corpus: Corpus,
    expertise: ExpertiseMatrix,
    models: FeatureModels,
    query_cfg: QueryConfig | None = None,
) -> list[LabeledList]:
    """Fill in each row's feature vector, in place.

    Lists with ideal candidates get the generated structured query and
    full candidate-similarity features; keyword lists get a query from
    entity tagging and only the query-based block carries signal.
    """
    for labeled in lists:
        if labeled.ideal_candidates:
            ctx = QueryContext(
                ideal_candidates=[corpus.get(m) for m in labeled.ideal_candidates]
            )
            query = build_query(ctx, expertise, models.dictionaries, query_cfg)
        else:
            ctx = None
            query = tag_keyword_query(models.dictionaries, labeled.keyword_query)
        for row in labeled.rows:
            row.features = extract_features(
                ctx, query, corpus.get(row.member_id), expertise, models
            ).values
    return lists


def split_by_session(
    lists: list[LabeledList],
    rng: np.random.Generator,
    ratios: tuple[float, float, float] = (0.70, 0.15, 0.15),
) -> tuple[list[LabeledList], list[LabeledList], list[LabeledList]]:
    """Disjoint train/valid/test split on session identity."""
    if not np.isclose(sum(ratios), 1.0):
        raise ValueError(f"split ratios must sum to 1, got {ratios}")
    session_ids = sorted({labeled.session_id for labeled in lists})
    order = rng.permutation(len(session_ids))
    shuffled = [session_ids[i] for i in order]
    n = len(shuffled)
    n_train = int(round(n * ratios[0]))
    n_valid = int(round(n * ratios[1]))
    train_ids = set(shuffled[:n_train])
    valid_ids = set(shuffled[n_train : n_train + n_valid])
    train = [x for x in lists if x.session_id in train_ids]
    valid = [x for x in lists if x.session_id in valid_ids]
    test = [x for x in lists if x.session_id not in train_ids and x.session_id not in valid_ids]
    return train, valid, test


def save_sessions(sessions: list[Session], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for s in sessions:
            record = {
                "session_id": s.session_id,
                "searcher_id": s.searcher_id,
                "keyword_query": s.keyword_query,
                "results": s.results,
                "actions": {str(m): a for m, a in s.actions.items()},
                "randomized": s.randomized,
            }
            handle.write(json.dumps(record) + "\n")


def load_sessions(path: str | Path) -> list[Session]:
    sessions = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if not line:
                continue
            record = json.loads(line)
            sessions.append(
                Session(
                    session_id=int(record["session_id"]),
                    searcher_id=int(record["searcher_id"]),
                    keyword_query=record["keyword_query"],
                    results=[int(m) for m in record["results"]],
                    actions={int(m): a for m, a in record["actions"].items()},
                    randomized=bool(record.get("randomized", False)),
                )
            )
    return sessions


def save_labeled_lists(lists: list[LabeledList], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for labeled in lists:
            record = {
                "ideal_candidates": labeled.ideal_candidates,
                "origin": labeled.origin,
                "session_id": labeled.session_id,
                "keyword_query": labeled.keyword_query,
                "rows": [
                    {
                        "member_id": row.member_id,
                        "grade": row.grade,
                        "features": None
                        if row.features is None
                        else [round(float(v), 9) for v in row.features],
                    }
                    for row in labeled.rows
                ],
            }
            handle.write(json.dumps(record) + "\n")


def load_labeled_lists(path: str | Path) -> list[LabeledList]:
    lists = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if not line:
                continue
            record = json.loads(line)
            rows = [
                LabeledRow(
                    member_id=int(r["member_id"]),
                    grade=int(r["grade"]),
                    features=None
                    if r.get("features") is None
                    else np.array(r["features"], dtype=float),
                )
                for r in record["rows"]
            ]
            lists.append(
                LabeledList(
                    ideal_candidates=[int(m) for m in record["ideal_candidates"]],
                    rows=rows,
                    origin=record["origin"],
                    session_id=int(record["session_id"]),
                    keyword_query=record.get("keyword_query", ""),
                )
            )
    return lists
