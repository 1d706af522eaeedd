"""End-to-end gates for the whole package, one test per guarantee.

Each test exercises one externally visible promise at full scale and
prints a single verdict line. Heavier corpora are built once per
module; everything else rides the session fixtures.
"""

import itertools
import math
import time

import numpy as np
import pytest

from talentsearch.corpus import FACET_KINDS, Dictionary, Position, load_stopwords
from talentsearch.evaluation import (
    build_selection_benchmark,
    compare_models,
    feature_label_correlation,
    make_rand_k_selector,
    make_top_k_selector,
    skill_selection_accuracy,
)
from talentsearch.expertise import (
    ExpertiseMatrix,
    FactorizationConfig,
    build_expertise,
    factorize,
)
from talentsearch.features import (
    FEATURE_NAMES,
    CareerPathConfig,
    NodeSimilarityModel,
    career_path_similarity,
    node_similarity,
)
from talentsearch.label_gen import (
    LabeledList,
    LabeledRow,
    SimulatorConfig,
    attach_features,
    derive_coinmail_labels,
    derive_keyword_labels,
    simulate_sessions,
    split_by_session,
)
from talentsearch.ltr import (
    VALID_GRADES,
    LinearModel,
    RankingList,
    TrainConfig,
    ndcg_at_k,
    train_coordinate_ascent,
)
from talentsearch.query_builder import StructuredQuery
from talentsearch.retrieval import build_index, retrieve
from talentsearch.service import build_snapshot, handle_search
from talentsearch.synth import SynthConfig, generate_corpus, generate_priors

STOPWORDS = frozenset(load_stopwords())
WIDTH = len(FEATURE_NAMES)
BASELINE_BLOCK = (
    "skill_jaccard",
    "skill_cosine",
    "title_jaccard",
    "title_cosine",
    "career_path",
)


def _verdict(ok, line):
    print(f"{'PASS' if ok else 'FAIL'}: {line}")
    assert ok, line


@pytest.fixture(scope="module")
def big_corpus(dictionaries):
    return generate_corpus(SynthConfig(n_members=10_000), seed=2, dictionaries=dictionaries)


@pytest.fixture(scope="module")
def big_index(big_corpus):
    return build_index(big_corpus)


@pytest.fixture(scope="module")
def big_expertise(big_corpus, dictionaries):
    return build_expertise(big_corpus, dictionaries, FactorizationConfig(iterations=8))


# ------------------------------------------------------------- career path


def _hand_dictionaries():
    company = Dictionary(
        kind="company",
        entries={"acme": 1, "globex": 2, "initech": 3},
        canonical={1: "Acme", 2: "Globex", 3: "Initech"},
        similar={1: [(2, 0.6)], 2: [(1, 0.6)]},
    )
    industry = Dictionary(
        kind="industry",
        entries={"software": 11, "finance": 12},
        canonical={11: "Software", 12: "Finance"},
        similar={11: [(12, 0.4)], 12: [(11, 0.4)]},
    )
    title = Dictionary(
        kind="title",
        entries={"software engineer": 21, "data scientist": 22},
        canonical={21: "Software Engineer", 22: "Data Scientist"},
    )
    skill = Dictionary(
        kind="skill",
        entries={"python": 101, "java": 102, "search": 103},
        canonical={101: "Python", 102: "Java", 103: "Search"},
    )
    return {"company": company, "industry": industry, "title": title, "skill": skill}


def _random_position(rng):
    titles = ["Software Engineer", "Data Scientist", "Staff Engineer", "Sous Chef"]
    descriptions = ["ships ranking services", "charts budgets", "", "paints canvases"]
    return Position(
        raw_title=str(rng.choice(titles)),
        start="2018-01",
        end=None,
        title_id=None,
        company_id=rng.choice([1, 2, 3, None]),
        industry_id=rng.choice([11, 12, None]),
        description=str(rng.choice(descriptions)),
        seniority=int(rng.integers(1, 11)),
    )


def _alignment_oracle(sims, gap):
    """Best alignment score by enumerating every monotone pairing."""
    n, m = sims.shape
    best = (n + m) * gap
    for k in range(1, min(n, m) + 1):
        for rows in itertools.combinations(range(n), k):
            for cols in itertools.combinations(range(m), k):
                matched = sum(sims[i, j] for i, j in zip(rows, cols))
                best = max(best, matched + (n + m - 2 * k) * gap)
    return best


def test_career_path_matches_exhaustive_alignment_at_scale():
    dicts = _hand_dictionaries()
    model = NodeSimilarityModel()
    rng = np.random.default_rng(11)
    worst = 0.0
    started = time.perf_counter()
    for _ in range(2000):
        n = int(rng.integers(1, 5))
        m = int(rng.integers(1, 5))
        path_p = [_random_position(rng) for _ in range(n)]
        path_q = [_random_position(rng) for _ in range(m)]
        gap = float(rng.choice([0.0, -0.05, -0.3]))
        sims = np.array(
            [
                [node_similarity(p, q, model, dicts, STOPWORDS) for q in path_q]
                for p in path_p
            ]
        )
        cfg = CareerPathConfig(gap_penalty=gap, normalize=False)
        dp = career_path_similarity(path_p, path_q, model, cfg, dicts, STOPWORDS)
        worst = max(worst, abs(dp - _alignment_oracle(sims, gap)))
    elapsed = time.perf_counter() - started
    _verdict(
        worst <= 1e-12 and elapsed < 10.0,
        "career path scoring equals exhaustive alignment enumeration on 2000 "
        f"path pairs (max err {worst:.2e}, {elapsed:.1f}s)",
    )


# ------------------------------------------------------------- ranking metric


def _brute_ndcg(grades, k):
    gains = [2.0**g - 1.0 for g in grades]
    dcg = 0.0
    for pos, gain in enumerate(gains[:k]):
        dcg += gain / math.log2(pos + 2)
    ideal = sorted(gains, reverse=True)
    idcg = 0.0
    for pos, gain in enumerate(ideal[:k]):
        idcg += gain / math.log2(pos + 2)
    if idcg == 0.0:
        return 1.0
    return dcg / idcg


def test_ndcg_matches_brute_force_and_hand_value():
    rng = np.random.default_rng(19)
    parity = True
    for _ in range(1000):
        n = int(rng.integers(1, 51))
        grades = [int(g) for g in rng.choice(VALID_GRADES, size=n)]
        k = int(rng.integers(1, 56))
        fast = ndcg_at_k(grades, k)
        slow = _brute_ndcg(grades, k)
        if not math.isclose(fast, slow, rel_tol=1e-12, abs_tol=1e-12):
            parity = False
            break
    hand = ndcg_at_k([0, 2, 5], 3)
    _verdict(
        parity and abs(hand - 0.5288) < 1e-3,
        "ndcg equals the plain-loop computation on 1000 random lists and the "
        f"reversed three-grade list scores {hand:.4f}",
    )


# ------------------------------------------------------------- retrieval


def _member_attribute_ids(profile, kind):
    if kind == "skill":
        return set(profile.skill_ids())
    field = f"{kind}_id"
    return {
        getattr(p, field) for p in profile.positions if getattr(p, field) is not None
    }


def _brute_filter(corpus, query):
    hits = set()
    for profile in corpus.members():
        ok = True
        for kind, entries in query.facets.items():
            if not entries:
                continue
            wanted = {entity_id for entity_id, _ in entries}
            if not wanted & _member_attribute_ids(profile, kind):
                ok = False
                break
        if ok:
            hits.add(profile.member_id)
    return hits


def _random_query(rng, dictionaries, max_entries=4):
    kinds = list(FACET_KINDS)
    n_kinds = int(rng.integers(1, len(kinds) + 1))
    picked = [kinds[i] for i in rng.choice(len(kinds), size=n_kinds, replace=False)]
    query = StructuredQuery()
    for kind in picked:
        pool = sorted(dictionaries[kind].canonical)
        count = int(rng.integers(1, max_entries + 1))
        ids = [pool[i] for i in rng.choice(len(pool), size=min(count, len(pool)), replace=False)]
        query.facets[kind] = [(entity_id, 1.0) for entity_id in sorted(ids)]
    return query


def test_retrieval_matches_brute_force_on_large_corpus(big_corpus, big_index, dictionaries):
    rng = np.random.default_rng(29)
    mismatches = 0
    latencies = []
    for _ in range(200):
        query = _random_query(rng, dictionaries)
        started = time.perf_counter()
        got = retrieve(big_index, query)
        latencies.append(time.perf_counter() - started)
        if set(got) != _brute_filter(big_corpus, query):
            mismatches += 1
    p50 = float(np.percentile(latencies, 50)) * 1000.0
    _verdict(
        mismatches == 0 and p50 < 10.0,
        "indexed retrieval equals brute-force filtering on 200 queries over "
        f"10000 members ({mismatches} mismatches, p50 {p50:.2f}ms)",
    )


# ------------------------------------------------------------- completion


def test_rank_two_completion_recovers_held_out_cells():
    worst = 0.0
    for seed in range(5):
        rng = np.random.default_rng(seed)
        u = rng.uniform(0.2, 0.9, size=(20, 2))
        v = rng.uniform(0.2, 0.9, size=(10, 2))
        dense = u @ v.T
        dense /= dense.max()
        cells = {}
        held_out = []
        for i in range(20):
            observed = set(rng.permutation(10)[:5].tolist())
            cells[i] = {j: float(dense[i, j]) for j in observed}
            held_out.extend((i, j) for j in range(10) if j not in observed)
        matrix = ExpertiseMatrix(stage="seeded", cells=cells)
        cfg = FactorizationConfig(rank=2, regularization=1e-2, iterations=200, rng_seed=seed)
        member_factors, skill_factors = factorize(matrix, cfg)
        errors = [
            float(member_factors[i] @ skill_factors[j]) - float(dense[i, j])
            for i, j in held_out
        ]
        rmse = float(np.sqrt(np.mean(np.square(errors))))
        worst = max(worst, rmse)
    _verdict(
        worst < 0.1,
        "rank-2 completion recovers the unobserved half of a 20x10 low-rank "
        f"matrix on 5 seeds (worst held-out rmse {worst:.4f})",
    )


# ------------------------------------------------------------- trainer


def _separable_lists(rng, n_lists):
    bands = {5: (0.8, 1.0), 2: (0.4, 0.6), 0: (0.0, 0.2)}
    lists = []
    for _ in range(n_lists):
        grades = [int(g) for g in rng.choice(VALID_GRADES, size=12)]
        features = rng.uniform(0.0, 1.0, size=(12, WIDTH))
        for row, grade in enumerate(grades):
            low, high = bands[grade]
            features[row, 0] = rng.uniform(low, high)
        lists.append(
            RankingList(
                member_ids=np.arange(12),
                grades=np.array(grades),
                features=features,
            )
        )
    return lists


def test_coordinate_ascent_monotone_convergent_deterministic():
    rng = np.random.default_rng(31)
    lists = _separable_lists(rng, 40)
    train, valid = lists[:30], lists[30:]
    cfg = TrainConfig(rng_seed=0)
    first = train_coordinate_ascent(train, valid, cfg)
    second = train_coordinate_ascent(train, valid, cfg)
    history = first.metadata["train_ndcg_history"]
    monotone = all(a <= b + 1e-12 for a, b in zip(history, history[1:]))
    converged = history[-1] >= 0.99
    identical = np.array_equal(first.weights, second.weights) and (
        first.metadata["train_ndcg_history"] == second.metadata["train_ndcg_history"]
    )
    _verdict(
        monotone and converged and identical,
        "coordinate ascent never loses training ndcg, reaches "
        f"{history[-1]:.4f} on band-separable lists, and reruns identically",
    )


# ------------------------------------------------------------- skill selection


def test_expertise_selection_beats_random_on_simulated_searches(
    corpus, index, dictionaries, expertise
):
    lists = []
    for sim_seed in (11, 12, 13, 14, 15, 16, 17, 18):
        cfg = SimulatorConfig(n_sessions=1000, session_id_base=sim_seed * 10000)
        sessions = simulate_sessions(corpus, index, dictionaries, cfg, seed=sim_seed)
        rng = np.random.default_rng(sim_seed + 500)
        for session in sessions:
            labeled = derive_coinmail_labels(session, int(rng.integers(2, 4)), rng)
            if labeled is not None:
                lists.append(labeled)
    cases = build_selection_benchmark(lists, corpus)
    top = skill_selection_accuracy(cases, make_top_k_selector(expertise, 10), expertise)
    wins = 0
    for seed in range(5):
        selector = make_rand_k_selector(10, np.random.default_rng(seed))
        rand = skill_selection_accuracy(cases, selector, expertise)
        wins += top > rand
    _verdict(
        len(cases) >= 500 and wins >= 4,
        f"top-10 expertise skill selection beats random-10 on {len(cases)} "
        f"simulated searches in {wins}/5 random-selector seeds",
    )


# ------------------------------------------------------------- generations


def test_generation_ordering_on_held_out_lists(
    corpus, index, dictionaries, expertise, priors, feature_models
):
    biased = simulate_sessions(
        corpus,
        index,
        dictionaries,
        SimulatorConfig(
            n_sessions=1500,
            randomize=False,
            inmail_scale=1.6,
            click_scale=0.35,
            session_id_base=8_000_000,
        ),
        seed=81,
        priors=priors,
    )
    randomized = simulate_sessions(
        corpus,
        index,
        dictionaries,
        SimulatorConfig(
            n_sessions=8000,
            randomize=True,
            inmail_scale=1.6,
            click_scale=0.35,
            session_id_base=4_000_000,
        ),
        seed=41,
        priors=priors,
    )
    keyword = [derive_keyword_labels(session) for session in biased]
    attach_features(keyword, corpus, expertise, feature_models)

    ordered_seeds = 0
    finite = True
    for s in range(5):
        rng = np.random.default_rng(1000 + s)
        coinmail = []
        for session in randomized:
            labeled = derive_coinmail_labels(session, int(rng.integers(2, 4)), rng)
            if labeled is not None:
                coinmail.append(labeled)
        attach_features(coinmail, corpus, expertise, feature_models)
        kw_train, kw_valid, _ = split_by_session(
            keyword, np.random.default_rng(2000 + s), (0.7, 0.3, 0.0)
        )
        train, valid, test = split_by_session(
            coinmail, np.random.default_rng(3000 + s), (0.55, 0.25, 0.2)
        )
        kw_train_r = [x.to_ranking_list() for x in kw_train]
        kw_valid_r = [x.to_ranking_list() for x in kw_valid]
        train_r = [x.to_ranking_list() for x in train]
        valid_r = [x.to_ranking_list() for x in valid]
        test_r = [x.to_ranking_list() for x in test if len(set(x.grades())) > 1]

        frozen = TrainConfig(rng_seed=s, restarts=8, frozen_features=BASELINE_BLOCK)
        open_cfg = TrainConfig(rng_seed=s, restarts=8)
        models = {
            "baseline-1": train_coordinate_ascent(kw_train_r, kw_valid_r, frozen),
            "baseline-2": train_coordinate_ascent(train_r, valid_r, frozen),
            "full": train_coordinate_ascent(train_r, valid_r, open_cfg),
        }
        comparison = compare_models(models, test_r, cutoffs=(5,))
        means = {name: comparison.mean_ndcg[name][5] for name in comparison.model_names}
        ordered_seeds += means["baseline-1"] < means["baseline-2"] < means["full"]
        for by_cut in comparison.p_values.values():
            for p in by_cut.values():
                finite = finite and bool(np.isfinite(p))
    _verdict(
        ordered_seeds >= 4 and finite,
        "keyword-trained, contact-trained, and full-registry models rank in "
        f"that order on held-out randomized lists in {ordered_seeds}/5 seeds "
        "with finite paired p-values",
    )


# ------------------------------------------------------------- correlation


def test_correlation_ranks_grade_driving_feature_first(
    corpus, expertise, feature_models
):
    rng = np.random.default_rng(17)
    member_ids = corpus.member_ids()
    anchors = [
        member_id
        for member_id in member_ids
        if len(corpus.get(member_id).positions) >= 2
    ]
    picked = [anchors[i] for i in rng.choice(len(anchors), size=40, replace=False)]
    drafts = []
    for i, anchor_id in enumerate(picked):
        others = [m for m in member_ids if m != anchor_id]
        row_ids = [others[j] for j in rng.choice(len(others), size=15, replace=False)]
        drafts.append(
            LabeledList(
                ideal_candidates=[anchor_id],
                rows=[LabeledRow(member_id=m, grade=0) for m in row_ids],
                origin="coinmail",
                session_id=900_000 + i,
            )
        )
    attach_features(drafts, corpus, expertise, feature_models)
    column = FEATURE_NAMES.index("career_path")
    graded = []
    for draft in drafts:
        order = sorted(draft.rows, key=lambda row: -float(row.features[column]))
        rows = []
        for pos, row in enumerate(order):
            grade = 5 if pos < 5 else 2 if pos < 10 else 0
            rows.append(LabeledRow(member_id=row.member_id, grade=grade, features=row.features))
        graded.append(
            LabeledList(
                ideal_candidates=draft.ideal_candidates,
                rows=rows,
                origin=draft.origin,
                session_id=draft.session_id,
            )
        )
    ranked = feature_label_correlation(graded)
    _verdict(
        ranked[0][0] == "career_path",
        "per-list feature-grade correlation puts the grade-driving career "
        f"path signal first ({ranked[0][0]} at {ranked[0][1]:.3f})",
    )


# ------------------------------------------------------------- service


def test_search_handler_fast_valid_on_large_corpus(
    big_corpus, big_index, big_expertise, dictionaries
):
    model = LinearModel(feature_names=FEATURE_NAMES, weights=np.ones(WIDTH))
    snapshot = build_snapshot(
        big_corpus,
        dictionaries,
        big_expertise,
        model,
        priors=generate_priors(big_corpus, seed=5),
        index=big_index,
    )
    caps = {
        "skill": snapshot.query_cfg.max_skills,
        "title": snapshot.query_cfg.max_titles,
        "company": snapshot.query_cfg.max_companies,
        "industry": snapshot.query_cfg.max_industries,
    }
    rng = np.random.default_rng(43)
    member_ids = big_corpus.member_ids()
    latencies = []
    leaked = 0
    over_cap = 0
    for _ in range(1000):
        n_ic = int(rng.integers(1, 4))
        picks = rng.choice(len(member_ids), size=n_ic, replace=False)
        ic_ids = [int(member_ids[i]) for i in picks]
        offset = int(rng.choice([0, 0, 0, 25]))
        started = time.perf_counter()
        response = handle_search(snapshot, ic_ids, offset=offset, limit=25)
        latencies.append(time.perf_counter() - started)
        returned = {row["member_id"] for row in response["results"]}
        leaked += len(returned & set(ic_ids))
        for kind, entries in response["query"]["facets"].items():
            if len(entries) > caps[kind]:
                over_cap += 1
    p95 = float(np.percentile(latencies, 95)) * 1000.0
    _verdict(
        p95 < 500.0 and leaked == 0 and over_cap == 0,
        "search handler on 10000 members answers 1000 fuzzed requests with "
        f"p95 {p95:.0f}ms, no ideal candidate leaked, every facet under its cap",
    )
