"""Offline evaluation: skill-selection accuracy, NDCG comparisons, diagnostics.

Two benchmark families. The first checks that the skills chosen from a
set of ideal candidates actually separate contacted results from skipped
ones when scored by the expertise matrix. The second compares ranking
models by mean NDCG on held-out graded lists, with paired t-tests on the
per-list scores.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .expertise import ExpertiseMatrix
from .features import FEATURE_NAMES
from .label_gen import LabeledList
from .ltr import LinearModel, RankingList, ndcg_at_k
from .query_builder import QueryContext, rank_skills

SkillSelector = Callable[[QueryContext], list[int]]


def avg_expertise(
    member_ids: Sequence[int], skill_ids: Sequence[int], expertise: ExpertiseMatrix
) -> float:
    """Mean over members of summed expertise across the given skills."""
    if not member_ids:
        raise ValueError("cannot average expertise over zero members")
    if not skill_ids:
        raise ValueError("cannot average expertise over zero skills")
    total = 0.0
    for member_id in member_ids:
        row = expertise.row(member_id)
        total += sum(row.get(skill_id, 0.0) for skill_id in skill_ids)
    return total / len(member_ids)


@dataclass
class SkillSelectionCase:
    """One search outcome: who was contacted, who was passed over."""

    ideal_candidates: QueryContext
    positives: list[int]
    negatives: list[int]

    def validate(self) -> list[str]:
        problems = []
        if not self.positives:
            problems.append("no positive results")
        if not self.negatives:
            problems.append("no negative results")
        if set(self.positives) & set(self.negatives):
            problems.append("positives and negatives overlap")
        return problems


def build_selection_benchmark(
    lists: Sequence[LabeledList], corpus
) -> list[SkillSelectionCase]:
    """Cases from contact-derived lists that have both 5s and 0s."""
    cases = []
    for labeled in lists:
        if not labeled.ideal_candidates:
            continue
        positives = [r.member_id for r in labeled.rows if r.grade == 5]
        negatives = [r.member_id for r in labeled.rows if r.grade == 0]
        if not positives or not negatives:
            continue
        ctx = QueryContext(
            ideal_candidates=[corpus.get(m) for m in labeled.ideal_candidates]
        )
        cases.append(
            SkillSelectionCase(
                ideal_candidates=ctx, positives=positives, negatives=negatives
            )
        )
    return cases


def skill_selection_accuracy(
    cases: Sequence[SkillSelectionCase],
    selector: SkillSelector,
    expertise: ExpertiseMatrix,
) -> float:
    """Fraction of cases where selected skills score contacted results
    strictly above skipped ones. Cases where the selector returns no
    skills count as failures."""
    if not cases:
        raise ValueError("no skill selection cases")
    wins = 0
    for case in cases:
        skills = selector(case.ideal_candidates)
        if not skills:
            continue
        positive = avg_expertise(case.positives, skills, expertise)
        negative = avg_expertise(case.negatives, skills, expertise)
        if positive > negative:
            wins += 1
    return wins / len(cases)


def make_top_k_selector(expertise: ExpertiseMatrix, k: int = 10) -> SkillSelector:
    """Selector taking the k skills with highest summed expertise."""
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")

    def selector(ctx: QueryContext) -> list[int]:
        return [skill_id for skill_id, _ in rank_skills(ctx, expertise)[:k]]

    return selector


def make_rand_k_selector(k: int, rng: np.random.Generator) -> SkillSelector:
    """Selector drawing k skills uniformly from the candidates' explicit
    skills. Draws min(k, available) without replacement; raises when the
    candidates list no skills at all."""
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")

    def selector(ctx: QueryContext) -> list[int]:
        pool: set[int] = set()
        for profile in ctx.ideal_candidates:
            pool |= profile.skill_ids()
        if not pool:
            raise ValueError("ideal candidates list no skills")
        ordered = sorted(pool)
        take = min(k, len(ordered))
        picks = rng.choice(len(ordered), size=take, replace=False)
        return [ordered[i] for i in picks]

    return selector


@dataclass
class ModelComparison:
    """Mean NDCG per model per cutoff, plus paired significance tests."""

    cutoffs: tuple[int, ...]
    model_names: tuple[str, ...]
    n_lists: int
    mean_ndcg: dict[str, dict[int, float]]
    per_list_ndcg: dict[str, dict[int, np.ndarray]] = field(repr=False)
    p_values: dict[tuple[str, str], dict[int, float]] = field(default_factory=dict)

    def to_record(self) -> dict:
        return {
            "cutoffs": list(self.cutoffs),
            "model_names": list(self.model_names),
            "n_lists": self.n_lists,
            "mean_ndcg": {
                name: {str(k): round(v, 6) for k, v in by_cut.items()}
                for name, by_cut in self.mean_ndcg.items()
            },
            "p_values": {
                f"{a}|{b}": {str(k): round(v, 6) for k, v in by_cut.items()}
                for (a, b), by_cut in self.p_values.items()
            },
        }


def _paired_p_value(a: np.ndarray, b: np.ndarray) -> float:
    """Two-sided paired t-test; identical samples give p = 1 by convention."""
    if np.allclose(a, b):
        return 1.0
    result = stats.ttest_rel(a, b)
    return float(result.pvalue)


def compare_models(
    models: dict[str, LinearModel],
    test: Sequence[RankingList],
    cutoffs: tuple[int, ...] = (5, 15, 25),
) -> ModelComparison:
    """Score every model on the same held-out lists.

    Ranks each list by model score (ties broken by ascending member id),
    computes NDCG at each cutoff, and reports per-model means plus
    paired t-test p-values for every model pair.
    """
    if not models:
        raise ValueError("no models to compare")
    if not test:
        raise ValueError("no test lists")
    names = tuple(models)
    per_list: dict[str, dict[int, np.ndarray]] = {
        name: {k: np.zeros(len(test)) for k in cutoffs} for name in names
    }
    for name in names:
        model = models[name]
        for i, ranking in enumerate(test):
            scores = model.score_matrix(ranking.features)
            order = np.lexsort((ranking.member_ids, -scores))
            graded = ranking.grades[order]
            for k in cutoffs:
                per_list[name][k][i] = ndcg_at_k(graded, k)
    mean_ndcg = {
        name: {k: float(np.mean(per_list[name][k])) for k in cutoffs}
        for name in names
    }
    p_values = {}
    for i, a in enumerate(names):
        for b in names[i + 1 :]:
            p_values[(a, b)] = {
                k: _paired_p_value(per_list[a][k], per_list[b][k]) for k in cutoffs
            }
    return ModelComparison(
        cutoffs=cutoffs,
        model_names=names,
        n_lists=len(test),
        mean_ndcg=mean_ndcg,
        per_list_ndcg=per_list,
        p_values=p_values,
    )


def format_comparison(comparison: ModelComparison) -> str:
    """Fixed-width text table for terminal reports."""
    width = max(len(name) for name in comparison.model_names)
    width = max(width, len("model"))
    header = "model".ljust(width) + "".join(
        f"  ndcg@{k:<4d}" for k in comparison.cutoffs
    )
    lines = [header, "-" * len(header)]
    for name in comparison.model_names:
        cells = "".join(
            f"  {comparison.mean_ndcg[name][k]:9.4f}" for k in comparison.cutoffs
        )
        lines.append(name.ljust(width) + cells)
    if comparison.p_values:
        lines.append("")
        lines.append("paired t-test p-values")
        for (a, b), by_cut in comparison.p_values.items():
            cells = ", ".join(f"@{k}: {p:.4g}" for k, p in by_cut.items())
            lines.append(f"  {a} vs {b}: {cells}")
    lines.append(f"  ({comparison.n_lists} lists)")
    return "\n".join(lines)


def feature_label_correlation(
    lists: Sequence[LabeledList],
) -> list[tuple[str, float]]:
    """Mean per-list Pearson correlation between each feature and grades.

    Lists shorter than two rows are skipped; a constant feature or
    constant grade column contributes zero for that list. Results are
    sorted by descending correlation.
    """
    if not lists:
        raise ValueError("no labeled lists")
    sums = np.zeros(len(FEATURE_NAMES))
    used = 0
    for labeled in lists:
        if len(labeled.rows) < 2:
            continue
        if any(row.features is None for row in labeled.rows):
            raise ValueError("attach features before measuring correlation")
        grades = np.array(labeled.grades(), dtype=float)
        matrix = np.stack([row.features for row in labeled.rows])
        used += 1
        if np.ptp(grades) == 0:
            continue
        g = grades - grades.mean()
        g_norm = float(np.sqrt(np.sum(g * g)))
        for j in range(matrix.shape[1]):
            col = matrix[:, j]
            if np.ptp(col) == 0:
                continue
            c = col - col.mean()
            c_norm = float(np.sqrt(np.sum(c * c)))
            sums[j] += float(np.dot(c, g)) / (c_norm * g_norm)
    if used == 0:
        raise ValueError("no lists with enough rows to correlate")
    means = sums / used
    pairs = [(name, float(means[j])) for j, name in enumerate(FEATURE_NAMES)]
    return sorted(pairs, key=lambda item: (-item[1], item[0]))
