"""Member-skill expertise estimation.

The seed matrix scores only skills listed explicitly on a profile, from
endorsement counts and skill-name mentions in the profile text. A low-rank
factorization of that sparse matrix generalizes the scores to unlisted
skills; clamping and thresholding the reconstruction yields the densified
matrix used by query building, ranking features, and evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

import numpy as np

from .corpus import Corpus, Dictionaries, tokenize

ENDORSEMENT_WEIGHT = 0.7
TEXT_WEIGHT = 0.3

Factors = tuple[dict[int, np.ndarray], dict[int, np.ndarray]]


@dataclass
class ExpertiseMatrix:
    """Sparse member x skill score matrix at a named pipeline stage."""

    stage: str
    cells: dict[int, dict[int, float]] = field(default_factory=dict)

    def score(self, member_id: int, skill_id: int) -> float:
        row = self.cells.get(member_id)
        return row.get(skill_id, 0.0) if row else 0.0

    def row(self, member_id: int) -> dict[int, float]:
        return self.cells.get(member_id, {})

    def n_cells(self) -> int:
        return sum(len(row) for row in self.cells.values())

    def member_ids(self) -> list[int]:
        return sorted(self.cells)

    def skill_ids(self) -> set[int]:
        out: set[int] = set()
        for row in self.cells.values():
            out.update(row)
        return out

    def iter_cells(self) -> Iterator[tuple[int, int, float]]:
        for member_id in sorted(self.cells):
            row = self.cells[member_id]
            for skill_id in sorted(row):
                yield member_id, skill_id, row[skill_id]

    def validate(self) -> list[str]:
        problems = []
        if self.stage not in ("seed", "densified"):
            problems.append(f"unknown stage {self.stage!r}")
        for member_id, skill_id, score in self.iter_cells():
            if not 0.0 <= score <= 1.0:
                problems.append(
                    f"cell ({member_id}, {skill_id}) score {score} out of [0, 1]"
                )
        return problems


@dataclass
class FactorizationConfig:
    """Alternating least squares settings for densification."""

    rank: int = 16
    regularization: float = 0.05
    iterations: int = 20
    threshold: float = 0.3
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise ValueError("rank must be at least 1")
        if self.iterations < 1:
            raise ValueError("iterations must be at least 1")
        if self.regularization < 0.0:
            raise ValueError("regularization must be non-negative")
        if not 0.0 < self.threshold < 1.0:
            raise ValueError("threshold must lie in (0, 1)")


def expertise_score(matrix: ExpertiseMatrix, member_id: int, skill_id: int) -> float:
    """Score lookup; 0.0 for any absent cell."""
    return matrix.score(member_id, skill_id)


def seed_scores(
    corpus: Corpus,
    dictionaries: Dictionaries,
    endorsement_weight: float = ENDORSEMENT_WEIGHT,
    text_weight: float = TEXT_WEIGHT,
) -> ExpertiseMatrix:
    """Score each explicitly listed skill of each member.

    score = clamp(w_e * log(1 + endorsements) / log(1 + max_endorsements)
                  + w_t * mention_fraction, 0, 1)

    where max_endorsements is the corpus-wide maximum and mention_fraction
    is the fraction of the skill name's tokens found in the member's
    headline or position descriptions. Only listed skills get cells.
    """
    skill_dict = dictionaries["skill"]
    max_endorsements = 0
    for profile in corpus.members():
        for _, endorsements in profile.skills:
            max_endorsements = max(max_endorsements, endorsements)
    log_max = math.log1p(max_endorsements)

    skill_tokens: dict[int, list[str]] = {}
    matrix = ExpertiseMatrix(stage="seed")
    for profile in corpus.members():
        if not profile.skills:
            continue
        text_tokens = set(tokenize(profile.headline))
        for pos in profile.positions:
            text_tokens.update(tokenize(pos.description))
        row: dict[int, float] = {}
        for skill_id, endorsements in profile.skills:
            tokens = skill_tokens.get(skill_id)
            if tokens is None:
                tokens = tokenize(skill_dict.name(skill_id))
                skill_tokens[skill_id] = tokens
            # An all-zero corpus carries no endorsement signal at all.
            endorse_term = math.log1p(endorsements) / log_max if log_max > 0 else 0.0
            mention = (
                sum(1 for t in tokens if t in text_tokens) / len(tokens)
                if tokens
                else 0.0
            )
            score = endorsement_weight * endorse_term + text_weight * mention
            row[skill_id] = min(1.0, max(0.0, score))
        matrix.cells[profile.member_id] = row
    return matrix


def _ridge_solve_side(
    obs_idx: list[np.ndarray],
    obs_val: list[np.ndarray],
    other: np.ndarray,
    regularization: float,
) -> np.ndarray:
    """Solve all per-row ridge systems, batched by observation count."""
    rank = other.shape[1]
    out = np.empty((len(obs_idx), rank))
    eye = regularization * np.eye(rank)
    by_count: dict[int, list[int]] = {}
    for i, idx in enumerate(obs_idx):
        by_count.setdefault(len(idx), []).append(i)
    for count, rows in by_count.items():
        idx = np.stack([obs_idx[i] for i in rows])
        vals = np.stack([obs_val[i] for i in rows])
        z = other[idx]  # (group, count, rank)
        gram = np.einsum("gck,gcl->gkl", z, z) + eye
        rhs = np.einsum("gck,gc->gk", z, vals)
        out[rows] = np.linalg.solve(gram, rhs[:, :, None])[:, :, 0]
    return out


def factorization_objective(
    matrix: ExpertiseMatrix,
    member_factors: dict[int, np.ndarray],
    skill_factors: dict[int, np.ndarray],
    regularization: float,
) -> float:
    """Squared reconstruction error on observed cells plus L2 penalty."""
    sse = 0.0
    for member_id, skill_id, score in matrix.iter_cells():
        pred = float(member_factors[member_id] @ skill_factors[skill_id])
        sse += (score - pred) ** 2
    penalty = sum(float(v @ v) for v in member_factors.values())
    penalty += sum(float(v @ v) for v in skill_factors.values())
    return sse + regularization * penalty


def factorize(
    matrix: ExpertiseMatrix,
    cfg: FactorizationConfig,
    objective_trace: list[float] | None = None,
) -> Factors:
    """Factor the observed cells into member and skill latent vectors.

    Alternating least squares over observed cells only; each half-step
    solves the exact ridge subproblem, so the objective never
    increases. When given, ``objective_trace`` collects the objective
    after every half-step.
    """
    members = sorted(matrix.cells)
    skills = sorted(matrix.skill_ids())
    if not members or not skills:
        raise ValueError("cannot factorize an empty matrix")
    if cfg.rank > min(len(members), len(skills)):
        raise ValueError(
            f"rank {cfg.rank} exceeds matrix dimensions "
            f"{len(members)}x{len(skills)}"
        )
    member_pos = {m: i for i, m in enumerate(members)}
    skill_pos = {s: j for j, s in enumerate(skills)}

    member_obs_idx: list[np.ndarray] = []
    member_obs_val: list[np.ndarray] = []
    skill_obs: dict[int, tuple[list[int], list[float]]] = {
        j: ([], []) for j in range(len(skills))
    }
    for m in members:
        row = matrix.cells[m]
        cols = sorted(row)
        member_obs_idx.append(np.array([skill_pos[s] for s in cols], dtype=np.intp))
        member_obs_val.append(np.array([row[s] for s in cols]))
        for s in cols:
            idx, val = skill_obs[skill_pos[s]]
            idx.append(member_pos[m])
            val.append(row[s])
    skill_obs_idx = [np.array(skill_obs[j][0], dtype=np.intp) for j in range(len(skills))]
    skill_obs_val = [np.array(skill_obs[j][1]) for j in range(len(skills))]

    rng = np.random.default_rng(cfg.rng_seed)
    scale = 0.1 / math.sqrt(cfg.rank)
    member_mat = rng.normal(0.0, scale, size=(len(members), cfg.rank))
    skill_mat = rng.normal(0.0, scale, size=(len(skills), cfg.rank))

    def assemble() -> Factors:
        return (
            {m: member_mat[member_pos[m]] for m in members},
            {s: skill_mat[skill_pos[s]] for s in skills},
        )

    def trace() -> None:
        if objective_trace is not None:
            mf, sf = assemble()
            objective_trace.append(
                factorization_objective(matrix, mf, sf, cfg.regularization)
            )

    for _ in range(cfg.iterations):
        member_mat = _ridge_solve_side(
            member_obs_idx, member_obs_val, skill_mat, cfg.regularization
        )
        trace()
        skill_mat = _ridge_solve_side(
            skill_obs_idx, skill_obs_val, member_mat, cfg.regularization
        )
        trace()

    return assemble()


def densify(factors: Factors, cfg: FactorizationConfig) -> ExpertiseMatrix:
    """Reconstruct all member x skill scores, clamp to [0, 1], keep >= threshold."""
    member_factors, skill_factors = factors
    members = sorted(member_factors)
    skills = sorted(skill_factors)
    member_mat = np.stack([member_factors[m] for m in members])
    skill_mat = np.stack([skill_factors[s] for s in skills])
    scores = member_mat @ skill_mat.T
    np.clip(scores, 0.0, 1.0, out=scores)
    keep = scores >= cfg.threshold

    matrix = ExpertiseMatrix(stage="densified")
    for i, m in enumerate(members):
        cols = np.nonzero(keep[i])[0]
        if cols.size:
            matrix.cells[m] = {skills[j]: float(scores[i, j]) for j in cols}
    return matrix


def build_expertise(
    corpus: Corpus,
    dictionaries: Dictionaries,
    cfg: FactorizationConfig | None = None,
) -> ExpertiseMatrix:
    """Full pipeline: seed scores, factorize, densify."""
    cfg = cfg or FactorizationConfig()
    seed = seed_scores(corpus, dictionaries)
    factors = factorize(seed, cfg)
    return densify(factors, cfg)


def save_expertise(matrix: ExpertiseMatrix, path: str | Path) -> None:
    """Write the matrix as tab-separated (member_id, skill_id, score) triplets."""
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(f"# stage={matrix.stage}\n")
        for member_id, skill_id, score in matrix.iter_cells():
            handle.write(f"{member_id}\t{skill_id}\t{score:.6f}\n")


def load_expertise(path: str | Path) -> ExpertiseMatrix:
    matrix = ExpertiseMatrix(stage="densified")
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                if "stage=" in line:
                    matrix.stage = line.split("stage=", 1)[1].strip()
                continue
            member_str, skill_str, score_str = line.split("\t")
            matrix.cells.setdefault(int(member_str), {})[int(skill_str)] = float(
                score_str
            )
    return matrix
