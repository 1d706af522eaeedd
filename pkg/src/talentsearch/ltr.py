"""Listwise learning to rank: NDCG@K and coordinate-ascent training.

Models are linear over the shared feature registry. Training cycles
through coordinates, probing additive steps in both directions and
keeping whichever single change most improves mean training NDCG, so
the accepted-step objective never decreases. A random restart guards
against a bad start, and the weights returned are the ones that scored
best on the validation lists.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .features import FEATURE_NAMES, FeatureVector

logger = logging.getLogger(__name__)

VALID_GRADES = (0, 2, 5)


def ndcg_at_k(grades: list[int] | np.ndarray, k: int) -> float:
    """Normalized discounted cumulative gain over the top k entries.

    Gains are 2^grade - 1 with a log2 position discount. A list whose
    grades are all zero has no ordering preference and scores 1.0.
    """
    if len(grades) == 0:
        raise ValueError("cannot compute NDCG of an empty list")
    if k < 1:
        raise ValueError(f"cutoff must be positive, got {k}")
    gains = np.asarray([(2.0**g - 1.0) for g in grades])
    discounts = 1.0 / np.log2(np.arange(2, len(gains) + 2))
    dcg = float(np.dot(gains[:k], discounts[: min(k, len(gains))]))
    ideal = np.sort(gains)[::-1]
    idcg = float(np.dot(ideal[:k], discounts[: min(k, len(ideal))]))
    if idcg == 0.0:
        return 1.0
    return dcg / idcg


@dataclass
class RankingList:
    """One training list: rows of features with graded relevance."""

    member_ids: np.ndarray
    grades: np.ndarray
    features: np.ndarray

    def __post_init__(self) -> None:
        self.member_ids = np.asarray(self.member_ids)
        self.grades = np.asarray(self.grades)
        self.features = np.asarray(self.features, dtype=float)
        n = len(self.member_ids)
        if self.grades.shape != (n,) or self.features.shape[0] != n:
            raise ValueError("member_ids, grades, and features must align")
        bad = set(int(g) for g in self.grades) - set(VALID_GRADES)
        if bad:
            raise ValueError(f"grades outside {VALID_GRADES}: {sorted(bad)}")


@dataclass
class LinearModel:
    """Named weights over the feature registry; scoring is a dot product."""

    feature_names: tuple[str, ...]
    weights: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.feature_names = tuple(self.feature_names)
        self.weights = np.asarray(self.weights, dtype=float)
        if len(self.weights) != len(self.feature_names):
            raise ValueError("weights and feature names differ in length")
        if not np.all(np.isfinite(self.weights)):
            raise ValueError("model weights must be finite")

    def score(self, fv: FeatureVector) -> float:
        if len(fv.values) != len(self.weights):
            raise ValueError(
                f"feature vector length {len(fv.values)} does not match "
                f"model registry length {len(self.weights)}"
            )
        return float(self.weights @ fv.values)

    def score_matrix(self, features: np.ndarray) -> np.ndarray:
        features = np.asarray(features, dtype=float)
        if features.shape[1] != len(self.weights):
            raise ValueError("feature matrix width does not match registry")
        return features @ self.weights

    def save(self, path: str | Path) -> None:
        record = {
            "feature_names": list(self.feature_names),
            "weights": [float(w) for w in self.weights],
            "metadata": self.metadata,
        }
        Path(path).write_text(json.dumps(record, indent=2) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "LinearModel":
        record = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(
            feature_names=tuple(record["feature_names"]),
            weights=np.array(record["weights"], dtype=float),
            metadata=record.get("metadata", {}),
        )


def rank(
    model: LinearModel, rows: list[tuple[int, FeatureVector]]
) -> list[tuple[int, float]]:
    """Order rows by descending score, ties toward the lower member id."""
    scored = [(member_id, model.score(fv)) for member_id, fv in rows]
    scored.sort(key=lambda row: (-row[1], row[0]))
    return scored


@dataclass(frozen=True)
class TrainConfig:
    """Coordinate-ascent schedule.

    ``frozen_features`` are registry names pinned at weight zero and
    skipped during sweeps, which is how the keyword-era baseline models
    are trained on the shared registry without seeing the candidate
    similarity block.
    """

    ndcg_cutoff: int = 15
    step_grid: tuple[float, ...] = (0.05, 0.1, 0.2, 0.5, 1.0)
    sweeps_max: int = 25
    tolerance: float = 1e-6
    rng_seed: int = 0
    restarts: int = 1
    frozen_features: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.step_grid:
            raise ValueError("step grid must be non-empty")
        if any(step <= 0 for step in self.step_grid):
            raise ValueError("step grid entries must be positive")
        if self.ndcg_cutoff < 1 or self.sweeps_max < 1:
            raise ValueError("cutoff and sweep limit must be positive")
        unknown = set(self.frozen_features) - set(FEATURE_NAMES)
        if unknown:
            raise ValueError(f"unknown frozen features: {sorted(unknown)}")


class _Evaluator:
    """Mean NDCG@k over a fixed set of lists, with incremental scoring."""

    def __init__(self, lists: list[RankingList], k: int):
        self.k = k
        self.features = [rl.features for rl in lists]
        self.member_ids = [rl.member_ids for rl in lists]
        self.gains = [2.0 ** rl.grades.astype(float) - 1.0 for rl in lists]
        self.discounts = [
            1.0 / np.log2(np.arange(2, len(rl.grades) + 2)) for rl in lists
        ]
        self.idcg = []
        for gains, discounts in zip(self.gains, self.discounts):
            ideal = np.sort(gains)[::-1]
            self.idcg.append(float(np.dot(ideal[:k], discounts[:k])))

    def mean_ndcg(self, base_scores: list[np.ndarray], delta: tuple | None = None) -> float:
        """Score every list; ``delta=(coordinate, amount)`` shifts one weight."""
        total = 0.0
        for i, scores in enumerate(base_scores):
            if delta is not None:
                coordinate, amount = delta
                scores = scores + amount * self.features[i][:, coordinate]
            order = np.lexsort((self.member_ids[i], -scores))
            dcg = float(
                np.dot(self.gains[i][order][: self.k], self.discounts[i][: self.k])
            )
            total += dcg / self.idcg[i] if self.idcg[i] > 0 else 1.0
        return total / len(base_scores)

    def base_scores(self, weights: np.ndarray) -> list[np.ndarray]:
        return [features @ weights for features in self.features]


def _ascend(
    start: np.ndarray,
    active: list[int],
    train_eval: _Evaluator,
    valid_eval: _Evaluator | None,
    cfg: TrainConfig,
) -> tuple[np.ndarray, float, list[float]]:
    """Run one coordinate-ascent pass from a starting point.

    Tracks the selection score (validation NDCG, or training NDCG when
    there are no validation lists) at the start and after every
    accepted step, and returns the best-scoring weights seen, that
    score, and the mean train NDCG after each accepted step.
    """
    weights = start.copy()
    scores = train_eval.base_scores(weights)
    current = train_eval.mean_ndcg(scores)
    history = [current]

    def selection_score() -> float:
        if valid_eval is None:
            return current
        return valid_eval.mean_ndcg(valid_eval.base_scores(weights))

    best_weights = weights.copy()
    best_selection = selection_score()
    for _ in range(cfg.sweeps_max):
        sweep_start = current
        for coordinate in active:
            best_amount = 0.0
            best_value = current
            for step in cfg.step_grid:
                for amount in (step, -step):
                    value = train_eval.mean_ndcg(scores, (coordinate, amount))
                    if value > best_value:
                        best_value = value
                        best_amount = amount
            if best_amount != 0.0:
                weights[coordinate] += best_amount
                for i, features in enumerate(train_eval.features):
                    scores[i] = scores[i] + best_amount * features[:, coordinate]
                current = best_value
                history.append(current)
                selection = selection_score()
                if selection > best_selection:
                    best_selection = selection
                    best_weights = weights.copy()
        if current - sweep_start < cfg.tolerance:
            break
    return best_weights, best_selection, history


def train_coordinate_ascent(
    train: list[RankingList],
    valid: list[RankingList],
    cfg: TrainConfig | None = None,
) -> LinearModel:
    """Fit a linear ranker by cyclic coordinate ascent on mean NDCG.

    Starts from uniform weights plus ``cfg.restarts`` random starts;
    among every accepted step of every run, the weights with the best
    validation NDCG win (training NDCG when no validation lists are
    given).
    """
    cfg = cfg or TrainConfig()
    if not train:
        raise ValueError("training set is empty")
    width = len(FEATURE_NAMES)
    for rl in train + valid:
        if rl.features.shape[1] != width:
            raise ValueError(
                f"list has {rl.features.shape[1]} features, registry has {width}"
            )
    frozen = {FEATURE_NAMES.index(name) for name in cfg.frozen_features}
    active = [i for i in range(width) if i not in frozen]

    train_eval = _Evaluator(train, cfg.ndcg_cutoff)
    valid_eval = _Evaluator(valid, cfg.ndcg_cutoff) if valid else None
    rng = np.random.default_rng(cfg.rng_seed)

    starts = [np.zeros(width)]
    starts[0][active] = 1.0
    for _ in range(cfg.restarts):
        restart = np.zeros(width)
        restart[active] = rng.uniform(-1.0, 1.0, size=len(active))
        starts.append(restart)

    best_weights: np.ndarray | None = None
    best_selection = -math.inf
    best_history: list[float] = []
    for run, start in enumerate(starts):
        weights, selection, history = _ascend(
            start, active, train_eval, valid_eval, cfg
        )
        logger.info(
            "run %d: train NDCG@%d %.4f, selection score %.4f",
            run,
            cfg.ndcg_cutoff,
            history[-1],
            selection,
        )
        if selection > best_selection:
            best_selection = selection
            best_weights = weights
            best_history = history

    assert best_weights is not None
    return LinearModel(
        feature_names=FEATURE_NAMES,
        weights=best_weights,
        metadata={
            "ndcg_cutoff": cfg.ndcg_cutoff,
            "train_ndcg_history": [round(v, 6) for v in best_history],
            "selection_ndcg": round(best_selection, 6),
            "frozen_features": list(cfg.frozen_features),
            "rng_seed": cfg.rng_seed,
        },
    )
