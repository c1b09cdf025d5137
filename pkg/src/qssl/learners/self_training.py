"""Generic self-training driver.

A base learner must provide ``fit(X, y)`` and ``predict(X)`` where
``predict`` returns ``(labels, scores)``; higher scores mean more confident.
A confidence policy maps ``(labels, scores)`` to the positions in ``U`` that
get promoted this round.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core import Dataset, pairwise_squared_euclidean
from ..cost import ALGORITHMIC, CLASSICAL, CostLedger


class NearestNeighborLearner:
    """1-NN classifier; the score of a prediction is minus its squared distance."""

    def __init__(self, ledger: CostLedger | None = None):
        self.ledger = ledger

    def fit(self, X, y):
        self.X_ = np.asarray(X, dtype=np.float64)
        self.y_ = np.asarray(y)
        return self

    def predict(self, X):
        X = np.asarray(X, dtype=np.float64)
        dist = pairwise_squared_euclidean(self.X_, X).reshape(self.X_.shape[0], X.shape[0])
        nearest = np.argmin(dist, axis=0)
        if self.ledger is not None:
            n_l, n_u = dist.shape
            self.ledger.charge(CLASSICAL, ALGORITHMIC, "self_train.predict", n_l * n_u * X.shape[1])
        return self.y_[nearest], -dist[nearest, np.arange(X.shape[0])]


def promote_top(labels, scores) -> np.ndarray:
    """Promote the single most confident prediction (first one on ties)."""
    if len(scores) == 0:
        return np.zeros(0, dtype=np.int64)
    return np.array([int(np.argmax(scores))])


def promote_above(threshold: float):
    """Policy promoting every prediction whose score is at least ``threshold``."""

    def policy(labels, scores):
        return np.flatnonzero(np.asarray(scores) >= threshold)

    return policy


def promote_none(labels, scores) -> np.ndarray:
    return np.zeros(0, dtype=np.int64)


@dataclass
class SelfTrainResult:
    labels: np.ndarray
    """Per-point labels; 0 where a point was never labeled."""
    model: object
    rounds: int
    stagnated: bool
    promoted: list

    @property
    def n_unlabeled(self) -> int:
        return int(np.sum(self.labels == 0))


def self_train(
    ds: Dataset,
    base_learner,
    confidence=promote_top,
    ledger: CostLedger | None = None,
    max_rounds: int | None = None,
) -> SelfTrainResult:
    """Fit on ``L``, predict ``U``, move confident predictions into ``L``, repeat.

    Stops when ``U`` is empty, when the policy promotes nothing (flagged as
    stagnation) or after ``max_rounds``. ``promoted`` lists, per round, the
    ``(index, label)`` pairs that were moved.
    """
    X = ds.x
    labels = np.zeros(ds.n, dtype=np.int64)
    labels[: ds.n_labeled] = ds.labels
    L = list(range(ds.n_labeled))
    U = list(range(ds.n_labeled, ds.n))
    promoted = []
    stagnated = False
    rounds = 0
    while U and (max_rounds is None or rounds < max_rounds):
        if not L:
            stagnated = True
            break
        base_learner.fit(X[L], labels[L])
        if ledger is not None:
            ledger.charge(CLASSICAL, ALGORITHMIC, "self_train.fit", len(L))
        pred, scores = base_learner.predict(X[U])
        chosen = np.asarray(confidence(pred, scores), dtype=np.int64)
        if chosen.size == 0:
            stagnated = True
            break
        rounds += 1
        moved = [(U[p], int(pred[p])) for p in sorted(chosen.tolist())]
        for idx, label in moved:
            labels[idx] = label
        promoted.append(moved)
        drop = set(chosen.tolist())
        L = sorted(L + [idx for idx, _ in moved])
        U = [u for pos, u in enumerate(U) if pos not in drop]
    return SelfTrainResult(labels, base_learner, rounds, stagnated, promoted)
