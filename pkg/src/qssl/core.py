"""Datasets, labels and exact vector arithmetic.

Feature vectors are 1-D float64 numpy arrays; a data matrix holds one vector
per row. Everything here is exact and deterministic: the classical learners
call it directly and the noisy estimators use it as their ground truth.
Distances are always *squared* Euclidean.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from .errors import ContractError

UNLABELED = 0


def as_feature_vector(values) -> np.ndarray:
    """Validate ``values`` as a finite 1-D vector and return it as float64."""
    v = np.asarray(values, dtype=np.float64)
    if v.ndim != 1 or v.size == 0:
        raise ContractError(f"feature vector must be 1-D and non-empty, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ContractError("feature vector has non-finite components")
    return v


def _check_same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape[-1] != b.shape[-1]:
        raise ContractError(f"dimension mismatch: {a.shape[-1]} != {b.shape[-1]}")


def squared_euclidean(a, b) -> float:
    """Return ``sum((a - b) ** 2)``."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    _check_same_dim(a, b)
    diff = a - b
    return float(np.sum(diff * diff, axis=-1))


def inner_product(a, b) -> float:
    """Return ``sum(a * b)``."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    _check_same_dim(a, b)
    return float(np.sum(a * b, axis=-1))


def pairwise_squared_euclidean(A, B) -> np.ndarray:
    """All squared distances between rows of ``A`` (n, d) and ``B`` (m, d).

    Entry ``[i, j]`` is bit-identical to ``squared_euclidean(A[i], B[j])``:
    both reduce the same difference vector along the last axis.
    """
    A = np.atleast_2d(np.asarray(A, dtype=np.float64))
    B = np.atleast_2d(np.asarray(B, dtype=np.float64))
    _check_same_dim(A, B)
    diff = A[:, None, :] - B[None, :, :]
    return np.sum(diff * diff, axis=-1)


def pairwise_inner_product(A, B) -> np.ndarray:
    """All inner products between rows of ``A`` and rows of ``B``."""
    A = np.atleast_2d(np.asarray(A, dtype=np.float64))
    B = np.atleast_2d(np.asarray(B, dtype=np.float64))
    _check_same_dim(A, B)
    return np.sum(A[:, None, :] * B[None, :, :], axis=-1)


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Dataset:
    """A semi-supervised training sample.

    Points ``0 .. l-1`` are the labeled ones and ``l .. N-1`` the unlabeled
    ones, in that order. Labels are integers >= 1. ``truth`` optionally holds
    the generating cluster id of every point (for synthetic data) and
    ``centers`` the generating centers; neither is visible to the learners.

    Instances are immutable: all arrays are stored read-only.
    """

    labeled_x: np.ndarray
    labels: np.ndarray
    unlabeled_x: np.ndarray
    truth: Optional[np.ndarray] = field(default=None, compare=False)
    centers: Optional[np.ndarray] = field(default=None, compare=False)

    def __post_init__(self):
        lx = np.asarray(self.labeled_x, dtype=np.float64)
        ux = np.asarray(self.unlabeled_x, dtype=np.float64)
        dims = {a.shape[-1] for a in (lx, ux) if a.ndim == 2}
        if lx.size == 0 and ux.size == 0:
            raise ContractError("dataset must contain at least one point")
        if len(dims) != 1:
            raise ContractError(f"all points must share one dimension, got {sorted(dims)}")
        d = dims.pop()
        lx = lx.reshape(-1, d)
        ux = ux.reshape(-1, d)
        labels = np.asarray(self.labels, dtype=np.int64).reshape(-1)
        if labels.shape[0] != lx.shape[0]:
            raise ContractError(f"{lx.shape[0]} labeled points but {labels.shape[0]} labels")
        if np.any(labels < 1):
            raise ContractError("labels must be integers >= 1")
        for name, arr in (("labeled_x", lx), ("unlabeled_x", ux)):
            if not np.all(np.isfinite(arr)):
                raise ContractError(f"{name} has non-finite values")
        object.__setattr__(self, "labeled_x", _frozen(lx))
        object.__setattr__(self, "unlabeled_x", _frozen(ux))
        object.__setattr__(self, "labels", _frozen(labels))
        if self.truth is not None:
            truth = np.asarray(self.truth, dtype=np.int64).reshape(-1)
            if truth.shape[0] != lx.shape[0] + ux.shape[0]:
                raise ContractError("truth must have one entry per point")
            object.__setattr__(self, "truth", _frozen(truth))
        if self.centers is not None:
            object.__setattr__(self, "centers", _frozen(np.asarray(self.centers, dtype=np.float64)))

    @property
    def n_labeled(self) -> int:
        return self.labeled_x.shape[0]

    @property
    def n_unlabeled(self) -> int:
        return self.unlabeled_x.shape[0]

    @property
    def n(self) -> int:
        return self.n_labeled + self.n_unlabeled

    @property
    def dim(self) -> int:
        return self.labeled_x.shape[1]

    @cached_property
    def x(self) -> np.ndarray:
        """The full (N, d) data matrix, labeled rows first."""
        return _frozen(np.concatenate([self.labeled_x, self.unlabeled_x], axis=0))

    def label_alphabet(self) -> np.ndarray:
        return np.unique(self.labels)

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            np.array_equal(self.labeled_x, other.labeled_x)
            and np.array_equal(self.labels, other.labels)
            and np.array_equal(self.unlabeled_x, other.unlabeled_x)
        )

    __hash__ = None


def make_rng(seed) -> np.random.Generator:
    """Counter-based (Philox) generator, reproducible across platforms."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.Philox(seed))


def generate_blobs(
    seed: int,
    k: int,
    per_cluster: int,
    d: int,
    spread: float,
    labeled_fraction: float,
    box: float = 10.0,
) -> Dataset:
    """Gaussian blobs with a fraction of points carrying their cluster id.

    Centers are drawn uniformly from ``[-box, box]^d``; each point is its
    center plus isotropic normal noise of standard deviation ``spread``.
    Exactly ``ceil(labeled_fraction * N)`` points are labeled, dealt
    round-robin over clusters so that every cluster gets a labeled
    representative as soon as there are at least ``k`` of them.
    The result is a pure function of the arguments.
    """
    if k < 1 or per_cluster < 1 or d < 1:
        raise ContractError("k, per_cluster and d must all be >= 1")
    if not 0.0 <= labeled_fraction <= 1.0:
        raise ContractError(f"labeled_fraction must lie in [0, 1], got {labeled_fraction}")
    if spread < 0:
        raise ContractError("spread must be nonnegative")

    rng = make_rng(seed)
    n = k * per_cluster
    centers = rng.uniform(-box, box, size=(k, d))
    points = np.repeat(centers, per_cluster, axis=0) + spread * rng.standard_normal((n, d))
    cluster = np.repeat(np.arange(1, k + 1), per_cluster)

    # round() guards against 0.7 * 10 == 7.000000000000001
    n_lab = math.ceil(round(labeled_fraction * n, 9))
    base, extra = divmod(n_lab, k)
    labeled_idx = []
    for m in range(k):
        take = base + (1 if m < extra else 0)
        members = rng.permutation(per_cluster)[:take] + m * per_cluster
        labeled_idx.extend(sorted(members.tolist()))
    labeled_idx = np.asarray(labeled_idx, dtype=np.int64)
    mask = np.ones(n, dtype=bool)
    mask[labeled_idx] = False
    unlabeled_idx = np.flatnonzero(mask)
    unlabeled_idx = unlabeled_idx[rng.permutation(unlabeled_idx.size)]

    order = np.concatenate([labeled_idx, unlabeled_idx])
    return Dataset(
        labeled_x=points[labeled_idx],
        labels=cluster[labeled_idx],
        unlabeled_x=points[unlabeled_idx].reshape(-1, d),
        truth=cluster[order],
        centers=centers,
    )


def min_center_gap_sq(centers) -> float:
    """Smallest squared distance between two distinct centers (inf if k == 1)."""
    centers = np.asarray(centers, dtype=np.float64)
    if centers.shape[0] < 2:
        return math.inf
    dist = pairwise_squared_euclidean(centers, centers)
    np.fill_diagonal(dist, np.inf)
    return float(dist.min())
