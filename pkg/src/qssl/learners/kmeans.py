"""Semi-supervised k-means with pinned labels, classical and quantum.

Labeled points keep their given cluster at every iteration; unlabeled points
go to their nearest centroid; centroids are recomputed as cluster means. A
cluster that ends up empty keeps its previous centroid.

The quantum variant estimates all point-centroid distances through
:func:`~qssl.estimators.centroid_distance_map`, samples the label register
and charges the centroid update as a matrix product of ``N`` units per
centroid. With exact estimates and ``update="full"`` it reproduces the
classical run iteration by iteration.
"""

from __future__ import annotations

import hashlib
from collections import namedtuple
from dataclasses import dataclass, field

import numpy as np

from ..core import Dataset, make_rng, pairwise_squared_euclidean
from ..cost import ALGORITHMIC, CLASSICAL, QUANTUM, CostLedger
from ..errors import ContractError
from ..estimators import EstimationParams, centroid_distance_map
from ..qram import QramStore

UPDATE_MODES = ("full", "sampled")


def assignments_digest(assignments) -> str:
    data = np.ascontiguousarray(assignments, dtype="<i8").tobytes()
    return hashlib.sha256(data).hexdigest()[:16]


@dataclass
class KMeansState:
    centroids: np.ndarray
    assignments: np.ndarray
    t: int = 0
    objective: float = float("inf")

    @property
    def k(self) -> int:
        return self.centroids.shape[0]

    @property
    def cluster_sets(self) -> list:
        """Index arrays ``S_1 .. S_k`` (position ``m-1`` holds cluster ``m``)."""
        return [np.flatnonzero(self.assignments == m) for m in range(1, self.k + 1)]

    def cluster_sizes(self) -> np.ndarray:
        return np.bincount(self.assignments, minlength=self.k + 1)[1:]


@dataclass(frozen=True)
class KMeansIteration:
    t: int
    assignments: np.ndarray = field(repr=False)
    centroids: np.ndarray = field(repr=False)
    objective: float
    shift: float
    measured_cluster: int | None = None
    events: tuple = ()
    charges: dict = field(default_factory=dict, compare=False)

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "assignments_digest": assignments_digest(self.assignments),
            "centroids": self.centroids.tolist(),
            "objective": self.objective,
            "shift": self.shift,
            "measured_cluster": self.measured_cluster,
            "events": list(self.events),
            "charges": self.charges,
        }


@dataclass
class KMeansResult:
    state: KMeansState
    trace: list
    converged: bool
    ledger: CostLedger

    @property
    def iterations(self) -> int:
        return len(self.trace)

    @property
    def assignments(self) -> np.ndarray:
        return self.state.assignments

    @property
    def centroids(self) -> np.ndarray:
        return self.state.centroids

    def to_dict(self) -> dict:
        return {
            "centroids": self.state.centroids.tolist(),
            "assignments": self.state.assignments.tolist(),
            "iterations": self.iterations,
            "converged": self.converged,
            "objective": self.state.objective,
            "trace": [it.to_dict() for it in self.trace],
        }


LabelMeasurement = namedtuple("LabelMeasurement", ["cluster", "members"])
LabelMeasurement.weights = property(lambda self: np.full(self.members.size, 1.0 / self.members.size))


def measure_label_register(state: KMeansState, rng, ledger: CostLedger | None = None, phase="kmeans.step3.measure"):
    """Sample cluster ``m`` with probability ``|S_m| / N``.

    Returns ``(m, members)`` where ``members`` is ``S_m``; the uniform
    weights over it are available as ``.weights``. Charges one unit.
    """
    sizes = state.cluster_sizes()
    n = int(sizes.sum())
    if n == 0:
        raise ContractError("no points are assigned")
    cumulative = np.cumsum(sizes)
    m = int(np.searchsorted(cumulative, rng.random() * n, side="right")) + 1
    m = min(m, state.k)
    while sizes[m - 1] == 0:  # float edge at the top of the range
        m -= 1
    if ledger is not None:
        ledger.charge(QUANTUM, ALGORITHMIC, phase, 1)
    return LabelMeasurement(m, np.flatnonzero(state.assignments == m))


def _validate(ds: Dataset, k: int) -> None:
    if k < 1:
        raise ContractError("k must be >= 1")
    if k > ds.n:
        raise ContractError(f"k={k} exceeds the number of points N={ds.n}")
    if ds.n_labeled and ds.labels.max() > k:
        raise ContractError(f"label {int(ds.labels.max())} outside [1, {k}]")


def initial_centroids(ds: Dataset, k: int, rng) -> np.ndarray:
    """Labeled-mean centroid where a cluster has labeled points, else a random data point."""
    X = ds.x
    centroids = np.empty((k, ds.dim))
    for m in range(1, k + 1):
        members = ds.labeled_x[ds.labels == m]
        if members.shape[0]:
            centroids[m - 1] = members.sum(axis=0) / members.shape[0]
        else:
            centroids[m - 1] = X[rng.integers(ds.n)]
    return centroids


def _assign(dist: np.ndarray, ds: Dataset) -> np.ndarray:
    z = np.argmin(dist, axis=1).astype(np.int64) + 1
    z[: ds.n_labeled] = ds.labels
    return z


def _means(X, z, old, clusters) -> np.ndarray:
    new = old.copy()
    for m in clusters:
        mask = z == m
        count = int(mask.sum())
        if count:
            new[m - 1] = X[mask].sum(axis=0) / count
    return new


def _objective(X, centroids, z) -> float:
    dist = pairwise_squared_euclidean(X, centroids)
    return float(dist[np.arange(X.shape[0]), z - 1].sum())


def kmeans_classical(
    ds: Dataset,
    k: int,
    init_seed=0,
    tol: float = 1e-8,
    max_iter: int = 100,
    ledger: CostLedger | None = None,
) -> KMeansResult:
    """Classical semi-supervised k-means.

    Per iteration the classical algorithmic counters receive ``N*k*d``
    distance units, ``N*k`` comparisons and ``N*d`` update units. Stops when
    the largest squared centroid move is ``<= tol`` or after ``max_iter``.
    """
    _validate(ds, k)
    ledger = ledger if ledger is not None else CostLedger()
    X = ds.x
    n, d = X.shape
    centroids = initial_centroids(ds, k, make_rng(init_seed))
    ledger.charge(CLASSICAL, ALGORITHMIC, "kmeans.init", ds.n_labeled * d)
    state = KMeansState(centroids, np.zeros(n, dtype=np.int64))
    trace = []
    converged = False
    while state.t < max_iter:
        before = ledger.snapshot()
        dist = pairwise_squared_euclidean(X, state.centroids)
        ledger.charge(CLASSICAL, ALGORITHMIC, "kmeans.step1.distance", n * k * d)
        z = _assign(dist, ds)
        ledger.charge(CLASSICAL, ALGORITHMIC, "kmeans.step2.assign", n * k)
        objective = float(dist[np.arange(n), z - 1].sum())
        new = _means(X, z, state.centroids, range(1, k + 1))
        ledger.charge(CLASSICAL, ALGORITHMIC, "kmeans.step4.update", n * d)
        shift = float(np.max(np.sum((new - state.centroids) ** 2, axis=1)))
        state = KMeansState(new, z, state.t + 1, objective)
        trace.append(
            KMeansIteration(state.t, z, new, objective, shift, charges=(ledger.snapshot() - before).by_phase())
        )
        if shift <= tol:
            converged = True
            break
    return KMeansResult(state, trace, converged, ledger)


def kmeans_quantum(
    ds: Dataset,
    k: int,
    params: EstimationParams,
    init_seed=0,
    tol: float = 1e-8,
    max_iter: int = 100,
    rng=None,
    ledger: CostLedger | None = None,
    update: str = "full",
) -> KMeansResult:
    """Quantum semi-supervised k-means on a simulated QRAM store.

    ``update="full"`` recomputes every centroid each iteration (k*N units);
    ``update="sampled"`` recomputes only the cluster returned by the label
    measurement (N units), and then declares convergence once every
    non-empty cluster has been measured without moving more than ``tol``
    and without any assignment changing in between.

    The reported objective is the exact within-cluster sum of squares of
    the chosen assignment, whatever the estimate noise.
    """
    _validate(ds, k)
    if update not in UPDATE_MODES:
        raise ContractError(f"update must be one of {UPDATE_MODES}, got {update!r}")
    ledger = ledger if ledger is not None else CostLedger()
    rng = make_rng(rng if rng is not None else 0)
    X = ds.x
    n, d = X.shape
    store = QramStore.from_rows(X, ledger=ledger, lambda_=params.lambda_)
    centroids = initial_centroids(ds, k, make_rng(init_seed))
    ledger.charge(QUANTUM, ALGORITHMIC, "kmeans.init", ds.n_labeled)
    state = KMeansState(centroids, np.zeros(n, dtype=np.int64))
    trace = []
    converged = False
    settled = set()
    while state.t < max_iter:
        before = ledger.snapshot()
        centroid_store = QramStore.from_rows(state.centroids, ledger=ledger, lambda_=params.lambda_)
        est = centroid_distance_map(store, centroid_store, params, rng, k=k, ledger=ledger, phase="kmeans.step1.distance")
        z = _assign(est.values, ds)
        ledger.charge(QUANTUM, ALGORITHMIC, "kmeans.step2.assign", k)
        # uncompute of step 1: recorded in the trace, no cost
        objective = _objective(X, state.centroids, z) if not params.exact else float(
            est.values[np.arange(n), z - 1].sum()
        )
        assigned = KMeansState(state.centroids, z, state.t, objective)
        measured = measure_label_register(assigned, rng, ledger)
        if update == "full":
            clusters = range(1, k + 1)
        else:
            clusters = [measured.cluster]
        new = _means(X, z, state.centroids, clusters)
        ledger.charge(QUANTUM, ALGORITHMIC, "kmeans.step4.update", n * len(clusters), events=len(clusters))
        shift = float(np.max(np.sum((new - state.centroids) ** 2, axis=1)))
        changed = state.t > 0 and not np.array_equal(z, state.assignments)
        state = KMeansState(new, z, state.t + 1, objective)
        trace.append(
            KMeansIteration(
                state.t,
                z,
                new,
                objective,
                shift,
                measured_cluster=measured.cluster,
                events=("uncompute",),
                charges=(ledger.snapshot() - before).by_phase(),
            )
        )
        if update == "full":
            if shift <= tol:
                converged = True
                break
            continue
        if changed or shift > tol:
            settled.clear()
        if shift <= tol:
            settled.add(measured.cluster)
        nonempty = {m for m in range(1, k + 1) if np.any(z == m)}
        if nonempty <= settled:
            converged = True
            break
    return KMeansResult(state, trace, converged, ledger)


def predict_nearest_centroid(centroids, X) -> np.ndarray:
    """Cluster id (1-based) of the nearest centroid for each row of ``X``."""
    return np.argmin(pairwise_squared_euclidean(X, centroids), axis=1).astype(np.int64) + 1
