"""Noisy distance, inner-product and matrix-product oracles.

Each oracle returns the exact value plus an additive error drawn from a
fixed law that meets the ``(epsilon, delta)`` guarantee with equality:

* with probability ``1 - 2*delta`` the error is uniform on ``[-eps, eps]``;
* otherwise it is uniform on ``[eps, 3*eps]`` with a random sign.

Squared distances are clamped at zero afterwards. In ``exact`` mode the
error is zero and the ground truth from :mod:`qssl.core` is returned
unchanged.

Every estimate charges ``ceil(|x| |y| * lambda * ln(1/delta) / epsilon)``
quantum algorithmic units, which has no dependence on the dimension ``d``.
A parallel classical counter is charged the ``d`` multiply-adds the same
quantity would cost classically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (
    inner_product,
    pairwise_inner_product,
    pairwise_squared_euclidean,
    squared_euclidean,
)
from .cost import ALGORITHMIC, CLASSICAL, QUANTUM
from .errors import ContractError
from .qram import QramStore

NOISY = "noisy"
EXACT = "exact"


def params_problems(epsilon, delta, lambda_, mode) -> list:
    """Every violated constraint of an oracle parameter set, as messages."""
    out = []
    if mode not in (NOISY, EXACT):
        out.append(f"mode must be 'noisy' or 'exact', got {mode!r}")
    if not (isinstance(epsilon, (int, float)) and epsilon > 0 and math.isfinite(epsilon)):
        out.append(f"epsilon must be a positive finite number, got {epsilon!r}")
    if not (isinstance(delta, (int, float)) and 0 < delta < 0.5):
        out.append(f"delta must lie in (0, 1/2), got {delta!r}")
    if lambda_ is not None and not (isinstance(lambda_, (int, float)) and lambda_ > 0):
        out.append(f"lambda must be positive, got {lambda_!r}")
    return out


@dataclass(frozen=True)
class EstimationParams:
    """Accuracy contract for the oracles.

    In exact mode ``epsilon`` and ``delta`` are still required: they are the
    reference values at which cost is charged, so that cost studies do not
    depend on whether noise is switched on.
    """

    epsilon: float = 0.01
    delta: float = 0.01
    lambda_: Optional[float] = None
    mode: str = NOISY

    def __post_init__(self):
        problems = self.problems()
        if problems:
            raise ContractError("; ".join(problems))

    def problems(self) -> list:
        return params_problems(self.epsilon, self.delta, self.lambda_, self.mode)

    @property
    def exact(self) -> bool:
        return self.mode == EXACT

    def to_dict(self) -> dict:
        return {"epsilon": self.epsilon, "delta": self.delta, "lambda": self.lambda_, "mode": self.mode}


@dataclass(frozen=True)
class NoisyEstimate:
    value: float
    truth_within_epsilon: bool
    cost_charged: int


@dataclass(frozen=True)
class EstimateBatch:
    """A block of estimates. ``cost_charged`` is the total booked for it."""

    values: np.ndarray
    within_epsilon: np.ndarray
    cost_charged: int
    entry_costs: Optional[np.ndarray] = None

    @property
    def shape(self):
        return self.values.shape

    def __getitem__(self, idx) -> NoisyEstimate:
        cost = int(self.entry_costs[idx]) if self.entry_costs is not None else 0
        return NoisyEstimate(float(self.values[idx]), bool(self.within_epsilon[idx]), cost)


def estimate_cost(norm_x, norm_y, lam, epsilon, delta):
    """``ceil(|x| |y| lambda ln(1/delta) / epsilon)``, elementwise."""
    raw = np.asarray(norm_x, dtype=np.float64) * np.asarray(norm_y, dtype=np.float64)
    raw = raw * (lam * math.log(1.0 / delta) / epsilon)
    return np.ceil(raw).astype(np.int64)


def perturb(truth, params: EstimationParams, rng, clamp_nonnegative=False):
    """Apply the oracle error law to ``truth``; returns ``(values, success)``.

    Two uniforms are drawn per entry whatever the outcome, so the number of
    generator draws depends only on the shape.
    """
    truth = np.asarray(truth, dtype=np.float64)
    if params.exact:
        return truth.copy(), np.ones(truth.shape, dtype=bool)
    if rng is None:
        raise ContractError("noisy estimation needs an rng")
    fail = rng.random(truth.shape) < 2.0 * params.delta
    w = rng.uniform(-1.0, 1.0, truth.shape)
    eps = params.epsilon
    err = np.where(fail, np.sign(w) * eps * (1.0 + 2.0 * np.abs(w)), eps * w)
    values = truth + err
    if clamp_nonnegative:
        values = np.maximum(values, 0.0)
    return values, ~fail


def _resolve_lambda(params, *stores) -> float:
    if params.lambda_ is not None:
        return params.lambda_
    return max(s.lam for s in stores)


def _check_stores(store_x: QramStore, store_y: QramStore) -> None:
    if store_x.dim != store_y.dim:
        raise ContractError(f"dimension mismatch: {store_x.dim} != {store_y.dim}")


def _index_array(idx, store) -> np.ndarray:
    idx = np.asarray(idx, dtype=np.int64).reshape(-1)
    if idx.size and (idx.min() < 0 or idx.max() >= store.n_rows):
        raise ContractError(f"row index out of range [0, {store.n_rows})")
    return idx


def _single(kind, store_x, i, store_y, j, params, rng, ledger, phase) -> NoisyEstimate:
    _check_stores(store_x, store_y)
    i = _index_array(i, store_x)[0]
    j = _index_array(j, store_y)[0]
    x, y = store_x._rows[i], store_y._rows[j]
    if kind == "distance":
        truth = squared_euclidean(x, y)
    else:
        truth = inner_product(x, y)
    values, ok = perturb(np.array(truth), params, rng, clamp_nonnegative=kind == "distance")
    lam = _resolve_lambda(params, store_x, store_y)
    cost = int(estimate_cost(store_x._norms[i], store_y._norms[j], lam, params.epsilon, params.delta))
    ledger = ledger if ledger is not None else store_x.ledger
    ledger.charge(QUANTUM, ALGORITHMIC, phase, cost, events=1)
    ledger.charge(CLASSICAL, ALGORITHMIC, phase, store_x.dim, events=1)
    return NoisyEstimate(float(values), bool(ok), cost)


def estimate_distance_sq(store_x, i, store_y, j, params, rng=None, ledger=None, phase="estimate.distance"):
    """Noisy ``|x_i - y_j|^2`` between row ``i`` of ``store_x`` and row ``j`` of ``store_y``."""
    return _single("distance", store_x, i, store_y, j, params, rng, ledger, phase)


def estimate_inner_product(store_x, i, store_y, j, params, rng=None, ledger=None, phase="estimate.inner_product"):
    """Noisy ``<x_i, y_j>``; not clamped."""
    return _single("inner", store_x, i, store_y, j, params, rng, ledger, phase)


def _block(kind, store_x, rows, store_y, cols, params, rng, ledger, phase, classical_phase=None):
    _check_stores(store_x, store_y)
    rows = _index_array(rows, store_x)
    cols = _index_array(cols, store_y)
    X = store_x._rows[rows]
    Y = store_y._rows[cols]
    if kind == "distance":
        truth = pairwise_squared_euclidean(X, Y).reshape(rows.size, cols.size)
    else:
        truth = pairwise_inner_product(X, Y).reshape(rows.size, cols.size)
    values, ok = perturb(truth, params, rng, clamp_nonnegative=kind == "distance")
    lam = _resolve_lambda(params, store_x, store_y)
    costs = estimate_cost(
        store_x._norms[rows][:, None], store_y._norms[cols][None, :], lam, params.epsilon, params.delta
    )
    total = int(costs.sum())
    count = rows.size * cols.size
    ledger = ledger if ledger is not None else store_x.ledger
    ledger.charge(QUANTUM, ALGORITHMIC, phase, total, events=count)
    ledger.charge(CLASSICAL, ALGORITHMIC, classical_phase or phase, count * store_x.dim, events=count)
    return EstimateBatch(values, ok, total, costs)


def estimate_distance_block(store_x, rows, store_y, cols, params, rng=None, ledger=None, phase="estimate.distance"):
    """Noisy squared distances for every ``(rows[a], cols[b])`` pair.

    Charged as ``len(rows) * len(cols)`` independent estimates.
    """
    return _block("distance", store_x, rows, store_y, cols, params, rng, ledger, phase)


def estimate_inner_block(store_x, rows, store_y, cols, params, rng=None, ledger=None, phase="estimate.inner_product"):
    return _block("inner", store_x, rows, store_y, cols, params, rng, ledger, phase)


def estimate_matrix_product(store_x, store_y, params, rng=None, ledger=None) -> EstimateBatch:
    """Estimate ``Z = X @ Y.T`` entry by entry as ``l * u`` inner products.

    The quantum counter on ``matmul.estimate`` records exactly ``l * u``
    events; the classical counter on ``matmul.classical`` records ``l*u*d``
    multiply-accumulate units.
    """
    return _block(
        "inner",
        store_x,
        np.arange(store_x.n_rows),
        store_y,
        np.arange(store_y.n_rows),
        params,
        rng,
        ledger,
        "matmul.estimate",
        classical_phase="matmul.classical",
    )


def centroid_distance_map(
    store_points, centroid_store, params, rng=None, k=None, ledger=None, phase="estimate.centroid_map"
) -> EstimateBatch:
    """Noisy squared distances from every point to every centroid, ``(N, k)``.

    The point index is held in superposition, so the quantum charge is one
    estimate per centroid. The norm used for the point side is the RMS row
    norm of ``store_points`` (the normalisation of the superposed state).
    Quantum: ``k`` events costing ``sum_m ceil(rms * |c_m| * lambda *
    ln(1/delta) / epsilon)``; classical: ``N * k * d`` units.
    """
    _check_stores(store_points, centroid_store)
    n_centroids = centroid_store.n_rows
    if n_centroids == 0:
        raise ContractError("centroid set is empty")
    if k is not None and k != n_centroids:
        raise ContractError(f"k={k} but the centroid store holds {n_centroids} rows")
    n = store_points.n_rows
    truth = pairwise_squared_euclidean(store_points._rows[:n], centroid_store._rows[:n_centroids])
    truth = truth.reshape(n, n_centroids)
    values, ok = perturb(truth, params, rng, clamp_nonnegative=True)
    lam = _resolve_lambda(params, store_points, centroid_store)
    col_costs = estimate_cost(
        store_points.rms_norm(), centroid_store._norms[:n_centroids], lam, params.epsilon, params.delta
    )
    total = int(col_costs.sum())
    ledger = ledger if ledger is not None else store_points.ledger
    ledger.charge(QUANTUM, ALGORITHMIC, phase, total, events=n_centroids)
    ledger.charge(CLASSICAL, ALGORITHMIC, phase, n * n_centroids * store_points.dim, events=n * n_centroids)
    return EstimateBatch(values, ok, total)
