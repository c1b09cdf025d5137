"""Cost sweeps and estimator coverage checks.

These functions produce the complexity comparisons (quantum vs classical
charge as a function of ``d``, ``N`` or ``k``) and the Monte Carlo coverage
figures for the noisy oracles. Data is unit-normalised so that the norm
factor in the oracle cost stays fixed across a sweep.
"""

from __future__ import annotations

import math

import numpy as np

from .core import Dataset, generate_blobs, make_rng
from .cost import ALGORITHMIC, CLASSICAL, QUANTUM, CostLedger, fit_scaling
from .estimators import (
    EstimationParams,
    estimate_distance_block,
    estimate_inner_block,
    estimate_matrix_product,
)
from .learners import kmeans_classical, kmeans_quantum, pnn_classical, pnn_quantum
from .qram import QramStore

DEFAULT_LAMBDA = 6


def normalize_rows(ds: Dataset) -> Dataset:
    def unit(a):
        norms = np.linalg.norm(a, axis=1, keepdims=True)
        return a / np.where(norms > 0, norms, 1.0)

    return Dataset(unit(ds.labeled_x), ds.labels, unit(ds.unlabeled_x), truth=ds.truth)


def unit_blobs(seed, k, per_cluster, d, spread=0.1, labeled_fraction=0.1) -> Dataset:
    return normalize_rows(generate_blobs(seed, k, per_cluster, d, spread, labeled_fraction))


def coverage_bound(delta: float, draws: int) -> float:
    """``(1 - 2 delta) - 3 sqrt(2 delta (1 - 2 delta) / draws)``."""
    p = 1.0 - 2.0 * delta
    return p - 3.0 * math.sqrt(2.0 * delta * p / draws)


def pnn_dimension_sweep(dims=(4, 8, 16, 32, 64, 128, 256), n_labeled=10, n_unlabeled=90, params=None, seed=0):
    """Mean per-iteration algorithmic charge of both PNN variants versus ``d``."""
    params = params or EstimationParams(epsilon=0.01, delta=0.01, lambda_=DEFAULT_LAMBDA)
    n = n_labeled + n_unlabeled
    rows = []
    for d in dims:
        ds = unit_blobs(seed, 2, n // 2, d, labeled_fraction=n_labeled / n)
        q = pnn_quantum(ds, params, rng=seed, ledger=CostLedger())
        c = pnn_classical(ds, ledger=CostLedger())
        rows.append(
            {
                "d": d,
                "iterations": q.iterations,
                "quantum_per_iteration": q.ledger.units(QUANTUM, ALGORITHMIC) / q.iterations,
                "classical_per_iteration": c.ledger.units(CLASSICAL, ALGORITHMIC) / c.iterations,
            }
        )
    return rows, _fit_pair(rows, "d")


def _fit_pair(rows, variable, quantum_key="quantum_per_iteration", classical_key="classical_per_iteration"):
    q = fit_scaling([(r[variable], r[quantum_key]) for r in rows], variable, label="quantum")
    c = fit_scaling([(r[variable], r[classical_key]) for r in rows], variable, label="classical")
    return q, c


def _kmeans_step1(ds, k, params, seed):
    q = kmeans_quantum(ds, k, params, init_seed=seed, max_iter=1, rng=seed, ledger=CostLedger())
    c = kmeans_classical(ds, k, init_seed=seed, max_iter=1, ledger=CostLedger())
    return (
        q.ledger.units(QUANTUM, ALGORITHMIC, "kmeans.step1.distance"),
        c.ledger.units(CLASSICAL, ALGORITHMIC, "kmeans.step1.distance"),
    )


def kmeans_n_sweep(ns=(100, 200, 400, 800, 1600), k=4, d=16, params=None, seed=0):
    """First-iteration step-1 charge versus ``N`` at fixed ``k`` and ``d``."""
    params = params or EstimationParams(epsilon=0.01, delta=0.01, lambda_=DEFAULT_LAMBDA)
    rows = []
    for n in ns:
        ds = unit_blobs(seed, k, n // k, d)
        q, c = _kmeans_step1(ds, k, params, seed)
        rows.append({"N": ds.n, "quantum_step1": q, "classical_step1": c})
    return rows, _fit_pair(rows, "N", "quantum_step1", "classical_step1")


def kmeans_k_sweep(ks=(2, 4, 8, 16), n=320, d=16, params=None, seed=0):
    """First-iteration step-1 charge versus ``k`` at fixed ``N`` and ``d``."""
    params = params or EstimationParams(epsilon=0.01, delta=0.01, lambda_=DEFAULT_LAMBDA)
    rows = []
    for k in ks:
        ds = unit_blobs(seed, k, n // k, d)
        q, c = _kmeans_step1(ds, k, params, seed)
        rows.append({"k": k, "quantum_step1": q, "classical_step1": c})
    return rows, _fit_pair(rows, "k", "quantum_step1", "classical_step1")


def matmul_counts(ns=(8, 16, 32), params=None, seed=0):
    """Estimate and arithmetic counts for ``n x n`` matrix products, plus coverage."""
    params = params or EstimationParams(epsilon=0.1, delta=0.05, lambda_=DEFAULT_LAMBDA)
    rng = make_rng(seed)
    rows = []
    for n in ns:
        ledger = CostLedger()
        X = QramStore.from_rows(rng.standard_normal((n, n)), ledger=ledger)
        Y = QramStore.from_rows(rng.standard_normal((n, n)), ledger=ledger)
        est = estimate_matrix_product(X, Y, params, rng, ledger=ledger)
        truth = X.rows @ Y.rows.T
        rows.append(
            {
                "n": n,
                "quantum_estimates": ledger.events(QUANTUM, ALGORITHMIC, "matmul.estimate"),
                "quantum_units": ledger.units(QUANTUM, ALGORITHMIC, "matmul.estimate"),
                "classical_mac": ledger.units(CLASSICAL, ALGORITHMIC, "matmul.classical"),
                "coverage": float(np.mean(np.abs(est.values - truth) <= params.epsilon)),
                "coverage_bound": coverage_bound(params.delta, n * n),
            }
        )
    return rows


def estimator_coverage(kind, epsilon, delta, draws=10_000, seed=0, d=8):
    """Fraction of ``draws`` independent estimates of one fixed pair within ``epsilon``."""
    rng = make_rng(seed)
    store = QramStore.from_rows(rng.standard_normal((2, d)) / math.sqrt(d))
    params = EstimationParams(epsilon=epsilon, delta=delta)
    block = estimate_distance_block if kind == "distance" else estimate_inner_block
    est = block(store, np.zeros(draws, dtype=np.int64), store, [1], params, rng)
    x, y = store.rows
    truth = float(np.sum((x - y) ** 2)) if kind == "distance" else float(np.sum(x * y))
    err = est.values[:, 0] - truth
    return {
        "estimator": kind,
        "epsilon": epsilon,
        "delta": delta,
        "draws": draws,
        "coverage": float(np.mean(np.abs(err) <= epsilon)),
        "bound": coverage_bound(delta, draws),
        "mean_error": float(err.mean()),
    }


def coverage_grid(epsilons=(0.01, 0.1), deltas=(0.01, 0.05, 0.1), draws=10_000, seed=0):
    rows = []
    for i, kind in enumerate(("distance", "inner_product")):
        for a, eps in enumerate(epsilons):
            for b, delta in enumerate(deltas):
                sub_seed = np.random.SeedSequence([seed, i, a, b])
                row = estimator_coverage(kind, eps, delta, draws, seed=sub_seed)
                row["pass"] = row["coverage"] >= row["bound"]
                rows.append(row)
    return rows
