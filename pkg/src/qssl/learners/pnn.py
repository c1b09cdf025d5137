"""Propagating nearest-neighbour classification, classical and quantum.

Each iteration promotes the unlabeled point that is closest to *any*
currently labeled point, giving it that neighbour's label, until no
unlabeled points remain. The quantum variant replaces the exact distance
block by noisy oracle estimates read from a :class:`~qssl.qram.QramStore`
and books costs by the quantum accounting (no factor of ``d``).
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field

import numpy as np

from ..core import Dataset, make_rng, pairwise_squared_euclidean
from ..cost import ALGORITHMIC, CLASSICAL, QUANTUM, CostLedger
from ..errors import ContractError
from ..estimators import EstimationParams, estimate_distance_block
from ..qram import QramStore

TIE_BREAKS = ("lowest", "random")


@dataclass
class PnnState:
    """Current labeled set ``L`` (index -> label) and unlabeled indices ``U``."""

    labeled: dict
    unlabeled: list
    iteration: int = 0

    @classmethod
    def initial(cls, ds: Dataset) -> "PnnState":
        labeled = {i: int(z) for i, z in enumerate(ds.labels)}
        return cls(labeled, list(range(ds.n_labeled, ds.n)))


@dataclass(frozen=True)
class PnnStep:
    iteration: int
    source: int
    target: int
    label: int
    distance: float
    charges: dict = field(compare=False)

    def to_dict(self) -> dict:
        return {
            "iteration": self.iteration,
            "source": self.source,
            "target": self.target,
            "label": self.label,
            "distance": self.distance,
            "charges": self.charges,
        }


@dataclass
class PnnResult:
    labels: np.ndarray
    trace: list
    ledger: CostLedger

    @property
    def iterations(self) -> int:
        return len(self.trace)

    def functional_trace(self) -> list:
        """The trace without cost information, for backend comparisons."""
        return [(s.iteration, s.source, s.target, s.label, s.distance) for s in self.trace]

    def to_dict(self) -> dict:
        return {
            "labels": self.labels.tolist(),
            "iterations": self.iterations,
            "trace": [s.to_dict() for s in self.trace],
        }


def _pick(block: np.ndarray, tie_break: str, rng) -> tuple:
    """Row/column of the minimum; ``lowest`` takes the first in row-major order."""
    if tie_break == "lowest":
        flat = int(np.argmin(block))
    else:
        candidates = np.flatnonzero(block == block.min())
        flat = int(candidates[rng.integers(candidates.size)]) if candidates.size > 1 else int(candidates[0])
    return divmod(flat, block.shape[1])


def _propagate(ds, tie_break, rng, ledger, distance_block, charge_step) -> PnnResult:
    if ds.n_labeled < 1:
        raise ContractError("propagation needs at least one labeled point")
    if tie_break not in TIE_BREAKS:
        raise ContractError(f"tie_break must be one of {TIE_BREAKS}, got {tie_break!r}")
    if tie_break == "random" and rng is None:
        raise ContractError("random tie-breaking needs an rng")

    state = PnnState.initial(ds)
    L = sorted(state.labeled)
    U = list(state.unlabeled)
    trace = []
    while U:
        before = ledger.snapshot()
        block = distance_block(L, U)
        charge_step(len(L), len(U))
        a, b = _pick(block, tie_break, rng)
        source, target = L[a], U[b]
        label = state.labeled[source]
        state.labeled[target] = label
        del U[b]
        bisect.insort(L, target)
        state.iteration += 1
        trace.append(
            PnnStep(
                iteration=state.iteration,
                source=source,
                target=target,
                label=label,
                distance=float(block[a, b]),
                charges=(ledger.snapshot() - before).by_phase(),
            )
        )
    labels = np.array([state.labeled[i] for i in range(ds.n)], dtype=np.int64)
    return PnnResult(labels, trace, ledger)


def pnn_classical(ds: Dataset, tie_break: str = "lowest", rng=None, ledger: CostLedger | None = None) -> PnnResult:
    """Classical propagating nearest neighbour.

    Each iteration charges ``|L|*|U|*d`` distance units, ``|L|*|U|``
    comparisons and one assignment to the classical algorithmic counters.
    """
    ledger = ledger if ledger is not None else CostLedger()
    rng = make_rng(rng) if rng is not None else None
    X = ds.x
    d = ds.dim

    def distance_block(L, U):
        return pairwise_squared_euclidean(X[L], X[U]).reshape(len(L), len(U))

    def charge_step(n_l, n_u):
        ledger.charge(CLASSICAL, ALGORITHMIC, "pnn.step1.distance", n_l * n_u * d, events=n_l * n_u)
        ledger.charge(CLASSICAL, ALGORITHMIC, "pnn.step2.minimize", n_l * n_u)
        ledger.charge(CLASSICAL, ALGORITHMIC, "pnn.step3.assign", 1)

    return _propagate(ds, tie_break, rng, ledger, distance_block, charge_step)


def pnn_quantum(
    ds: Dataset,
    params: EstimationParams,
    tie_break: str = "lowest",
    rng=None,
    ledger: CostLedger | None = None,
) -> PnnResult:
    """Quantum propagating nearest neighbour on a simulated QRAM store.

    Step 1 estimates all ``|L|*|U|`` distances (one oracle charge each, no
    ``d`` factor); step 2 books ``|L|*|U|`` comparisons; step 3 books one
    unit. ``rng`` drives both the oracle noise and random tie-breaking.
    """
    ledger = ledger if ledger is not None else CostLedger()
    rng = make_rng(rng) if rng is not None else None
    if not params.exact and rng is None:
        raise ContractError("noisy quantum propagation needs an rng")
    store = QramStore.from_rows(ds.x, ledger=ledger, lambda_=params.lambda_)

    def distance_block(L, U):
        est = estimate_distance_block(store, L, store, U, params, rng, ledger=ledger, phase="pnn.step1.distance")
        return est.values

    def charge_step(n_l, n_u):
        ledger.charge(QUANTUM, ALGORITHMIC, "pnn.step2.minimize", n_l * n_u)
        ledger.charge(QUANTUM, ALGORITHMIC, "pnn.step3.assign", 1)

    return _propagate(ds, tie_break, rng, ledger, distance_block, charge_step)


def predict_nearest_labeled(train_x, train_labels, X) -> np.ndarray:
    """Label each row of ``X`` by its nearest training point (lowest index on ties)."""
    dist = pairwise_squared_euclidean(train_x, X)
    return np.asarray(train_labels)[np.argmin(dist, axis=0)]
