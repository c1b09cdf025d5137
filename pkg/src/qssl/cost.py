"""Cost ledger and log-log scaling fits.

Costs are abstract integer units. Every counter is keyed by
``(backend, kind, phase)`` where ``backend`` is ``"classical"`` or
``"quantum"`` and ``kind`` separates memory access from algorithmic work.
Each counter also records how many charge events contributed to it, which is
how estimate counts (as opposed to estimate costs) are read back.
"""

from __future__ import annotations

import threading
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractError

BACKENDS = ("classical", "quantum")
KINDS = ("memory_access", "algorithmic")
CLASSICAL, QUANTUM = BACKENDS
MEMORY, ALGORITHMIC = KINDS

DEFAULT_PHASES = frozenset(
    {
        "qram.load",
        "qram.update",
        "qram.query",
        "qram.sample",
        "estimate.distance",
        "estimate.inner_product",
        "estimate.centroid_map",
        "matmul.estimate",
        "matmul.classical",
        "pnn.step1.distance",
        "pnn.step2.minimize",
        "pnn.step3.assign",
        "kmeans.init",
        "kmeans.step1.distance",
        "kmeans.step2.assign",
        "kmeans.step2.uncompute",
        "kmeans.step3.measure",
        "kmeans.step4.update",
        "self_train.fit",
        "self_train.predict",
    }
)


class CostLedger:
    """Thread-safe, monotone cost counters.

    >>> ledger = CostLedger()
    >>> ledger.charge("quantum", "algorithmic", "qram.query", 3)
    >>> ledger.charge("quantum", "algorithmic", "qram.query", 4)
    >>> ledger.units("quantum", "algorithmic", "qram.query")
    7
    """

    def __init__(self, phases=DEFAULT_PHASES):
        self._phases = set(phases)
        self._units = defaultdict(int)
        self._events = defaultdict(int)
        self._lock = threading.Lock()

    @property
    def phases(self) -> frozenset:
        return frozenset(self._phases)

    def register_phase(self, phase: str) -> None:
        with self._lock:
            self._phases.add(phase)

    def charge(self, backend, kind, phase, amount, events=None) -> None:
        """Add ``amount`` units; ``events`` defaults to 1 (0 for a zero charge)."""
        if backend not in BACKENDS:
            raise ContractError(f"unknown backend {backend!r}")
        if kind not in KINDS:
            raise ContractError(f"unknown cost kind {kind!r}")
        if phase not in self._phases:
            raise ContractError(f"unregistered phase tag {phase!r}")
        amount = int(amount)
        events = int(events) if events is not None else int(amount > 0)
        if amount < 0 or events < 0:
            raise ContractError("charges must be nonnegative")
        if amount == 0 and events == 0:
            return
        key = (backend, kind, phase)
        with self._lock:
            self._units[key] += amount
            self._events[key] += events

    def units(self, backend=None, kind=None, phase=None) -> int:
        """Sum of units over counters matching every non-None key field."""
        return sum(v for key, v in self._units.items() if _match(key, backend, kind, phase))

    def events(self, backend=None, kind=None, phase=None) -> int:
        return sum(v for key, v in self._events.items() if _match(key, backend, kind, phase))

    def total(self) -> int:
        return self.units()

    def snapshot(self) -> "LedgerSnapshot":
        with self._lock:
            return LedgerSnapshot(dict(self._units), dict(self._events))

    def rows(self) -> list:
        """Sorted ``{backend, kind, phase, units, events}`` rows."""
        with self._lock:
            keys = sorted(self._units)
            return [
                {
                    "backend": b,
                    "kind": k,
                    "phase": p,
                    "units": self._units[(b, k, p)],
                    "events": self._events[(b, k, p)],
                }
                for b, k, p in keys
            ]

    def to_dict(self) -> dict:
        return {"rows": self.rows(), "total_units": self.total()}


def _match(key, backend, kind, phase) -> bool:
    b, k, p = key
    return (backend is None or b == backend) and (kind is None or k == kind) and (
        phase is None or p == phase
    )


@dataclass(frozen=True)
class LedgerSnapshot:
    """Immutable copy of a ledger's counters; subtract two to get a diff."""

    units_by_key: dict
    events_by_key: dict

    def units(self, backend=None, kind=None, phase=None) -> int:
        return sum(v for key, v in self.units_by_key.items() if _match(key, backend, kind, phase))

    def events(self, backend=None, kind=None, phase=None) -> int:
        return sum(v for key, v in self.events_by_key.items() if _match(key, backend, kind, phase))

    def __sub__(self, other: "LedgerSnapshot") -> "LedgerSnapshot":
        def diff(a, b):
            out = {}
            for key in a.keys() | b.keys():
                delta = a.get(key, 0) - b.get(key, 0)
                if delta:
                    out[key] = delta
            return out

        return LedgerSnapshot(
            diff(self.units_by_key, other.units_by_key),
            diff(self.events_by_key, other.events_by_key),
        )

    def by_phase(self) -> dict:
        """``{"backend/kind/phase": units}`` with sorted keys, for traces."""
        return {"/".join(key): self.units_by_key[key] for key in sorted(self.units_by_key)}


@dataclass
class ScalingReport:
    variable: str
    values: list
    charges: list
    slope: float
    intercept: float
    residual: float
    label: str = ""
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "variable": self.variable,
            "values": list(self.values),
            "charges": list(self.charges),
            "slope": self.slope,
            "intercept": self.intercept,
            "residual": self.residual,
            **self.extra,
        }


def fit_scaling(sweep, variable: str = "x", label: str = "") -> ScalingReport:
    """Least-squares fit of ``log(charge) = slope * log(value) + intercept``.

    ``sweep`` is a sequence of ``(value, charge)`` pairs; at least four are
    needed and all must be positive. ``residual`` is the RMS of the fit
    residuals in natural-log units.
    """
    pts = [(float(v), float(c)) for v, c in sweep]
    if len(pts) < 4:
        raise ContractError(f"need at least 4 sweep points, got {len(pts)}")
    if any(v <= 0 or c <= 0 for v, c in pts):
        raise ContractError("sweep values and charges must be positive")
    lx = np.log([v for v, _ in pts])
    ly = np.log([c for _, c in pts])
    design = np.column_stack([lx, np.ones_like(lx)])
    (slope, intercept), *_ = np.linalg.lstsq(design, ly, rcond=None)
    resid = ly - (slope * lx + intercept)
    return ScalingReport(
        variable=variable,
        values=[v for v, _ in pts],
        charges=[c for _, c in pts],
        slope=float(slope),
        intercept=float(intercept),
        residual=float(np.sqrt(np.mean(resid**2))),
        label=label,
    )
