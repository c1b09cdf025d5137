"""Simulated QRAM row store.

The store keeps the rows of an ``N x d`` matrix together with a binary tree
of partial sums of squared row norms. Nothing quantum is executed: queries
return the stored rows exactly and sampling draws from the squared-norm
distribution. What the store does faithfully is *charge* each operation to a
:class:`~qssl.cost.CostLedger`:

* single-entry mutation: ``ceil(log2(N*d))`` quantum memory units, and
  ``N*d`` classical memory units for the equivalent classical RAM rebuild;
* whole-row insert/delete: ``d`` single-entry mutations;
* row query or norm-weighted index sample: ``lambda`` quantum algorithmic
  units, where ``lambda`` defaults to ``max(1, ceil(log2(N*d)))``.
"""

from __future__ import annotations

import math

import numpy as np

from .core import as_feature_vector
from .cost import ALGORITHMIC, CLASSICAL, MEMORY, QUANTUM, CostLedger
from .errors import ContractError, SamplingError


def ceil_log2(n: int) -> int:
    """Exact ``ceil(log2(n))`` for a positive integer."""
    n = int(n)
    if n < 1:
        raise ContractError(f"ceil_log2 needs a positive integer, got {n}")
    return (n - 1).bit_length()


def mutation_charge(n_rows: int, dim: int) -> int:
    """Quantum memory units for one single-entry mutation."""
    return ceil_log2(n_rows * dim)


def default_lambda(n_rows: int, dim: int) -> int:
    return max(1, ceil_log2(max(1, n_rows) * dim))


class QramStore:
    """Row store with a squared-norm tree and ledger-charged operations.

    Parameters
    ----------
    dim : int
        Row dimension ``d``.
    ledger : CostLedger, optional
        Where charges go. A private ledger is created when omitted.
    lambda_ : float, optional
        Fixed per-query cost. When ``None`` the cost follows the current size
        as ``max(1, ceil(log2(N*d)))``.
    """

    def __init__(self, dim: int, ledger: CostLedger | None = None, lambda_: float | None = None):
        if dim < 1:
            raise ContractError("dim must be >= 1")
        if lambda_ is not None and not lambda_ > 0:
            raise ContractError("lambda must be positive")
        self.dim = int(dim)
        self.ledger = ledger if ledger is not None else CostLedger()
        self._lambda = lambda_
        self._rows = np.zeros((0, self.dim))
        self._norms = np.zeros(0)
        self._n = 0
        self._rebuild_tree()

    @classmethod
    def from_rows(cls, rows, ledger=None, lambda_=None, phase="qram.load") -> "QramStore":
        """Build a store as if each row were inserted in order.

        Charges are identical to ``len(rows)`` calls of :meth:`insert_row`.
        """
        rows = np.atleast_2d(np.asarray(rows, dtype=np.float64))
        if not np.all(np.isfinite(rows)):
            raise ContractError("rows contain non-finite values")
        n, d = rows.shape
        store = cls(d, ledger=ledger, lambda_=lambda_)
        store._rows = rows.copy()
        store._n = n
        store._norms = np.sqrt(np.sum(rows * rows, axis=1))
        store._rebuild_tree()
        if n:
            sizes = np.arange(1, n + 1, dtype=np.int64) * d
            per_entry = np.array([ceil_log2(s) for s in sizes.tolist()], dtype=np.int64)
            store._charge_mutation(phase, int(d * per_entry.sum()), int(sizes.sum()), events=n)
        return store

    # -- size and derived quantities ------------------------------------

    def __len__(self) -> int:
        return self._n

    @property
    def n_rows(self) -> int:
        return self._n

    @property
    def lam(self) -> float:
        if self._lambda is not None:
            return self._lambda
        return default_lambda(self._n, self.dim)

    @property
    def rows(self) -> np.ndarray:
        view = self._rows[: self._n]
        view.flags.writeable = False
        return view

    @property
    def row_norms(self) -> np.ndarray:
        view = self._norms[: self._n]
        view.flags.writeable = False
        return view

    @property
    def norm_tree(self) -> np.ndarray:
        """Heap-ordered tree of squared-norm partial sums; index 1 is the root."""
        view = self._tree.view()
        view.flags.writeable = False
        return view

    @property
    def root(self) -> float:
        return float(self._tree[1])

    @property
    def depth(self) -> int:
        return ceil_log2(max(1, self._n))

    def rms_norm(self) -> float:
        """Root-mean-square row norm, read from the tree root."""
        if self._n == 0:
            return 0.0
        return math.sqrt(self.root / self._n)

    # -- tree maintenance -------------------------------------------------

    def _rebuild_tree(self) -> None:
        self._capacity = 1 << ceil_log2(max(1, self._n))
        tree = np.zeros(2 * self._capacity)
        leaves = np.zeros(self._capacity)
        if self._n:
            leaves[: self._n] = np.sum(self._rows[: self._n] ** 2, axis=1)
        tree[self._capacity :] = leaves
        for node in range(self._capacity - 1, 0, -1):
            tree[node] = tree[2 * node] + tree[2 * node + 1]
        self._tree = tree

    def _set_leaf(self, i: int) -> None:
        row = self._rows[i]
        self._norms[i] = math.sqrt(float(np.sum(row * row)))
        node = self._capacity + i
        self._tree[node] = float(np.sum(row * row))
        node //= 2
        while node >= 1:
            self._tree[node] = self._tree[2 * node] + self._tree[2 * node + 1]
            node //= 2

    def _check_index(self, i: int) -> int:
        i = int(i)
        if not 0 <= i < self._n:
            raise ContractError(f"row index {i} out of range [0, {self._n})")
        return i

    def _charge_mutation(self, phase, quantum_units, classical_units, events=1) -> None:
        self.ledger.charge(QUANTUM, MEMORY, phase, quantum_units, events=events)
        self.ledger.charge(CLASSICAL, MEMORY, phase, classical_units, events=events)

    # -- mutations --------------------------------------------------------

    def insert_row(self, v, phase="qram.update") -> int:
        v = as_feature_vector(v)
        if v.shape[0] != self.dim:
            raise ContractError(f"dimension mismatch: {v.shape[0]} != {self.dim}")
        i = self._n
        if i >= self._rows.shape[0]:
            grown = np.zeros((max(1, 2 * self._rows.shape[0]), self.dim))
            grown[:i] = self._rows[:i]
            self._rows = grown
            norms = np.zeros(grown.shape[0])
            norms[:i] = self._norms[:i]
            self._norms = norms
        self._rows[i] = v
        self._n += 1
        if self._n > self._capacity:
            self._rebuild_tree()
            self._norms[i] = math.sqrt(float(np.sum(v * v)))
        else:
            self._set_leaf(i)
        n_d = self._n * self.dim
        self._charge_mutation(phase, self.dim * mutation_charge(self._n, self.dim), n_d)
        return i

    def update_entry(self, i: int, j: int, value: float, phase="qram.update") -> None:
        i = self._check_index(i)
        j = int(j)
        if not 0 <= j < self.dim:
            raise ContractError(f"column index {j} out of range [0, {self.dim})")
        value = float(value)
        if not math.isfinite(value):
            raise ContractError("entry value must be finite")
        self._rows[i, j] = value
        self._set_leaf(i)
        self._charge_mutation(phase, mutation_charge(self._n, self.dim), self._n * self.dim)

    def delete_row(self, i: int, phase="qram.update") -> None:
        """Remove row ``i``; later rows shift down by one index."""
        i = self._check_index(i)
        q_units = self.dim * mutation_charge(self._n, self.dim)
        c_units = self._n * self.dim
        self._rows = np.delete(self._rows[: self._n], i, axis=0)
        self._norms = np.delete(self._norms[: self._n], i)
        self._n -= 1
        self._rebuild_tree()
        self._charge_mutation(phase, q_units, c_units)

    # -- queries ----------------------------------------------------------

    def _charge_query(self, phase) -> None:
        self.ledger.charge(QUANTUM, ALGORITHMIC, phase, math.ceil(self.lam))

    def query_row(self, i: int, phase="qram.query"):
        """Return ``(row, norm)`` for row ``i``; the row is a read-only view."""
        i = self._check_index(i)
        self._charge_query(phase)
        row = self._rows[i]
        row.flags.writeable = False
        return row, float(self._norms[i])

    def sample_row_index(self, rng, phase="qram.sample") -> int:
        """Draw ``i`` with probability ``|v_i|^2 / sum_j |v_j|^2``."""
        if self._n == 0 or not self._tree[1] > 0:
            raise SamplingError("cannot sample from a store whose rows are all zero")
        self._charge_query(phase)
        r = rng.random() * self._tree[1]
        node = 1
        while node < self._capacity:
            left = self._tree[2 * node]
            if (r < left or self._tree[2 * node + 1] <= 0) and left > 0:
                node = 2 * node
            else:
                r -= left
                node = 2 * node + 1
        return node - self._capacity

    def check_invariants(self, atol: float = 1e-9) -> None:
        """Raise ``AssertionError`` if the norms or the tree are inconsistent."""
        rows = self._rows[: self._n]
        sq = np.sum(rows * rows, axis=1)
        assert np.allclose(self._norms[: self._n], np.sqrt(sq), rtol=0, atol=atol)
        cap = self._capacity
        assert cap == 1 << self.depth
        for node in range(1, cap):
            assert abs(self._tree[node] - self._tree[2 * node] - self._tree[2 * node + 1]) <= atol * max(
                1.0, abs(self._tree[node])
            )
        assert abs(self._tree[1] - sq.sum()) <= atol * max(1.0, sq.sum())
