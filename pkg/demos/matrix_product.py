"""Matrix product as a grid of inner-product estimates."""
import numpy as np

from qssl import CostLedger, EstimationParams, QramStore, estimate_matrix_product

ledger = CostLedger()
X = QramStore.from_rows([[1.0, 2.0], [3.0, 4.0]], ledger=ledger)
Y = QramStore.from_rows([[5.0, 6.0], [7.0, 8.0]], ledger=ledger)

exact = estimate_matrix_product(X, Y, EstimationParams(mode="exact"))
print("exact X @ Y.T:")
print(exact.values)

rng = np.random.default_rng(0)
noisy = estimate_matrix_product(X, Y, EstimationParams(epsilon=0.5, delta=0.05), rng)
print("noisy estimate:")
print(np.round(noisy.values, 3))

for n in (8, 16, 32):
    ledger = CostLedger()
    A = QramStore.from_rows(rng.standard_normal((n, n)), ledger=ledger)
    B = QramStore.from_rows(rng.standard_normal((n, n)), ledger=ledger)
    estimate_matrix_product(A, B, EstimationParams(0.1, 0.05, lambda_=6), rng, ledger=ledger)
    est = ledger.events("quantum", "algorithmic", "matmul.estimate")
    mac = ledger.units("classical", "algorithmic", "matmul.classical")
    print(f"n={n:2d}: {est:5d} estimates (n^2), {mac:6d} multiply-adds (n^3)")
