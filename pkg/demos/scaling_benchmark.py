"""Log-log fits of algorithmic charge against d, N and k."""
from qssl.benchmarks import kmeans_k_sweep, kmeans_n_sweep, pnn_dimension_sweep

rows, (q, c) = pnn_dimension_sweep()
print("PNN, per-iteration charge vs d")
for r in rows:
    print(f"  d={r['d']:4d}  quantum={r['quantum_per_iteration']:12.1f}  classical={r['classical_per_iteration']:10.1f}")
print(f"  slopes: quantum {q.slope:+.3f}, classical {c.slope:.3f}")

_, (q, c) = kmeans_n_sweep()
print(f"k-means step 1 vs N: quantum {q.slope:+.3f}, classical {c.slope:.3f}")

_, (q, c) = kmeans_k_sweep()
print(f"k-means step 1 vs k: quantum {q.slope:.3f}, classical {c.slope:.3f}")
