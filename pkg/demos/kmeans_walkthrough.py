"""Semi-supervised k-means with pinned labels."""
import numpy as np

from qssl import EstimationParams, generate_blobs, kmeans_classical, kmeans_quantum

ds = generate_blobs(seed=3, k=4, per_cluster=50, d=3, spread=1.0, labeled_fraction=0.05)

classical = kmeans_classical(ds, k=4, init_seed=0)
print(f"classical: {classical.iterations} iterations, converged={classical.converged}")
for it in classical.trace:
    print(f"  t={it.t}  objective={it.objective:10.4f}  max shift^2={it.shift:.2e}")

# exact oracles give the same trajectory step for step
exact = kmeans_quantum(ds, 4, EstimationParams(mode="exact"), init_seed=0)
same = all(np.array_equal(a.assignments, b.assignments) for a, b in zip(classical.trace, exact.trace))
print(f"exact quantum trace identical: {same}")

noisy = kmeans_quantum(ds, 4, EstimationParams(epsilon=0.5, delta=0.05), init_seed=0, rng=11)
print(f"noisy run measured clusters: {[it.measured_cluster for it in noisy.trace]}")
print(f"noisy vs classical agreement: {np.mean(noisy.assignments == classical.assignments):.3f}")

# one centroid per iteration instead of all k
sampled = kmeans_quantum(ds, 4, EstimationParams(mode="exact"), init_seed=0, rng=11, update="sampled")
print(f"sampled-update mode: {sampled.iterations} iterations to settle (full mode: {exact.iterations})")

print("per-phase charges of the first iteration:")
for key, units in exact.trace[0].charges.items():
    print(f"  {key:45s} {units}")
