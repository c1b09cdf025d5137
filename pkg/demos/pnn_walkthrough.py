"""Propagating nearest neighbour on three blobs, classical vs noisy quantum."""
import numpy as np

from qssl import EstimationParams, generate_blobs, min_center_gap_sq, pnn_classical, pnn_quantum

ds = generate_blobs(seed=1, k=3, per_cluster=40, d=2, spread=0.4, labeled_fraction=0.05)
print(f"{ds.n} points, {ds.n_labeled} labeled, d={ds.dim}")

classical = pnn_classical(ds)
print("first five promotions (source -> target, label):")
for step in classical.trace[:5]:
    print(f"  {step.source:3d} -> {step.target:3d}  label {step.label}  d^2={step.distance:.3f}")

# oracle noise well below the squared gap between clusters
gap_sq = min_center_gap_sq(ds.centers)
params = EstimationParams(epsilon=0.01 * gap_sq, delta=0.01, lambda_=6)
quantum = pnn_quantum(ds, params, rng=7)

agree = np.mean(quantum.labels == classical.labels)
truth = np.mean(classical.labels == ds.truth)
print(f"classical accuracy vs generating clusters: {truth:.3f}")
print(f"noisy quantum agrees with classical on {agree:.3f} of points")

c_units = classical.ledger.units("classical", "algorithmic")
q_units = quantum.ledger.units("quantum", "algorithmic")
print(f"classical algorithmic units: {c_units}")
print(f"quantum algorithmic units:   {q_units}  (no factor of d, but a 1/epsilon factor)")
