"""How often does a noisy oracle land within epsilon?"""
from qssl.benchmarks import coverage_grid

rows = coverage_grid(epsilons=(0.01, 0.1), deltas=(0.01, 0.05, 0.1), draws=10_000, seed=0)
print(f"{'estimator':14s} {'eps':>5s} {'delta':>6s} {'coverage':>9s} {'bound':>7s}")
for r in rows:
    flag = "" if r["pass"] else "  <-- below bound"
    print(f"{r['estimator']:14s} {r['epsilon']:5.2f} {r['delta']:6.2f} {r['coverage']:9.4f} {r['bound']:7.4f}{flag}")

# the nominal rate is 1 - 2*delta; the bound subtracts three binomial standard errors
