"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines, or
``python tests/test_acceptance.py`` for a standalone summary.
"""

import json
import time

import numpy as np

from qssl import (
    CostLedger,
    EstimationParams,
    QramStore,
    generate_blobs,
    kmeans_classical,
    kmeans_quantum,
    measure_label_register,
    min_center_gap_sq,
    pnn_classical,
    pnn_quantum,
)
from qssl import benchmarks
from qssl.cli import EXIT_OK, main
from qssl.core import make_rng
from qssl.learners.kmeans import KMeansState


def report(number, ok, detail):
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}", flush=True)
    assert ok, detail


def _dataset_for(seed):
    rng = np.random.default_rng([seed, 99])
    k = int(rng.integers(1, 6))
    d = int(rng.integers(1, 17))
    per = int(rng.integers(1, 200 // k + 1))
    frac = float(rng.uniform(0.05, 0.5))
    spread = float(rng.uniform(0.2, 4.0))
    return generate_blobs(seed, k, per, d, spread, frac), k


def test_criterion_01_exact_equivalence():
    started = time.perf_counter()
    exact = EstimationParams(mode="exact")
    mismatches = []
    worst = 0.0
    for seed in range(100):
        ds, k = _dataset_for(seed)
        assert ds.n <= 200 and ds.dim <= 16 and k <= 5
        c, q = pnn_classical(ds), pnn_quantum(ds, exact)
        if c.functional_trace() != q.functional_trace() or not np.array_equal(c.labels, q.labels):
            mismatches.append(("pnn", seed))
        ck = kmeans_classical(ds, k, init_seed=seed)
        qk = kmeans_quantum(ds, k, exact, init_seed=seed, rng=seed)
        if len(ck.trace) != len(qk.trace):
            mismatches.append(("kmeans", seed))
            continue
        for a, b in zip(ck.trace, qk.trace):
            worst = max(worst, float(np.max(np.abs(a.centroids - b.centroids))))
            if not np.array_equal(a.assignments, b.assignments):
                mismatches.append(("kmeans", seed))
                break
    elapsed = time.perf_counter() - started
    ok = not mismatches and worst <= 1e-12 and elapsed < 60
    report(1, ok, f"100 datasets, mismatches={mismatches}, max centroid diff={worst:.1e}, {elapsed:.1f}s")


def test_criterion_02_estimator_coverage():
    rows = benchmarks.coverage_grid(draws=10_000, seed=2024)
    worst = min(rows, key=lambda r: r["coverage"] - r["bound"])
    ok = len(rows) == 12 and all(r["coverage"] >= r["bound"] for r in rows)
    report(
        2,
        ok,
        f"12 grid cells, tightest margin {worst['coverage'] - worst['bound']:+.4f} "
        f"({worst['estimator']}, eps={worst['epsilon']}, delta={worst['delta']})",
    )


def test_criterion_03_pnn_scaling():
    started = time.perf_counter()
    _, (q, c) = benchmarks.pnn_dimension_sweep((4, 8, 16, 32, 64, 128, 256), n_labeled=10, n_unlabeled=90)
    elapsed = time.perf_counter() - started
    ok = -0.1 <= q.slope <= 0.1 and 0.9 <= c.slope <= 1.1 and elapsed < 60
    report(3, ok, f"slope vs d: quantum {q.slope:+.4f}, classical {c.slope:.4f}, {elapsed:.1f}s")


def test_criterion_04_kmeans_scaling():
    started = time.perf_counter()
    _, (qn, cn) = benchmarks.kmeans_n_sweep((100, 200, 400, 800, 1600), k=4, d=16)
    _, (qk, _) = benchmarks.kmeans_k_sweep((2, 4, 8, 16), n=320, d=16)
    elapsed = time.perf_counter() - started
    ok = -0.1 <= qn.slope <= 0.1 and 0.9 <= cn.slope <= 1.1 and 0.9 <= qk.slope <= 1.1 and elapsed < 60
    report(
        4,
        ok,
        f"vs N: quantum {qn.slope:+.4f}, classical {cn.slope:.4f}; vs k: quantum {qk.slope:.4f}; {elapsed:.1f}s",
    )


def test_criterion_05_matmul_counts():
    rows = benchmarks.matmul_counts((8, 16, 32))
    counts_ok = all(r["quantum_estimates"] == r["n"] ** 2 and r["classical_mac"] == r["n"] ** 3 for r in rows)
    cover_ok = all(r["coverage"] >= r["coverage_bound"] for r in rows)
    detail = ", ".join(f"n={r['n']}: {r['quantum_estimates']}/{r['classical_mac']} cov {r['coverage']:.3f}" for r in rows)
    report(5, counts_ok and cover_ok, detail)


def test_criterion_06_monotone_objective():
    violations = []
    for seed in range(50):
        ds = generate_blobs(seed, 4, 25, 3, 3.0, 0.1)
        r = kmeans_classical(ds, 4, init_seed=seed)
        objs = [it.objective for it in r.trace]
        if any(b > a + 1e-9 for a, b in zip(objs, objs[1:])):
            violations.append(("objective", seed))
        if any(not np.array_equal(it.assignments[: ds.n_labeled], ds.labels) for it in r.trace):
            violations.append(("pinning", seed))
    report(6, not violations, f"50 runs, violations={violations}")


def test_criterion_07_measurement_law():
    worst = 0.0
    for i, sizes in enumerate([(25, 75), (10, 30, 60)]):
        z = np.repeat(np.arange(1, len(sizes) + 1), sizes)
        state = KMeansState(np.zeros((len(sizes), 1)), z)
        rng = make_rng(np.random.SeedSequence([7, i]))
        counts = np.zeros(len(sizes))
        for _ in range(10_000):
            counts[measure_label_register(state, rng).cluster - 1] += 1
        exact = np.array(sizes) / sum(sizes)
        worst = max(worst, 0.5 * float(np.abs(counts / 10_000 - exact).sum()))
    report(7, worst <= 0.02, f"max TV distance {worst:.4f} (limit 0.02)")


def test_criterion_08_qram_mutation_cost():
    got = []
    for n, d in ((8, 8), (64, 64), (1024, 1024)):
        ledger = CostLedger()
        store = QramStore.from_rows(np.ones((n, d)), ledger=ledger)
        before = ledger.snapshot()
        store.update_entry(n // 2, d // 2, 3.0)
        got.append((ledger.snapshot() - before).units("quantum", "memory_access"))
    report(8, got == [6, 12, 20], f"charges {got} (expected [6, 12, 20])")


def _separated_blobs(seed):
    ds = generate_blobs(seed, 3, 30, 2, spread=0.1, labeled_fraction=0.1)
    gap_sq = min_center_gap_sq(ds.centers)
    assert gap_sq >= (10 * 0.1) ** 2, "blobs not separated enough"
    return ds, gap_sq


def test_criterion_09_noisy_quality():
    pnn_rates, km_rates = [], []
    for seed in range(20):
        ds, gap_sq = _separated_blobs(seed)
        params = EstimationParams(epsilon=0.01 * gap_sq, delta=0.01)
        c = pnn_classical(ds)
        q = pnn_quantum(ds, params, rng=np.random.SeedSequence([seed, 2]))
        pnn_rates.append(float(np.mean(c.labels == q.labels)))
        ck = kmeans_classical(ds, 3, init_seed=seed)
        qk = kmeans_quantum(ds, 3, params, init_seed=seed, rng=np.random.SeedSequence([seed, 2]))
        km_rates.append(float(np.mean(ck.assignments == qk.assignments)))
    ok = min(pnn_rates) >= 0.95 and min(km_rates) >= 0.90
    report(9, ok, f"20 runs, worst agreement pnn {min(pnn_rates):.3f}, kmeans {min(km_rates):.3f}")


def _invoke(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def _strip(text):
    report_ = json.loads(text)
    report_.pop("timestamp")
    return json.dumps(report_, sort_keys=False)


def test_criterion_10_reproducible_reports(tmp_path, capsys):
    data = tmp_path / "d.csv"
    commands = [
        ["gen", "--seed", "4", "--k", "3", "--per-cluster", "20", "--dim", "3", "--out", str(data)],
        ["run", "--data", str(data), "--algorithm", "pnn", "--backend", "quantum-noisy", "--seed", "4"],
        ["run", "--data", str(data), "--algorithm", "kmeans", "--backend", "quantum-noisy", "--seed", "4"],
        ["run", "--data", str(data), "--algorithm", "self-train", "--seed", "4"],
        ["run", "--data", str(data), "--algorithm", "matmul-bench", "--backend", "quantum-noisy", "--seed", "4"],
        ["bench", "--algorithm", "kmeans", "--sweep", "k", "--seed", "4"],
        ["bench", "--algorithm", "matmul-bench", "--seed", "4"],
        ["verify-estimator", "--draws", "1000", "--seed", "4"],
    ]
    differing = []
    for argv in commands:
        code1, out1 = _invoke(argv, capsys)
        csv1 = data.read_bytes()
        code2, out2 = _invoke(argv, capsys)
        if code1 != EXIT_OK or code2 != EXIT_OK or _strip(out1) != _strip(out2) or csv1 != data.read_bytes():
            differing.append(" ".join(argv[:3]))
    report(10, not differing, f"{len(commands)} commands rerun, differing={differing}")


if __name__ == "__main__":
    import sys

    import pytest

    sys.exit(pytest.main([__file__, "-q", "-s"]))
