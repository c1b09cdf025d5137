import numpy as np
import pytest

from qssl import ContractError, CostLedger, Dataset, EstimationParams, generate_blobs
from qssl import kmeans_classical, kmeans_quantum, measure_label_register
from qssl.benchmarks import unit_blobs
from qssl.learners.kmeans import KMeansState, initial_centroids, predict_nearest_centroid
from qssl.core import make_rng


def naive_pinned_lloyd(ds, k, centroids, tol=1e-8, max_iter=100):
    """Independent loop-based Lloyd with labels clamped."""
    pts = [list(map(float, r)) for r in ds.x]
    cents = [list(map(float, c)) for c in centroids]
    given = list(map(int, ds.labels))
    z = []
    for _ in range(max_iter):
        z = []
        for i, p in enumerate(pts):
            if i < len(given):
                z.append(given[i])
                continue
            dists = [sum((a - b) ** 2 for a, b in zip(p, c)) for c in cents]
            z.append(dists.index(min(dists)) + 1)
        new = []
        for m in range(1, k + 1):
            members = [p for p, zi in zip(pts, z) if zi == m]
            if members:
                new.append([sum(col) / len(members) for col in zip(*members)])
            else:
                new.append(cents[m - 1])
        shift = max(sum((a - b) ** 2 for a, b in zip(c1, c0)) for c1, c0 in zip(new, cents))
        cents = new
        if shift <= tol:
            break
    return z, cents


def test_one_point_per_cluster():
    ds = Dataset([[0.0, 1.0], [5.0, 5.0], [-3.0, 2.0]], [1, 2, 3], np.empty((0, 2)))
    r = kmeans_classical(ds, 3)
    assert r.iterations == 1 and r.converged
    assert np.array_equal(r.centroids, ds.labeled_x)


def test_two_clusters_means():
    ds = Dataset([[0.0], [1.0], [9.0], [10.0]], [1, 1, 2, 2], np.empty((0, 1)))
    r = kmeans_classical(ds, 2)
    assert r.centroids[:, 0].tolist() == [0.5, 9.5]


def test_matches_naive_oracle():
    ds = generate_blobs(11, 3, 20, 2, spread=2.5, labeled_fraction=0.1)
    assert ds.n == 60
    r = kmeans_classical(ds, 3, init_seed=5)
    z, cents = naive_pinned_lloyd(ds, 3, initial_centroids(ds, 3, make_rng(5)))
    assert r.assignments.tolist() == z
    assert np.allclose(r.centroids, cents, rtol=0, atol=1e-12)


def test_unlabeled_cluster_initialised_from_data():
    ds = Dataset([[0.0, 0.0]], [1], [[5.0, 5.0], [6.0, 6.0], [-1.0, 0.0]])
    c = initial_centroids(ds, 2, make_rng(0))
    assert c[0].tolist() == [0.0, 0.0]
    assert any(np.array_equal(c[1], row) for row in ds.x)


def test_argument_errors():
    ds = Dataset([[0.0]], [3], [[1.0]])
    with pytest.raises(ContractError):
        kmeans_classical(ds, 2)
    with pytest.raises(ContractError):
        kmeans_classical(ds, 5)
    with pytest.raises(ContractError):
        kmeans_quantum(Dataset([[0.0]], [1], [[1.0]]), 1, EstimationParams(mode="exact"), update="lazy")


def test_classical_charges():
    ds = generate_blobs(0, 3, 5, 4, 1.0, 0.2)
    r = kmeans_classical(ds, 3, max_iter=2)
    n, d = ds.n, ds.dim
    for it in r.trace:
        assert it.charges["classical/algorithmic/kmeans.step1.distance"] == n * 3 * d
        assert it.charges["classical/algorithmic/kmeans.step2.assign"] == n * 3
        assert it.charges["classical/algorithmic/kmeans.step4.update"] == n * d


def test_quantum_charges_per_iteration():
    ds = unit_blobs(0, 4, 10, 8)
    params = EstimationParams(0.01, 0.01, lambda_=6)
    r = kmeans_quantum(ds, 4, params, max_iter=3, rng=1)
    for it in r.trace:
        assert it.charges["quantum/algorithmic/kmeans.step2.assign"] == 4
        assert it.charges["quantum/algorithmic/kmeans.step3.measure"] == 1
        assert it.charges["quantum/algorithmic/kmeans.step4.update"] == 4 * ds.n
        assert it.events == ("uncompute",)
        assert 1 <= it.measured_cluster <= 4


@pytest.mark.parametrize("seed", range(8))
def test_exact_quantum_equals_classical(seed):
    ds = generate_blobs(seed, 3, 15, 4, 2.0, 0.1)
    c = kmeans_classical(ds, 3, init_seed=seed)
    q = kmeans_quantum(ds, 3, EstimationParams(mode="exact"), init_seed=seed, rng=seed)
    assert len(c.trace) == len(q.trace)
    for a, b in zip(c.trace, q.trace):
        assert np.array_equal(a.assignments, b.assignments)
        assert np.array_equal(a.centroids, b.centroids)
        assert a.objective == b.objective


def test_step1_charge_independent_of_n():
    # N = 100 and N = 10000 with identical labeled points, so initial centroids agree
    params = EstimationParams(0.01, 0.01, lambda_=6)
    base = unit_blobs(0, 4, 25, 4)
    charges = []
    for reps in (1, 100):
        ds = Dataset(base.labeled_x, base.labels, np.resize(base.unlabeled_x, (100 * reps - base.n_labeled, base.dim)))
        assert ds.n == 100 * reps
        r = kmeans_quantum(ds, 4, params, max_iter=1, rng=0)
        charges.append(r.trace[0].charges["quantum/algorithmic/kmeans.step1.distance"])
    assert charges[0] == charges[1]


@pytest.mark.parametrize("seed", range(10))
def test_monotone_objective_and_pinning(seed):
    ds = generate_blobs(seed, 4, 12, 3, 3.0, 0.2)
    r = kmeans_classical(ds, 4, init_seed=seed)
    objs = [it.objective for it in r.trace]
    assert all(b <= a + 1e-9 for a, b in zip(objs, objs[1:]))
    for it in r.trace:
        assert np.array_equal(it.assignments[: ds.n_labeled], ds.labels)


def test_measurement_single_cluster(rng):
    state = KMeansState(np.zeros((3, 1)), np.full(10, 2))
    assert {measure_label_register(state, rng).cluster for _ in range(100)} == {2}


def test_measurement_law(rng):
    z = np.array([1] * 25 + [2] * 75)
    state = KMeansState(np.zeros((2, 1)), z)
    ledger = CostLedger()
    counts = np.zeros(2)
    for _ in range(10_000):
        m, members = measure_label_register(state, rng, ledger)
        counts[m - 1] += 1
    tv = 0.5 * np.abs(counts / 10_000 - [0.25, 0.75]).sum()
    assert tv <= 0.02
    assert ledger.units("quantum", "algorithmic", "kmeans.step3.measure") == 10_000


def test_measurement_membership_view(rng):
    z = np.random.default_rng(0).integers(1, 4, 40)
    state = KMeansState(np.zeros((3, 1)), z)
    for _ in range(50):
        meas = measure_label_register(state, rng)
        assert np.array_equal(meas.members, state.cluster_sets[meas.cluster - 1])
        assert np.allclose(meas.weights, 1 / meas.members.size)


def test_sampled_update_converges_to_same_fixed_point():
    ds = generate_blobs(3, 3, 20, 2, 0.5, 0.1)
    full = kmeans_quantum(ds, 3, EstimationParams(mode="exact"), rng=0)
    sampled = kmeans_quantum(ds, 3, EstimationParams(mode="exact"), rng=0, update="sampled")
    assert sampled.converged
    assert np.array_equal(sampled.assignments, full.assignments)
    assert np.allclose(sampled.centroids, full.centroids, atol=1e-12)
    assert sampled.iterations >= full.iterations
    for it in sampled.trace:
        assert it.charges["quantum/algorithmic/kmeans.step4.update"] == ds.n


def test_noisy_run_reproducible():
    ds = generate_blobs(5, 3, 20, 2, 0.5, 0.1)
    p = EstimationParams(0.05, 0.05)
    a = kmeans_quantum(ds, 3, p, rng=4, ledger=CostLedger())
    b = kmeans_quantum(ds, 3, p, rng=4, ledger=CostLedger())
    assert a.to_dict() == {**b.to_dict()}
    assert a.ledger.rows() == b.ledger.rows()


def test_predict_nearest_centroid():
    assert predict_nearest_centroid([[0.0], [10.0]], [[1.0], [6.0]]).tolist() == [1, 2]
