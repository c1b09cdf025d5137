import numpy as np

from qssl import CostLedger, Dataset, generate_blobs, pnn_classical, self_train
from qssl.learners.self_training import NearestNeighborLearner, promote_above, promote_none, promote_top


def test_one_nn_promote_top_equals_pnn():
    for seed in range(5):
        ds = generate_blobs(seed, 3, 10, 2, 1.0, 0.1)
        st = self_train(ds, NearestNeighborLearner(), promote_top)
        pnn = pnn_classical(ds)
        assert np.array_equal(st.labels, pnn.labels)
        assert [m[0][0] for m in st.promoted] == [s.target for s in pnn.trace]
        assert not st.stagnated


def test_empty_unlabeled_returns_input():
    ds = Dataset([[0.0], [1.0]], [2, 1], np.empty((0, 1)))
    st = self_train(ds, NearestNeighborLearner())
    assert st.labels.tolist() == [2, 1]
    assert st.rounds == 0 and not st.stagnated


def test_abstaining_policy_stagnates():
    ds = generate_blobs(0, 2, 5, 2, 1.0, 0.2)
    st = self_train(ds, NearestNeighborLearner(), promote_none)
    assert st.stagnated
    assert st.n_unlabeled == ds.n_unlabeled
    assert st.labels[: ds.n_labeled].tolist() == ds.labels.tolist()


def test_threshold_policy_promotes_in_batches():
    ds = Dataset([[0.0]], [1], [[0.5], [0.6], [5.0]])
    st = self_train(ds, NearestNeighborLearner(), promote_above(-1.0))
    assert st.promoted[0] == [(1, 1), (2, 1)]
    assert st.stagnated and st.labels.tolist() == [1, 1, 1, 0]


def test_ledger_charges():
    ds = generate_blobs(0, 2, 5, 3, 1.0, 0.2)
    ledger = CostLedger()
    self_train(ds, NearestNeighborLearner(ledger), ledger=ledger, max_rounds=1)
    assert ledger.units("classical", "algorithmic", "self_train.predict") == ds.n_labeled * ds.n_unlabeled * 3
    assert ledger.units("classical", "algorithmic", "self_train.fit") == ds.n_labeled
