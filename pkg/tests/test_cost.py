import math
import threading

import pytest

from qssl import ContractError, CostLedger, EstimationParams, fit_scaling, generate_blobs, pnn_quantum


def test_charge_zero_leaves_ledger_unchanged(ledger):
    before = ledger.rows()
    ledger.charge("quantum", "algorithmic", "qram.query", 0)
    assert ledger.rows() == before == []


def test_charges_accumulate(ledger):
    ledger.charge("classical", "algorithmic", "pnn.step1.distance", 3)
    ledger.charge("classical", "algorithmic", "pnn.step1.distance", 4)
    assert ledger.units("classical", "algorithmic", "pnn.step1.distance") == 7
    assert ledger.events("classical", "algorithmic", "pnn.step1.distance") == 2


@pytest.mark.parametrize(
    "args",
    [
        ("quantum", "algorithmic", "not.a.phase", 1),
        ("gpu", "algorithmic", "qram.query", 1),
        ("quantum", "latency", "qram.query", 1),
        ("quantum", "algorithmic", "qram.query", -1),
    ],
)
def test_charge_rejects_bad_input(ledger, args):
    with pytest.raises(ContractError):
        ledger.charge(*args)


def test_register_phase(ledger):
    ledger.register_phase("custom.phase")
    ledger.charge("quantum", "algorithmic", "custom.phase", 2)
    assert ledger.units(phase="custom.phase") == 2


def test_snapshot_diff_is_exact(ledger):
    ledger.charge("quantum", "algorithmic", "qram.query", 5)
    snap = ledger.snapshot()
    ledger.charge("quantum", "algorithmic", "qram.query", 2)
    ledger.charge("classical", "memory_access", "qram.load", 9)
    diff = ledger.snapshot() - snap
    assert diff.units("quantum") == 2
    assert diff.units("classical", "memory_access") == 9
    assert diff.by_phase() == {"classical/memory_access/qram.load": 9, "quantum/algorithmic/qram.query": 2}


def test_concurrent_charges_are_atomic(ledger):
    def work():
        for _ in range(2000):
            ledger.charge("quantum", "algorithmic", "qram.query", 1)

    threads = [threading.Thread(target=work) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert ledger.units() == 16000


def test_phase_counters_sum_to_total_over_pnn_run():
    ds = generate_blobs(5, 2, 25, 3, 0.5, 0.1)
    assert ds.n == 50
    result = pnn_quantum(ds, EstimationParams(0.1, 0.05), rng=1)
    rows = result.ledger.rows()
    assert sum(r["units"] for r in rows) == result.ledger.total()
    per_iteration = sum(sum(step.charges.values()) for step in result.trace)
    setup = result.ledger.units(phase="qram.load")
    assert per_iteration + setup == result.ledger.total()


def test_fit_linear():
    rep = fit_scaling([(v, 3 * v) for v in (1, 2, 4, 8, 16)])
    assert abs(rep.slope - 1.0) <= 1e-9
    assert rep.residual <= 1e-9


def test_fit_constant():
    rep = fit_scaling([(v, 42) for v in (1, 2, 4, 8)])
    assert abs(rep.slope) <= 1e-9


def test_fit_cubic():
    rep = fit_scaling([(v, v**3) for v in (2, 4, 8, 16)])
    assert abs(rep.slope - 3.0) <= 1e-6
    assert abs(rep.intercept) <= 1e-6


def test_fit_requires_four_positive_points():
    with pytest.raises(ContractError):
        fit_scaling([(1, 1), (2, 2), (3, 3)])
    with pytest.raises(ContractError):
        fit_scaling([(1, 1), (2, 0), (3, 3), (4, 4)])
    with pytest.raises(ContractError):
        fit_scaling([(-1, 1), (2, 2), (3, 3), (4, 4)])


def test_report_serialises():
    rep = fit_scaling([(v, math.log(v + 1)) for v in (1, 2, 4, 8)], variable="d", label="q")
    data = rep.to_dict()
    assert data["variable"] == "d" and data["label"] == "q"
    assert set(data) >= {"slope", "intercept", "residual", "values", "charges"}
