"""Command-line front end: ``qssl gen | run | bench | verify-estimator``.

Options can come from a JSON config file (``--config``); flags given on the
command line override it. Every report embeds the fully resolved config.

Random streams are derived from the single ``--seed``: the dataset generator
uses the seed itself, centroid initialisation uses
``SeedSequence([seed, 1])`` and everything stochastic inside an algorithm
(oracle noise, label measurement, random tie-breaks) uses
``SeedSequence([seed, 2])``.

Exit status: 0 on success, 2 for configuration errors, 3 for data errors,
4 for runtime errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

import numpy as np

from . import benchmarks
from .core import generate_blobs, make_rng
from .cost import CostLedger
from .errors import ConfigError, ContractError, ParseError, QsslError
from .estimators import EstimationParams, estimate_matrix_product, params_problems
from .io import dumps_report, load_dataset, save_dataset, save_table
from .learners import (
    NearestNeighborLearner,
    kmeans_classical,
    kmeans_quantum,
    pnn_classical,
    pnn_quantum,
    promote_top,
    self_train,
)
from .qram import QramStore

SCHEMA_VERSION = "1.0"

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_RUNTIME = 4

ALGORITHMS = ("pnn", "kmeans", "self-train", "matmul-bench")
BACKENDS = ("classical", "quantum-exact", "quantum-noisy")
SWEEPS = {"pnn": ("d",), "kmeans": ("N", "k"), "matmul-bench": ("n",)}
DEFAULT_SWEEP_VALUES = {
    ("pnn", "d"): [4, 8, 16, 32, 64, 128, 256],
    ("kmeans", "N"): [100, 200, 400, 800, 1600],
    ("kmeans", "k"): [2, 4, 8, 16],
    ("matmul-bench", "n"): [8, 16, 32],
}


@dataclass
class ExperimentConfig:
    command: str = "run"
    seed: int = 0
    out: Optional[str] = None
    table: Optional[str] = None
    # dataset: a CSV path or generator settings
    data: Optional[str] = None
    k: Optional[int] = None
    per_cluster: int = 50
    dim: int = 2
    spread: float = 0.5
    labeled_fraction: float = 0.1
    # algorithm
    algorithm: str = "pnn"
    backend: str = "classical"
    epsilon: float = 0.01
    delta: float = 0.01
    lambda_: Optional[float] = None
    tol: float = 1e-8
    max_iter: int = 100
    tie_break: str = "lowest"
    update: str = "full"
    # bench / verify-estimator
    sweep: Optional[str] = None
    values: list = field(default_factory=list)
    epsilons: list = field(default_factory=lambda: [0.01, 0.1])
    deltas: list = field(default_factory=lambda: [0.01, 0.05, 0.1])
    draws: int = 10_000

    def problems(self) -> list:
        out = []
        if not isinstance(self.seed, int) or self.seed < 0:
            out.append(f"seed: must be a nonnegative integer, got {self.seed!r}")
        if self.command == "gen":
            if self.out is None:
                out.append("out: gen needs an output path")
        if self.command == "gen" or (self.command == "run" and self.data is None):
            if self.k is None or self.k < 1:
                out.append(f"k: must be >= 1, got {self.k!r}")
            if self.per_cluster < 1:
                out.append(f"per_cluster: must be >= 1, got {self.per_cluster!r}")
            if self.dim < 1:
                out.append(f"dim: must be >= 1, got {self.dim!r}")
            if not self.spread >= 0:
                out.append(f"spread: must be >= 0, got {self.spread!r}")
            if not 0 <= self.labeled_fraction <= 1:
                out.append(f"labeled_fraction: must lie in [0, 1], got {self.labeled_fraction!r}")
        if self.command in ("run", "bench"):
            if self.algorithm not in ALGORITHMS:
                out.append(f"algorithm: must be one of {list(ALGORITHMS)}, got {self.algorithm!r}")
            if self.backend not in BACKENDS:
                out.append(f"backend: must be one of {list(BACKENDS)}, got {self.backend!r}")
            out.extend(f"estimation: {p}" for p in self._params_problems())
            if self.tol < 0:
                out.append(f"tol: must be >= 0, got {self.tol!r}")
            if self.max_iter < 1:
                out.append(f"max_iter: must be >= 1, got {self.max_iter!r}")
            if self.tie_break not in ("lowest", "random"):
                out.append(f"tie_break: must be 'lowest' or 'random', got {self.tie_break!r}")
            if self.update not in ("full", "sampled"):
                out.append(f"update: must be 'full' or 'sampled', got {self.update!r}")
        if self.command == "run":
            if self.algorithm == "self-train" and self.backend != "classical":
                out.append("backend: self-train runs on the classical backend only")
            if self.algorithm == "matmul-bench" and self.backend == "classical":
                out.append("backend: matmul-bench needs a quantum backend")
        if self.command == "bench" and self.algorithm in SWEEPS:
            allowed = SWEEPS[self.algorithm]
            if self.sweep is not None and self.sweep not in allowed:
                out.append(f"sweep: {self.algorithm} sweeps over {list(allowed)}, got {self.sweep!r}")
            if self.values and (len(self.values) < 4 and self.algorithm != "matmul-bench"):
                out.append("values: a scaling fit needs at least 4 sweep points")
            if any(not isinstance(v, int) or v < 1 for v in self.values):
                out.append("values: sweep values must be positive integers")
        if self.command == "bench" and self.algorithm == "self-train":
            out.append("algorithm: self-train has no benchmark sweep")
        if self.command == "verify-estimator":
            for eps in self.epsilons:
                if not eps > 0:
                    out.append(f"epsilons: must be positive, got {eps!r}")
            for delta in self.deltas:
                if not 0 < delta < 0.5:
                    out.append(f"deltas: must lie in (0, 1/2), got {delta!r}")
            if self.draws < 1:
                out.append(f"draws: must be >= 1, got {self.draws!r}")
        return out

    def _params_problems(self) -> list:
        return params_problems(self.epsilon, self.delta, self.lambda_, self.mode)

    @property
    def mode(self) -> str:
        return "exact" if self.backend == "quantum-exact" else "noisy"

    def params(self) -> EstimationParams:
        return EstimationParams(self.epsilon, self.delta, self.lambda_, self.mode)

    def resolved(self) -> dict:
        return dataclasses.asdict(self)


def _stream(seed: int, index: int):
    return make_rng(np.random.SeedSequence([seed, index]))


def _dataset(cfg: ExperimentConfig):
    if cfg.data is not None:
        return load_dataset(cfg.data)
    return generate_blobs(cfg.seed, cfg.k, cfg.per_cluster, cfg.dim, cfg.spread, cfg.labeled_fraction)


def _report(cfg, body, started) -> dict:
    report = {"schema_version": SCHEMA_VERSION, "command": cfg.command, "config": cfg.resolved()}
    report.update(body)
    report["timestamp"] = {
        "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "elapsed_seconds": round(time.perf_counter() - started, 6),
    }
    return report


def cmd_gen(cfg: ExperimentConfig):
    started = time.perf_counter()
    ds = _dataset(cfg)
    save_dataset(ds, cfg.out)
    return _report(cfg, {"dataset": _describe(ds), "path": str(cfg.out)}, started), False


def _describe(ds) -> dict:
    return {"n": ds.n, "n_labeled": ds.n_labeled, "n_unlabeled": ds.n_unlabeled, "dim": ds.dim}


def cmd_run(cfg: ExperimentConfig):
    started = time.perf_counter()
    ds = _dataset(cfg)
    ledger = CostLedger()
    notes = []
    if ds.n_unlabeled == 0:
        notes.append("no unlabeled points: supervised limit, nothing to label")
    if ds.n_labeled == 0:
        notes.append("no labeled points: unsupervised limit")
    rng = _stream(cfg.seed, 2)
    init_seed = np.random.SeedSequence([cfg.seed, 1])

    if cfg.algorithm == "pnn":
        if ds.n_labeled == 0:
            raise ContractError("pnn needs at least one labeled point")
        if cfg.backend == "classical":
            result = pnn_classical(ds, cfg.tie_break, rng=rng, ledger=ledger)
        else:
            result = pnn_quantum(ds, cfg.params(), cfg.tie_break, rng=rng, ledger=ledger)
        body = result.to_dict()
        body["labeled_now"] = body["labels"][ds.n_labeled :]
    elif cfg.algorithm == "kmeans":
        k = cfg.k if cfg.k is not None else int(ds.labels.max()) if ds.n_labeled else None
        if k is None:
            raise ConfigError(["k: required when the dataset has no labels"])
        if cfg.backend == "classical":
            result = kmeans_classical(ds, k, init_seed, cfg.tol, cfg.max_iter, ledger=ledger)
        else:
            result = kmeans_quantum(
                ds, k, cfg.params(), init_seed, cfg.tol, cfg.max_iter, rng=rng, ledger=ledger, update=cfg.update
            )
        body = result.to_dict()
    elif cfg.algorithm == "self-train":
        result = self_train(ds, NearestNeighborLearner(ledger), promote_top, ledger=ledger)
        body = {
            "labels": result.labels.tolist(),
            "rounds": result.rounds,
            "stagnated": result.stagnated,
            "promoted": [[list(p) for p in step] for step in result.promoted],
        }
    else:
        X = QramStore.from_rows(ds.labeled_x, ledger=ledger, lambda_=cfg.lambda_)
        Y = QramStore.from_rows(ds.unlabeled_x, ledger=ledger, lambda_=cfg.lambda_)
        if X.n_rows == 0 or Y.n_rows == 0:
            raise ContractError("matmul-bench needs labeled and unlabeled rows")
        est = estimate_matrix_product(X, Y, cfg.params(), rng, ledger=ledger)
        truth = ds.labeled_x @ ds.unlabeled_x.T
        body = {
            "shape": list(est.shape),
            "estimates": ledger.events("quantum", "algorithmic", "matmul.estimate"),
            "classical_mac": ledger.units("classical", "algorithmic", "matmul.classical"),
            "coverage": float(np.mean(np.abs(est.values - truth) <= cfg.epsilon)),
            "max_abs_error": float(np.max(np.abs(est.values - truth))),
        }
    report = {"dataset": _describe(ds), "notes": notes, "result": body, "ledger": ledger.to_dict()}
    return _report(cfg, report, started), False


def cmd_bench(cfg: ExperimentConfig):
    started = time.perf_counter()
    sweep = cfg.sweep or SWEEPS[cfg.algorithm][0]
    values = cfg.values or DEFAULT_SWEEP_VALUES[(cfg.algorithm, sweep)]
    cfg = dataclasses.replace(cfg, sweep=sweep, values=list(values))
    lam = cfg.lambda_ if cfg.lambda_ is not None else benchmarks.DEFAULT_LAMBDA
    params = EstimationParams(cfg.epsilon, cfg.delta, lam, cfg.mode)
    if cfg.algorithm == "pnn":
        rows, (q, c) = benchmarks.pnn_dimension_sweep(values, params=params, seed=cfg.seed)
        columns = ["d", "iterations", "quantum_per_iteration", "classical_per_iteration"]
    elif cfg.algorithm == "kmeans" and sweep == "N":
        rows, (q, c) = benchmarks.kmeans_n_sweep(values, params=params, seed=cfg.seed)
        columns = ["N", "quantum_step1", "classical_step1"]
    elif cfg.algorithm == "kmeans":
        rows, (q, c) = benchmarks.kmeans_k_sweep(values, params=params, seed=cfg.seed)
        columns = ["k", "quantum_step1", "classical_step1"]
    else:
        rows = benchmarks.matmul_counts(values, params=params, seed=cfg.seed)
        columns = ["n", "quantum_estimates", "quantum_units", "classical_mac", "coverage", "coverage_bound"]
        q = c = None
    if cfg.table:
        save_table(rows, columns, cfg.table)
    body = {"rows": rows}
    if q is not None:
        body["slopes"] = {"quantum": q.slope, "classical": c.slope}
        body["fits"] = {"quantum": q.to_dict(), "classical": c.to_dict()}
    else:
        body["exact_counts"] = all(
            r["quantum_estimates"] == r["n"] ** 2 and r["classical_mac"] == r["n"] ** 3 for r in rows
        )
    return _report(cfg, body, started), False


def cmd_verify_estimator(cfg: ExperimentConfig):
    started = time.perf_counter()
    rows = benchmarks.coverage_grid(cfg.epsilons, cfg.deltas, cfg.draws, cfg.seed)
    if cfg.table:
        save_table(rows, list(rows[0]), cfg.table)
    failed = not all(r["pass"] for r in rows)
    return _report(cfg, {"rows": rows, "all_pass": not failed}, started), failed


COMMANDS = {
    "gen": cmd_gen,
    "run": cmd_run,
    "bench": cmd_bench,
    "verify-estimator": cmd_verify_estimator,
}


def _int_list(text):
    return [int(v) for v in text.split(",") if v.strip()]


def _float_list(text):
    return [float(v) for v in text.split(",") if v.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qssl", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON file of option values; flags override it")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", default=None, help="output path (stdout when omitted)")

    def data_opts(p):
        p.add_argument("--data", default=None, help="dataset CSV; generated blobs when omitted")
        p.add_argument("--k", type=int, default=None)
        p.add_argument("--per-cluster", dest="per_cluster", type=int, default=None)
        p.add_argument("--dim", type=int, default=None)
        p.add_argument("--spread", type=float, default=None)
        p.add_argument("--labeled-fraction", dest="labeled_fraction", type=float, default=None)

    def algo_opts(p):
        p.add_argument("--algorithm", default=None, help="pnn, kmeans, self-train or matmul-bench")
        p.add_argument("--backend", default=None, help="classical, quantum-exact or quantum-noisy")
        p.add_argument("--epsilon", type=float, default=None)
        p.add_argument("--delta", type=float, default=None)
        p.add_argument("--lambda", dest="lambda_", type=float, default=None)
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--max-iter", dest="max_iter", type=int, default=None)
        p.add_argument("--tie-break", dest="tie_break", default=None)
        p.add_argument("--update", default=None)

    p = sub.add_parser("gen", help="generate a blob dataset CSV")
    common(p)
    data_opts(p)

    p = sub.add_parser("run", help="run one learner and emit a JSON report")
    common(p)
    data_opts(p)
    algo_opts(p)

    p = sub.add_parser("bench", help="cost-scaling sweep with log-log fits")
    common(p)
    algo_opts(p)
    p.add_argument("--sweep", default=None, help="swept variable: d (pnn), N or k (kmeans), n (matmul-bench)")
    p.add_argument("--values", type=_int_list, default=None, help="comma-separated sweep values")
    p.add_argument("--table", default=None, help="also write the sweep rows as CSV")

    p = sub.add_parser("verify-estimator", help="Monte Carlo coverage of the noisy oracles")
    common(p)
    p.add_argument("--epsilons", type=_float_list, default=None)
    p.add_argument("--deltas", type=_float_list, default=None)
    p.add_argument("--draws", type=int, default=None)
    p.add_argument("--table", default=None)
    return parser


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    known = {f.name for f in dataclasses.fields(ExperimentConfig)}
    values = {}
    problems = []
    if getattr(args, "config", None):
        try:
            loaded = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError([f"config: cannot read {args.config}: {exc}"]) from None
        if not isinstance(loaded, dict):
            raise ConfigError(["config: top level must be a JSON object"])
        for key, value in loaded.items():
            key = "lambda_" if key == "lambda" else key.replace("-", "_")
            if key not in known or key == "command":
                problems.append(f"{key}: unknown config key")
            else:
                values[key] = value
    for key, value in vars(args).items():
        if key in known and key != "command" and value is not None:
            values[key] = value
    if problems:
        raise ConfigError(problems)
    cfg = ExperimentConfig(command=args.command, **values)
    problems = cfg.problems()
    if problems:
        raise ConfigError(problems)
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        report, failed = COMMANDS[cfg.command](cfg)
    except ConfigError as exc:
        for problem in exc.problems:
            print(f"config error: {problem}", file=sys.stderr)
        return EXIT_CONFIG
    except (ParseError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (QsslError, ValueError, ArithmeticError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME

    text = dumps_report(report)
    # for gen, --out names the dataset file and the report goes to stdout
    if cfg.command == "gen" or not cfg.out:
        sys.stdout.write(text)
    else:
        Path(cfg.out).write_text(text)
    return EXIT_RUNTIME if failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
