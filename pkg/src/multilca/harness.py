"""Configuration-driven replication harness for the simulation experiments.

Every (parameter value, replication) pair samples one dataset — partition,
item parameters, responses — from purpose-tagged RNG streams derived from
the master seed, fits every configured method on the same data, scores it
against the truth, and optionally runs modularity-based class-count
selection. Records are sorted deterministically before writing, so the
results CSV is byte-identical across runs and across worker counts.

Timing is off by default for exactly that reason: a populated wall_ms
column is the one field a clock would make nondeterministic. Enable
`record_timing` when profiling and give up byte-stable output.
"""

from __future__ import annotations

import json
import math
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .estimators import METHODS, EstimationError, fit
from .kmeans import KMeansConfig
from .metrics import ari, best_label_permutation, hamming_error, nmi, relative_l2_error
from .model import (
    ModelParams,
    population_response,
    sample_item_params,
    sample_partition,
    sample_responses,
)
from .modularity import select_k
from .seeding import derive_seed, stream

RESULTS_HEADER = (
    "experiment",
    "param_name",
    "param_value",
    "replication",
    "seed",
    "method",
    "clustering_error",
    "hamming_error",
    "nmi",
    "ari",
    "rel_l2_error",
    "k_selected",
    "k_correct",
    "status",
    "wall_ms",
)

SUMMARY_METRICS = ("clustering_error", "hamming_error", "nmi", "ari", "rel_l2_error")

SWEEPABLE = ("N", "L", "rho")


@dataclass
class ExperimentConfig:
    """One experiment: a swept parameter, fixed model sizes, and run bookkeeping.

    J defaults to N / 5 (N must then be divisible by 5). select_k_range,
    when set, runs class-count selection for every method and records
    whether it hit the true K.
    """

    experiment: str
    param_name: str
    param_values: tuple
    k: int = 3
    m: int = 5
    n: int | None = None
    j: int | None = None
    l: int | None = None
    rho: float | None = None
    replications: int = 50
    master_seed: int = 0
    methods: tuple[str, ...] = METHODS
    select_k_range: tuple[int, int] | None = None
    kmeans: KMeansConfig = field(default_factory=KMeansConfig)
    record_timing: bool = False

    def __post_init__(self):
        if self.param_name not in SWEEPABLE:
            raise ValueError(f"param_name must be one of {SWEEPABLE}")
        self.param_values = tuple(self.param_values)
        if not self.param_values:
            raise ValueError("param_values is empty")
        if self.replications < 1:
            raise ValueError("replications must be >= 1")
        self.methods = tuple(self.methods)
        unknown = [m for m in self.methods if m not in METHODS]
        if unknown:
            raise ValueError(f"unknown methods: {unknown}")
        if not self.methods:
            raise ValueError("methods is empty")
        if self.select_k_range is not None:
            lo, hi = self.select_k_range
            if not 1 <= lo <= hi:
                raise ValueError(f"bad select_k range {self.select_k_range}")
        for value in self.param_values:
            self.resolve(value)  # validates every point up front

    def resolve(self, param_value) -> ModelParams:
        """Model parameters at one sweep point."""
        n = int(param_value) if self.param_name == "N" else self.n
        l = int(param_value) if self.param_name == "L" else self.l
        rho = float(param_value) if self.param_name == "rho" else self.rho
        if n is None or l is None or rho is None:
            missing = [
                name
                for name, v in (("N", n), ("L", l), ("rho", rho))
                if v is None
            ]
            raise ValueError(f"unspecified parameters: {missing}")
        if self.j is not None:
            j = self.j
        else:
            if n % 5 != 0:
                raise ValueError(f"N={n} is not divisible by 5; set J explicitly")
            j = n // 5
        return ModelParams(n=n, j=j, k=self.k, l=l, m=self.m, rho=rho)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        fixed = data.get("fixed", {})
        select = data.get("select_k")
        kmeans_cfg = KMeansConfig(**data.get("kmeans", {}))
        return cls(
            experiment=data["experiment"],
            param_name=data["param_name"],
            param_values=tuple(data["param_values"]),
            k=fixed.get("K", 3),
            m=fixed.get("M", 5),
            n=fixed.get("N"),
            j=fixed.get("J"),
            l=fixed.get("L"),
            rho=fixed.get("rho"),
            replications=data.get("replications", 50),
            master_seed=data.get("master_seed", 0),
            methods=tuple(data.get("methods", METHODS)),
            select_k_range=tuple(select) if select else None,
            kmeans=kmeans_cfg,
            record_timing=data.get("record_timing", False),
        )

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def to_dict(self) -> dict:
        fixed = {"K": self.k, "M": self.m}
        for key, value in (("N", self.n), ("J", self.j), ("L", self.l), ("rho", self.rho)):
            if value is not None:
                fixed[key] = value
        return {
            "experiment": self.experiment,
            "param_name": self.param_name,
            "param_values": list(self.param_values),
            "fixed": fixed,
            "replications": self.replications,
            "master_seed": self.master_seed,
            "methods": list(self.methods),
            "select_k": list(self.select_k_range) if self.select_k_range else None,
            "kmeans": {
                "restarts": self.kmeans.restarts,
                "max_iters": self.kmeans.max_iters,
                "tol": self.kmeans.tol,
            },
            "record_timing": self.record_timing,
        }


@dataclass
class ExperimentRecord:
    experiment: str
    param_name: str
    param_value: object
    replication: int
    seed: int
    method: str
    clustering_error: float | None
    hamming_error: float | None
    nmi: float | None
    ari: float | None
    rel_l2_error: float | None
    k_selected: int | None
    k_correct: int | None
    status: str
    wall_ms: int | None


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    records: list

    def summary(self) -> list:
        return summarize(self.records)


def _seed_tag(cfg: ExperimentConfig, param_value, replication) -> tuple:
    return (cfg.master_seed, cfg.experiment, cfg.param_name, param_value, replication)


def _run_replication(cfg: ExperimentConfig, param_value, replication) -> list:
    """All method records for one sampled dataset."""
    params = cfg.resolve(param_value)
    tag = _seed_tag(cfg, param_value, replication)
    rep_seed = derive_seed(*tag)

    truth = sample_partition(params.n, params.k, stream(*tag, "partition"))
    thetas = sample_item_params(
        params.j, params.k, params.l, params.rho, params.m, stream(*tag, "items")
    )
    pop = population_response(truth, thetas)
    responses = sample_responses(pop, params.m, stream(*tag, "responses"))

    records = []
    for method in cfg.methods:
        start = time.perf_counter()
        fields = dict.fromkeys(
            ("clustering_error", "hamming_error", "nmi", "ari", "rel_l2_error"), None
        )
        k_selected = k_correct = None
        status = "ok"
        try:
            result = fit(responses, params.k, method, cfg.kmeans, stream(*tag, "kmeans", method))
            perm, clust = best_label_permutation(truth, result.z_hat)
            fields["clustering_error"] = clust
            fields["hamming_error"] = hamming_error(truth, result.z_hat)
            fields["nmi"] = nmi(truth, result.z_hat)
            fields["ari"] = ari(truth, result.z_hat)
            fields["rel_l2_error"] = relative_l2_error(
                thetas.thetas, result.theta_hats, perm
            )
            if cfg.select_k_range is not None:
                lo, hi = cfg.select_k_range
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore", RuntimeWarning)
                    curve = select_k(
                        responses, method, lo, hi, cfg.kmeans,
                        stream(*tag, "select-k", method),
                    )
                k_selected = curve.k_star
                k_correct = int(curve.k_star == params.k)
        except EstimationError:
            status = "failed"
        wall = int(round((time.perf_counter() - start) * 1000)) if cfg.record_timing else None
        records.append(
            ExperimentRecord(
                experiment=cfg.experiment,
                param_name=cfg.param_name,
                param_value=param_value,
                replication=replication,
                seed=rep_seed,
                method=method,
                k_selected=k_selected,
                k_correct=k_correct,
                status=status,
                wall_ms=wall,
                **fields,
            )
        )
    return records


def _task(args):
    return _run_replication(*args)


def run_experiment(cfg: ExperimentConfig, workers: int = 1) -> ExperimentResult:
    """Execute all (parameter value, replication) cells, in parallel if asked.

    Output order and content are independent of the worker count: each
    cell's seeds derive from its own identity, and records are sorted by
    (parameter position, replication, method position) before returning.
    """
    tasks = [
        (cfg, value, rep)
        for value in cfg.param_values
        for rep in range(cfg.replications)
    ]
    if workers <= 1:
        chunks = [_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_task, tasks))
    records = [rec for chunk in chunks for rec in chunk]

    param_pos = {v: i for i, v in enumerate(cfg.param_values)}
    method_pos = {m: i for i, m in enumerate(cfg.methods)}
    records.sort(
        key=lambda r: (param_pos[r.param_value], r.replication, method_pos[r.method])
    )
    expected = len(cfg.param_values) * cfg.replications * len(cfg.methods)
    if len(records) != expected:
        raise RuntimeError(f"expected {expected} records, produced {len(records)}")
    return ExperimentResult(config=cfg, records=records)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_results(records, path) -> Path:
    path = Path(path)
    lines = [",".join(RESULTS_HEADER)]
    for rec in records:
        row = [_fmt(getattr(rec, col)) for col in RESULTS_HEADER]
        lines.append(",".join(row))
    path.write_text("\n".join(lines) + "\n")
    return path


def _parse_cell(column: str, text: str):
    if text == "":
        return None
    if column in ("replication", "seed", "k_selected", "k_correct", "wall_ms"):
        return int(text)
    if column in SUMMARY_METRICS:
        return float(text)
    if column == "param_value":
        try:
            return int(text)
        except ValueError:
            return float(text)
    return text


def read_results(path) -> list:
    """Results CSV back into ExperimentRecord rows."""
    lines = Path(path).read_text().splitlines()
    if not lines or tuple(lines[0].split(",")) != RESULTS_HEADER:
        raise ValueError("results file does not match the pinned schema")
    records = []
    for line in lines[1:]:
        cells = line.split(",")
        data = {col: _parse_cell(col, cell) for col, cell in zip(RESULTS_HEADER, cells)}
        records.append(ExperimentRecord(**data))
    return records


def _mean_sd(values) -> tuple[float, float]:
    mean = sum(values) / len(values)
    if len(values) == 1:
        return mean, 0.0
    var = sum((v - mean) ** 2 for v in values) / (len(values) - 1)
    return mean, math.sqrt(var)


def summarize(records) -> list[dict]:
    """Per (parameter value, method) means and sample standard deviations.

    Failed replications are excluded from the averages and reported in the
    failure count; the class-count accuracy rate covers the rows where
    selection ran.
    """
    records = list(records)
    if not records:
        raise ValueError("no records to summarize")
    groups: dict[tuple, list] = {}
    order = []
    for rec in records:
        key = (rec.param_value, rec.method)
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(rec)

    rows = []
    for param_value, method in order:
        grp = groups[(param_value, method)]
        ok = [r for r in grp if r.status == "ok"]
        row = {
            "experiment": grp[0].experiment,
            "param_name": grp[0].param_name,
            "param_value": param_value,
            "method": method,
            "n_ok": len(ok),
            "n_failed": len(grp) - len(ok),
        }
        for metric in SUMMARY_METRICS:
            values = [getattr(r, metric) for r in ok if getattr(r, metric) is not None]
            if values:
                mean, sd = _mean_sd(values)
            else:
                mean = sd = None
            row[f"{metric}_mean"] = mean
            row[f"{metric}_sd"] = sd
        selected = [r.k_correct for r in grp if r.k_selected is not None]
        row["k_accuracy"] = sum(selected) / len(selected) if selected else None
        rows.append(row)
    return rows


SUMMARY_HEADER = (
    "experiment",
    "param_name",
    "param_value",
    "method",
    "n_ok",
    "n_failed",
    *(f"{m}_{s}" for m in SUMMARY_METRICS for s in ("mean", "sd")),
    "k_accuracy",
)


def write_summary(rows, path) -> Path:
    path = Path(path)
    lines = [",".join(SUMMARY_HEADER)]
    for row in rows:
        lines.append(",".join(_fmt(row.get(col)) for col in SUMMARY_HEADER))
    path.write_text("\n".join(lines) + "\n")
    return path


DEFAULT_SEED = 20260810

_DESK_POINTS = {
    "exp1-desk": ("N", (100, 300, 500)),
    "exp2-desk": ("L", (2, 10, 20)),
    "exp3-desk": ("rho", (0.02, 0.1, 0.2)),
    "exp1-paper": ("N", tuple(range(100, 1001, 100))),
    "exp2-paper": ("L", tuple(range(2, 21, 2))),
    "exp3-paper": ("rho", tuple(round(0.02 * i, 2) for i in range(1, 11))),
}


def experiment_preset(name: str, master_seed: int = DEFAULT_SEED) -> ExperimentConfig:
    """Ready-made configurations: exp{1,2,3}-{desk,paper} and kselect-desk."""
    if name == "kselect-desk":
        return ExperimentConfig(
            experiment=name,
            param_name="N",
            param_values=(1000,),
            j=200,
            l=10,
            rho=0.2,
            replications=20,
            master_seed=master_seed,
            methods=("LCA-DSoG",),
            select_k_range=(1, 6),
        )
    if name not in _DESK_POINTS:
        raise ValueError(f"unknown preset {name!r}")
    param_name, values = _DESK_POINTS[name]
    kwargs = {}
    if param_name != "N":
        kwargs["n"] = 500
    if param_name != "L":
        kwargs["l"] = 10
    if param_name != "rho":
        kwargs["rho"] = 0.1
    return ExperimentConfig(
        experiment=name,
        param_name=param_name,
        param_values=values,
        replications=10 if name.endswith("desk") else 50,
        master_seed=master_seed,
        **kwargs,
    )
