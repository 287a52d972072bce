"""Experiment campaigns: configs, seeded repetitions, CSV persistence and comparisons.

Campaign directory layout::

    <output_dir>/config.yaml       the resolved ExperimentConfig
    <output_dir>/summary.csv       run,seed,final_best
    <output_dir>/run_000.csv ...   evals,best_fitness (one file per repetition)
"""

from __future__ import annotations

import csv
import dataclasses
import hashlib
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import yaml

from .benchmarks import FUNCTION_NAMES, EvalBudget, make_benchmark
from .emas import EmasParams, RunRecord, run_emas
from .hybrid import HybridConfig, HybridOperatorSpec, run_hemas
from .hybrid.redistribution import Scheme
from .hybrid.rules import RuleSyntaxError
from .stats import SampleSet, TestReport, compare_samples
from .variation import derive_seed, make_rng

log = logging.getLogger(__name__)

WORKERS_ENV = "HEMAS_WORKERS"


class InvalidConfig(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class MixedInstances(ValueError):
    pass


@dataclass
class ExperimentConfig:
    algorithm: str
    function: str
    dimension: int
    hybrid: Optional[HybridConfig] = None
    repetitions: int = 30
    master_seed: int = 0
    eval_multiplier: int = 100
    output_dir: Optional[str] = None
    label: str = ""
    params: EmasParams = field(default_factory=EmasParams)

    def __post_init__(self):
        self.algorithm = self.algorithm.lower()
        if self.algorithm not in ("emas", "hemas"):
            raise InvalidConfig("algorithm", f"expected 'emas' or 'hemas', got {self.algorithm!r}")
        if self.function.lower() not in FUNCTION_NAMES:
            raise InvalidConfig("function", f"unknown benchmark {self.function!r}")
        self.function = self.function.lower()
        if self.dimension < 1:
            raise InvalidConfig("dimension", "must be >= 1")
        if self.repetitions < 1:
            raise InvalidConfig("repetitions", "must be >= 1")
        if self.eval_multiplier < 1:
            raise InvalidConfig("eval_multiplier", "must be >= 1")
        if self.algorithm == "hemas" and self.hybrid is None:
            raise InvalidConfig("hybrid", "required when algorithm is 'hemas'")
        if not self.label:
            self.label = self.algorithm

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {
            "algorithm": self.algorithm,
            "label": self.label,
            "function": self.function,
            "dimension": self.dimension,
            "repetitions": self.repetitions,
            "master_seed": self.master_seed,
            "eval_multiplier": self.eval_multiplier,
            "output_dir": self.output_dir,
            "params": _params_to_dict(self.params),
        }
        if self.hybrid is not None:
            d["hybrid"] = {
                "period": self.hybrid.period,
                "redistribution": self.hybrid.redistribution.value,
                "operators": [
                    {
                        "algorithm": op.algorithm,
                        "rule": op.rule.name,
                        "min_participants": op.min_participants,
                        "max_cycles": op.max_cycles,
                    }
                    for op in self.hybrid.operators
                ],
            }
        return d

    def fingerprint(self) -> str:
        """Hash of everything that determines the per-run results."""
        d = self.to_dict()
        for k in ("output_dir", "repetitions", "label"):
            d.pop(k)
        blob = json.dumps(d, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


def _params_to_dict(p: EmasParams) -> dict[str, Any]:
    return json.loads(json.dumps(dataclasses.asdict(p)))


def _params_from_dict(d: dict[str, Any]) -> EmasParams:
    from .variation import MutationParams, SbxParams

    d = dict(d)
    kinds = {"crossover": SbxParams, "mutation": MutationParams, "strong_mutation": MutationParams}
    for key, cls in kinds.items():
        if key in d and isinstance(d[key], dict):
            d[key] = cls(**d[key])
    return EmasParams(**d)


def config_from_dict(d: dict[str, Any]) -> ExperimentConfig:
    if not isinstance(d, dict):
        raise InvalidConfig("<root>", "config must be a mapping")
    known = {f.name for f in dataclasses.fields(ExperimentConfig)}
    for key in d:
        if key not in known:
            raise InvalidConfig(key, "unknown field")
    for key in ("algorithm", "function", "dimension"):
        if key not in d:
            raise InvalidConfig(key, "missing required field")
    d = dict(d)
    hybrid = d.pop("hybrid", None)
    if hybrid is not None:
        ops = []
        for i, op in enumerate(hybrid.get("operators", [])):
            where = f"hybrid.operators[{i}]"
            try:
                ops.append(HybridOperatorSpec(**op))
            except RuleSyntaxError as exc:
                raise InvalidConfig(f"{where}.rule", str(exc)) from None
            except (TypeError, ValueError) as exc:
                raise InvalidConfig(where, str(exc)) from None
        try:
            d["hybrid"] = HybridConfig(
                tuple(ops),
                period=int(hybrid.get("period", 2000)),
                redistribution=Scheme(hybrid.get("redistribution", "proportional")),
            )
        except ValueError as exc:
            raise InvalidConfig("hybrid", str(exc)) from None
    if "params" in d:
        try:
            d["params"] = _params_from_dict(d["params"])
        except (TypeError, ValueError) as exc:
            raise InvalidConfig("params", str(exc)) from None
    try:
        d["dimension"] = int(d["dimension"])
        return ExperimentConfig(**d)
    except InvalidConfig:
        raise
    except (TypeError, ValueError) as exc:
        raise InvalidConfig("<root>", str(exc)) from None


def load_config(path: str | os.PathLike) -> ExperimentConfig:
    with open(path) as fh:
        try:
            data = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise InvalidConfig("<file>", f"not valid YAML: {exc}") from None
    return config_from_dict(data)


PRESETS = ("emas", "hemas1", "hemas2", "hemas3")


def preset(name: str, function: str = "ackley", dimension: int = 100, **overrides) -> ExperimentConfig:
    """Named algorithm set-ups: plain EMAS and HEMAS with one, two or three operators."""
    ops = {
        "emas": None,
        "hemas1": [HybridOperatorSpec("pso", "VE0")],
        "hemas2": [HybridOperatorSpec("pso", "ELQ1"), HybridOperatorSpec("pso", "EGQ3")],
        "hemas3": [
            HybridOperatorSpec("pso", "ELQ1"),
            HybridOperatorSpec("pso", "EGQ3"),
            HybridOperatorSpec("ga", "VG0.5"),
        ],
    }
    if name not in ops:
        raise InvalidConfig("preset", f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    hybrid = None if ops[name] is None else HybridConfig(tuple(ops[name]), period=2000)
    return ExperimentConfig(
        algorithm="emas" if hybrid is None else "hemas",
        function=function,
        dimension=dimension,
        hybrid=hybrid,
        label=name,
        **overrides,
    )


def run_single(config: ExperimentConfig, run_index: int) -> RunRecord:
    f = make_benchmark(config.function, config.dimension)
    budget = EvalBudget.for_function(f, config.eval_multiplier)
    seed = derive_seed(config.master_seed, run_index)
    rng = make_rng(seed)
    if config.hybrid is None:
        record = run_emas(config.params, f, budget, rng)
    else:
        record = run_hemas(config.params, config.hybrid, f, budget, rng)
    record.run_index = run_index
    record.seed = seed
    record.fingerprint = config.fingerprint()
    return record


def _run_indexed(args):
    config, i = args
    return run_single(config, i)


def _fmt(x: float) -> str:
    return repr(float(x))


def write_trajectory(path: Path, record: RunRecord) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["evals", "best_fitness"])
        for evals, best in record.trajectory:
            w.writerow([evals, _fmt(best)])


def write_summary(path: Path, records: list[RunRecord]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["run", "seed", "final_best"])
        for r in records:
            w.writerow([r.run_index, r.seed, _fmt(r.final_best_fitness)])


def run_campaign(config: ExperimentConfig, workers: Optional[int] = None) -> list[RunRecord]:
    """Run all repetitions; results are ordered by run index whatever the worker count."""
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, "1"))
    jobs = [(config, i) for i in range(config.repetitions)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_run_indexed, jobs))
    else:
        records = [_run_indexed(j) for j in jobs]
    if config.output_dir is not None:
        out = Path(config.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "config.yaml", "w") as fh:
            yaml.safe_dump(config.to_dict(), fh, sort_keys=True)
        for r in records:
            write_trajectory(out / f"run_{r.run_index:03d}.csv", r)
        write_summary(out / "summary.csv", records)
    return records


@dataclass
class Campaign:
    label: str
    function: str
    dimension: int
    finals: list[float]
    seeds: list[int]


def load_campaign(path: str | os.PathLike) -> Campaign:
    path = Path(path)
    with open(path / "config.yaml") as fh:
        meta = yaml.safe_load(fh)
    finals, seeds = [], []
    with open(path / "summary.csv", newline="") as fh:
        for row in csv.DictReader(fh):
            finals.append(float(row["final_best"]))
            seeds.append(int(row["seed"]))
    return Campaign(meta.get("label") or path.name, meta["function"], int(meta["dimension"]), finals, seeds)


def compare_campaigns(campaigns: list[Campaign]) -> TestReport:
    if len(campaigns) < 2:
        raise ValueError("need at least two campaigns to compare")
    instances = {(c.function, c.dimension) for c in campaigns}
    if len(instances) > 1:
        raise MixedInstances(f"campaigns cover different instances: {sorted(instances)}")
    raw = [c.label for c in campaigns]
    # disambiguate repeated labels so pairwise keys stay distinct
    seen: dict[str, int] = {}
    labels = []
    for lab in raw:
        if raw.count(lab) > 1:
            seen[lab] = seen.get(lab, 0) + 1
            lab = f"{lab}#{seen[lab]}"
        labels.append(lab)
    return compare_samples([SampleSet(lab, c.finals) for lab, c in zip(labels, campaigns)])


def write_comparison(path: str | os.PathLike, report: TestReport) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["group_a", "group_b", "z", "p_unadjusted", "p_bonferroni"])
        for (a, b), r in report.pairwise.items():
            w.writerow([a, b, _fmt(r.z), _fmt(r.p_unadjusted), _fmt(r.p_bonferroni)])


def render_report(report: TestReport, alpha: float = 0.05) -> str:
    """Plain-text tables: descriptive statistics, then Dunn p-values (* marks p < alpha)."""
    lines = []
    width = max([len(k) for k in report.descriptions] + [5])
    head = f"{'group':<{width}}  {'mean':>12} {'median':>12} {'sd':>12} {'min':>12} {'max':>12}"
    lines.append(head)
    lines.append("-" * len(head))
    for label, d in report.descriptions.items():
        lines.append(
            f"{label:<{width}}  {d.mean:12.6g} {d.median:12.6g} {d.sd:12.6g} {d.min:12.6g} {d.max:12.6g}"
        )
    lines.append("")
    lines.append(f"Kruskal-Wallis H = {report.kw_H:.4f}, p = {report.kw_p:.4e}")
    lines.append("")
    head = f"{'group a':<{width}}  {'group b':<{width}}  {'z':>9} {'p':>12} {'p_bonf':>12}"
    lines.append(head)
    lines.append("-" * len(head))
    for (a, b), r in report.pairwise.items():
        flag = " *" if r.p_unadjusted < alpha else ""
        lines.append(
            f"{a:<{width}}  {b:<{width}}  {r.z:9.4f} {r.p_unadjusted:12.4e} {r.p_bonferroni:12.4e}{flag}"
        )
    return "\n".join(lines)
