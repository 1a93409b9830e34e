"""The experimental matrix: individual vs multi-output vs sequential runs."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from ..data.schema import TARGETS, DataError
from ..models import CASCADE_ORDERS, MODEL_KINDS, CascadeSpec, build_cascade, build_model
from .metrics import evaluate, target_metrics
from .train import to_arrays, train


@dataclass(frozen=True)
class RunSpec:
    """One trained network: a model kind plus, for individuals, its target."""

    kind: str
    target: str | None = None

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise DataError(f"unknown model kind {self.kind!r}")
        if self.kind.endswith("_individual") and self.target not in TARGETS:
            raise DataError(f"{self.kind} needs a target from {TARGETS}")
        if self.kind.endswith("_multi") and self.target is not None:
            raise DataError(f"{self.kind} predicts all targets; drop the target")

    @property
    def name(self):
        return f"{self.kind}_{self.target}" if self.target else self.kind


def run_name(run) -> str:
    if isinstance(run, CascadeSpec):
        return f"cascade_{run.family}_{'-'.join(run.order)}"
    return run.name


@dataclass
class ExperimentPlan:
    runs: list
    seed: int = 0
    epochs_cap: int | None = None
    determinism: bool = True

    def __post_init__(self):
        if not self.runs:
            raise DataError("experiment plan has no runs")


def paper_matrix() -> list:
    """Every configuration the study compares.

    Individual kinds expand to one run per target, so the ten compared
    configurations (six model kinds plus four prediction sequences) become
    sixteen trained runs.
    """
    runs = []
    for family in ("mlp", "segaa0", "segaa"):
        runs.extend(RunSpec(f"{family}_individual", t) for t in TARGETS)
        runs.append(RunSpec(f"{family}_multi"))
    runs.extend(CascadeSpec(order, family="segaa") for order in CASCADE_ORDERS)
    runs.append(CascadeSpec(("emotion", "gender", "age"), family="mlp"))
    return runs


@dataclass
class MatrixResult:
    reports: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)
    ratios: dict = field(default_factory=dict)
    bundles: dict = field(default_factory=dict)

    def report(self, name) -> dict:
        for rep in self.reports:
            if rep["run"] == name:
                return rep
        raise KeyError(name)


def _run_seed(plan, index) -> int:
    return int(np.random.default_rng([plan.seed, index]).integers(2**31))


def override_plan(net, overrides):
    """Rewrite a network's training plan (kept in sync with its arch table)."""
    if overrides:
        net.plan.update(overrides)
        net.arch["plan"].update(overrides)


def evaluate_cascade(cascade, x, y):
    """Predicted-fed metric blocks plus per-stage oracle/predicted accuracies."""
    predicted = cascade.predict(x)
    stages = []
    for i, (target, net) in enumerate(cascade.stages):
        oracle_x = net.prepare_input(cascade.assemble(x, i, y))
        oracle_pred = net.predict(net.forward(oracle_x, train=False), target)
        stages.append({
            "target": target,
            "oracle_fed": float(np.mean(oracle_pred == y[target])),
            "predicted_fed": float(np.mean(predicted[target] == y[target])),
        })
    blocks = {t: target_metrics(y[t], predicted[t], t) for t in cascade.order}
    return blocks, stages


def _run_single(run, arrays, seed, epochs_cap, overrides=None):
    x_tr, y_tr = arrays["train"]
    net = build_model(run.kind, target=run.target, seed=seed)
    override_plan(net, (overrides or {}).get(run.kind))
    t0 = time.perf_counter()
    history = train(net, (x_tr, y_tr), arrays["val"], epochs=epochs_cap, seed=seed)
    seconds = time.perf_counter() - t0
    x_te, y_te = arrays["test"]
    report = {
        "run": run.name,
        "kind": run.kind,
        "targets": evaluate(net, x_te, y_te),
        "epochs": history["epochs_run"],
    }
    bundle = {"networks": [(run.name, net)], "cascade": None, "history": history}
    return report, seconds, bundle


def _run_cascade(spec, arrays, seed, epochs_cap, overrides=None):
    x_tr, y_tr = arrays["train"]
    x_val, y_val = arrays["val"]
    x_te, y_te = arrays["test"]
    cascade = build_cascade(spec, seed=seed)
    name = run_name(spec)

    seconds = 0.0
    histories = {}
    for i, (target, net) in enumerate(cascade.stages):
        override_plan(net, (overrides or {}).get(f"{spec.family}_individual"))
        # teacher forcing: upstream columns carry the true labels
        tr = (cascade.assemble(x_tr, i, y_tr), y_tr)
        val = (cascade.assemble(x_val, i, y_val), y_val)
        t0 = time.perf_counter()
        histories[target] = train(net, tr, val, epochs=epochs_cap, seed=seed)
        seconds += time.perf_counter() - t0

    blocks, stages = evaluate_cascade(cascade, x_te, y_te)
    report = {
        "run": name,
        "kind": "cascade",
        "family": spec.family,
        "order": list(spec.order),
        "targets": blocks,
        "cascade": {"stages": stages},
        "epochs": {t: histories[t]["epochs_run"] for t in spec.order},
    }
    bundle = {
        "networks": [(f"stage{i}_{t}", net) for i, (t, net) in enumerate(cascade.stages)],
        "cascade": spec,
        "history": histories,
    }
    return report, seconds, bundle


def run_matrix(plan: ExperimentPlan, splits, overrides=None) -> MatrixResult:
    """Train and evaluate every run; failures are recorded, not fatal.

    Timings stay in the result object (never inside report dicts) so report
    files can be byte-stable under the determinism flag; the multi/individual
    runtime ratio is computed per family whenever all four runs are present.
    overrides maps a model kind to plan fields replacing its defaults.
    """
    arrays = {part: to_arrays(getattr(splits, part)) for part in ("train", "val", "test")}
    result = MatrixResult()
    for index, run in enumerate(plan.runs):
        seed = _run_seed(plan, index)
        name = run_name(run)
        try:
            if isinstance(run, CascadeSpec):
                report, seconds, bundle = _run_cascade(run, arrays, seed,
                                                       plan.epochs_cap, overrides)
            else:
                report, seconds, bundle = _run_single(run, arrays, seed,
                                                      plan.epochs_cap, overrides)
        except Exception as exc:
            result.reports.append({"run": name, "error": str(exc)})
            continue
        result.reports.append(report)
        result.timings[name] = seconds
        result.bundles[name] = bundle

    for family in ("mlp", "segaa0", "segaa"):
        names = [f"{family}_individual_{t}" for t in TARGETS]
        multi = f"{family}_multi"
        if multi in result.timings and all(n in result.timings for n in names):
            denom = sum(result.timings[n] for n in names)
            if denom > 0:
                result.ratios[family] = result.timings[multi] / denom
    return result
