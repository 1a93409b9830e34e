"""Declarative architecture tables for the five model families plus cascades.

Each builder returns a plain-dict architecture (JSON-friendly, stored verbatim
in checkpoints) that build_network() turns into a live Network. Widths other
than 42 serve the cascade stages, whose inputs append the upstream one-hot to
the feature vector; conv stages simply grow the length axis.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..data.schema import SCHEMA, TARGETS, DataError
from .network import Network

MODEL_KINDS = (
    "mlp_individual",
    "mlp_multi",
    "segaa0_individual",
    "segaa0_multi",
    "segaa_individual",
    "segaa_multi",
)

FEATURE_WIDTH = 42

MLP_PLAN = {
    "optimizer": "sgd", "lr": 0.0005, "decay": 1e-6, "momentum": 0.9, "nesterov": True,
    "epochs": 200, "batch_size": 32, "early_stop": False, "plateau": False,
}
SEGAA0_PLAN = {
    "optimizer": "adam", "lr": 0.001, "beta1": 0.9, "beta2": 0.999, "epsilon": 1e-8,
    "epochs": 200, "batch_size": 32, "early_stop": True, "patience": 5,
    "plateau": True, "plateau_patience": 3, "plateau_factor": 0.5, "min_lr": 1e-6,
}
SEGAA_PLAN = {
    "optimizer": "nadam", "lr": 0.001, "beta1": 0.9, "beta2": 0.999, "epsilon": 1e-8,
    "epochs": 200, "batch_size": 16, "early_stop": True, "patience": 5,
    "plateau": True, "plateau_patience": 3, "plateau_factor": 0.5, "min_lr": 1e-6,
}


def _gender_units(family):
    # the dense family predicts gender with one sigmoid unit, the conv
    # families with a two-way softmax
    return 1 if family == "mlp" else 2


def _head_entries(family, targets, in_dim):
    heads = []
    for target in TARGETS:
        if target not in targets:
            continue
        if target == "gender":
            units = _gender_units(family)
            activation = "sigmoid" if family == "mlp" else "softmax"
        else:
            units = SCHEMA.cardinality(target)
            activation = "softmax"
        heads.append({
            "name": f"{target}_head", "target": target, "kind": "dense",
            "in_dim": in_dim, "units": units, "activation": activation, "init": "glorot",
        })
    return heads


def _pooled(length, pool, stride):
    if length < pool:
        raise DataError(f"input too short for the pooling chain (length {length} < pool {pool})")
    return (length - pool) // stride + 1


def _mlp_arch(targets, input_width):
    trunk = []
    dims = [input_width, 2048, 1024, 512, 64]
    for i in range(4):
        trunk.append({"name": f"fc{i + 1}", "kind": "dense", "in_dim": dims[i],
                      "units": dims[i + 1], "init": "he"})
        trunk.append({"name": f"relu{i + 1}", "kind": "relu"})
    trunk.append({"name": "drop", "kind": "dropout", "rate": 0.25})
    return {"input_rank": 2, "trunk": trunk, "heads": _head_entries("mlp", targets, 64),
            "plan": dict(MLP_PLAN)}


def _segaa0_arch(targets, input_width):
    trunk = []
    length = input_width
    filters = (256, 128, 64)
    ch = 1
    for i, f in enumerate(filters, start=1):
        trunk.append({"name": f"conv{i}", "kind": "conv1d", "ch_in": ch, "filters": f,
                      "kernel": 5, "stride": 1, "padding": "same", "init": "glorot"})
        trunk.append({"name": f"bn{i}", "kind": "batchnorm", "channels": f})
        trunk.append({"name": f"pool{i}", "kind": "maxpool1d", "pool": 5, "stride": 2})
        length = _pooled(length, 5, 2)
        if i == 2:
            trunk.append({"name": "drop1", "kind": "dropout", "rate": 0.2})
        ch = f
    trunk.append({"name": "flatten", "kind": "flatten"})
    trunk.append({"name": "fc", "kind": "dense", "in_dim": length * ch, "units": 32,
                  "init": "glorot"})
    trunk.append({"name": "fc_bn", "kind": "batchnorm", "channels": 32})
    trunk.append({"name": "drop2", "kind": "dropout", "rate": 0.2})
    return {"input_rank": 3, "trunk": trunk, "heads": _head_entries("segaa0", targets, 32),
            "plan": dict(SEGAA0_PLAN)}


def _segaa_arch(targets, input_width):
    trunk = []
    length = input_width
    ch = 1
    for i, f in enumerate((256, 128, 64), start=1):
        trunk.append({"name": f"conv{i}", "kind": "conv1d", "ch_in": ch, "filters": f,
                      "kernel": 3, "stride": 1, "padding": "same", "init": "glorot"})
        trunk.append({"name": f"bn{i}", "kind": "batchnorm", "channels": f})
        trunk.append({"name": f"pool{i}", "kind": "maxpool1d", "pool": 2, "stride": 2})
        trunk.append({"name": f"drop{i}", "kind": "dropout", "rate": 0.3})
        length = _pooled(length, 2, 2)
        ch = f
    trunk.append({"name": "flatten", "kind": "flatten"})
    trunk.append({"name": "fc", "kind": "dense", "in_dim": length * ch, "units": 64,
                  "init": "glorot"})
    trunk.append({"name": "fc_bn", "kind": "batchnorm", "channels": 64})
    trunk.append({"name": "drop4", "kind": "dropout", "rate": 0.3})
    return {"input_rank": 3, "trunk": trunk, "heads": _head_entries("segaa", targets, 64),
            "plan": dict(SEGAA_PLAN)}


_FAMILY_ARCH = {"mlp": _mlp_arch, "segaa0": _segaa0_arch, "segaa": _segaa_arch}


def architecture(kind, target=None, input_width=FEATURE_WIDTH) -> dict:
    """The declarative architecture for a model kind.

    Individual kinds need the single target; multi kinds take all three.
    """
    if kind not in MODEL_KINDS:
        raise DataError(f"unknown model kind {kind!r}")
    family, variant = kind.rsplit("_", 1)
    if variant == "individual":
        if target not in TARGETS:
            raise DataError(f"individual model needs a target from {TARGETS}, got {target!r}")
        targets = (target,)
    else:
        if target is not None:
            raise DataError("multi-output models predict all three targets; drop the target")
        targets = TARGETS
    arch = _FAMILY_ARCH[family](targets, input_width)
    arch["kind"] = kind
    arch["input_width"] = input_width
    return arch


def build_network(arch, seed=0) -> Network:
    return Network(arch, seed=seed)


def build_model(kind, target=None, input_width=FEATURE_WIDTH, seed=0) -> Network:
    return build_network(architecture(kind, target, input_width), seed=seed)


def trunk_shape_trace(arch) -> list:
    """(name, length or width) pairs implied by the architecture table."""
    trace = []
    if arch["input_rank"] == 2:
        width = arch["input_width"]
        for entry in arch["trunk"]:
            if entry["kind"] == "dense":
                width = entry["units"]
            trace.append((entry["name"], width))
        return trace
    length = arch["input_width"]
    flat = None
    ch = 1
    for entry in arch["trunk"]:
        if entry["kind"] == "conv1d":
            ch = entry["filters"]
        elif entry["kind"] == "maxpool1d":
            length = _pooled(length, entry["pool"], entry["stride"])
        elif entry["kind"] == "flatten":
            flat = length * ch
        elif entry["kind"] == "dense":
            flat = entry["units"]
        trace.append((entry["name"], flat if flat is not None else length))
    return trace


CASCADE_ORDERS = (
    ("emotion", "gender", "age"),
    ("gender", "age", "emotion"),
    ("age", "emotion", "gender"),
)


@dataclass(frozen=True)
class CascadeSpec:
    order: tuple
    family: str = "segaa"
    use_all_previous: bool = False

    def __post_init__(self):
        if tuple(sorted(self.order)) != tuple(sorted(TARGETS)):
            raise DataError(f"cascade order must permute {TARGETS}, got {self.order}")
        if self.family not in ("mlp", "segaa", "segaa0"):
            raise DataError(f"unknown cascade family {self.family!r}")


def upstream_width(target) -> int:
    """Width the one-hot of a predicted target adds to the next stage input."""
    return SCHEMA.cardinality(target)


@dataclass
class Cascade:
    spec: CascadeSpec
    stages: list = field(default_factory=list)  # [(target, Network), ...]

    @property
    def order(self):
        return self.spec.order

    def stage_inputs(self, stage_index) -> tuple:
        """Targets whose one-hots are appended to the stage's feature input."""
        if stage_index == 0:
            return ()
        if self.spec.use_all_previous:
            return tuple(self.spec.order[:stage_index])
        return (self.spec.order[stage_index - 1],)

    def assemble(self, features, stage_index, labels) -> np.ndarray:
        """Stage input: the feature matrix plus upstream one-hot columns.

        labels maps target name to an integer label vector; under teacher
        forcing these are the true labels, at inference the predictions of
        the earlier stages.
        """
        parts = [np.asarray(features, dtype=np.float32)]
        for target in self.stage_inputs(stage_index):
            idx = np.asarray(labels[target], dtype=np.int64)
            oh = np.zeros((idx.shape[0], upstream_width(target)), dtype=np.float32)
            oh[np.arange(idx.shape[0]), idx] = 1.0
            parts.append(oh)
        return np.concatenate(parts, axis=1)

    def predict(self, features) -> dict:
        """Run the chain on predicted upstream labels; target -> int vector."""
        preds = {}
        for i, (target, net) in enumerate(self.stages):
            x = net.prepare_input(self.assemble(features, i, preds))
            probs = net.forward(x, train=False)
            preds[target] = net.predict(probs, target)
        return preds


def stage_widths(spec: CascadeSpec) -> list:
    widths = [FEATURE_WIDTH]
    for i in (1, 2):
        if spec.use_all_previous:
            extra = sum(upstream_width(t) for t in spec.order[:i])
        else:
            extra = upstream_width(spec.order[i - 1])
        widths.append(FEATURE_WIDTH + extra)
    return widths


def build_cascade(spec: CascadeSpec, seed=0) -> Cascade:
    kind = f"{spec.family}_individual"
    widths = stage_widths(spec)
    cascade = Cascade(spec=spec)
    for i, target in enumerate(spec.order):
        net = build_model(kind, target=target, input_width=widths[i],
                          seed=int(np.random.default_rng([seed, i]).integers(2**31)))
        cascade.stages.append((target, net))
    return cascade
