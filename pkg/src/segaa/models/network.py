"""Multi-head network container built from declarative layer entries.

A network is a shared trunk plus one prediction head per target. Heads fold
their activation into the loss during training: backward starts from the
fused (p - t) / batch logit gradient, so the softmax/sigmoid layers are only
walked forward.
"""

from __future__ import annotations

import numpy as np

from ..data.schema import DataError, one_hot
from ..nn import (
    BatchNorm,
    Conv1D,
    Dense,
    Dropout,
    Flatten,
    MaxPool1D,
    ReLU,
    Sigmoid,
    Softmax,
    binary_ce,
    categorical_ce,
    sigmoid_bce_grad,
    softmax_ce_grad,
)


def _layer_from_entry(entry, rng, seed, position, dtype):
    kind = entry["kind"]
    if kind == "dense":
        return Dense(entry["in_dim"], entry["units"], init=entry.get("init", "glorot"),
                     rng=rng, dtype=dtype)
    if kind == "conv1d":
        return Conv1D(entry["ch_in"], entry["filters"], entry["kernel"],
                      stride=entry.get("stride", 1), padding=entry.get("padding", "same"),
                      init=entry.get("init", "glorot"), rng=rng, dtype=dtype)
    if kind == "batchnorm":
        return BatchNorm(entry["channels"], dtype=dtype)
    if kind == "maxpool1d":
        return MaxPool1D(entry["pool"], entry["stride"])
    if kind == "dropout":
        return Dropout(entry["rate"], seed=(seed, position))
    if kind == "flatten":
        return Flatten()
    if kind == "relu":
        return ReLU()
    raise ValueError(f"unknown layer kind {kind!r}")


class Head:
    def __init__(self, entry, rng, dtype):
        self.target = entry["target"]
        self.name = entry["name"]
        self.activation = entry["activation"]
        self.units = entry["units"]
        self.dense = Dense(entry["in_dim"], entry["units"], init=entry.get("init", "glorot"),
                           rng=rng, dtype=dtype)
        if self.activation == "softmax":
            self.act = Softmax()
        elif self.activation == "sigmoid":
            self.act = Sigmoid()
        else:
            raise ValueError(f"unknown head activation {self.activation!r}")


class Network:
    """Trunk layers, prediction heads, and the training plan that built them."""

    def __init__(self, arch, seed=0, dtype=np.float32):
        self.arch = arch
        self.kind = arch["kind"]
        self.input_rank = arch["input_rank"]
        self.input_width = arch["input_width"]
        self.plan = dict(arch["plan"])
        self.seed = seed
        rng = np.random.default_rng(seed)
        self.trunk = [
            _layer_from_entry(entry, rng, seed, i, dtype)
            for i, entry in enumerate(arch["trunk"])
        ]
        self.trunk_names = [entry["name"] for entry in arch["trunk"]]
        self.heads = [Head(entry, rng, dtype) for entry in arch["heads"]]
        self.targets = tuple(h.target for h in self.heads)

    # -- plumbing ----------------------------------------------------------

    def head(self, target) -> Head:
        for h in self.heads:
            if h.target == target:
                return h
        raise DataError(f"network has no {target!r} head")

    def params(self):
        out = []
        for layer in self.trunk:
            out.extend(layer.params())
        for h in self.heads:
            out.extend(h.dense.params())
        return out

    def grads(self):
        out = []
        for layer in self.trunk:
            out.extend(layer.grads())
        for h in self.heads:
            out.extend(h.dense.grads())
        return out

    def buffers(self):
        out = []
        for layer in self.trunk:
            out.extend(layer.buffers())
        return out

    def param_count(self) -> int:
        return int(sum(p.size for p in self.params()))

    def snapshot(self):
        return [a.copy() for a in self.params() + self.buffers()]

    def restore(self, state):
        arrays = self.params() + self.buffers()
        if len(state) != len(arrays):
            raise ValueError("snapshot does not match this network")
        for arr, saved in zip(arrays, state):
            arr[...] = saved

    # -- forward / backward -------------------------------------------------

    def _check_input(self, x):
        if x.ndim != self.input_rank:
            raise ValueError(f"{self.kind} expects rank-{self.input_rank} input, got {x.shape}")
        if x.shape[1] != self.input_width:
            raise ValueError(f"{self.kind} expects width {self.input_width}, got {x.shape}")

    def forward(self, x, train=False) -> dict:
        self._check_input(x)
        h = x
        for layer in self.trunk:
            h = layer.forward(h, train=train)
        self._h = h
        out = {}
        for head in self.heads:
            out[head.target] = head.act.forward(head.dense.forward(h, train=train), train=train)
        return out

    def forward_traced(self, x) -> list:
        """(name, output) pairs for every trunk layer; inference mode, for NaN hunts."""
        self._check_input(x)
        h = x
        trace = []
        for name, layer in zip(self.trunk_names, self.trunk):
            h = layer.forward(h, train=False)
            trace.append((name, h))
        for head in self.heads:
            trace.append((head.name, head.act.forward(head.dense.forward(h), train=False)))
        return trace

    def backward_from_logit_grads(self, dlogits: dict):
        dh = None
        for head in self.heads:
            g = head.dense.backward(dlogits[head.target])
            dh = g if dh is None else dh + g
        for layer in reversed(self.trunk):
            dh = layer.backward(dh)
        return dh

    # -- losses and labels ---------------------------------------------------

    def encode_targets(self, target, labels) -> np.ndarray:
        head = self.head(target)
        labels = np.asarray(labels)
        if head.activation == "sigmoid":
            return labels.astype(np.float32).reshape(-1, 1)
        return np.stack([one_hot(int(i), head.units) for i in labels])

    def loss(self, probs: dict, encoded: dict) -> float:
        total = 0.0
        for head in self.heads:
            if head.activation == "sigmoid":
                total += binary_ce(probs[head.target], encoded[head.target])
            else:
                total += categorical_ce(probs[head.target], encoded[head.target])
        return total

    def logit_grads(self, probs: dict, encoded: dict) -> dict:
        out = {}
        for head in self.heads:
            if head.activation == "sigmoid":
                out[head.target] = sigmoid_bce_grad(probs[head.target], encoded[head.target])
            else:
                out[head.target] = softmax_ce_grad(probs[head.target], encoded[head.target])
        return out

    def predict(self, probs: dict, target) -> np.ndarray:
        head = self.head(target)
        p = probs[target]
        if head.activation == "sigmoid":
            return (p[:, 0] >= 0.5).astype(int)
        return p.argmax(axis=1)

    def prepare_input(self, features: np.ndarray) -> np.ndarray:
        """Vector batch (batch, width) shaped for this family, float32."""
        x = np.asarray(features, dtype=np.float32)
        if x.ndim != 2:
            raise ValueError(f"expected a (batch, width) feature matrix, got {x.shape}")
        if self.input_rank == 3:
            return x[:, :, None]
        return x
