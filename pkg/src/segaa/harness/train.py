"""The mini-batch training loop shared by every model family."""

from __future__ import annotations

import numpy as np

from ..data.schema import TARGETS, DataError
from ..optim import Adam, EarlyStop, Nadam, PlateauLr, Sgd


class NumericError(RuntimeError):
    """Training produced a non-finite loss."""


def to_arrays(examples):
    """Stack LabeledExamples into (features, {target: labels}) arrays."""
    if not examples:
        raise DataError("empty example list")
    x = np.stack([ex.features for ex in examples]).astype(np.float32)
    y = {t: np.array([ex.label(t) for ex in examples], dtype=np.int64) for t in TARGETS}
    return x, y


def make_optimizer(plan):
    name = plan["optimizer"]
    if name == "sgd":
        return Sgd(lr=plan["lr"], decay=plan.get("decay", 0.0),
                   momentum=plan.get("momentum", 0.0),
                   nesterov=plan.get("nesterov", False))
    if name == "adam":
        return Adam(lr=plan["lr"], beta1=plan.get("beta1", 0.9),
                    beta2=plan.get("beta2", 0.999), epsilon=plan.get("epsilon", 1e-8))
    if name == "nadam":
        return Nadam(lr=plan["lr"], beta1=plan.get("beta1", 0.9),
                     beta2=plan.get("beta2", 0.999), epsilon=plan.get("epsilon", 1e-8))
    raise DataError(f"unknown optimizer {name!r}")


def _first_bad_layer(net, xb):
    for name, out in net.forward_traced(xb):
        if not np.all(np.isfinite(out)):
            return name
    return "loss"


def _val_accuracies(net, x_val, y_val):
    probs = net.forward(net.prepare_input(x_val), train=False)
    return {t: float(np.mean(net.predict(probs, t) == y_val[t])) for t in net.targets}


def train(net, train_xy, val_xy, epochs=None, seed=0) -> dict:
    """Run the network's training plan; returns the history dict.

    Each epoch reshuffles with a (seed, epoch)-derived generator and walks
    mini-batches keeping the final partial batch. The monitored metric is the
    mean of the heads' validation accuracies; early-stop restores the best
    snapshot and the plateau schedule rewrites the optimizer lr in place.
    Single-example batches are skipped when the trunk carries batch norm,
    which needs at least two rows to form a batch statistic.
    """
    plan = net.plan
    cap = plan["epochs"] if epochs is None else min(int(epochs), plan["epochs"])
    batch = plan["batch_size"]
    x_tr, y_tr = train_xy
    x_val, y_val = val_xy
    n = len(x_tr)
    if n == 0:
        raise DataError("empty training set")

    history = {"loss": [], "val_accuracy": {t: [] for t in net.targets},
               "monitor": [], "lr": [], "epochs_run": 0}
    if cap <= 0:
        return history

    optimizer = make_optimizer(plan)
    early = EarlyStop(patience=plan["patience"]) if plan.get("early_stop") else None
    plateau = None
    if plan.get("plateau"):
        plateau = PlateauLr(lr=plan["lr"], patience=plan.get("plateau_patience", 3),
                            factor=plan.get("plateau_factor", 0.5),
                            min_lr=plan.get("min_lr", 1e-6))
    needs_pairs = len(net.buffers()) > 0  # batch norm present

    for epoch in range(cap):
        order = np.random.default_rng([seed, epoch]).permutation(n)
        total = 0.0
        seen = 0
        for bi, b0 in enumerate(range(0, n, batch)):
            idx = order[b0 : b0 + batch]
            if needs_pairs and len(idx) < 2:
                continue
            xb = net.prepare_input(x_tr[idx])
            probs = net.forward(xb, train=True)
            encoded = {t: net.encode_targets(t, y_tr[t][idx]) for t in net.targets}
            loss = net.loss(probs, encoded)
            if not np.isfinite(loss):
                layer = _first_bad_layer(net, xb)
                raise NumericError(
                    f"non-finite loss at epoch {epoch}, batch {bi}, layer {layer}")
            net.backward_from_logit_grads(net.logit_grads(probs, encoded))
            optimizer.step(net.params(), net.grads())
            total += loss * len(idx)
            seen += len(idx)
        if seen == 0:
            raise DataError("training set too small for batch normalization")

        accs = _val_accuracies(net, x_val, y_val)
        monitor = float(np.mean(list(accs.values())))
        history["loss"].append(total / seen)
        for t in net.targets:
            history["val_accuracy"][t].append(accs[t])
        history["monitor"].append(monitor)
        if plateau is not None:
            optimizer.lr = plateau.update(monitor)
        history["lr"].append(optimizer.lr)
        if early is not None and early.update(monitor, epoch, state=net.snapshot):
            net.restore(early.best_state)
            history["best_epoch"] = early.best_epoch
            break

    history["epochs_run"] = len(history["loss"])
    return history
