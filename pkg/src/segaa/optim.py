"""Optimizers and the two training-control callbacks.

The step index t starts at 1 on the first update. Optimizers mutate the
parameter arrays in place so layers never need re-wiring; per-parameter
state buffers are allocated lazily on the first step and keyed by position,
which assumes the params list keeps a stable order (it does: it comes from
the network's layer list).
"""

from __future__ import annotations

import numpy as np


def _check_pairs(params, grads):
    if len(params) != len(grads):
        raise ValueError(f"{len(params)} params but {len(grads)} grads")
    for p, g in zip(params, grads):
        if p.shape != g.shape:
            raise ValueError(f"param {p.shape} does not match grad {g.shape}")


class Sgd:
    """SGD with per-step lr decay, classical momentum, optional Nesterov.

    lr_t = lr / (1 + decay * t)
    v    <- momentum * v - lr_t * g
    theta <- theta + momentum * v - lr_t * g   (Nesterov)
    theta <- theta + v                         (plain momentum)
    """

    def __init__(self, lr=0.0005, decay=1e-6, momentum=0.9, nesterov=True):
        if lr <= 0:
            raise ValueError("lr must be positive")
        if not 0.0 <= momentum < 1.0:
            raise ValueError("momentum must be in [0, 1)")
        if decay < 0:
            raise ValueError("decay must be >= 0")
        self.lr = lr
        self.decay = decay
        self.momentum = momentum
        self.nesterov = nesterov
        self.t = 0
        self._v = None

    def step(self, params, grads):
        _check_pairs(params, grads)
        if self._v is None:
            self._v = [np.zeros_like(p) for p in params]
        self.t += 1
        lr_t = self.lr / (1.0 + self.decay * self.t)
        m = self.momentum
        for p, g, v in zip(params, grads, self._v):
            v *= m
            v -= (lr_t * g).astype(p.dtype)
            if self.nesterov:
                p += m * v - (lr_t * g).astype(p.dtype)
            else:
                p += v


class Adam:
    def __init__(self, lr=0.001, beta1=0.9, beta2=0.999, epsilon=1e-8):
        if lr <= 0:
            raise ValueError("lr must be positive")
        if not (0.0 <= beta1 < 1.0 and 0.0 <= beta2 < 1.0):
            raise ValueError("betas must be in [0, 1)")
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.epsilon = epsilon
        self.t = 0
        self._m = None
        self._v = None

    def _moments(self, params, grads):
        _check_pairs(params, grads)
        if self._m is None:
            self._m = [np.zeros_like(p) for p in params]
            self._v = [np.zeros_like(p) for p in params]
        self.t += 1
        b1, b2 = self.beta1, self.beta2
        for g, m, v in zip(grads, self._m, self._v):
            m *= b1
            m += ((1.0 - b1) * g).astype(m.dtype)
            v *= b2
            v += ((1.0 - b2) * np.square(g)).astype(v.dtype)

    def step(self, params, grads):
        self._moments(params, grads)
        c1 = 1.0 - self.beta1**self.t
        c2 = 1.0 - self.beta2**self.t
        for p, m, v in zip(params, self._m, self._v):
            p -= (self.lr * (m / c1) / (np.sqrt(v / c2) + self.epsilon)).astype(p.dtype)


class Nadam(Adam):
    """Adam moments with the Nesterov look-ahead numerator.

    numerator = beta1 * m_hat + (1 - beta1) * g / (1 - beta1^t); with
    beta1 = 0 this collapses to Adam exactly.
    """

    def step(self, params, grads):
        self._moments(params, grads)
        b1 = self.beta1
        c1 = 1.0 - b1**self.t
        c2 = 1.0 - self.beta2**self.t
        for p, g, m, v in zip(params, grads, self._m, self._v):
            num = b1 * (m / c1) + (1.0 - b1) * g / c1
            p -= (self.lr * num / (np.sqrt(v / c2) + self.epsilon)).astype(p.dtype)


class EarlyStop:
    """Stop after `patience` epochs without improvement; restore the best.

    The monitored metric is higher-is-better; an epoch improves only when it
    beats the best seen by more than min_delta. update() returns True when
    training should stop. snapshot() is called by the monitor owner with
    whatever weight copy it wants restored later via best_state.
    """

    def __init__(self, patience=5, min_delta=1e-4):
        if patience < 1:
            raise ValueError("patience must be >= 1")
        self.patience = patience
        self.min_delta = min_delta
        self.best = -np.inf
        self.best_epoch = -1
        self.best_state = None
        self.wait = 0

    def update(self, metric, epoch, state=None) -> bool:
        if metric > self.best + self.min_delta:
            self.best = metric
            self.best_epoch = epoch
            self.best_state = state() if callable(state) else state
            self.wait = 0
            return False
        self.wait += 1
        return self.wait >= self.patience


class PlateauLr:
    """Halve the lr after `patience` epochs without improvement.

    The counter resets both on improvement and right after a reduction;
    reductions floor at min_lr. update() returns the lr to use next.
    """

    def __init__(self, lr, patience=3, factor=0.5, min_lr=1e-6, min_delta=1e-4):
        if not 0.0 < factor < 1.0:
            raise ValueError("factor must be in (0, 1)")
        if patience < 1:
            raise ValueError("patience must be >= 1")
        self.lr = lr
        self.patience = patience
        self.factor = factor
        self.min_lr = min_lr
        self.min_delta = min_delta
        self.best = -np.inf
        self.wait = 0

    def update(self, metric) -> float:
        if metric > self.best + self.min_delta:
            self.best = metric
            self.wait = 0
            return self.lr
        self.wait += 1
        if self.wait >= self.patience:
            self.lr = max(self.lr * self.factor, self.min_lr)
            self.wait = 0
        return self.lr
