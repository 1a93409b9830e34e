"""Layers with reverse-mode gradients, just enough for the three model families.

Everything is channels-last: dense tensors are (batch, features) and 1-D
convolutional tensors are (batch, length, channels). Production numerics are
float32; explicit reductions accumulate in float64 before casting back, which
keeps gradient checks tight without giving up the small-weight memory wins.
Layers built with dtype=float64 stay float64 end to end, which is what the
finite-difference tests use.

Usage pattern: forward caches whatever backward needs, backward returns the
input gradient and stores parameter gradients, params()/grads() expose
matching lists for the optimizer, buffers() exposes non-trained state
(batchnorm running moments) so checkpoints and early stopping can capture it.
"""

from __future__ import annotations

import numpy as np


def he_uniform(shape, fan_in, rng, dtype):
    limit = np.sqrt(6.0 / fan_in)
    return rng.uniform(-limit, limit, size=shape).astype(dtype)


def glorot_uniform(shape, fan_in, fan_out, rng, dtype):
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape).astype(dtype)


def _init_weights(init, shape, fan_in, fan_out, rng, dtype):
    if init == "he":
        return he_uniform(shape, fan_in, rng, dtype)
    if init == "glorot":
        return glorot_uniform(shape, fan_in, fan_out, rng, dtype)
    raise ValueError(f"unknown weight init {init!r}")


class Layer:
    """Base class; stateless layers inherit the empty param lists."""

    def params(self) -> list:
        return []

    def grads(self) -> list:
        return []

    def buffers(self) -> list:
        return []

    def forward(self, x: np.ndarray, train: bool = False) -> np.ndarray:
        raise NotImplementedError

    def backward(self, dy: np.ndarray) -> np.ndarray:
        raise NotImplementedError


class Dense(Layer):
    def __init__(self, in_dim, units, init="glorot", rng=None, dtype=np.float32):
        if in_dim < 1 or units < 1:
            raise ValueError("dense dimensions must be positive")
        rng = rng if rng is not None else np.random.default_rng(0)
        self.in_dim = in_dim
        self.units = units
        self.w = _init_weights(init, (in_dim, units), in_dim, units, rng, dtype)
        self.b = np.zeros(units, dtype=dtype)
        self.dw = np.zeros_like(self.w)
        self.db = np.zeros_like(self.b)
        self._x = None

    def params(self):
        return [self.w, self.b]

    def grads(self):
        return [self.dw, self.db]

    def forward(self, x, train=False):
        if x.ndim != 2 or x.shape[1] != self.in_dim:
            raise ValueError(f"dense expected (batch, {self.in_dim}), got {x.shape}")
        self._x = x
        return x @ self.w + self.b

    def backward(self, dy):
        x = self._x
        self.dw = x.T @ dy
        self.db = dy.sum(axis=0, dtype=np.float64).astype(dy.dtype)
        return dy @ self.w.T


class Conv1D(Layer):
    """Cross-correlation over (batch, length, ch_in) via an im2col gather.

    kernel weights are (filters, kernel, ch_in); same padding adds kernel-1
    zeros split evenly with the extra zero on the right.
    """

    def __init__(self, ch_in, filters, kernel, stride=1, padding="same",
                 init="glorot", rng=None, dtype=np.float32):
        if min(ch_in, filters, kernel, stride) < 1:
            raise ValueError("conv1d parameters must be positive")
        if padding not in ("same", "valid"):
            raise ValueError(f"unknown padding {padding!r}")
        rng = rng if rng is not None else np.random.default_rng(0)
        self.ch_in = ch_in
        self.filters = filters
        self.kernel = kernel
        self.stride = stride
        self.padding = padding
        fan_in = kernel * ch_in
        self.w = _init_weights(init, (filters, kernel, ch_in), fan_in, kernel * filters, rng, dtype)
        self.b = np.zeros(filters, dtype=dtype)
        self.dw = np.zeros_like(self.w)
        self.db = np.zeros_like(self.b)
        self._cols = None
        self._idx = None
        self._pad = (0, 0)
        self._in_len = 0

    def params(self):
        return [self.w, self.b]

    def grads(self):
        return [self.dw, self.db]

    def forward(self, x, train=False):
        if x.ndim != 3 or x.shape[2] != self.ch_in:
            raise ValueError(f"conv1d expected (batch, len, {self.ch_in}), got {x.shape}")
        self._in_len = x.shape[1]
        if self.padding == "same":
            left = (self.kernel - 1) // 2
            self._pad = (left, self.kernel - 1 - left)
            x = np.pad(x, ((0, 0), self._pad, (0, 0)))
        else:
            self._pad = (0, 0)
        if x.shape[1] < self.kernel:
            raise ValueError(f"kernel {self.kernel} longer than padded input {x.shape[1]}")
        out_len = (x.shape[1] - self.kernel) // self.stride + 1
        starts = self.stride * np.arange(out_len)
        self._idx = starts[:, None] + np.arange(self.kernel)[None, :]
        self._cols = x[:, self._idx, :]  # (batch, out_len, kernel, ch_in)
        return np.tensordot(self._cols, self.w, axes=([2, 3], [1, 2])) + self.b

    def backward(self, dy):
        cols, idx = self._cols, self._idx
        self.dw = np.tensordot(dy, cols, axes=([0, 1], [0, 1]))  # (filters, kernel, ch_in)
        self.db = dy.sum(axis=(0, 1), dtype=np.float64).astype(dy.dtype)
        dcols = np.tensordot(dy, self.w, axes=(2, 0))  # (batch, out_len, kernel, ch_in)
        padded_len = self._in_len + self._pad[0] + self._pad[1]
        dxp = np.zeros((dy.shape[0], padded_len, self.ch_in), dtype=dy.dtype)
        np.add.at(dxp, (slice(None), idx), dcols)
        return dxp[:, self._pad[0] : self._pad[0] + self._in_len, :]


class MaxPool1D(Layer):
    """Max over sliding windows; gradient routes to the earliest max per window."""

    def __init__(self, pool, stride):
        if pool < 1 or stride < 1:
            raise ValueError("pool and stride must be positive")
        self.pool = pool
        self.stride = stride
        self._arg = None
        self._idx = None
        self._in_shape = None

    def forward(self, x, train=False):
        if x.ndim != 3:
            raise ValueError(f"maxpool1d expected (batch, len, ch), got {x.shape}")
        if x.shape[1] < self.pool:
            raise ValueError(f"pool {self.pool} longer than input {x.shape[1]}")
        out_len = (x.shape[1] - self.pool) // self.stride + 1
        starts = self.stride * np.arange(out_len)
        self._idx = starts[:, None] + np.arange(self.pool)[None, :]
        windows = x[:, self._idx, :]  # (batch, out_len, pool, ch)
        self._arg = windows.argmax(axis=2)  # first max wins ties
        self._in_shape = x.shape
        return windows.max(axis=2)

    def backward(self, dy):
        batch, out_len, ch = dy.shape
        dx = np.zeros(self._in_shape, dtype=dy.dtype)
        b_ix = np.arange(batch)[:, None, None]
        c_ix = np.arange(ch)[None, None, :]
        starts = self.stride * np.arange(out_len)[None, :, None]
        np.add.at(dx, (b_ix, starts + self._arg, c_ix), dy)
        return dx


class BatchNorm(Layer):
    """Normalization over every axis but the last (per-channel statistics)."""

    def __init__(self, channels, momentum=0.9, epsilon=1e-5, dtype=np.float32):
        if channels < 1:
            raise ValueError("channels must be positive")
        self.channels = channels
        self.momentum = momentum
        self.epsilon = epsilon
        self.gamma = np.ones(channels, dtype=dtype)
        self.beta = np.zeros(channels, dtype=dtype)
        self.running_mean = np.zeros(channels, dtype=dtype)
        self.running_var = np.ones(channels, dtype=dtype)
        self.dgamma = np.zeros_like(self.gamma)
        self.dbeta = np.zeros_like(self.beta)
        self._xhat = None
        self._inv = None
        self._axes = None
        self._n = 0
        self._train = False

    def params(self):
        return [self.gamma, self.beta]

    def grads(self):
        return [self.dgamma, self.dbeta]

    def buffers(self):
        return [self.running_mean, self.running_var]

    def forward(self, x, train=False):
        if x.ndim not in (2, 3) or x.shape[-1] != self.channels:
            raise ValueError(f"batchnorm expected {self.channels} channels, got {x.shape}")
        axes = tuple(range(x.ndim - 1))
        self._axes = axes
        self._train = train
        if train:
            if x.shape[0] < 2:
                raise ValueError("batchnorm needs batch >= 2 in train mode")
            mean = x.mean(axis=axes, dtype=np.float64)
            var = np.square(x - mean.astype(x.dtype)).mean(axis=axes, dtype=np.float64)
            m = self.momentum
            self.running_mean[...] = m * self.running_mean + (1 - m) * mean.astype(x.dtype)
            self.running_var[...] = m * self.running_var + (1 - m) * var.astype(x.dtype)
        else:
            mean = self.running_mean.astype(np.float64)
            var = self.running_var.astype(np.float64)
        inv = 1.0 / np.sqrt(var + self.epsilon)
        xhat = (x - mean.astype(x.dtype)) * inv.astype(x.dtype)
        self._xhat = xhat
        self._inv = inv.astype(x.dtype)
        self._n = int(np.prod([x.shape[a] for a in axes]))
        return self.gamma * xhat + self.beta

    def backward(self, dy):
        xhat, inv, axes, n = self._xhat, self._inv, self._axes, self._n
        self.dgamma = (dy * xhat).sum(axis=axes, dtype=np.float64).astype(dy.dtype)
        self.dbeta = dy.sum(axis=axes, dtype=np.float64).astype(dy.dtype)
        dxhat = dy * self.gamma
        if not self._train:
            return dxhat * inv
        sum_dxhat = dxhat.sum(axis=axes, keepdims=True, dtype=np.float64).astype(dy.dtype)
        sum_dxhat_x = (dxhat * xhat).sum(axis=axes, keepdims=True, dtype=np.float64).astype(dy.dtype)
        return (inv / n) * (n * dxhat - sum_dxhat - xhat * sum_dxhat_x)


class Dropout(Layer):
    """Inverted dropout: survivors scaled by 1/(1-rate), inference is identity."""

    def __init__(self, rate, seed=0):
        if not 0.0 <= rate < 1.0:
            raise ValueError(f"dropout rate must be in [0, 1), got {rate}")
        self.rate = rate
        self.rng = np.random.default_rng(seed)
        self._mask = None

    def forward(self, x, train=False):
        if not train or self.rate == 0.0:
            self._mask = None
            return x
        keep = 1.0 - self.rate
        self._mask = (self.rng.random(x.shape) >= self.rate).astype(x.dtype) / keep
        return x * self._mask

    def backward(self, dy):
        if self._mask is None:
            return dy
        return dy * self._mask


class Flatten(Layer):
    def __init__(self):
        self._shape = None

    def forward(self, x, train=False):
        self._shape = x.shape
        return x.reshape(x.shape[0], -1)

    def backward(self, dy):
        return dy.reshape(self._shape)


class ReLU(Layer):
    def __init__(self):
        self._mask = None

    def forward(self, x, train=False):
        self._mask = x > 0
        return x * self._mask

    def backward(self, dy):
        return dy * self._mask


class Sigmoid(Layer):
    def __init__(self):
        self._y = None

    def forward(self, x, train=False):
        # split by sign so exp never overflows
        y = np.empty_like(x)
        pos = x >= 0
        y[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
        ex = np.exp(x[~pos])
        y[~pos] = ex / (1.0 + ex)
        self._y = y
        return y

    def backward(self, dy):
        return dy * self._y * (1.0 - self._y)


class Softmax(Layer):
    """Row-stable softmax over the last axis."""

    def __init__(self):
        self._y = None

    def forward(self, x, train=False):
        z = x - x.max(axis=-1, keepdims=True)
        e = np.exp(z)
        self._y = e / e.sum(axis=-1, keepdims=True)
        return self._y

    def backward(self, dy):
        y = self._y
        return y * (dy - (dy * y).sum(axis=-1, keepdims=True))
