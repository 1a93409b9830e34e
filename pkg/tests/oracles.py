"""Independent reference implementations used only to check the fast paths.

Everything here sticks to literal textbook formulas: per-frame O(N^2) DFT
sums instead of FFT, explicit DCT-II cosine sums, Python loops for counting
statistics, and scalar optimizer recurrences unrolled step by step.
"""

import math

import numpy as np


# ---------------------------------------------------------------------------
# spectral features


def dft_naive(x: np.ndarray) -> np.ndarray:
    """Direct DFT sum X[k] = sum_n x[n] e^{-2pi i k n / N}, rfft bins only."""
    x = np.asarray(x, dtype=np.float64)
    n = len(x)
    k = np.arange(n // 2 + 1)
    j = np.arange(n)
    basis = np.exp(-2j * np.pi * np.outer(k, j) / n)
    return basis @ x


def hann_literal(n: int) -> np.ndarray:
    i = np.arange(n)
    return 0.5 - 0.5 * np.cos(2.0 * np.pi * i / (n - 1))


def mel_literal(f):
    return 2595.0 * np.log10(1.0 + np.asarray(f, dtype=np.float64) / 700.0)


def mel_inv_literal(m):
    return 700.0 * (10.0 ** (np.asarray(m, dtype=np.float64) / 2595.0) - 1.0)


def filterbank_literal(sample_rate, fft_size, n_mels, fmin, fmax) -> np.ndarray:
    edges = mel_inv_literal(np.linspace(mel_literal(fmin), mel_literal(fmax), n_mels + 2))
    n_bins = fft_size // 2 + 1
    fbank = np.zeros((n_mels, n_bins))
    for i in range(n_mels):
        lo, mid, hi = edges[i], edges[i + 1], edges[i + 2]
        for b in range(n_bins):
            f = b * sample_rate / fft_size
            if lo <= f <= mid:
                fbank[i, b] = (f - lo) / (mid - lo)
            elif mid < f <= hi:
                fbank[i, b] = (hi - f) / (hi - mid)
    return fbank


def dct2_ortho_literal(v: np.ndarray) -> np.ndarray:
    """Orthonormal DCT-II by explicit cosine sums."""
    v = np.asarray(v, dtype=np.float64)
    m = len(v)
    out = np.zeros(m)
    for k in range(m):
        s = math.sqrt(1.0 / m) if k == 0 else math.sqrt(2.0 / m)
        acc = 0.0
        for j in range(m):
            acc += v[j] * math.cos(math.pi * k * (2 * j + 1) / (2 * m))
        out[k] = s * acc
    return out


def mfcc_naive(samples, sample_rate, frame_length, hop, fft_size, n_mels, n_coeffs, fmin, fmax, log_floor):
    """Frame loop -> Hann -> naive DFT -> |.|^2 -> filterbank -> ln -> DCT-II."""
    samples = np.asarray(samples, dtype=np.float64)
    n_frames = 1 + (len(samples) - frame_length) // hop
    window = hann_literal(frame_length)
    fbank = filterbank_literal(sample_rate, fft_size, n_mels, fmin, fmax)
    rows = []
    for t in range(n_frames):
        frame = samples[t * hop : t * hop + frame_length] * window
        if fft_size > frame_length:
            frame = np.concatenate([frame, np.zeros(fft_size - frame_length)])
        power = np.abs(dft_naive(frame)) ** 2
        mel_energy = fbank @ power
        log_mel = np.log(np.maximum(mel_energy, log_floor))
        rows.append(dct2_ortho_literal(log_mel)[:n_coeffs])
    return np.array(rows)


def zcr_naive(frame) -> float:
    changes = 0
    for a, b in zip(frame[:-1], frame[1:]):
        sa = 1 if a >= 0 else -1
        sb = 1 if b >= 0 else -1
        if sa != sb:
            changes += 1
    return changes / (len(frame) - 1)


def rmse_naive(frame) -> float:
    return math.sqrt(sum(float(v) ** 2 for v in frame) / len(frame))


def features_naive(samples, sample_rate, frame_length=2048, hop=512, fft_size=2048,
                   n_mels=64, n_coeffs=40, fmin=0.0, fmax=None, log_floor=1e-10):
    """Mean-aggregated 42-dim vector from the naive per-frame paths."""
    if fmax is None:
        fmax = sample_rate / 2.0
    coeffs = mfcc_naive(samples, sample_rate, frame_length, hop, fft_size,
                        n_mels, n_coeffs, fmin, fmax, log_floor)
    n_frames = coeffs.shape[0]
    zs, rs = [], []
    for t in range(n_frames):
        frame = samples[t * hop : t * hop + frame_length]
        zs.append(zcr_naive(frame))
        rs.append(rmse_naive(frame))
    return np.concatenate([coeffs.mean(axis=0), [np.mean(zs)], [np.mean(rs)]])


def dft_peak_hz(samples, sample_rate) -> float:
    """Frequency of the largest-magnitude rfft bin (FFT is fine here; the
    oracle role is locating a peak, not checking the transform)."""
    spectrum = np.abs(np.fft.rfft(samples))
    return float(np.argmax(spectrum) * sample_rate / len(samples))


# ---------------------------------------------------------------------------
# scalar optimizer recurrences


def sgd_unroll(theta, grads, lr, decay, momentum, nesterov):
    """Step-by-step scalar SGD with decayed lr, momentum and Nesterov."""
    v = 0.0
    out = []
    for t, g in enumerate(grads, start=1):
        lr_t = lr / (1.0 + decay * t)
        v = momentum * v - lr_t * g
        if nesterov:
            theta = theta + momentum * v - lr_t * g
        else:
            theta = theta + v
        out.append(theta)
    return out


def adam_unroll(theta, grads, lr=0.001, beta1=0.9, beta2=0.999, eps=1e-8):
    m = v = 0.0
    out = []
    for t, g in enumerate(grads, start=1):
        m = beta1 * m + (1.0 - beta1) * g
        v = beta2 * v + (1.0 - beta2) * g * g
        m_hat = m / (1.0 - beta1**t)
        v_hat = v / (1.0 - beta2**t)
        theta = theta - lr * m_hat / (math.sqrt(v_hat) + eps)
        out.append(theta)
    return out


def nadam_unroll(theta, grads, lr=0.001, beta1=0.9, beta2=0.999, eps=1e-8):
    m = v = 0.0
    out = []
    for t, g in enumerate(grads, start=1):
        m = beta1 * m + (1.0 - beta1) * g
        v = beta2 * v + (1.0 - beta2) * g * g
        m_hat = m / (1.0 - beta1**t)
        v_hat = v / (1.0 - beta2**t)
        lookahead = beta1 * m_hat + (1.0 - beta1) * g / (1.0 - beta1**t)
        theta = theta - lr * lookahead / (math.sqrt(v_hat) + eps)
        out.append(theta)
    return out


# ---------------------------------------------------------------------------
# classification metrics


def metrics_naive(y_true, y_pred, n_classes):
    """Accuracy plus support-weighted precision/recall/F1 by explicit counting."""
    y_true = list(y_true)
    y_pred = list(y_pred)
    total = len(y_true)
    correct = sum(1 for t, p in zip(y_true, y_pred) if t == p)
    weighted_p = weighted_r = weighted_f = 0.0
    for c in range(n_classes):
        tp = sum(1 for t, p in zip(y_true, y_pred) if t == c and p == c)
        fp = sum(1 for t, p in zip(y_true, y_pred) if t != c and p == c)
        fn = sum(1 for t, p in zip(y_true, y_pred) if t == c and p != c)
        support = tp + fn
        prec = tp / (tp + fp) if tp + fp else 0.0
        rec = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * prec * rec / (prec + rec) if prec + rec else 0.0
        weighted_p += support * prec
        weighted_r += support * rec
        weighted_f += support * f1
    return {
        "accuracy": correct / total,
        "precision": weighted_p / total,
        "recall": weighted_r / total,
        "f1": weighted_f / total,
    }


def confusion_naive(y_true, y_pred, n_classes):
    mat = np.zeros((n_classes, n_classes), dtype=int)
    for t, p in zip(y_true, y_pred):
        mat[t, p] += 1
    return mat


# ---------------------------------------------------------------------------
# finite differences


def numeric_grad(f, x, h=1e-4):
    """Central-difference gradient of scalar f at x, probing in float64."""
    x = np.array(x, dtype=np.float64)
    g = np.zeros_like(x)
    flat = x.ravel()
    gf = g.ravel()
    for i in range(flat.size):
        orig = flat[i]
        flat[i] = orig + h
        fp = f(x)
        flat[i] = orig - h
        fm = f(x)
        flat[i] = orig
        gf[i] = (fp - fm) / (2.0 * h)
    return g


def rel_err(analytic, numeric):
    """max |a - n| / max(|a| + |n|, 1e-6) over all coordinates."""
    a = np.asarray(analytic, dtype=np.float64)
    n = np.asarray(numeric, dtype=np.float64)
    denom = np.maximum(np.abs(a) + np.abs(n), 1e-6)
    return float(np.max(np.abs(a - n) / denom))
