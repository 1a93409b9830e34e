"""Cross-entropy losses and their fused head gradients.

Both losses clip probabilities at 1e-12 before the log. The backward helpers
return gradients with respect to the pre-activation logits, folding the
softmax or sigmoid Jacobian into the familiar (p - t) / batch form, so
training skips the head activation's own backward.
"""

from __future__ import annotations

import numpy as np

CLIP = 1e-12


def categorical_ce(probs: np.ndarray, onehot: np.ndarray) -> float:
    """Mean over the batch of -sum(t * log p)."""
    if probs.shape != onehot.shape or probs.ndim != 2:
        raise ValueError(f"shape mismatch: probs {probs.shape} vs targets {onehot.shape}")
    logp = np.log(np.maximum(probs.astype(np.float64), CLIP))
    return float(-(onehot * logp).sum() / probs.shape[0])


def binary_ce(probs: np.ndarray, target: np.ndarray) -> float:
    """Mean over the batch of -[t log p + (1-t) log(1-p)] for a 1-unit head."""
    probs = np.asarray(probs)
    target = np.asarray(target)
    if probs.shape != target.shape:
        raise ValueError(f"shape mismatch: probs {probs.shape} vs targets {target.shape}")
    p = np.clip(probs.astype(np.float64), CLIP, 1.0 - CLIP)
    t = target.astype(np.float64)
    per = -(t * np.log(p) + (1.0 - t) * np.log(1.0 - p))
    return float(per.sum() / probs.shape[0])


def softmax_ce_grad(probs: np.ndarray, onehot: np.ndarray) -> np.ndarray:
    """d(mean CE)/d(logits) through the softmax: (p - t) / batch."""
    if probs.shape != onehot.shape:
        raise ValueError(f"shape mismatch: probs {probs.shape} vs targets {onehot.shape}")
    return (probs - onehot.astype(probs.dtype)) / probs.shape[0]


def sigmoid_bce_grad(probs: np.ndarray, target: np.ndarray) -> np.ndarray:
    """d(mean BCE)/d(logits) through the sigmoid: (p - t) / batch."""
    if probs.shape != target.shape:
        raise ValueError(f"shape mismatch: probs {probs.shape} vs targets {target.shape}")
    return (probs - target.astype(probs.dtype)) / probs.shape[0]
