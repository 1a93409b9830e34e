"""Per-feature standard scaling fitted on the training split only."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .schema import DataError, LabeledExample

STD_FLOOR = 1e-8


@dataclass
class Standardizer:
    mean: np.ndarray
    std: np.ndarray

    def __post_init__(self):
        self.mean = np.asarray(self.mean, dtype=np.float64)
        self.std = np.asarray(self.std, dtype=np.float64)
        if self.mean.shape != self.std.shape or self.mean.ndim != 1:
            raise DataError("standardizer mean/std must be matching vectors")
        if np.any(self.std <= 0):
            raise DataError("standardizer std must be positive")

    def transform(self, x: np.ndarray) -> np.ndarray:
        return (np.asarray(x, dtype=np.float64) - self.mean) / self.std

    def inverse_transform(self, z: np.ndarray) -> np.ndarray:
        return np.asarray(z, dtype=np.float64) * self.std + self.mean


def fit_standardizer(train: list) -> Standardizer:
    """Mean and std (population, ddof 0) over the training features.

    Any per-feature std below 1e-8 is replaced by 1 so constant features
    pass through as zeros.
    """
    if not train:
        raise DataError("cannot fit a standardizer on an empty training set")
    x = np.stack([ex.features for ex in train]).astype(np.float64)
    mean = x.mean(axis=0)
    std = x.std(axis=0)
    std = np.where(std < STD_FLOOR, 1.0, std)
    return Standardizer(mean, std)


def apply_standardizer(s: Standardizer, examples: list) -> list:
    """New examples with standardized (float32) feature vectors."""
    out = []
    for ex in examples:
        out.append(
            LabeledExample(
                clip_id=ex.clip_id,
                source=ex.source,
                speaker_id=ex.speaker_id,
                augmentation=ex.augmentation,
                emotion=ex.emotion,
                gender=ex.gender,
                age_bin=ex.age_bin,
                features=s.transform(ex.features).astype(np.float32),
            )
        )
    return out
