"""Fused label schema shared by every model head.

Class orders are canonical and fixed so that one-hot columns, confusion
matrix axes, and checkpoint headers always agree:

    emotions  anger, disgust, fear, happiness, neutrality, sadness
    genders   female, male
    age_bins  twenties .. seventies (decades 20-79)
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

EMOTIONS = ("anger", "disgust", "fear", "happiness", "neutrality", "sadness")
GENDERS = ("female", "male")
AGE_BINS = ("twenties", "thirties", "forties", "fifties", "sixties", "seventies")

SOURCES = ("crema_d", "emo_db", "synthetic")
AUGMENTATIONS = ("original", "noise", "stretch", "pitch", "shift")


class DataError(ValueError):
    """Anything wrong with corpus metadata, labels, or stored features."""


@dataclass(frozen=True)
class LabelSchema:
    emotions: tuple = EMOTIONS
    genders: tuple = GENDERS
    age_bins: tuple = AGE_BINS

    def __post_init__(self):
        if len(self.emotions) != len(set(self.emotions)) or not self.emotions:
            raise DataError("emotion classes must be unique and non-empty")
        if len(self.genders) != len(set(self.genders)) or not self.genders:
            raise DataError("gender classes must be unique and non-empty")
        if len(self.age_bins) != len(set(self.age_bins)) or not self.age_bins:
            raise DataError("age classes must be unique and non-empty")

    def cardinality(self, target: str) -> int:
        return len(self.classes(target))

    def classes(self, target: str) -> tuple:
        if target == "emotion":
            return self.emotions
        if target == "gender":
            return self.genders
        if target == "age":
            return self.age_bins
        raise DataError(f"unknown target {target!r}")


SCHEMA = LabelSchema()
TARGETS = ("emotion", "gender", "age")


def bin_age(age: int) -> int:
    """Decade bin index: 20-29 -> 0 (twenties) ... 70-79 -> 5 (seventies)."""
    age = int(age)
    if not 20 <= age <= 79:
        raise DataError(f"age {age} outside the supported range [20, 79]")
    return age // 10 - 2


def one_hot(index: int, cardinality: int) -> np.ndarray:
    if not 0 <= index < cardinality:
        raise DataError(f"one_hot index {index} out of range [0, {cardinality})")
    vec = np.zeros(cardinality, dtype=np.float32)
    vec[index] = 1.0
    return vec


@dataclass
class LabeledExample:
    """One feature vector plus its three labels and bookkeeping fields.

    clip_id identifies the source recording; an augmented variant shares the
    clip_id of its original, so (clip_id, augmentation) is unique.
    """

    clip_id: str
    source: str
    speaker_id: str
    augmentation: str
    emotion: int
    gender: int
    age_bin: int
    features: np.ndarray
    schema: LabelSchema = field(default=SCHEMA, repr=False)

    def __post_init__(self):
        if self.source not in SOURCES:
            raise DataError(f"unknown source {self.source!r}")
        if self.augmentation not in AUGMENTATIONS:
            raise DataError(f"unknown augmentation {self.augmentation!r}")
        if not self.speaker_id:
            raise DataError("speaker_id must be non-empty")
        if not 0 <= self.emotion < len(self.schema.emotions):
            raise DataError(f"emotion index {self.emotion} out of range")
        if not 0 <= self.gender < len(self.schema.genders):
            raise DataError(f"gender index {self.gender} out of range")
        if not 0 <= self.age_bin < len(self.schema.age_bins):
            raise DataError(f"age index {self.age_bin} out of range")
        self.features = np.asarray(self.features, dtype=np.float32)

    def label(self, target: str) -> int:
        if target == "emotion":
            return self.emotion
        if target == "gender":
            return self.gender
        if target == "age":
            return self.age_bin
        raise DataError(f"unknown target {target!r}")
