"""CSV feature store: one row per example, lossless float32 round trip.

Columns: id, source, speaker_id, augmentation, emotion, gender, age_bin,
f00..f41. Labels are written as class names, features with 9 significant
digits ('%.9g'), which reproduces float32 values exactly.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .schema import AGE_BINS, EMOTIONS, GENDERS, DataError, LabeledExample

META_COLUMNS = ("id", "source", "speaker_id", "augmentation", "emotion", "gender", "age_bin")


def _feature_columns(dim: int) -> list:
    return [f"f{i:02d}" for i in range(dim)]


def write_store(path, examples: list) -> None:
    if not examples:
        raise DataError("refusing to write an empty feature store")
    dim = len(examples[0].features)
    header = list(META_COLUMNS) + _feature_columns(dim)
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for ex in examples:
            if len(ex.features) != dim:
                raise DataError(f"inconsistent feature width in {ex.clip_id}")
            row = [
                ex.clip_id,
                ex.source,
                ex.speaker_id,
                ex.augmentation,
                EMOTIONS[ex.emotion],
                GENDERS[ex.gender],
                AGE_BINS[ex.age_bin],
            ]
            row += [f"{float(v):.9g}" for v in ex.features]
            writer.writerow(row)


def read_store(path) -> list:
    path = Path(path)
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read feature store {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise DataError(f"feature store {path} is empty")
        if tuple(header[: len(META_COLUMNS)]) != META_COLUMNS:
            raise DataError(f"feature store {path} has an unexpected header")
        dim = len(header) - len(META_COLUMNS)
        if header[len(META_COLUMNS) :] != _feature_columns(dim) or dim < 1:
            raise DataError(f"feature store {path} has malformed feature columns")

        examples = []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise DataError(f"{path} line {lineno}: expected {len(header)} fields, got {len(row)}")
            clip_id, source, speaker, augmentation, emo, gen, age = row[: len(META_COLUMNS)]
            try:
                labels = (EMOTIONS.index(emo), GENDERS.index(gen), AGE_BINS.index(age))
            except ValueError:
                raise DataError(f"{path} line {lineno}: unknown class name") from None
            try:
                features = np.array(row[len(META_COLUMNS) :], dtype=np.float32)
            except ValueError:
                raise DataError(f"{path} line {lineno}: non-numeric feature value") from None
            if not np.all(np.isfinite(features)):
                raise DataError(f"{path} line {lineno}: non-finite feature value")
            try:
                examples.append(
                    LabeledExample(
                        clip_id=clip_id,
                        source=source,
                        speaker_id=speaker,
                        augmentation=augmentation,
                        emotion=labels[0],
                        gender=labels[1],
                        age_bin=labels[2],
                        features=features,
                    )
                )
            except DataError as exc:
                raise DataError(f"{path} line {lineno}: {exc}") from None
    if not examples:
        raise DataError(f"feature store {path} holds no rows")
    return examples
