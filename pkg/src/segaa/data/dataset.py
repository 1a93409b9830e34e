"""Dataset assembly from corpus roots and the stratified three-way split."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..dsp import (
    NOISE_FACTOR,
    PITCH_SEMITONES,
    SHIFT_MAX,
    STRETCH_RATE,
    AudioClip,
    WavFormatError,
    WavReadError,
    add_noise,
    draw_shift_offset,
    extract_features,
    load_wav,
    pad_or_crop,
    pitch_shift,
    shift_signal,
    time_stretch,
)
from .corpora import load_crema_demographics, parse_crema, parse_emodb
from .schema import AUGMENTATIONS, DataError, LabeledExample
from .synth import SynthClip

log = logging.getLogger(__name__)

DEFAULT_AUGMENTATIONS = ("noise", "stretch", "pitch", "shift")
SPLIT_FRACTIONS = (0.70, 0.15, 0.15)


@dataclass
class ClipRecord:
    """One source recording before feature extraction.

    Either path (loaded lazily at 16 kHz) or clip must be set.
    """

    clip_id: str
    source: str
    speaker_id: str
    emotion: int
    gender: int
    age_bin: int
    path: Path = None
    clip: AudioClip = None

    def load(self, rate: int = 16000) -> AudioClip:
        if self.clip is not None:
            return self.clip
        return load_wav(self.path, rate)


def scan_roots(roots: dict, errors: list = None) -> list:
    """Walk corpus roots into ClipRecords.

    roots maps a corpus kind (crema_d or emo_db) to a directory. Per-file
    parse failures are appended to errors (or logged) and skipped; boredom
    clips are skipped silently.
    """
    if errors is None:
        errors = _LoggingSink()
    records = []
    for kind in sorted(roots):
        root = Path(roots[kind])
        if not root.is_dir():
            raise DataError(f"corpus root {root} is not a directory")
        wavs = sorted(root.rglob("*.wav"))
        if kind == "crema_d":
            tables = sorted(root.rglob("VideoDemographics.csv"))
            if not tables:
                raise DataError(f"no VideoDemographics.csv under {root}")
            demographics = load_crema_demographics(tables[0])
            for path in wavs:
                try:
                    speaker, emo, gen, age = parse_crema(path.name, demographics)
                except DataError as exc:
                    errors.append((str(path), str(exc)))
                    continue
                records.append(ClipRecord(path.stem, "crema_d", speaker, emo, gen, age, path=path))
        elif kind == "emo_db":
            for path in wavs:
                try:
                    parsed = parse_emodb(path.name)
                except DataError as exc:
                    errors.append((str(path), str(exc)))
                    continue
                if parsed is None:
                    continue
                speaker, emo, gen, age = parsed
                records.append(ClipRecord(path.stem, "emo_db", speaker, emo, gen, age, path=path))
        else:
            raise DataError(f"unknown corpus kind {kind!r} (expected crema_d or emo_db)")
    return records


def records_from_synth(corpus: list) -> list:
    return [
        ClipRecord(c.clip_id, "synthetic", c.speaker_id, c.emotion, c.gender, c.age_bin, clip=c.clip)
        for c in corpus
    ]


class _LoggingSink(list):
    def append(self, item):
        log.warning("skipping %s: %s", *item)
        super().append(item)


DEFAULT_AUG_PARAMS = {
    "noise_factor": NOISE_FACTOR,
    "stretch_rate": STRETCH_RATE,
    "pitch_semitones": PITCH_SEMITONES,
    "shift_max": SHIFT_MAX,
}


def _augmented(clip: AudioClip, name: str, rng: np.random.Generator, params: dict) -> AudioClip:
    if name == "noise":
        return add_noise(clip, params["noise_factor"], seed=int(rng.integers(2**31)))
    if name == "stretch":
        return time_stretch(clip, params["stretch_rate"])
    if name == "pitch":
        return pitch_shift(clip, params["pitch_semitones"])
    if name == "shift":
        return shift_signal(clip, draw_shift_offset(rng, params["shift_max"]))
    raise DataError(f"unknown augmentation {name!r}")


def build_dataset(
    records: list,
    augmentations: tuple = DEFAULT_AUGMENTATIONS,
    seed: int = 0,
    duration: float = 3.0,
    frame=None,
    mel=None,
    errors: list = None,
    aug_params: dict = None,
    sample_rate: int = 16000,
) -> list:
    """Extract features for every record, original plus augmented variants.

    Output order is fixed: records sorted by (source, clip_id), variants in
    canonical augmentation order. Unreadable files are collected in errors
    (or logged) and skipped.
    """
    for name in augmentations:
        if name not in AUGMENTATIONS or name == "original":
            raise DataError(f"unknown augmentation {name!r}")
    if errors is None:
        errors = _LoggingSink()
    if not records:
        raise DataError("empty corpus: no clips to build from")

    kwargs = {}
    if frame is not None:
        kwargs["fp"] = frame
    if mel is not None:
        kwargs["mp"] = mel
    params = dict(DEFAULT_AUG_PARAMS)
    if aug_params:
        params.update(aug_params)

    variants = ["original"] + [a for a in AUGMENTATIONS if a in augmentations]
    examples = []
    ordered = sorted(records, key=lambda r: (r.source, r.clip_id))
    for idx, rec in enumerate(ordered):
        try:
            clip = rec.load(sample_rate)
        except (WavReadError, WavFormatError, OSError) as exc:
            errors.append((rec.clip_id, str(exc)))
            continue
        rng = np.random.default_rng([seed, idx])
        for name in variants:
            aug = clip if name == "original" else _augmented(clip, name, rng, params)
            vec = extract_features(pad_or_crop(aug, duration), **kwargs)
            examples.append(
                LabeledExample(
                    clip_id=rec.clip_id,
                    source=rec.source,
                    speaker_id=rec.speaker_id,
                    augmentation=name,
                    emotion=rec.emotion,
                    gender=rec.gender,
                    age_bin=rec.age_bin,
                    features=vec,
                )
            )
    if not examples:
        raise DataError("empty corpus: every clip failed to load")
    return examples


@dataclass
class SplitSet:
    train: list = field(default_factory=list)
    val: list = field(default_factory=list)
    test: list = field(default_factory=list)
    seed: int = 0

    def parts(self):
        return {"train": self.train, "val": self.val, "test": self.test}


def stratified_split(examples: list, fractions: tuple = SPLIT_FRACTIONS, seed: int = 0) -> SplitSet:
    """Split whole clips 70/15/15 with per-stratum proportionality.

    Strata use the joint (emotion, gender, age_bin) key when every joint
    stratum holds at least 3 clips, otherwise emotion alone. Augmented
    variants always land in the split of their original clip. Within each
    stratum the shares are largest-remainder apportionments; remainder ties
    go to whichever split is furthest behind its global target.
    """
    if len(fractions) != 3 or any(f < 0 for f in fractions) or abs(sum(fractions) - 1.0) > 1e-9:
        raise DataError(f"split fractions must be three non-negatives summing to 1, got {fractions}")
    if not examples:
        raise DataError("cannot split an empty dataset")

    groups = {}  # (source, clip_id) -> labels
    for ex in examples:
        groups.setdefault((ex.source, ex.clip_id), (ex.emotion, ex.gender, ex.age_bin))

    joint = {}
    for key, labels in groups.items():
        joint.setdefault(labels, []).append(key)
    if min(len(v) for v in joint.values()) >= 3:
        strata = joint
    else:
        strata = {}
        for key, labels in groups.items():
            strata.setdefault(labels[0], []).append(key)

    rng = np.random.default_rng(seed)
    assign = {}
    deficit = [0.0, 0.0, 0.0]
    for label in sorted(strata):
        members = sorted(strata[label])
        members = [members[i] for i in rng.permutation(len(members))]
        n = len(members)
        exact = [n * f for f in fractions]
        counts = [int(np.floor(e)) for e in exact]
        rema = [e - c for e, c in zip(exact, counts)]
        order = sorted(range(3), key=lambda i: (-rema[i], -deficit[i], i))
        for i in order[: n - sum(counts)]:
            counts[i] += 1
        for i in range(3):
            deficit[i] += exact[i] - counts[i]
        cuts = np.cumsum(counts)
        for j, key in enumerate(members):
            assign[key] = 0 if j < cuts[0] else (1 if j < cuts[1] else 2)

    split = SplitSet(seed=seed)
    buckets = (split.train, split.val, split.test)
    for ex in examples:
        buckets[assign[(ex.source, ex.clip_id)]].append(ex)
    for name, part in split.parts().items():
        if not part:
            raise DataError(f"dataset too small: the {name} split came out empty")
    return split
