"""Corpus adapters, label schema, dataset assembly, splits, and the feature store."""

from .corpora import (
    CREMA_EMOTIONS,
    EMODB_EMOTIONS,
    EMODB_SPEAKERS,
    load_crema_demographics,
    parse_crema,
    parse_emodb,
)
from .dataset import (
    DEFAULT_AUGMENTATIONS,
    SPLIT_FRACTIONS,
    ClipRecord,
    SplitSet,
    build_dataset,
    records_from_synth,
    scan_roots,
    stratified_split,
)
from .schema import (
    AGE_BINS,
    AUGMENTATIONS,
    EMOTIONS,
    GENDERS,
    SCHEMA,
    SOURCES,
    TARGETS,
    DataError,
    LabeledExample,
    LabelSchema,
    bin_age,
    one_hot,
)
from .standardize import Standardizer, apply_standardizer, fit_standardizer
from .store import read_store, write_store
from .synth import SynthClip, synth_corpus, write_wavs

__all__ = [
    "AGE_BINS",
    "AUGMENTATIONS",
    "CREMA_EMOTIONS",
    "DEFAULT_AUGMENTATIONS",
    "EMODB_EMOTIONS",
    "EMODB_SPEAKERS",
    "EMOTIONS",
    "GENDERS",
    "SCHEMA",
    "SOURCES",
    "SPLIT_FRACTIONS",
    "TARGETS",
    "ClipRecord",
    "DataError",
    "LabelSchema",
    "LabeledExample",
    "SplitSet",
    "Standardizer",
    "SynthClip",
    "apply_standardizer",
    "bin_age",
    "build_dataset",
    "fit_standardizer",
    "load_crema_demographics",
    "one_hot",
    "parse_crema",
    "parse_emodb",
    "read_store",
    "records_from_synth",
    "scan_roots",
    "stratified_split",
    "synth_corpus",
    "write_store",
    "write_wavs",
]
