"""Toolkit configuration: defaults, JSON overlay, and run-plan parsing.

A config is a plain nested dict so it round-trips through JSON unchanged.
User files overlay the defaults; any key the defaults do not know is rejected
with its dotted path so typos surface immediately.
"""

from __future__ import annotations

import copy
import json
from pathlib import Path

from .data.schema import TARGETS, DataError
from .data.dataset import DEFAULT_AUGMENTATIONS
from .models import MODEL_KINDS, CascadeSpec
from .harness import RunSpec

DEFAULT_CONFIG = {
    "dsp": {
        "sample_rate": 16000,
        "duration": 3.0,
        "frame_length": 2048,
        "hop": 512,
        "fft_size": 2048,
        "n_mels": 64,
        "n_coeffs": 40,
        "noise_factor": 0.035,
        "stretch_rate": 0.8,
        "pitch_semitones": 2.0,
        "shift_max": 5000,
    },
    "data": {
        "seed": 0,
        "split": [0.70, 0.15, 0.15],
        "corpus_roots": {},
        "synthetic_per_class": 3,
        "augmentations": list(DEFAULT_AUGMENTATIONS),
        "store_dir": "store",
    },
    "models": {},
    "harness": {
        "plan": None,
        "determinism": True,
        "epochs_cap": None,
        "out_dir": "reports",
    },
}

# keys a models.<kind> table may override in that kind's training plan
PLAN_KEYS = frozenset({
    "optimizer", "lr", "decay", "momentum", "nesterov", "beta1", "beta2",
    "epsilon", "epochs", "batch_size", "early_stop", "patience",
    "plateau", "plateau_patience", "plateau_factor", "min_lr",
})

CORPUS_KINDS = ("crema_d", "emo_db")


def _merge(base, overlay, path):
    for key, value in overlay.items():
        here = f"{path}.{key}" if path else key
        if key not in base:
            raise DataError(f"unknown config key {here}")
        if isinstance(base[key], dict) and key not in ("corpus_roots", "models"):
            if not isinstance(value, dict):
                raise DataError(f"config key {here} must be a table")
            _merge(base[key], value, here)
        else:
            base[key] = value


def _check_models(models):
    if not isinstance(models, dict):
        raise DataError("config key models must be a table")
    for kind, plan in models.items():
        if kind not in MODEL_KINDS:
            raise DataError(f"unknown model kind at models.{kind}")
        if not isinstance(plan, dict):
            raise DataError(f"config key models.{kind} must be a table")
        for key in plan:
            if key not in PLAN_KEYS:
                raise DataError(f"unknown config key models.{kind}.{key}")


def _check_corpus_roots(roots):
    if not isinstance(roots, dict):
        raise DataError("config key data.corpus_roots must be a table")
    for kind in roots:
        if kind not in CORPUS_KINDS:
            raise DataError(f"unknown corpus kind at data.corpus_roots.{kind}")


def load_config(path=None) -> dict:
    """The default config, overlaid with a JSON file when one is given."""
    config = copy.deepcopy(DEFAULT_CONFIG)
    if path is None:
        return config
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise DataError(f"cannot read config {path}: {exc}") from exc
    try:
        overlay = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(overlay, dict):
        raise DataError(f"config {path} must hold a JSON object")
    _merge(config, overlay, "")
    _check_models(config["models"])
    _check_corpus_roots(config["data"]["corpus_roots"])
    return config


def save_config(config, path):
    Path(path).write_text(json.dumps(config, indent=2, sort_keys=True) + "\n")


def parse_run(text):
    """One plan entry: 'kind', 'kind:target', or 'cascade[:family]:a,b,c'."""
    parts = text.split(":")
    if parts[0] == "cascade":
        family = "segaa"
        if len(parts) == 3:
            family = parts[1]
            order = parts[2]
        elif len(parts) == 2:
            order = parts[1]
        else:
            raise DataError(f"bad cascade spec {text!r}; use cascade[:family]:a,b,c")
        return CascadeSpec(tuple(order.split(",")), family=family)
    if len(parts) == 1:
        return RunSpec(parts[0])
    if len(parts) == 2:
        return RunSpec(parts[0], parts[1])
    raise DataError(f"bad run spec {text!r}")


def plan_runs(config) -> list:
    """The run list the harness should execute for this config."""
    from .harness import paper_matrix

    entries = config["harness"]["plan"]
    if entries is None:
        return paper_matrix()
    return [parse_run(entry) for entry in entries]


def frame_params(config):
    from .dsp import FrameParams

    dsp = config["dsp"]
    return FrameParams(frame_length=dsp["frame_length"], hop=dsp["hop"],
                       fft_size=dsp["fft_size"])


def mfcc_params(config):
    from .dsp import MfccParams

    dsp = config["dsp"]
    return MfccParams(n_mels=dsp["n_mels"], n_coeffs=dsp["n_coeffs"])


def plan_overrides(config, kind) -> dict:
    """The models.<kind> table, with targets ignored (e.g. mlp_individual)."""
    return dict(config["models"].get(kind, {}))
