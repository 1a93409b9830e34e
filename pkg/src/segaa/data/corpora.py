"""Filename parsers and speaker metadata for CREMA-D and EMO-DB.

CREMA-D names each clip ActorID_SentenceCode_EmotionCode_Level.wav and ships
actor demographics in a separate CSV. EMO-DB packs everything into the name
SStxxEv.wav where SS is the speaker code and E the German emotion letter; the
ten-speaker metadata table is small enough that we bundle it here.
"""

from __future__ import annotations

import csv
import re
from pathlib import Path

from .schema import EMOTIONS, GENDERS, DataError, bin_age

CREMA_EMOTIONS = {
    "ANG": "anger",
    "DIS": "disgust",
    "FEA": "fear",
    "HAP": "happiness",
    "NEU": "neutrality",
    "SAD": "sadness",
}

# W Wut/anger, L Langeweile/boredom (excluded), E Ekel/disgust,
# A Angst/fear, F Freude/happiness, T Trauer/sadness, N neutral
EMODB_EMOTIONS = {
    "W": "anger",
    "L": None,
    "E": "disgust",
    "A": "fear",
    "F": "happiness",
    "T": "sadness",
    "N": "neutrality",
}

# speaker_code -> (age in years, sex) per the corpus documentation
EMODB_SPEAKERS = {
    "03": (31, "male"),
    "08": (34, "female"),
    "09": (21, "female"),
    "10": (32, "male"),
    "11": (26, "male"),
    "12": (30, "male"),
    "13": (32, "female"),
    "14": (35, "female"),
    "15": (25, "male"),
    "16": (31, "female"),
}

_CREMA_NAME = re.compile(r"^(\d+)_([A-Z]{3})_([A-Z]{3})_(\w+)\.wav$", re.IGNORECASE)
_EMODB_NAME = re.compile(r"^(\d{2})([a-z]\d{2})([A-Z])([a-z0-9])\.wav$")


def _sex_to_gender(sex: str) -> int:
    key = sex.strip().lower()
    if key in ("female", "f"):
        return GENDERS.index("female")
    if key in ("male", "m"):
        return GENDERS.index("male")
    raise DataError(f"unrecognized sex label {sex!r}")


def parse_crema(filename: str, demographics: dict) -> tuple:
    """(speaker_id, emotion, gender, age_bin) for one CREMA-D clip.

    demographics maps actor id (text) to (age, sex).
    """
    m = _CREMA_NAME.match(Path(filename).name)
    if m is None:
        raise DataError(f"not a CREMA-D clip name: {filename!r}")
    actor, _sentence, code, _level = m.groups()
    emotion = CREMA_EMOTIONS.get(code.upper())
    if emotion is None:
        raise DataError(f"unknown CREMA-D emotion code {code!r} in {filename!r}")
    if actor not in demographics:
        raise DataError(f"actor {actor} missing from the demographics table")
    age, sex = demographics[actor]
    return actor, EMOTIONS.index(emotion), _sex_to_gender(sex), bin_age(age)


def parse_emodb(filename: str, speakers: dict = None) -> tuple | None:
    """(speaker_id, emotion, gender, age_bin) for one EMO-DB clip.

    Boredom clips return None; the class is dropped from the fused schema.
    """
    if speakers is None:
        speakers = EMODB_SPEAKERS
    m = _EMODB_NAME.match(Path(filename).name)
    if m is None:
        raise DataError(f"not an EMO-DB clip name: {filename!r}")
    speaker, _text, letter, _version = m.groups()
    if letter not in EMODB_EMOTIONS:
        raise DataError(f"unknown EMO-DB emotion letter {letter!r} in {filename!r}")
    emotion = EMODB_EMOTIONS[letter]
    if emotion is None:
        return None
    if speaker not in speakers:
        raise DataError(f"speaker {speaker} missing from the EMO-DB table")
    age, sex = speakers[speaker]
    return speaker, EMOTIONS.index(emotion), _sex_to_gender(sex), bin_age(age)


def load_crema_demographics(path) -> dict:
    """Read the VideoDemographics.csv shipped with CREMA-D.

    Only ActorID, Age, and Sex are used; extra columns are ignored.
    """
    path = Path(path)
    try:
        with open(path, newline="", encoding="utf-8-sig") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None:
                raise DataError(f"{path} has no header row")
            fields = {name.strip().lower(): name for name in reader.fieldnames}
            try:
                id_col, age_col, sex_col = fields["actorid"], fields["age"], fields["sex"]
            except KeyError as missing:
                raise DataError(f"{path} lacks a {missing} column") from None
            table = {}
            for row in reader:
                actor = row[id_col].strip()
                try:
                    age = int(row[age_col])
                except (TypeError, ValueError):
                    raise DataError(f"bad age {row[age_col]!r} for actor {actor}") from None
                table[actor] = (age, row[sex_col].strip())
    except OSError as exc:
        raise DataError(f"cannot read demographics table {path}: {exc}") from exc
    if not table:
        raise DataError(f"demographics table {path} is empty")
    return table
