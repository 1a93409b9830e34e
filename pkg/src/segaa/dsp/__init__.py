from .audio import AudioClip, WavFormatError, WavReadError, load_wav, pad_or_crop, resample, write_wav
from .augment import (
    NOISE_FACTOR,
    PITCH_SEMITONES,
    SHIFT_MAX,
    STRETCH_RATE,
    add_noise,
    draw_shift_offset,
    pitch_shift,
    shift_signal,
    time_stretch,
)
from .features import (
    FEATURE_DIM,
    FrameParams,
    MfccParams,
    extract_features,
    frame_signal,
    mel_filterbank,
    mfcc,
    rmse,
    zcr,
)

__all__ = [
    "AudioClip",
    "WavFormatError",
    "WavReadError",
    "load_wav",
    "pad_or_crop",
    "resample",
    "write_wav",
    "NOISE_FACTOR",
    "STRETCH_RATE",
    "PITCH_SEMITONES",
    "SHIFT_MAX",
    "add_noise",
    "draw_shift_offset",
    "time_stretch",
    "pitch_shift",
    "shift_signal",
    "FrameParams",
    "MfccParams",
    "FEATURE_DIM",
    "frame_signal",
    "mel_filterbank",
    "mfcc",
    "zcr",
    "rmse",
    "extract_features",
]
