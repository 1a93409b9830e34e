"""Frame-level ZCR / RMSE / MFCC extraction and the 42-dim feature vector.

The fixed-length vector fed to every model is the time-mean of 40 MFCCs over
all frames plus the mean zero-crossing rate and mean RMS energy:

    values[0..39]  per-coefficient mean MFCC
    values[40]     mean ZCR        (in [0, 1])
    values[41]     mean RMSE       (>= 0)

MFCC per frame: Hann window, magnitude-squared FFT, triangular mel filterbank
on the HTK scale m = 2595*log10(1 + f/700) with unit-peak filters, natural log
floored at log_floor, orthonormal DCT-II, first n_coeffs kept.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.fft import dct

from .audio import AudioClip

FEATURE_DIM = 42


@dataclass(frozen=True)
class FrameParams:
    frame_length: int = 2048
    hop: int = 512
    fft_size: int = 2048

    def __post_init__(self):
        if not (0 < self.hop <= self.frame_length <= self.fft_size):
            raise ValueError(
                f"need 0 < hop <= frame_length <= fft_size, got "
                f"hop={self.hop} frame={self.frame_length} fft={self.fft_size}"
            )


@dataclass(frozen=True)
class MfccParams:
    n_mels: int = 64
    n_coeffs: int = 40
    fmin: float = 0.0
    fmax: float | None = None  # None means sample_rate / 2
    log_floor: float = 1e-10

    def __post_init__(self):
        if self.n_coeffs > self.n_mels:
            raise ValueError(f"n_coeffs ({self.n_coeffs}) must be <= n_mels ({self.n_mels})")
        if self.log_floor <= 0:
            raise ValueError("log_floor must be positive")

    def resolve_fmax(self, sample_rate: int) -> float:
        fmax = self.fmax if self.fmax is not None else sample_rate / 2.0
        if not (self.fmin < fmax <= sample_rate / 2.0):
            raise ValueError(f"need fmin < fmax <= rate/2, got fmin={self.fmin} fmax={fmax}")
        return fmax


def frame_signal(x: np.ndarray, frame_length: int, hop: int) -> np.ndarray:
    """Slice into overlapping frames, shape (n_frames, frame_length).

    n_frames = 1 + floor((len - frame_length) / hop); the tail that does not
    fill a frame is dropped.
    """
    x = np.asarray(x, dtype=np.float64)
    if len(x) < frame_length:
        raise ValueError(f"signal of {len(x)} samples is shorter than one frame ({frame_length})")
    n_frames = 1 + (len(x) - frame_length) // hop
    idx = hop * np.arange(n_frames)[:, None] + np.arange(frame_length)[None, :]
    return x[idx]


def zcr(frame: np.ndarray) -> float:
    """Zero-crossing rate: sign changes / (len - 1), zero counted as positive."""
    frame = np.asarray(frame, dtype=np.float64)
    if len(frame) < 2:
        raise ValueError("zcr needs at least 2 samples")
    signs = np.where(frame >= 0.0, 1, -1)
    return float(np.count_nonzero(signs[1:] != signs[:-1])) / (len(frame) - 1)


def rmse(frame: np.ndarray) -> float:
    """Root mean square energy sqrt(mean(x^2))."""
    frame = np.asarray(frame, dtype=np.float64)
    if len(frame) == 0:
        raise ValueError("rmse of an empty frame")
    return float(np.sqrt(np.mean(frame**2)))


def hz_to_mel(f):
    return 2595.0 * np.log10(1.0 + np.asarray(f, dtype=np.float64) / 700.0)


def mel_to_hz(m):
    return 700.0 * (10.0 ** (np.asarray(m, dtype=np.float64) / 2595.0) - 1.0)


def mel_filterbank(
    sample_rate: int, fft_size: int, n_mels: int, fmin: float, fmax: float
) -> np.ndarray:
    """Triangular unit-peak mel filters sampled at the rfft bin frequencies.

    Returns shape (n_mels, fft_size // 2 + 1).
    """
    edges = mel_to_hz(np.linspace(hz_to_mel(fmin), hz_to_mel(fmax), n_mels + 2))
    bin_freqs = np.arange(fft_size // 2 + 1) * sample_rate / fft_size
    fbank = np.zeros((n_mels, len(bin_freqs)))
    for i in range(n_mels):
        left, center, right = edges[i], edges[i + 1], edges[i + 2]
        up = (bin_freqs - left) / (center - left)
        down = (right - bin_freqs) / (right - center)
        fbank[i] = np.maximum(0.0, np.minimum(up, down))
    return fbank


def mfcc(clip: AudioClip, fp: FrameParams = FrameParams(), mp: MfccParams = MfccParams()) -> np.ndarray:
    """MFCC matrix, shape (n_frames, n_coeffs)."""
    frames = frame_signal(clip.samples, fp.frame_length, fp.hop)
    window = np.hanning(fp.frame_length)
    spectrum = np.fft.rfft(frames * window, n=fp.fft_size, axis=1)
    power = np.abs(spectrum) ** 2

    fbank = mel_filterbank(clip.sample_rate, fp.fft_size, mp.n_mels, mp.fmin, mp.resolve_fmax(clip.sample_rate))
    mel_energy = power @ fbank.T
    log_mel = np.log(np.maximum(mel_energy, mp.log_floor))
    return dct(log_mel, type=2, axis=1, norm="ortho")[:, : mp.n_coeffs]


def extract_features(
    clip: AudioClip, fp: FrameParams = FrameParams(), mp: MfccParams = MfccParams()
) -> np.ndarray:
    """The 42-dim feature vector (float32): mean MFCCs, mean ZCR, mean RMSE."""
    coeffs = mfcc(clip, fp, mp)
    frames = frame_signal(clip.samples, fp.frame_length, fp.hop)

    signs = np.where(frames >= 0.0, 1, -1)
    frame_zcr = np.count_nonzero(signs[:, 1:] != signs[:, :-1], axis=1) / (fp.frame_length - 1)
    frame_rmse = np.sqrt(np.mean(frames**2, axis=1))

    vec = np.concatenate([coeffs.mean(axis=0), [frame_zcr.mean()], [frame_rmse.mean()]])
    vec = vec.astype(np.float32)
    if vec.shape != (mp.n_coeffs + 2,) or not np.all(np.isfinite(vec)):
        raise ValueError("feature extraction produced an invalid vector")
    return vec
