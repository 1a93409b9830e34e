"""The four waveform augmentations: noise, time stretch, pitch shift, signal shift.

Any randomness is drawn from an explicitly seeded generator so augmented
datasets are reproducible clip by clip.
"""

from __future__ import annotations

import numpy as np

from .audio import AudioClip, resample

NOISE_FACTOR = 0.035
STRETCH_RATE = 0.8
PITCH_SEMITONES = 2.0
SHIFT_MAX = 5000


def add_noise(clip: AudioClip, factor: float = NOISE_FACTOR, seed: int = 0) -> AudioClip:
    """Add uniform noise scaled to the clip's peak amplitude.

    out = x + a * n with a = factor * U(0,1) * max|x| and n ~ U(-1,1) per
    sample.  factor 0 or a silent clip returns the input unchanged.
    """
    if factor < 0:
        raise ValueError(f"noise factor must be >= 0, got {factor}")
    x = clip.samples
    peak = np.max(np.abs(x)) if len(x) else 0.0
    if factor == 0.0 or peak == 0.0:
        return clip
    rng = np.random.default_rng(seed)
    amp = factor * rng.uniform(0.0, 1.0) * peak
    noise = rng.uniform(-1.0, 1.0, size=len(x))
    return AudioClip(x + amp * noise, clip.sample_rate)


def _stft(x: np.ndarray, frame_length: int, hop: int) -> np.ndarray:
    """Centered Hann STFT, frames in columns."""
    half = frame_length // 2
    x = np.pad(x, (half, half), mode="reflect" if len(x) > half else "constant")
    n_frames = 1 + (len(x) - frame_length) // hop
    window = np.hanning(frame_length)
    idx = np.arange(frame_length)[:, None] + hop * np.arange(n_frames)[None, :]
    return np.fft.rfft(x[idx] * window[:, None], axis=0)


def _istft(spec: np.ndarray, frame_length: int, hop: int, length: int) -> np.ndarray:
    """Overlap-add inverse of _stft with squared-window normalization."""
    window = np.hanning(frame_length)
    frames = np.fft.irfft(spec, n=frame_length, axis=0) * window[:, None]
    n_frames = spec.shape[1]
    total = frame_length + hop * (n_frames - 1)
    out = np.zeros(total)
    norm = np.zeros(total)
    wsq = window**2
    for t in range(n_frames):
        out[t * hop : t * hop + frame_length] += frames[:, t]
        norm[t * hop : t * hop + frame_length] += wsq
    out = out / np.maximum(norm, 1e-12)
    half = frame_length // 2
    return out[half : half + length]


def time_stretch(
    clip: AudioClip, rate: float = STRETCH_RATE, frame_length: int = 2048, hop: int = 512
) -> AudioClip:
    """Phase-vocoder time stretch; output length = round(len / rate).

    rate < 1 slows the clip down (longer output), rate > 1 speeds it up.
    Pitch content is preserved; the sample rate is unchanged.
    """
    if rate <= 0:
        raise ValueError(f"stretch rate must be positive, got {rate}")
    x = clip.samples
    n_out = int(round(len(x) / rate))
    if len(x) == 0 or n_out == 0:
        return AudioClip(np.zeros(n_out), clip.sample_rate)
    if len(x) < frame_length:
        # too short for spectral processing; resampling the time axis is the
        # best-effort stretch and keeps the length contract
        return AudioClip(np.interp(np.linspace(0, len(x) - 1, n_out), np.arange(len(x)), x), clip.sample_rate)

    spec = _stft(x, frame_length, hop)
    n_bins, n_frames = spec.shape
    steps = np.arange(0, n_frames, rate)

    # per-bin expected phase advance over one hop
    omega = 2.0 * np.pi * hop * np.arange(n_bins) / frame_length
    mag = np.abs(spec)
    phase = np.angle(spec)

    out_spec = np.zeros((n_bins, len(steps)), dtype=complex)
    acc = phase[:, 0].copy()
    for k, step in enumerate(steps):
        i = int(np.floor(step))
        frac = step - i
        i1 = min(i + 1, n_frames - 1)
        m = (1.0 - frac) * mag[:, i] + frac * mag[:, i1]
        out_spec[:, k] = m * np.exp(1j * acc)
        # heterodyned phase increment between the bracketing analysis frames
        dphi = phase[:, i1] - phase[:, i] - omega
        dphi -= 2.0 * np.pi * np.round(dphi / (2.0 * np.pi))
        acc += omega + dphi

    return AudioClip(_istft(out_spec, frame_length, hop, n_out), clip.sample_rate)


def pitch_shift(clip: AudioClip, semitones: float = PITCH_SEMITONES) -> AudioClip:
    """Shift pitch by a number of semitones, preserving length and rate.

    Implemented as a vocoder stretch that scales the time axis by
    2^(semitones/12) followed by linear resampling back to the original
    length, which multiplies all frequencies by the same factor.
    """
    x = clip.samples
    if semitones == 0.0:
        rate = 1.0
    else:
        rate = 2.0 ** (-semitones / 12.0)
    stretched = time_stretch(clip, rate)
    y = stretched.samples
    if len(y) == len(x):
        return AudioClip(y, clip.sample_rate)
    if len(y) == 0 or len(x) == 0:
        return AudioClip(np.zeros(len(x)), clip.sample_rate)
    out = np.interp(np.linspace(0, len(y) - 1, len(x)), np.arange(len(y)), y)
    return AudioClip(out, clip.sample_rate)


def shift_signal(clip: AudioClip, offset: int) -> AudioClip:
    """Circularly rotate the signal by offset samples (energy-preserving)."""
    return AudioClip(np.roll(clip.samples, int(offset)), clip.sample_rate)


def draw_shift_offset(rng: np.random.Generator, max_shift: int = SHIFT_MAX) -> int:
    """Uniform integer offset in [-max_shift, +max_shift]."""
    return int(rng.integers(-max_shift, max_shift + 1))
