"""PCM WAV ingestion and length normalization.

The reader handles the RIFF/WAVE layouts that occur in the speech corpora:
uncompressed integer PCM at 8/16/24/32 bit and IEEE float32, any channel
count.  Channels are averaged to mono, amplitudes scaled to [-1, 1] and the
signal linearly resampled to the pipeline rate.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

DEFAULT_RATE = 16000

WAVE_FORMAT_PCM = 0x0001
WAVE_FORMAT_IEEE_FLOAT = 0x0003
WAVE_FORMAT_EXTENSIBLE = 0xFFFE


class WavReadError(Exception):
    """File could not be read at all (missing, unreadable, not RIFF/WAVE)."""


class WavFormatError(Exception):
    """File is RIFF/WAVE but uses an encoding the reader does not support."""


@dataclass(frozen=True)
class AudioClip:
    """Mono sample buffer plus its sample rate."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        if self.sample_rate <= 0:
            raise ValueError(f"sample_rate must be positive, got {self.sample_rate}")
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1:
            raise ValueError(f"samples must be 1-D, got shape {samples.shape}")
        if not np.all(np.isfinite(samples)):
            raise ValueError("samples contain non-finite values")
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def duration(self) -> float:
        return len(self.samples) / self.sample_rate


def _parse_riff_chunks(blob: bytes):
    """Yield (chunk_id, payload) pairs from a RIFF/WAVE blob."""
    if len(blob) < 12 or blob[:4] != b"RIFF":
        raise WavReadError("not a RIFF file (missing 'RIFF' tag)")
    if blob[8:12] != b"WAVE":
        raise WavReadError("RIFF file is not WAVE format")
    pos = 12
    while pos + 8 <= len(blob):
        cid = blob[pos : pos + 4]
        (size,) = struct.unpack_from("<I", blob, pos + 4)
        payload = blob[pos + 8 : pos + 8 + size]
        if len(payload) < size:
            raise WavReadError(f"truncated chunk {cid!r}: declared {size}, got {len(payload)} bytes")
        yield cid, payload
        pos += 8 + size + (size & 1)  # chunks are word-aligned


def _decode_pcm(data: bytes, fmt_tag: int, bits: int, n_channels: int) -> np.ndarray:
    """Decode interleaved sample bytes to a float64 (frames, channels) array in [-1, 1]."""
    if fmt_tag == WAVE_FORMAT_IEEE_FLOAT:
        if bits != 32:
            raise WavFormatError(f"unsupported float width: {bits} bits")
        raw = np.frombuffer(data, dtype="<f4").astype(np.float64)
    elif fmt_tag == WAVE_FORMAT_PCM:
        if bits == 8:
            raw = (np.frombuffer(data, dtype=np.uint8).astype(np.float64) - 128.0) / 128.0
        elif bits == 16:
            raw = np.frombuffer(data, dtype="<i2").astype(np.float64) / 32768.0
        elif bits == 24:
            b = np.frombuffer(data, dtype=np.uint8)
            if len(b) % 3:
                raise WavReadError("24-bit data chunk length is not a multiple of 3")
            b = b.reshape(-1, 3)
            vals = (
                b[:, 0].astype(np.int32)
                | (b[:, 1].astype(np.int32) << 8)
                | (b[:, 2].astype(np.int32) << 16)
            )
            vals = np.where(vals >= 1 << 23, vals - (1 << 24), vals)
            raw = vals.astype(np.float64) / float(1 << 23)
        elif bits == 32:
            raw = np.frombuffer(data, dtype="<i4").astype(np.float64) / float(1 << 31)
        else:
            raise WavFormatError(f"unsupported PCM width: {bits} bits")
    else:
        raise WavFormatError(f"unsupported WAVE format tag 0x{fmt_tag:04x}")
    frames = len(raw) // n_channels
    return raw[: frames * n_channels].reshape(frames, n_channels)


def resample(samples: np.ndarray, src_rate: int, target_rate: int) -> np.ndarray:
    """Linear resampling onto a uniform grid at target_rate."""
    samples = np.asarray(samples, dtype=np.float64)
    if src_rate == target_rate:
        return samples.copy()
    n_out = int(round(len(samples) * target_rate / src_rate))
    if n_out <= 0 or len(samples) == 0:
        return np.zeros(0)
    t_out = np.arange(n_out) / target_rate
    t_in = np.arange(len(samples)) / src_rate
    return np.interp(t_out, t_in, samples)


def load_wav(path, target_rate: int = DEFAULT_RATE) -> AudioClip:
    """Read a PCM WAV file as a mono AudioClip at target_rate.

    Channels are averaged, amplitudes land in [-1, 1] by format scaling, and
    the signal is linearly resampled.  Raises WavReadError for unreadable or
    malformed files and WavFormatError for unsupported encodings.
    """
    path = Path(path)
    try:
        blob = path.read_bytes()
    except OSError as exc:
        raise WavReadError(f"cannot read {path}: {exc}") from exc

    fmt = None
    data = None
    for cid, payload in _parse_riff_chunks(blob):
        if cid == b"fmt " and fmt is None:
            if len(payload) < 16:
                raise WavReadError("fmt chunk shorter than 16 bytes")
            fmt = struct.unpack_from("<HHIIHH", payload, 0)
            # WAVE_FORMAT_EXTENSIBLE carries the real tag in the GUID prefix
            if fmt[0] == WAVE_FORMAT_EXTENSIBLE:
                if len(payload) < 26:
                    raise WavReadError("extensible fmt chunk too short")
                (subformat,) = struct.unpack_from("<H", payload, 24)
                fmt = (subformat,) + fmt[1:]
        elif cid == b"data" and data is None:
            data = payload
    if fmt is None:
        raise WavReadError("missing fmt chunk")
    if data is None:
        raise WavReadError("missing data chunk")

    fmt_tag, n_channels, sample_rate, _byte_rate, _block_align, bits = fmt
    if n_channels < 1:
        raise WavReadError("fmt chunk declares zero channels")
    if sample_rate <= 0:
        raise WavReadError("fmt chunk declares non-positive sample rate")

    frames = _decode_pcm(data, fmt_tag, bits, n_channels)
    if frames.shape[0] == 0:
        raise WavReadError(f"{path} contains no samples")
    mono = frames.mean(axis=1)
    return AudioClip(resample(mono, sample_rate, target_rate), target_rate)


def write_wav(path, clip: AudioClip) -> None:
    """Write a clip as 16-bit PCM mono WAV (used by the synthetic corpus)."""
    samples = np.clip(clip.samples, -1.0, 1.0)
    pcm = np.round(samples * 32767.0).astype("<i2").tobytes()
    hdr = b"RIFF" + struct.pack("<I", 36 + len(pcm)) + b"WAVE"
    hdr += b"fmt " + struct.pack(
        "<IHHIIHH", 16, WAVE_FORMAT_PCM, 1, clip.sample_rate, clip.sample_rate * 2, 2, 16
    )
    hdr += b"data" + struct.pack("<I", len(pcm))
    Path(path).write_bytes(hdr + pcm)


def pad_or_crop(clip: AudioClip, duration: float = 3.0) -> AudioClip:
    """Force a clip to exactly round(duration * rate) samples.

    Longer clips are center-cropped; shorter ones zero-padded symmetrically
    (extra zero on the right when the deficit is odd).
    """
    if duration <= 0:
        raise ValueError(f"duration must be positive, got {duration}")
    n_target = int(round(duration * clip.sample_rate))
    x = clip.samples
    n = len(x)
    if n == n_target:
        return clip
    if n > n_target:
        start = (n - n_target) // 2
        return AudioClip(x[start : start + n_target], clip.sample_rate)
    pad = n_target - n
    left = pad // 2
    out = np.zeros(n_target)
    out[left : left + n] = x
    return AudioClip(out, clip.sample_rate)
