import struct
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))


def make_sine(freq, duration=1.0, rate=16000, amplitude=0.8, phase=0.0):
    t = np.arange(int(round(duration * rate))) / rate
    return amplitude * np.sin(2.0 * np.pi * freq * t + phase)


def wav_bytes(channels, rate, bits=16, fmt="pcm"):
    """Build a WAV blob from a (frames, n_channels) float array in [-1, 1]."""
    channels = np.atleast_2d(np.asarray(channels, dtype=np.float64))
    if channels.shape[0] < channels.shape[1]:
        channels = channels.T  # accept (n_channels, frames) layout too
    frames, n_ch = channels.shape
    interleaved = channels.reshape(-1)

    if fmt == "float":
        tag, data = 3, interleaved.astype("<f4").tobytes()
    elif bits == 8:
        tag, data = 1, (np.round(interleaved * 127.0) + 128).astype(np.uint8).tobytes()
    elif bits == 16:
        tag, data = 1, np.round(interleaved * 32767.0).astype("<i2").tobytes()
    elif bits == 24:
        tag = 1
        vals = np.round(interleaved * ((1 << 23) - 1)).astype(np.int64)
        b = np.zeros((len(vals), 3), dtype=np.uint8)
        b[:, 0] = vals & 0xFF
        b[:, 1] = (vals >> 8) & 0xFF
        b[:, 2] = (vals >> 16) & 0xFF
        data = b.tobytes()
    elif bits == 32:
        tag, data = 1, np.round(interleaved * ((1 << 31) - 1)).astype("<i4").tobytes()
    else:
        raise ValueError(bits)

    if fmt == "float":
        bits = 32
    block = n_ch * bits // 8
    out = b"RIFF" + struct.pack("<I", 36 + len(data)) + b"WAVE"
    out += b"fmt " + struct.pack("<IHHIIHH", 16, tag, n_ch, rate, rate * block, block, bits)
    out += b"data" + struct.pack("<I", len(data)) + data
    return out


@pytest.fixture
def wav_file(tmp_path):
    def _write(name, channels, rate, bits=16, fmt="pcm"):
        p = tmp_path / name
        p.write_bytes(wav_bytes(channels, rate, bits=bits, fmt=fmt))
        return p

    return _write
