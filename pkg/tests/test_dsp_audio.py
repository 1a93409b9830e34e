import numpy as np
import pytest

from segaa.dsp import AudioClip, WavFormatError, WavReadError, load_wav, pad_or_crop, write_wav
from conftest import make_sine
from oracles import dft_peak_hz


def test_silence_roundtrip(wav_file):
    p = wav_file("silence.wav", np.zeros((16000, 1)), 16000)
    clip = load_wav(p, target_rate=16000)
    assert clip.sample_rate == 16000
    assert len(clip) == 16000
    assert np.all(clip.samples == 0.0)


def test_stereo_symmetric_average(wav_file):
    left = np.full(1000, 0.5)
    right = np.full(1000, -0.5)
    p = wav_file("stereo.wav", np.stack([left, right], axis=1), 16000)
    clip = load_wav(p, target_rate=16000)
    assert np.allclose(clip.samples, 0.0, atol=1e-4)


def test_resample_keeps_tone(wav_file):
    p = wav_file("tone48k.wav", make_sine(440.0, 1.0, 48000)[:, None], 48000)
    clip = load_wav(p, target_rate=16000)
    assert len(clip) == 16000
    # 1 s at 16 kHz -> 1 Hz bins
    assert abs(dft_peak_hz(clip.samples, 16000) - 440.0) <= 1.0


@pytest.mark.parametrize("bits,fmt", [(8, "pcm"), (16, "pcm"), (24, "pcm"), (32, "pcm"), (32, "float")])
def test_encodings_recover_waveform(wav_file, bits, fmt):
    x = make_sine(200.0, 0.1, 16000, amplitude=0.7)
    p = wav_file(f"enc_{bits}_{fmt}.wav", x[:, None], 16000, bits=bits, fmt=fmt)
    clip = load_wav(p, target_rate=16000)
    tol = 0.01 if bits == 8 else 1e-3
    assert np.max(np.abs(clip.samples - x)) <= tol


def test_missing_file_is_read_error(tmp_path):
    with pytest.raises(WavReadError):
        load_wav(tmp_path / "nope.wav")


def test_bad_riff_is_read_error(tmp_path):
    p = tmp_path / "bad.wav"
    p.write_bytes(b"not a riff header at all")
    with pytest.raises(WavReadError):
        load_wav(p)


def test_unsupported_encoding_is_format_error(tmp_path, wav_file):
    import struct

    # mu-law format tag 0x0007
    data = b"\x00" * 100
    blob = b"RIFF" + struct.pack("<I", 36 + len(data)) + b"WAVE"
    blob += b"fmt " + struct.pack("<IHHIIHH", 16, 7, 1, 8000, 8000, 1, 8)
    blob += b"data" + struct.pack("<I", len(data)) + data
    p = tmp_path / "mulaw.wav"
    p.write_bytes(blob)
    with pytest.raises(WavFormatError):
        load_wav(p)


def test_truncated_data_is_read_error(tmp_path, wav_file):
    from conftest import wav_bytes

    blob = wav_bytes(np.zeros((1000, 1)), 16000)
    p = tmp_path / "trunc.wav"
    p.write_bytes(blob[: len(blob) - 100])
    with pytest.raises(WavReadError):
        load_wav(p)


def test_write_read_roundtrip(tmp_path):
    x = make_sine(300.0, 0.25, 16000, amplitude=0.5)
    p = tmp_path / "rt.wav"
    write_wav(p, AudioClip(x, 16000))
    back = load_wav(p, target_rate=16000)
    assert np.max(np.abs(back.samples - x)) <= 1e-3


class TestPadOrCrop:
    def test_exact_length_unchanged(self):
        clip = AudioClip(np.arange(48000) / 48000.0, 16000)
        out = pad_or_crop(clip, 3.0)
        assert out.samples is clip.samples

    def test_symmetric_pad(self):
        clip = AudioClip(np.ones(16000), 16000)
        out = pad_or_crop(clip, 3.0)
        assert len(out) == 48000
        assert np.all(out.samples[:16000] == 0.0)
        assert np.all(out.samples[16000:32000] == 1.0)
        assert np.all(out.samples[32000:] == 0.0)

    def test_center_crop_indices(self):
        x = np.arange(64000, dtype=np.float64)
        x = x / x.max()
        out = pad_or_crop(AudioClip(x, 16000), 3.0)
        assert len(out) == 48000
        # index arithmetic: crop starts at (64000 - 48000) // 2 = 8000
        assert np.array_equal(out.samples, x[8000:56000])

    def test_empty_clip_all_padding(self):
        out = pad_or_crop(AudioClip(np.zeros(0), 16000), 0.5)
        assert len(out) == 8000
        assert np.all(out.samples == 0.0)

    def test_rejects_nonpositive_duration(self):
        with pytest.raises(ValueError):
            pad_or_crop(AudioClip(np.zeros(10), 16000), 0.0)
