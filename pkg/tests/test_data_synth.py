"""The synthetic corpus must be deterministic and separable by construction."""

import numpy as np

from segaa.data import synth_corpus
from segaa.data.synth import AGE_LEVELS, GENDER_F0

from oracles import dft_peak_hz, rmse_naive


class TestSynthCorpus:
    def test_multiplicity(self):
        corpus = synth_corpus(2, seed=7)
        assert len(corpus) == 2 * 6 * 2 * 6

    def test_covers_every_cell(self):
        corpus = synth_corpus(1, seed=0)
        cells = {(c.emotion, c.gender, c.age_bin) for c in corpus}
        assert len(cells) == 72

    def test_identical_seed_identical_clips(self):
        a = synth_corpus(1, seed=3)
        b = synth_corpus(1, seed=3)
        for x, y in zip(a, b):
            assert x.clip_id == y.clip_id
            assert np.array_equal(x.clip.samples, y.clip.samples)

    def test_different_seed_differs(self):
        a = synth_corpus(1, seed=3)
        b = synth_corpus(1, seed=4)
        assert not np.array_equal(a[0].clip.samples, b[0].clip.samples)

    def test_gender_bands_are_disjoint_at_the_dft_peak(self):
        # fundamental dominates because harmonic amplitudes decay as 1/h
        corpus = synth_corpus(1, seed=11)
        for item in corpus:
            peak = dft_peak_hz(item.clip.samples, item.clip.sample_rate)
            f0 = GENDER_F0[item.gender]
            assert abs(peak - f0) < 10.0, (item.clip_id, peak)

    def test_rms_levels_track_the_age_bin(self):
        corpus = synth_corpus(1, seed=5)
        for item in corpus:
            level = rmse_naive(item.clip.samples[:16000])
            want = AGE_LEVELS[item.age_bin]
            # the 1 s slice sees a couple of AM periods, so a few percent slack
            assert 0.9 * want < level < 1.1 * want, (item.clip_id, level, want)

    def test_samples_stay_inside_pcm_range(self):
        for item in synth_corpus(1, seed=2):
            assert np.max(np.abs(item.clip.samples)) < 1.0
