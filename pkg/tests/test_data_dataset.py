"""Dataset assembly (build_dataset) and the stratified split."""

import numpy as np
import pytest

from segaa.data import (
    DataError,
    LabeledExample,
    build_dataset,
    records_from_synth,
    stratified_split,
    synth_corpus,
    write_store,
)


def small_records(n_per_class=1, seed=0):
    return records_from_synth(synth_corpus(n_per_class, seed=seed))


def fake_example(clip_id, emotion=0, gender=0, age=0, augmentation="original"):
    return LabeledExample(
        clip_id=clip_id,
        source="synthetic",
        speaker_id="s",
        augmentation=augmentation,
        emotion=emotion,
        gender=gender,
        age_bin=age,
        features=np.zeros(42, dtype=np.float32),
    )


class TestBuildDataset:
    def test_multiplicity_with_two_augmentations(self):
        records = small_records()[:10]
        examples = build_dataset(records, augmentations=("noise", "pitch"), seed=1)
        assert len(examples) == 30
        per_clip = {}
        for ex in examples:
            per_clip.setdefault(ex.clip_id, []).append(ex.augmentation)
        assert all(v == ["original", "noise", "pitch"] for v in per_clip.values())

    def test_labels_match_generator_ground_truth(self):
        corpus = synth_corpus(1, seed=2)
        truth = {c.clip_id: (c.emotion, c.gender, c.age_bin) for c in corpus}
        examples = build_dataset(records_from_synth(corpus)[:12], augmentations=(), seed=0)
        assert len(examples) == 12
        for ex in examples:
            assert (ex.emotion, ex.gender, ex.age_bin) == truth[ex.clip_id]
            assert ex.augmentation == "original"

    def test_deterministic_store_bytes(self, tmp_path):
        records = small_records()[:6]
        a = build_dataset(records, augmentations=("noise", "shift"), seed=5)
        b = build_dataset(records, augmentations=("noise", "shift"), seed=5)
        write_store(tmp_path / "a.csv", a)
        write_store(tmp_path / "b.csv", b)
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    def test_ordering_is_canonical(self):
        records = list(reversed(small_records()[:8]))
        examples = build_dataset(records, augmentations=("noise",), seed=0)
        keys = [(ex.source, ex.clip_id) for ex in examples]
        assert keys == sorted(keys)

    def test_empty_corpus_rejected(self):
        with pytest.raises(DataError):
            build_dataset([], augmentations=(), seed=0)

    def test_unknown_augmentation_rejected(self):
        with pytest.raises(DataError):
            build_dataset(small_records()[:1], augmentations=("reverb",), seed=0)

    def test_unreadable_file_collected_not_fatal(self, tmp_path):
        from segaa.data import ClipRecord

        records = small_records()[:3]
        records.append(
            ClipRecord("ghost", "synthetic", "s1", 0, 0, 0, path=tmp_path / "ghost.wav")
        )
        errors = []
        examples = build_dataset(records, augmentations=(), seed=0, errors=errors)
        assert len(examples) == 3
        assert len(errors) == 1 and errors[0][0] == "ghost"


class TestStratifiedSplit:
    def test_single_stratum_honors_fractions(self):
        examples = [fake_example(f"c{i:03d}") for i in range(100)]
        split = stratified_split(examples, seed=0)
        assert (len(split.train), len(split.val), len(split.test)) == (70, 15, 15)

    def test_disjoint_and_complete(self):
        examples = [fake_example(f"c{i:03d}", emotion=i % 6) for i in range(60)]
        split = stratified_split(examples, seed=1)
        ids = [ex.clip_id for part in (split.train, split.val, split.test) for ex in part]
        assert sorted(ids) == sorted(ex.clip_id for ex in examples)
        assert len(set(ids)) == len(ids)

    def test_balanced_synthetic_set_stays_balanced(self):
        # 60 originals, 10 per emotion: every split within 1 of exact shares
        examples = [fake_example(f"c{i:03d}", emotion=i % 6) for i in range(60)]
        split = stratified_split(examples, seed=3)
        for part, frac in zip((split.train, split.val, split.test), (0.70, 0.15, 0.15)):
            for emo in range(6):
                got = sum(1 for ex in part if ex.emotion == emo)
                assert abs(got - 10 * frac) <= 1, (len(part), emo, got)

    def test_augmentations_follow_their_original(self):
        examples = []
        for i in range(40):
            for aug in ("original", "noise", "pitch"):
                examples.append(fake_example(f"c{i:03d}", emotion=i % 2, augmentation=aug))
        split = stratified_split(examples, seed=2)
        where = {}
        for name, part in split.parts().items():
            for ex in part:
                where.setdefault(ex.clip_id, set()).add(name)
        assert all(len(parts) == 1 for parts in where.values())

    def test_same_seed_same_membership(self):
        examples = [fake_example(f"c{i:03d}", emotion=i % 6) for i in range(60)]
        a = stratified_split(examples, seed=9)
        b = stratified_split(examples, seed=9)
        assert [e.clip_id for e in a.test] == [e.clip_id for e in b.test]

    def test_joint_key_used_when_populated(self):
        # 2 joint strata x 6 clips: every (emotion, gender, age) cell splits 4/1/1
        examples = []
        for i in range(12):
            examples.append(fake_example(f"c{i:02d}", emotion=i % 2, gender=i % 2, age=0))
        split = stratified_split(examples, seed=0)
        for emo in (0, 1):
            assert sum(1 for ex in split.train if ex.emotion == emo) == 4
            assert sum(1 for ex in split.val if ex.emotion == emo) == 1
            assert sum(1 for ex in split.test if ex.emotion == emo) == 1

    def test_too_small_dataset_rejected(self):
        with pytest.raises(DataError):
            stratified_split([fake_example("c1"), fake_example("c2")], seed=0)

    def test_bad_fractions_rejected(self):
        examples = [fake_example(f"c{i}") for i in range(10)]
        with pytest.raises(DataError):
            stratified_split(examples, fractions=(0.8, 0.1, 0.2), seed=0)

    def test_empty_dataset_rejected(self):
        with pytest.raises(DataError):
            stratified_split([], seed=0)
