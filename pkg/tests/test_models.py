"""Architecture tables, parameter counts, cascades, and the checkpoint file."""

import numpy as np
import pytest

from segaa.data.schema import TARGETS, DataError
from segaa.data.standardize import Standardizer
from segaa.models import (
    CASCADE_ORDERS,
    MODEL_KINDS,
    CascadeSpec,
    CheckpointError,
    architecture,
    build_cascade,
    build_model,
    load_checkpoint,
    save_checkpoint,
    stage_widths,
    trunk_shape_trace,
)


def test_model_kind_roster():
    assert MODEL_KINDS == (
        "mlp_individual", "mlp_multi",
        "segaa0_individual", "segaa0_multi",
        "segaa_individual", "segaa_multi",
    )


def test_architecture_argument_checks():
    with pytest.raises(DataError):
        architecture("mlp_individual")
    with pytest.raises(DataError):
        architecture("mlp_individual", target="colour")
    with pytest.raises(DataError):
        architecture("mlp_multi", target="emotion")
    with pytest.raises(DataError):
        architecture("resnet_individual", target="emotion")


def test_mlp_individual_parameter_count():
    net = build_model("mlp_individual", target="emotion")
    # 42*2048+2048, 2048*1024+1024, 1024*512+512, 512*64+64, 64*6+6
    assert net.param_count() == 2744262


def test_mlp_head_widths():
    gender = build_model("mlp_individual", target="gender")
    assert gender.head("gender").units == 1
    assert gender.head("gender").activation == "sigmoid"
    assert gender.param_count() == 2744262 - 390 + 65

    multi = build_model("mlp_multi")
    assert multi.targets == TARGETS
    # the shared trunk plus one head per target
    assert multi.param_count() == (2744262 - 390) + 390 + 65 + 390


def test_conv_families_use_two_way_gender_softmax():
    for kind in ("segaa0_individual", "segaa_individual"):
        net = build_model(kind, target="gender")
        assert net.head("gender").units == 2
        assert net.head("gender").activation == "softmax"


def test_segaa0_shape_trace():
    arch = architecture("segaa0_multi")
    trace = dict(trunk_shape_trace(arch))
    assert trace["pool1"] == 19
    assert trace["pool2"] == 8
    assert trace["pool3"] == 2
    assert trace["flatten"] == 128
    assert trace["fc"] == 32


def test_segaa_shape_trace():
    arch = architecture("segaa_multi")
    trace = dict(trunk_shape_trace(arch))
    assert trace["pool1"] == 21
    assert trace["pool2"] == 10
    assert trace["pool3"] == 5
    assert trace["flatten"] == 320
    assert trace["fc"] == 64


def test_trace_matches_live_forward():
    net = build_model("segaa_individual", target="emotion", seed=3)
    x = net.prepare_input(np.random.default_rng(0).normal(size=(4, 42)))
    by_name = dict(net.forward_traced(x))
    assert by_name["pool1"].shape == (4, 21, 256)
    assert by_name["pool2"].shape == (4, 10, 128)
    assert by_name["pool3"].shape == (4, 5, 64)
    assert by_name["flatten"].shape == (4, 320)


def test_individual_and_multi_share_trunk_shapes():
    one = architecture("segaa_individual", target="age")
    all3 = architecture("segaa_multi")
    assert one["trunk"] == all3["trunk"]
    # parameter difference is exactly the two extra heads
    n_one = build_model("segaa_individual", target="age").param_count()
    n_all = build_model("segaa_multi").param_count()
    assert n_all - n_one == (64 * 6 + 6) + (64 * 2 + 2)


def test_too_short_input_refused():
    with pytest.raises(DataError):
        architecture("segaa0_individual", target="emotion", input_width=4)


def test_training_plans():
    assert architecture("mlp_multi")["plan"]["optimizer"] == "sgd"
    assert architecture("mlp_multi")["plan"]["batch_size"] == 32
    assert architecture("mlp_multi")["plan"]["early_stop"] is False
    assert architecture("segaa0_multi")["plan"]["optimizer"] == "adam"
    plan = architecture("segaa_multi")["plan"]
    assert plan["optimizer"] == "nadam"
    assert plan["batch_size"] == 16
    assert plan["early_stop"] and plan["plateau"]


def test_forward_probabilities_on_zero_input():
    x2 = np.zeros((3, 42), dtype=np.float32)
    for kind in MODEL_KINDS:
        net = build_model(kind) if kind.endswith("multi") else \
            build_model(kind, target="emotion")
        probs = net.forward(net.prepare_input(x2), train=False)
        for target, p in probs.items():
            assert p.shape[0] == 3
            assert np.all(p >= 0) and np.all(p <= 1)
            if net.head(target).activation == "softmax":
                np.testing.assert_allclose(p.sum(axis=1), 1.0, atol=1e-6)


def test_seed_controls_initialization():
    a = build_model("mlp_individual", target="emotion", seed=7)
    b = build_model("mlp_individual", target="emotion", seed=7)
    c = build_model("mlp_individual", target="emotion", seed=8)
    for pa, pb in zip(a.params(), b.params()):
        assert np.array_equal(pa, pb)
    assert any(not np.array_equal(pa, pc) for pa, pc in zip(a.params(), c.params()))


def test_cascade_orders_cover_reported_chains():
    assert ("emotion", "gender", "age") in CASCADE_ORDERS
    assert ("gender", "age", "emotion") in CASCADE_ORDERS
    assert ("age", "emotion", "gender") in CASCADE_ORDERS


def test_cascade_stage_widths():
    assert stage_widths(CascadeSpec(("emotion", "gender", "age"))) == [42, 48, 44]
    assert stage_widths(CascadeSpec(("gender", "age", "emotion"))) == [42, 44, 48]
    assert stage_widths(CascadeSpec(("age", "emotion", "gender"))) == [42, 48, 48]
    all_prev = CascadeSpec(("emotion", "gender", "age"), use_all_previous=True)
    assert stage_widths(all_prev) == [42, 48, 50]


def test_cascade_rejects_non_permutations():
    with pytest.raises(DataError):
        CascadeSpec(("emotion", "emotion", "age"))
    with pytest.raises(DataError):
        CascadeSpec(("emotion", "gender"))
    with pytest.raises(DataError):
        CascadeSpec(("emotion", "gender", "age"), family="tree")


def test_cascade_assemble_appends_one_hots():
    cascade = build_cascade(CascadeSpec(("gender", "age", "emotion"), family="mlp"))
    feats = np.zeros((2, 42), dtype=np.float32)
    stage2 = cascade.assemble(feats, 1, {"gender": np.array([1, 0])})
    assert stage2.shape == (2, 44)
    np.testing.assert_array_equal(stage2[:, 42:], [[0, 1], [1, 0]])
    stage3 = cascade.assemble(feats, 2, {"age": np.array([5, 0])})
    assert stage3.shape == (2, 48)
    assert stage3[0, 42 + 5] == 1.0 and stage3[1, 42] == 1.0


def test_cascade_predicts_every_target():
    cascade = build_cascade(CascadeSpec(("emotion", "gender", "age")), seed=5)
    feats = np.random.default_rng(1).normal(size=(6, 42)).astype(np.float32)
    preds = cascade.predict(feats)
    assert set(preds) == set(TARGETS)
    assert all(preds[t].shape == (6,) for t in TARGETS)
    assert preds["emotion"].max() < 6 and preds["gender"].max() < 2


def _trained_like_network(kind="segaa_multi", seed=11):
    """A network with moved BN statistics so buffers are exercised too."""
    net = build_model(kind, seed=seed)
    rng = np.random.default_rng(seed)
    x = net.prepare_input(rng.normal(size=(8, 42)))
    net.forward(x, train=True)
    return net


def test_checkpoint_round_trip_is_bitwise(tmp_path):
    net = _trained_like_network()
    scaler = Standardizer(mean=np.linspace(-1, 1, 42), std=np.full(42, 0.37))
    path = tmp_path / "model.segaa"
    save_checkpoint(path, [("model", net)], standardizer=scaler,
                    config={"seed": 11}, metrics={"val_accuracy": 0.5})
    bundle = load_checkpoint(path)
    loaded = bundle.network("model")

    for a, b in zip(net.params() + net.buffers(), loaded.params() + loaded.buffers()):
        assert np.array_equal(a, b)
    x = loaded.prepare_input(np.random.default_rng(2).normal(size=(5, 42)))
    before = net.forward(x, train=False)
    after = loaded.forward(x, train=False)
    for target in before:
        assert np.array_equal(before[target], after[target])

    np.testing.assert_array_equal(bundle.standardizer.mean, scaler.mean)
    np.testing.assert_array_equal(bundle.standardizer.std, scaler.std)
    assert bundle.config == {"seed": 11}
    assert bundle.metrics == {"val_accuracy": 0.5}
    assert bundle.schema["emotions"][0] == "anger"
    assert loaded.targets == TARGETS


def test_checkpoint_magic_is_checked(tmp_path):
    path = tmp_path / "model.segaa"
    save_checkpoint(path, [("model", _trained_like_network())])
    raw = bytearray(path.read_bytes())
    raw[0] ^= 0xFF
    path.write_bytes(bytes(raw))
    with pytest.raises(CheckpointError, match="magic"):
        load_checkpoint(path)


def test_checkpoint_truncation_is_detected(tmp_path):
    path = tmp_path / "model.segaa"
    save_checkpoint(path, [("model", _trained_like_network())])
    raw = path.read_bytes()
    path.write_bytes(raw[: len(raw) - 64])
    with pytest.raises(CheckpointError, match="truncated"):
        load_checkpoint(path)
    path.write_bytes(raw[:32])
    with pytest.raises(CheckpointError, match="truncated"):
        load_checkpoint(path)


def test_checkpoint_missing_file(tmp_path):
    with pytest.raises(CheckpointError):
        load_checkpoint(tmp_path / "nope.segaa")


def test_checkpoint_carries_cascades(tmp_path):
    spec = CascadeSpec(("gender", "age", "emotion"))
    cascade = build_cascade(spec, seed=3)
    feats = np.random.default_rng(4).normal(size=(4, 42)).astype(np.float32)
    want = cascade.predict(feats)

    path = tmp_path / "cascade.segaa"
    names = [(f"stage{i}_{t}", net) for i, (t, net) in enumerate(cascade.stages)]
    save_checkpoint(path, names, cascade=spec)
    loaded = load_checkpoint(path).cascade
    assert loaded.order == ("gender", "age", "emotion")
    got = loaded.predict(feats)
    for target in want:
        np.testing.assert_array_equal(want[target], got[target])
