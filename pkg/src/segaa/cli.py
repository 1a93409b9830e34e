"""Command-line front end: build, train, eval, compare, predict.

Exit codes: 0 success, 1 usage, 2 data problem, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .config import (
    CORPUS_KINDS,
    frame_params,
    load_config,
    mfcc_params,
    parse_run,
    plan_runs,
)
from .data import (
    DataError,
    SplitSet,
    Standardizer,
    apply_standardizer,
    build_dataset,
    fit_standardizer,
    read_store,
    records_from_synth,
    scan_roots,
    stratified_split,
    synth_corpus,
    write_store,
)
from .data.schema import SCHEMA, TARGETS
from .dsp import WavFormatError, WavReadError, extract_features, load_wav, pad_or_crop
from .harness import (
    ExperimentPlan,
    NumericError,
    emit_report,
    evaluate,
    evaluate_cascade,
    run_matrix,
    run_name,
    to_arrays,
)
from .harness.experiment import _run_cascade, _run_single
from .models import (
    MODEL_KINDS,
    CascadeSpec,
    CheckpointError,
    load_checkpoint,
    save_checkpoint,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common_flags(sub):
    sub.add_argument("--config", metavar="FILE", help="JSON config overlaying the defaults")
    sub.add_argument("--seed", type=int, help="override data.seed")
    sub.add_argument("--out", metavar="DIR", help="output directory for this command")
    sub.add_argument("--deterministic", action="store_true",
                     help="force byte-stable artifacts (omit wall-clock fields)")


def build_parser() -> _Parser:
    parser = _Parser(prog="segaa",
                     description="speech emotion/gender/age benchmark toolkit")
    subs = parser.add_subparsers(dest="command", required=True)

    build = subs.add_parser("build", help="extract features and write the store")
    build.add_argument("--corpus-root", action="append", metavar="KIND=PATH",
                       help="corpus directory, e.g. crema_d=/data/crema (repeatable)")
    _common_flags(build)
    build.set_defaults(func=cmd_build)

    train = subs.add_parser("train", help="train one model and checkpoint it")
    train.add_argument("--model", required=True,
                       help="model kind (kind or kind:target), or 'cascade[:family]'")
    train.add_argument("--order", metavar="A,B,C",
                       help="cascade prediction order (default emotion,gender,age)")
    _common_flags(train)
    train.set_defaults(func=cmd_train)

    ev = subs.add_parser("eval", help="evaluate a checkpoint on a store's test split")
    ev.add_argument("checkpoint", help="path to a .segaa checkpoint")
    ev.add_argument("store", nargs="?", help="store directory (default from config)")
    _common_flags(ev)
    ev.set_defaults(func=cmd_eval)

    comp = subs.add_parser("compare", help="run the experiment matrix and emit reports")
    _common_flags(comp)
    comp.set_defaults(func=cmd_compare)

    pred = subs.add_parser("predict", help="predict the three labels for one WAV")
    pred.add_argument("checkpoint", help="path to a .segaa checkpoint")
    pred.add_argument("wav", help="path to a WAV file")
    _common_flags(pred)
    pred.set_defaults(func=cmd_predict)
    return parser


def _configure(args) -> dict:
    config = load_config(getattr(args, "config", None))
    if getattr(args, "seed", None) is not None:
        config["data"]["seed"] = args.seed
    if getattr(args, "deterministic", False):
        config["harness"]["determinism"] = True
    for item in getattr(args, "corpus_root", None) or []:
        kind, sep, path = item.partition("=")
        if not sep or not path:
            raise UsageError(f"--corpus-root wants KIND=PATH, got {item!r}")
        if kind not in CORPUS_KINDS:
            raise UsageError(
                f"unknown corpus kind {kind!r}; valid kinds: {', '.join(CORPUS_KINDS)}")
        config["data"]["corpus_roots"][kind] = path
    return config


def _store_paths(store_dir) -> dict:
    store = Path(store_dir)
    return {
        "train": store / "train.csv",
        "val": store / "val.csv",
        "test": store / "test.csv",
        "scaler": store / "scaler.json",
        "build": store / "build.json",
    }


def _load_scaler(paths) -> Standardizer:
    try:
        raw = json.loads(paths["scaler"].read_text())
    except OSError as exc:
        raise DataError(
            f"missing scaler file {paths['scaler']}; run `segaa build` first ({exc})"
        ) from exc
    return Standardizer(mean=np.asarray(raw["mean"]), std=np.asarray(raw["std"]))


def _read_splits(config) -> SplitSet:
    paths = _store_paths(config["data"]["store_dir"])
    return SplitSet(train=read_store(paths["train"]), val=read_store(paths["val"]),
                    test=read_store(paths["test"]), seed=config["data"]["seed"])


def cmd_build(args) -> int:
    config = _configure(args)
    if args.out:
        config["data"]["store_dir"] = args.out
    data_cfg = config["data"]
    dsp_cfg = config["dsp"]
    seed = data_cfg["seed"]

    if data_cfg["corpus_roots"]:
        records = scan_roots(data_cfg["corpus_roots"])
    else:
        records = records_from_synth(synth_corpus(data_cfg["synthetic_per_class"], seed=seed))
    examples = build_dataset(
        records,
        augmentations=tuple(data_cfg["augmentations"]),
        seed=seed,
        duration=dsp_cfg["duration"],
        frame=frame_params(config),
        mel=mfcc_params(config),
        aug_params={k: dsp_cfg[k] for k in
                    ("noise_factor", "stretch_rate", "pitch_semitones", "shift_max")},
        sample_rate=dsp_cfg["sample_rate"],
    )
    splits = stratified_split(examples, fractions=tuple(data_cfg["split"]), seed=seed)
    scaler = fit_standardizer(splits.train)

    paths = _store_paths(data_cfg["store_dir"])
    paths["train"].parent.mkdir(parents=True, exist_ok=True)
    counts = {}
    for part in ("train", "val", "test"):
        standardized = apply_standardizer(scaler, getattr(splits, part))
        write_store(paths[part], standardized)
        counts[part] = len(standardized)
    paths["scaler"].write_text(json.dumps(
        {"mean": scaler.mean.tolist(), "std": scaler.std.tolist()},
        indent=2, sort_keys=True) + "\n")
    paths["build"].write_text(json.dumps(
        {"config": config, "counts": counts, "clips": len(records)},
        indent=2, sort_keys=True) + "\n")
    print(f"store written to {paths['train'].parent}: "
          f"{counts['train']} train / {counts['val']} val / {counts['test']} test examples "
          f"from {len(records)} clips")
    return 0


def _parse_model(args):
    if args.model.startswith("cascade"):
        head = args.model.split(":")
        family = head[1] if len(head) > 1 else "segaa"
        order = tuple((args.order or "emotion,gender,age").split(","))
        try:
            return CascadeSpec(order, family=family)
        except DataError as exc:
            raise UsageError(str(exc)) from exc
    try:
        return parse_run(args.model)
    except DataError as exc:
        raise UsageError(
            f"{exc}; valid kinds: {', '.join(MODEL_KINDS)}, "
            f"individuals as kind:target, cascades as cascade[:family] with --order"
        ) from exc


def cmd_train(args) -> int:
    config = _configure(args)
    out = Path(args.out or config["harness"]["out_dir"])
    run = _parse_model(args)
    name = run_name(run)

    splits = _read_splits(config)
    arrays = {part: to_arrays(getattr(splits, part)) for part in ("train", "val", "test")}
    scaler = _load_scaler(_store_paths(config["data"]["store_dir"]))
    seed = config["data"]["seed"]
    cap = config["harness"]["epochs_cap"]
    overrides = config["models"]

    if isinstance(run, CascadeSpec):
        report, seconds, bundle = _run_cascade(run, arrays, seed, cap, overrides)
    else:
        report, seconds, bundle = _run_single(run, arrays, seed, cap, overrides)

    out.mkdir(parents=True, exist_ok=True)
    ckpt = out / f"{name}.segaa"
    save_checkpoint(ckpt, bundle["networks"], standardizer=scaler, config=config,
                    metrics=report, cascade=bundle["cascade"])
    history_path = out / f"{name}_history.json"
    history_path.write_text(json.dumps(bundle["history"], indent=2, sort_keys=True) + "\n")

    print(f"{name}: checkpoint {ckpt}, history {history_path}")
    for target, block in report["targets"].items():
        print(f"  {target}: test accuracy {block['accuracy']:.3f}")
    if not config["harness"]["determinism"]:
        print(f"  train wall time {seconds:.1f}s")
    return 0


def cmd_eval(args) -> int:
    config = _configure(args)
    if args.store:
        config["data"]["store_dir"] = args.store
    bundle = load_checkpoint(args.checkpoint)
    paths = _store_paths(config["data"]["store_dir"])
    x, y = to_arrays(read_store(paths["test"]))

    if bundle.cascade is not None:
        blocks, stages = evaluate_cascade(bundle.cascade, x, y)
        report = {"run": run_name(bundle.cascade.spec), "kind": "cascade",
                  "order": list(bundle.cascade.order), "targets": blocks,
                  "cascade": {"stages": stages}}
    else:
        name = bundle.names[0]
        net = bundle.network(name)
        report = {"run": name, "kind": net.kind, "targets": evaluate(net, x, y)}

    out = Path(args.out or config["harness"]["out_dir"])
    emit_report([report], out)
    print(f"report written to {out}")
    for target, block in report["targets"].items():
        print(f"  {target}: accuracy {block['accuracy']:.3f} f1 {block['f1']:.3f}")
    return 0


def cmd_compare(args) -> int:
    config = _configure(args)
    out = Path(args.out or config["harness"]["out_dir"])
    splits = _read_splits(config)
    scaler = _load_scaler(_store_paths(config["data"]["store_dir"]))
    runs = plan_runs(config)
    plan = ExperimentPlan(runs=runs, seed=config["data"]["seed"],
                          epochs_cap=config["harness"]["epochs_cap"],
                          determinism=config["harness"]["determinism"])
    result = run_matrix(plan, splits, overrides=config["models"])

    deterministic = config["harness"]["determinism"]
    emit_report(result.reports, out,
                timings=None if deterministic else result.timings,
                ratios=None if deterministic else result.ratios)
    for name, bundle in result.bundles.items():
        save_checkpoint(out / f"{name}.segaa", bundle["networks"], standardizer=scaler,
                        config=config, metrics=result.report(name),
                        cascade=bundle["cascade"])
        (out / f"{name}_history.json").write_text(
            json.dumps(bundle["history"], indent=2, sort_keys=True) + "\n")

    failures = [rep for rep in result.reports if "error" in rep]
    for rep in failures:
        print(f"run {rep['run']} failed: {rep['error']}", file=sys.stderr)
    for rep in result.reports:
        if "targets" not in rep:
            continue
        accs = ", ".join(f"{t} {b['accuracy']:.3f}" for t, b in rep["targets"].items())
        print(f"{rep['run']}: {accs}")
    for family, ratio in sorted(result.ratios.items()):
        print(f"{family}: multi/individual train-time ratio {ratio:.2f}")
    print(f"artifacts written to {out}")
    return 0 if len(failures) < len(result.reports) else 2


def cmd_predict(args) -> int:
    bundle = load_checkpoint(args.checkpoint)
    config = bundle.config if bundle.config else _configure(args)
    if bundle.standardizer is None:
        raise DataError(f"checkpoint {args.checkpoint} carries no standardizer")

    clip = load_wav(args.wav, config["dsp"]["sample_rate"])
    clip = pad_or_crop(clip, config["dsp"]["duration"])
    vec = extract_features(clip, frame_params(config), mfcc_params(config))
    x = bundle.standardizer.transform(vec[None, :]).astype(np.float32)

    results = {}
    if bundle.cascade is not None:
        cascade = bundle.cascade
        preds = {}
        for i, (target, net) in enumerate(cascade.stages):
            stage_x = net.prepare_input(cascade.assemble(x, i, preds))
            probs = net.forward(stage_x, train=False)
            pred = net.predict(probs, target)
            preds[target] = pred
            results[target] = (int(pred[0]), _class_prob(net, probs, target, int(pred[0])))
    else:
        net = bundle.network(bundle.names[0])
        probs = net.forward(net.prepare_input(x), train=False)
        for target in net.targets:
            pred = int(net.predict(probs, target)[0])
            results[target] = (pred, _class_prob(net, probs, target, pred))

    for target in TARGETS:
        if target not in results:
            continue
        index, prob = results[target]
        print(f"{target}: {SCHEMA.classes(target)[index]} (p={prob:.3f})")
    return 0


def _class_prob(net, probs, target, index) -> float:
    p = probs[target][0]
    if net.head(target).activation == "sigmoid":
        return float(p[0] if index == 1 else 1.0 - p[0])
    return float(p[index])


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (DataError, CheckpointError, WavReadError, WavFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
