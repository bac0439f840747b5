"""Command-line front end: synth, train, eval, stream, bench, sweep-error."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .classifier import TrainingConfig, build_gesture_cnn, evaluate, history_line, train
from .dataset import DatasetIndex, WindowSet, split_by_subject
from .errors import ConfigError
from .gestures import GESTURE_LABELS
from .nn import load_params_file, save_params_file
from .recordio import load_record_file, load_stream_record, save_record_file
from .stream import PipelineConfig, bench_inference, cnn_classifier, run_stream
from .synthetic import make_synth_spec, synth_dataset
from .voting import sweep_error_report

_TRAIN_SCHEMA = {
    "learning_rate": float,
    "beta1": float,
    "beta2": float,
    "epsilon": float,
    "batch_size": int,
    "epochs": int,
    "dropout_rate": float,
    "seed": int,
}

_SYNTH_SCHEMA = {
    "subjects": int,
    "gestures": int,
    "repetitions": int,
    "duration": float,
    "sample_rate": int,
    "channels": int,
    "noise": float,
    "seed": int,
}


def parse_config(text: str, schema: dict[str, type]) -> dict:
    """Line-oriented key=value parser; unknown keys are hard errors."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in schema:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        try:
            values[key] = schema[key](value.strip())
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: {key}: {exc}") from exc
    return values


def _load_dataset(data_dir: str) -> DatasetIndex:
    paths = sorted(Path(data_dir).glob("*.emg1")) + sorted(Path(data_dir).glob("*.csv"))
    if not paths:
        raise FileNotFoundError(f"no .emg1 or .csv records under {data_dir}")
    return DatasetIndex(load_record_file(p) for p in paths)


def _add_network_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--conv-filters", type=int, default=512)
    p.add_argument("--dense-units", type=int, default=64)
    p.add_argument("--num-classes", type=int, default=15)
    p.add_argument("--window-len", type=int, default=200)
    p.add_argument("--channels", type=int, default=8)
    p.add_argument("--dropout", type=float, default=0.5)


def _network_from_flags(args) -> "NetworkSpec":
    return build_gesture_cnn(
        window_len=args.window_len,
        channels=args.channels,
        conv_filters=args.conv_filters,
        dense_units=args.dense_units,
        num_classes=args.num_classes,
        dropout_rate=args.dropout,
    )


def _cmd_synth(args) -> int:
    overrides = parse_config(Path(args.spec).read_text(), _SYNTH_SCHEMA) if args.spec else {}
    spec = make_synth_spec(**overrides)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    index = synth_dataset(spec)
    for rec in index:
        name = f"s{rec.meta.subject_id:02d}_g{rec.meta.gesture:02d}_r{rec.meta.repetition}.emg1"
        save_record_file(rec, out / name)
    print(
        f"wrote {len(index)} records ({spec.subjects} subjects x {spec.gestures} "
        f"gestures x {spec.repetitions} reps, {spec.sample_rate} Hz) to {out}"
    )
    return 0


def _cmd_train(args) -> int:
    overrides = parse_config(Path(args.config).read_text(), _TRAIN_SCHEMA) if args.config else {}
    config = TrainingConfig(**overrides)
    index = _load_dataset(args.data)
    num_classes = max(index.gestures) + 1
    spec = build_gesture_cnn(
        window_len=args.window_len,
        channels=index.channels,
        conv_filters=args.conv_filters,
        dense_units=args.dense_units,
        num_classes=num_classes,
        dropout_rate=config.dropout_rate,
    )
    test_subjects = (
        {int(s) for s in args.test_subjects.split(",")} if args.test_subjects else None
    )
    train_set, val_set, _ = split_by_subject(
        index,
        test_subjects=test_subjects,
        val_repetition=args.val_repetition,
        window_len=args.window_len,
        stride=args.stride,
    )
    params, _ = train(
        spec, train_set, val_set, config, on_epoch=lambda s: print(history_line(s), flush=True)
    )
    save_params_file(spec, params, args.out)
    print(f"saved weights to {args.out}")
    return 0


def _cmd_eval(args) -> int:
    index = _load_dataset(args.data)
    spec = _network_from_flags(args)
    params = load_params_file(args.weights, spec)
    windows = WindowSet(list(index), window_len=args.window_len, stride=args.stride)
    metrics = evaluate(spec, params, windows)
    print(f"accuracy,{metrics.accuracy:.6f},windows,{len(windows)}")
    print("confusion rows = true class, columns = predicted class")
    for i, row in enumerate(metrics.confusion):
        name = GESTURE_LABELS[i] if i < len(GESTURE_LABELS) else str(i)
        print(f"{name:>20} " + " ".join(f"{v:6d}" for v in row))
    return 0


def _cmd_stream(args) -> int:
    spec = _network_from_flags(args)
    params = load_params_file(args.weights, spec)
    if args.infile == "-":
        record = load_stream_record(sys.stdin.buffer.read())
    else:
        record = load_record_file(args.infile)
    config = PipelineConfig(
        window_len=args.window_len,
        fifo_capacity=args.fifo,
        rate=args.rate,
    )
    frames, stats = run_stream(config, record, cnn_classifier(spec, params), paced=args.paced)
    lines = "".join(f">{frame.hex().upper()}\n" for frame in frames)
    if args.out == "-":
        sys.stdout.write(lines)
    else:
        Path(args.out).write_text(lines)
    print(stats.line())
    return 0


def _cmd_bench(args) -> int:
    spec = _network_from_flags(args)
    params = load_params_file(args.weights, spec)
    stats = bench_inference(spec, params, iterations=args.iters, threads=args.threads)
    print(stats.line())
    return 0


def _cmd_sweep_error(args) -> int:
    for line in sweep_error_report(args.rho, args.nmax, trials=args.trials, seed=args.seed):
        print(line)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="emgctl",
        description="Raw-EMG gesture recognition and prosthetic hand command pipeline",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic EMG dataset as EMG1 files")
    p.add_argument("--spec", help="key=value synthesis spec file")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(fn=_cmd_synth)

    p = sub.add_parser("train", help="train the gesture CNN on a record directory")
    p.add_argument("--data", required=True)
    p.add_argument("--config", help="key=value training config file")
    p.add_argument("--out", required=True, help="weights output path (.emgw)")
    p.add_argument("--conv-filters", type=int, default=512)
    p.add_argument("--dense-units", type=int, default=64)
    p.add_argument("--window-len", type=int, default=200)
    p.add_argument("--stride", type=int, default=20, help="training window stride in samples")
    p.add_argument("--val-repetition", type=int, default=2)
    p.add_argument("--test-subjects", help="comma-separated subject ids held out for test")
    p.set_defaults(fn=_cmd_train)

    p = sub.add_parser("eval", help="accuracy + confusion matrix of saved weights")
    p.add_argument("--data", required=True)
    p.add_argument("--weights", required=True)
    p.add_argument("--stride", type=int, default=20)
    _add_network_flags(p)
    p.set_defaults(fn=_cmd_eval)

    p = sub.add_parser("stream", help="run the signal->command pipeline over a record")
    p.add_argument("--weights", required=True)
    p.add_argument("--in", dest="infile", required=True, help="record path or - for stdin")
    p.add_argument("--out", default="-", help="command sink path or - for stdout")
    p.add_argument("--fifo", type=int, default=5)
    p.add_argument("--rate", type=int, default=10)
    p.add_argument("--paced", action="store_true", help="skip stale windows after overruns")
    _add_network_flags(p)
    p.set_defaults(fn=_cmd_stream)

    p = sub.add_parser("bench", help="inference latency benchmark")
    p.add_argument("--weights", required=True)
    p.add_argument("--iters", type=int, required=True)
    p.add_argument("--threads", type=int)
    _add_network_flags(p)
    p.set_defaults(fn=_cmd_bench)

    p = sub.add_parser("sweep-error", help="FIFO size vs error-rate report")
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_sweep_error)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
