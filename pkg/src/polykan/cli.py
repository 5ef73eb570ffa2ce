"""Command-line entry point: train, eval, basis-dump, and bench.

Exit codes: 0 success, 2 flag/parameter errors, 3 data errors (unreadable or
malformed files, shape mismatches), 4 numeric failure (non-finite loss).
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from . import records
from .basis import eval_basis_many
from .data import CountMismatchError, Dataset, IdxFormatError, load_dataset, subset
from .families import (
    FAMILY_NAMES,
    FamilySpec,
    InvalidParameterError,
    UnknownFamilyError,
    family_spec_from_params,
    parse_param_value,
)
from .kan import ShapeMismatchError, init_network
from .records import CheckpointError
from .train import NonFiniteLossError, TrainConfig, evaluate, fit

EXIT_OK = 0
EXIT_FLAGS = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4

INPUT_WIDTH = 784
OUTPUT_CLASSES = 10


class _CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _parse_params(pairs) -> dict:
    params = {}
    for pair in pairs or ():
        if "=" not in pair:
            raise _CliError(EXIT_FLAGS, f"--param expects key=value, got {pair!r}")
        key, _, value = pair.partition("=")
        try:
            params[key.strip()] = parse_param_value(value)
        except InvalidParameterError as exc:
            raise _CliError(EXIT_FLAGS, str(exc))
    return params


def _spec_from_flags(family: str, param_pairs) -> FamilySpec:
    try:
        return family_spec_from_params(family, _parse_params(param_pairs))
    except (UnknownFamilyError, InvalidParameterError) as exc:
        raise _CliError(EXIT_FLAGS, str(exc))


def _load_split(images, labels, name) -> Dataset:
    try:
        return load_dataset(images, labels, name=name)
    except (IdxFormatError, CountMismatchError, OSError) as exc:
        raise _CliError(EXIT_DATA, f"cannot load {name} data: {exc}")


def _hidden_dims(text: str) -> tuple[int, ...]:
    try:
        dims = tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise _CliError(EXIT_FLAGS, f"--hidden expects a comma list of ints, got {text!r}")
    if not dims or any(d < 1 for d in dims):
        raise _CliError(EXIT_FLAGS, f"--hidden widths must be >= 1, got {text!r}")
    return dims


def _train_config(args) -> TrainConfig:
    try:
        return TrainConfig(
            epochs=args.epochs,
            batch_size=args.batch,
            learning_rate=args.lr,
            seed=args.seed,
        )
    except ValueError as exc:
        raise _CliError(EXIT_FLAGS, str(exc))


def _prepare_splits(args):
    train_ds = _load_split(args.train_images, args.train_labels, "train")
    test_ds = _load_split(args.test_images, args.test_labels, "test")
    try:
        if args.limit_train:
            train_ds = subset(train_ds, args.limit_train, args.seed)
        if args.limit_test:
            test_ds = subset(test_ds, args.limit_test, args.seed + 1)
    except ValueError as exc:
        raise _CliError(EXIT_DATA, str(exc))
    return train_ds, test_ds


def _add_data_flags(sub) -> None:
    sub.add_argument("--train-images", required=True)
    sub.add_argument("--train-labels", required=True)
    sub.add_argument("--test-images", required=True)
    sub.add_argument("--test-labels", required=True)
    sub.add_argument("--hidden", default="32", help="comma list of hidden widths")
    sub.add_argument("--degree", type=int, default=3)
    sub.add_argument("--epochs", type=int, default=5)
    sub.add_argument("--batch", type=int, default=64)
    sub.add_argument("--lr", type=float, default=1e-3)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--limit-train", type=int, default=0,
                     help="train on a seeded subset of this size (seed = --seed)")
    sub.add_argument("--limit-test", type=int, default=0,
                     help="test on a seeded subset of this size (seed = --seed + 1)")


def cmd_train(args) -> int:
    spec = _spec_from_flags(args.family, args.param)
    hidden = _hidden_dims(args.hidden)
    cfg = _train_config(args)
    train_ds, test_ds = _prepare_splits(args)
    dims = (INPUT_WIDTH, *hidden, OUTPUT_CLASSES)
    if args.degree < 0:
        raise _CliError(EXIT_FLAGS, f"--degree must be >= 0, got {args.degree}")
    net = init_network(spec, dims, args.degree, args.seed)
    started = time.perf_counter()
    try:
        net, history = fit(net, train_ds, cfg)
    except NonFiniteLossError as exc:
        raise _CliError(EXIT_NUMERIC, str(exc))
    wall = time.perf_counter() - started
    run_metrics = evaluate(net, test_ds)
    records.save_checkpoint(args.out, net)
    doc = records.run_record(
        net,
        run_metrics,
        kind="train",
        cfg=cfg,
        train_samples=len(train_ds),
        test_samples=len(test_ds),
        epoch_mean_loss=[h.mean_loss for h in history],
    )
    records.write_document(args.metrics_out, doc)
    print(
        f"{spec.family}: accuracy={run_metrics.overall_accuracy:.4f} "
        f"kappa={run_metrics.kappa:.4f} f1={run_metrics.f1_micro:.4f} "
        f"params={net.parameter_count} train_seconds={wall:.2f}"
    )
    return EXIT_OK


def cmd_eval(args) -> int:
    try:
        net = records.load_checkpoint(args.model)
    except CheckpointError as exc:
        raise _CliError(EXIT_DATA, str(exc))
    dataset = _load_split(args.images, args.labels, "eval")
    if dataset.features.shape[1] != net.dims[0]:
        raise _CliError(
            EXIT_DATA,
            f"checkpoint input width {net.dims[0]} != data width {dataset.features.shape[1]}",
        )
    try:
        run_metrics = evaluate(net, dataset)
    except ShapeMismatchError as exc:
        raise _CliError(EXIT_DATA, str(exc))
    doc = records.run_record(net, run_metrics, kind="eval", test_samples=len(dataset))
    records.write_document(args.metrics_out, doc)
    print(
        f"{net.spec.family}: accuracy={run_metrics.overall_accuracy:.4f} "
        f"kappa={run_metrics.kappa:.4f} f1={run_metrics.f1_micro:.4f}"
    )
    return EXIT_OK


def _parse_range(text: str) -> tuple[float, float]:
    try:
        lo_text, _, hi_text = text.partition(":")
        lo, hi = float(lo_text), float(hi_text)
    except ValueError:
        raise _CliError(EXIT_FLAGS, f"--range expects lo:hi, got {text!r}")
    if not lo < hi:
        raise _CliError(EXIT_FLAGS, f"--range requires lo < hi, got {text!r}")
    return lo, hi


def cmd_basis_dump(args) -> int:
    lo, hi = _parse_range(args.range)
    if args.samples < 2:
        raise _CliError(EXIT_FLAGS, f"--samples must be >= 2, got {args.samples}")
    if args.max_degree < 0:
        raise _CliError(EXIT_FLAGS, f"--max-degree must be >= 0, got {args.max_degree}")
    grid = np.linspace(lo, hi, args.samples)
    if args.family == "all":
        if args.param:
            raise _CliError(EXIT_FLAGS, "--param cannot be combined with --family all")
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        for name in FAMILY_NAMES:
            spec = _spec_from_flags(name, None)
            values, _ = eval_basis_many(spec, args.max_degree, grid)
            records.write_basis_csv(out_dir / f"{name}.csv", grid, values)
            print(f"{name}: wrote {out_dir / (name + '.csv')}")
        return EXIT_OK
    spec = _spec_from_flags(args.family, args.param)
    values, _ = eval_basis_many(spec, args.max_degree, grid)
    records.write_basis_csv(args.out, grid, values)
    print(f"{spec.family}: wrote {args.out}")
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.families.strip() == "all":
        names = list(FAMILY_NAMES)
    else:
        names = [part.strip() for part in args.families.split(",") if part.strip()]
        for name in names:
            if name not in FAMILY_NAMES:
                raise _CliError(
                    EXIT_FLAGS,
                    f"unknown family {name!r}; valid names: {', '.join(FAMILY_NAMES)}",
                )
    hidden = _hidden_dims(args.hidden)
    cfg = _train_config(args)
    train_ds, test_ds = _prepare_splits(args)
    dims = (INPUT_WIDTH, *hidden, OUTPUT_CLASSES)
    rows = []
    for name in names:
        spec = _spec_from_flags(name, None)
        net = init_network(spec, dims, args.degree, args.seed)
        started = time.perf_counter()
        try:
            net, _ = fit(net, train_ds, cfg)
            wall = time.perf_counter() - started
            run_metrics = evaluate(net, test_ds)
            row = {
                "family": name,
                "params": records.params_summary(spec.params),
                "status": "ok",
                "accuracy": records.fmt_float(run_metrics.overall_accuracy),
                "kappa": records.fmt_float(run_metrics.kappa),
                "f1_micro": records.fmt_float(run_metrics.f1_micro),
                "f1_macro": records.fmt_float(run_metrics.f1_macro),
                "parameter_count": net.parameter_count,
                "train_seconds": records.fmt_float(wall),
            }
            print(
                f"{name}: accuracy={run_metrics.overall_accuracy:.4f} "
                f"params={net.parameter_count} train_seconds={wall:.2f}"
            )
        except NonFiniteLossError:
            row = {
                "family": name,
                "params": records.params_summary(spec.params),
                "status": "failed",
                "accuracy": "",
                "kappa": "",
                "f1_micro": "",
                "f1_macro": "",
                "parameter_count": net.parameter_count,
                "train_seconds": "",
            }
            print(f"{name}: failed (non-finite loss)", file=sys.stderr)
        rows.append(row)
    records.write_bench_csv(args.out, rows)
    print(f"wrote {args.out} ({len(rows)} rows)")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polykan",
        description="Train and probe KAN classifiers over 18 polynomial bases.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="train one family on MNIST IDX files")
    p_train.add_argument("--family", required=True)
    p_train.add_argument("--param", action="append", metavar="KEY=VALUE")
    _add_data_flags(p_train)
    p_train.add_argument("--out", default="kan-checkpoint.json")
    p_train.add_argument("--metrics-out", default="kan-metrics.json")
    p_train.set_defaults(func=cmd_train)

    p_eval = sub.add_parser("eval", help="recompute metrics from a checkpoint")
    p_eval.add_argument("--model", required=True)
    p_eval.add_argument("--images", required=True)
    p_eval.add_argument("--labels", required=True)
    p_eval.add_argument("--metrics-out", default="kan-eval-metrics.json")
    p_eval.set_defaults(func=cmd_eval)

    p_dump = sub.add_parser("basis-dump", help="CSV of basis values over a grid")
    p_dump.add_argument("--family", required=True, help="family name or 'all'")
    p_dump.add_argument("--param", action="append", metavar="KEY=VALUE")
    p_dump.add_argument("--max-degree", type=int, default=4)
    p_dump.add_argument("--range", default="-5:5", metavar="LO:HI")
    p_dump.add_argument("--samples", type=int, default=200)
    p_dump.add_argument("--out", required=True)
    p_dump.set_defaults(func=cmd_basis_dump)

    p_bench = sub.add_parser("bench", help="train many families with one config")
    p_bench.add_argument("--families", default="all", help="'all' or comma list")
    _add_data_flags(p_bench)
    p_bench.add_argument("--out", default="bench.csv")
    p_bench.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
