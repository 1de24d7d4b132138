"""Command-line front end.

Subcommands:

* ``simulate``  write train/tune/test CSVs for a stock synthetic example,
  with true-probability sidecars and a metadata file.
* ``fit``       fit a penalized model, optionally tuning lambda on the
  2^-10..2^10 grid against a hold-out file or by cross validation.
* ``predict``   write predicted class indices for a feature file.
* ``prob``      write the n x k estimated probability matrix; accepts both
  plain and refit model documents.
* ``refit``     fit stage 1 plus the unpenalized stage 2 and save both.
* ``bench``     replicate the evaluation protocol on a synthetic example
  (hold-out tuning, error + MAD) or a real CSV (6-way split, 4-fold CV,
  error + CRE) and write a report CSV.

Exit codes: 0 success, 1 runtime or data error, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .datagen import DEFAULT_TEST_SIZE, example_spec, generate
from .dataio import (
    load_csv,
    load_feature_csv,
    load_model,
    save_csv,
    save_model,
    save_probabilities,
)
from .datasets import LabeledDataset
from .errors import AngleKitError
from .linear_model import FitConfig, LinearAngleModel, fit
from .losses import get_loss, known_losses
from .metrics import cre, error_rate, mad, nll
from .probability import probability_matrix
from .refit import RefitModel, refit_from_stage1
from .simplex import simplex_vertices
from .tuning import cv_select, select_holdout, split_six
from .util import subseed

REPORT_COLUMNS = [
    "method",
    "replicate",
    "lambda_selected",
    "error",
    "error_pct",
    "mad",
    "mad_x100",
    "cre",
    "cre_x100",
    "nll",
    "stage2_converged",
]

DEFAULT_PENALTY = "l2"
DEFAULT_LOSSES = ("soft", "logistic")


def _fmt_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    return format(float(value), ".17g")


def _metric_row(method, replicate, lam, error, mad_value, cre_value, nll_value, stage2):
    return {
        "method": method,
        "replicate": replicate,
        "lambda_selected": lam,
        "error": error,
        "error_pct": None if error is None else 100.0 * error,
        "mad": mad_value,
        "mad_x100": None if mad_value is None else 100.0 * mad_value,
        "cre": cre_value,
        "cre_x100": None if cre_value is None else 100.0 * cre_value,
        "nll": nll_value,
        "stage2_converged": stage2,
    }


def _evaluate_pair(stage1: LinearAngleModel, refit_model: RefitModel, test: LabeledDataset,
                   loss_id: str, lam: float, replicate: int):
    """Report rows for one tuned stage-1 model and its refit on a test set."""
    loss = get_loss(loss_id)
    code = simplex_vertices(stage1.k)
    rows = []

    scores1 = np.atleast_2d(stage1.decision_values(test.X)) @ code.vertices.T
    probs1 = probability_matrix(scores1, loss)
    pred1 = np.argmax(scores1, axis=1) + 1
    mad1 = None if test.true_probs is None else mad(test.true_probs, probs1)
    rows.append(_metric_row(loss_id, replicate, lam, error_rate(pred1, test.y),
                            mad1, cre(probs1, test.y), nll(probs1, test.y), None))

    scores2 = np.atleast_2d(refit_model.scores(test.X))
    probs2 = probability_matrix(scores2, loss)
    pred2 = np.argmax(scores2, axis=1) + 1
    mad2 = None if test.true_probs is None else mad(test.true_probs, probs2)
    rows.append(_metric_row(f"refit_{loss_id}", replicate, lam, error_rate(pred2, test.y),
                            mad2, cre(probs2, test.y), nll(probs2, test.y),
                            refit_model.diagnostics.stage2_converged))
    return rows


def _simulated_replicate(args_tuple):
    example_id, losses, penalty, standardize, n_train, n_tune, n_test, seed, replicate = args_tuple
    spec = example_spec(example_id)
    train = generate(spec, n_train, subseed(seed, replicate, 0))
    tune = generate(spec, n_tune, subseed(seed, replicate, 1))
    test = generate(spec, n_test, subseed(seed, replicate, 2))
    code = simplex_vertices(spec.k)
    rows = []
    for loss_id in losses:
        base = FitConfig(loss_id=loss_id, penalty=penalty, standardize=standardize)
        result = select_holdout(train, tune, base, code)
        stage1 = fit(train, replace(base, lambda_=result.selected_lambda), code)
        refit_model = refit_from_stage1(stage1, train, code)
        rows += _evaluate_pair(stage1, refit_model, test, loss_id,
                               result.selected_lambda, replicate)
    return rows


def _real_replicate(args_tuple):
    data, losses, penalty, standardize, folds, seed, replicate = args_tuple
    test_part = replicate % 6 + 1
    train, test = split_six(data, test_part, subseed(seed, replicate, 0))
    k = int(data.y.max())
    code = simplex_vertices(k)
    rows = []
    for loss_id in losses:
        base = FitConfig(loss_id=loss_id, penalty=penalty, standardize=standardize)
        result = cv_select(train, base, code, folds=folds, seed=subseed(seed, replicate, 1))
        stage1 = fit(train, replace(base, lambda_=result.selected_lambda), code)
        refit_model = refit_from_stage1(stage1, train, code)
        rows += _evaluate_pair(stage1, refit_model, test, loss_id,
                               result.selected_lambda, replicate)
    return rows


def _run_replicates(task, arg_tuples, jobs: int):
    # one failed replicate is reported and skipped, never fatal
    candidates = []
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(task, args_tuple) for args_tuple in arg_tuples]
            for future in futures:
                try:
                    candidates.append(future.result())
                except AngleKitError as exc:
                    print(f"warning: replicate failed and was skipped: {exc}", file=sys.stderr)
    else:
        for args_tuple in arg_tuples:
            try:
                candidates.append(task(args_tuple))
            except AngleKitError as exc:
                print(f"warning: replicate failed and was skipped: {exc}", file=sys.stderr)
    results = []
    for rows in candidates:
        results.extend(rows)
    return results


def run_simulated_bench(example_id: str, losses, penalty: str, n_train: int, n_tune: int,
                        n_test: int, replicates: int, seed: int, jobs: int = 1,
                        standardize: bool = False):
    """Hold-out-tuned original and refit fits on fresh draws of a stock example.

    The stock examples are benchmarked on their natural feature scale by
    default: their noise coordinates are nearly silent and z-scoring would
    amplify them to unit variance, drowning the signal.
    """
    tasks = [
        (example_id, tuple(losses), penalty, standardize, n_train, n_tune, n_test, seed, rep)
        for rep in range(replicates)
    ]
    rows = _run_replicates(_simulated_replicate, tasks, jobs)
    return rows + aggregate_rows(rows, losses)


def run_real_bench(data: LabeledDataset, losses, penalty: str, replicates: int,
                   folds: int, seed: int, jobs: int = 1, standardize: bool = True):
    """6-way split plus cross-validated tuning on a real dataset.

    Real tabular data defaults to z-scored features; attribute scales are
    typically incomparable.
    """
    tasks = [
        (data, tuple(losses), penalty, standardize, folds, seed, rep)
        for rep in range(replicates)
    ]
    rows = _run_replicates(_real_replicate, tasks, jobs)
    return rows + aggregate_rows(rows, losses)


_AGGREGATE_FIELDS = [
    "lambda_selected", "error", "error_pct", "mad", "mad_x100",
    "cre", "cre_x100", "nll", "stage2_converged",
]


def aggregate_rows(rows, losses):
    """Mean and standard-error rows per method, over successful replicates."""
    out = []
    methods = [name for loss_id in losses for name in (loss_id, f"refit_{loss_id}")]
    for method in methods:
        group = [r for r in rows if r["method"] == method]
        if not group:
            continue
        for stat in ("mean", "se"):
            agg = {"method": method, "replicate": stat}
            for field in _AGGREGATE_FIELDS:
                values = [float(r[field]) for r in group if r[field] is not None]
                if not values:
                    agg[field] = None
                elif stat == "mean":
                    agg[field] = float(np.mean(values))
                else:
                    agg[field] = (
                        float(np.std(values, ddof=1) / np.sqrt(len(values)))
                        if len(values) > 1
                        else None
                    )
            out.append(agg)
    return out


def write_report(rows, path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(REPORT_COLUMNS)
        for row in rows:
            writer.writerow([_fmt_cell(row.get(col)) for col in REPORT_COLUMNS])


def mean_metric(rows, method: str, field: str) -> float:
    """Pull one aggregate mean out of a report row list."""
    for row in rows:
        if row["method"] == method and row["replicate"] == "mean":
            value = row[field]
            if value is None:
                raise ValueError(f"aggregate {field} for {method} is empty")
            return float(value)
    raise ValueError(f"no aggregate row for method {method!r}")


# ---------------------------------------------------------------------------
# subcommand handlers


def _load_dataset_arg(args) -> LabeledDataset:
    label: str | int = args.label_column
    if args.label_index is not None:
        label = args.label_index
    return load_csv(args.data, label_column=label, has_header=not args.no_header)


def _load_features_arg(args, path) -> np.ndarray:
    has_header = not args.no_header
    if has_header:
        with Path(path).open(newline="", encoding="utf-8") as fh:
            header = next(csv.reader(fh), [])
        names = [c.strip() for c in header]
        if args.label_column in names:
            data = load_csv(path, label_column=args.label_column, has_header=True)
            return data.X
    if args.label_index is not None:
        data = load_csv(path, label_column=args.label_index, has_header=has_header)
        return data.X
    return load_feature_csv(path, has_header=has_header)


def _tuned_config(args, train: LabeledDataset, code) -> tuple[FitConfig, object]:
    base = FitConfig(loss_id=args.loss, penalty=args.penalty, seed=args.seed,
                     standardize=not args.no_standardize)
    if not args.tune_grid:
        if args.lambda_ is None:
            raise ValueError("either --lambda or --tune-grid is required")
        return replace(base, lambda_=args.lambda_), None
    if args.tune_data:
        tune = load_csv(args.tune_data, label_column=args.label_column,
                        has_header=not args.no_header)
        result = select_holdout(train, tune, base, code)
    else:
        result = cv_select(train, base, code, folds=args.cv_folds, seed=args.seed)
    return replace(base, lambda_=result.selected_lambda), result


def _write_tuning_trace(result, path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["lambda", "error"])
        for lam, err in result.trace_rows():
            writer.writerow([_fmt_cell(lam), _fmt_cell(err)])
        writer.writerow([f"selected={_fmt_cell(result.selected_lambda)}",
                         f"by={result.selected_by}"])


def _report_tuning(result, args) -> None:
    if result is None:
        return
    print(f"selected lambda {result.selected_lambda:g} by {result.selected_by}")
    if args.tune_trace:
        _write_tuning_trace(result, args.tune_trace)


def _cmd_simulate(args) -> int:
    spec = example_spec(args.example)
    n_test = args.test if args.test is not None else DEFAULT_TEST_SIZE[args.example]
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    sizes = {"train": args.train, "tune": args.tune, "test": n_test}
    for stream, (name, n) in enumerate(sizes.items()):
        data = generate(spec, n, subseed(args.seed, stream))
        save_csv(data, outdir / f"{name}.csv")
        save_probabilities(outdir / f"{name}_probs.csv", data.true_probs)
    metadata = {
        "example": spec.example_id,
        "k": spec.k,
        "p": spec.p,
        "sizes": sizes,
        "seed": args.seed,
        "signal_sd": list(spec.signal_sd),
        "noise_sd": spec.noise_sd,
        "noise_variance_reading": "second normal parameter read as variance",
        "signal_sd_reading": "stated spread of 2 adopted as a standard deviation",
        "version": __version__,
    }
    (outdir / "metadata.json").write_text(json.dumps(metadata, indent=2), encoding="utf-8")
    print(f"wrote {', '.join(sizes)} under {outdir}")
    return 0


def _cmd_fit(args) -> int:
    train = _load_dataset_arg(args)
    code = simplex_vertices(int(train.y.max()))
    config, result = _tuned_config(args, train, code)
    model = fit(train, config, code)
    save_model(model, args.out)
    _report_tuning(result, args)
    print(f"fit {model.loss_id}/{model.penalty} lambda={model.lambda_:g} "
          f"converged={model.diagnostics.converged} -> {args.out}")
    return 0


def _cmd_refit(args) -> int:
    train = _load_dataset_arg(args)
    code = simplex_vertices(int(train.y.max()))
    config, result = _tuned_config(args, train, code)
    stage1 = fit(train, config, code)
    model = refit_from_stage1(stage1, train, code)
    save_model(model, args.out)
    _report_tuning(result, args)
    print(f"refit {model.loss_id} lambda={stage1.lambda_:g} "
          f"stage2_converged={model.diagnostics.stage2_converged} -> {args.out}")
    return 0


def _cmd_predict(args) -> int:
    model = load_model(args.model)
    X = _load_features_arg(args, args.data)
    labels = np.atleast_1d(model.predict(X))
    with Path(args.out).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["label"])
        for label in labels:
            writer.writerow([int(label)])
    print(f"wrote {labels.size} predictions -> {args.out}")
    return 0


def _cmd_prob(args) -> int:
    model = load_model(args.model)
    X = _load_features_arg(args, args.data)
    if isinstance(model, RefitModel):
        probs = model.probabilities(X)
    else:
        scores = np.atleast_2d(model.scores(X))
        probs = probability_matrix(scores, get_loss(model.loss_id))
    save_probabilities(args.out, probs)
    print(f"wrote {probs.shape[0]}x{probs.shape[1]} probabilities -> {args.out}")
    return 0


def _cmd_bench(args) -> int:
    losses = [l.strip() for l in args.losses.split(",") if l.strip()]
    for loss_id in losses:
        get_loss(loss_id)
    if args.example:
        standardize = {"auto": False, "on": True, "off": False}[args.standardize]
        n_test = args.test if args.test is not None else 3000
        rows = run_simulated_bench(args.example, losses, args.penalty, args.train,
                                   args.tune, n_test, args.replicates, args.seed,
                                   jobs=args.jobs, standardize=standardize)
        source = {"example": args.example, "standardize": standardize,
                  "sizes": {"train": args.train, "tune": args.tune, "test": n_test}}
    else:
        standardize = {"auto": True, "on": True, "off": False}[args.standardize]
        label: str | int = args.label_column
        if args.label_index is not None:
            label = args.label_index
        data = load_csv(args.data, label_column=label, has_header=not args.no_header)
        rows = run_real_bench(data, losses, args.penalty, args.replicates,
                              args.cv_folds, args.seed, jobs=args.jobs,
                              standardize=standardize)
        source = {"data": str(args.data), "n": data.n, "p": data.p,
                  "k": int(data.y.max()), "cv_folds": args.cv_folds,
                  "standardize": standardize}
    write_report(rows, args.out)
    meta = {
        "command": "bench",
        "source": source,
        "losses": losses,
        "penalty": args.penalty,
        "replicates": args.replicates,
        "seed": args.seed,
        "version": __version__,
    }
    Path(str(args.out) + ".meta.json").write_text(json.dumps(meta, indent=2), encoding="utf-8")
    print(f"wrote report -> {args.out}")
    return 0


def _add_io_options(sub, with_labels: bool = True) -> None:
    sub.add_argument("--no-header", action="store_true",
                     help="the CSV has no header row")
    if with_labels:
        sub.add_argument("--label-column", default="label",
                         help="label column name (default: label)")
        sub.add_argument("--label-index", type=int, default=None,
                         help="label column as a 0-based index (overrides --label-column)")


def _add_fit_options(sub) -> None:
    sub.add_argument("--loss", default="logistic", choices=known_losses())
    sub.add_argument("--penalty", default=DEFAULT_PENALTY, choices=("none", "l1", "l2"))
    sub.add_argument("--lambda", dest="lambda_", type=float, default=None,
                     help="penalty weight; mutually exclusive with --tune-grid")
    sub.add_argument("--tune-grid", action="store_true",
                     help="select lambda over the 2^-10..2^10 grid")
    sub.add_argument("--tune-data", default=None,
                     help="hold-out CSV for grid selection (default: cross validation)")
    sub.add_argument("--cv-folds", type=int, default=4)
    sub.add_argument("--tune-trace", default=None,
                     help="write the (lambda, error) tuning trace to this CSV")
    sub.add_argument("--no-standardize", action="store_true",
                     help="fit on raw features instead of z-scored ones")
    sub.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="anglekit",
        description="Angle-based multicategory classification with probability refit.",
    )
    parser.add_argument("--version", action="version", version=f"anglekit {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    sim = commands.add_parser("simulate", help="write synthetic benchmark CSVs")
    sim.add_argument("--example", required=True, choices=("ex1", "ex2"))
    sim.add_argument("--train", type=int, default=300)
    sim.add_argument("--tune", type=int, default=300)
    sim.add_argument("--test", type=int, default=None,
                     help="test size (default: the example's stock size)")
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--out", default="simdata")
    sim.set_defaults(handler=_cmd_simulate)

    fit_cmd = commands.add_parser("fit", help="fit a penalized linear model")
    fit_cmd.add_argument("--data", required=True)
    _add_io_options(fit_cmd)
    _add_fit_options(fit_cmd)
    fit_cmd.add_argument("--out", required=True, help="model document path")
    fit_cmd.set_defaults(handler=_cmd_fit)

    refit_cmd = commands.add_parser("refit", help="fit stage 1 plus the unpenalized stage 2")
    refit_cmd.add_argument("--data", required=True)
    _add_io_options(refit_cmd)
    _add_fit_options(refit_cmd)
    refit_cmd.add_argument("--out", required=True)
    refit_cmd.set_defaults(handler=_cmd_refit)

    pred = commands.add_parser("predict", help="write predicted class indices")
    pred.add_argument("--model", required=True)
    pred.add_argument("--data", required=True)
    _add_io_options(pred)
    pred.add_argument("--out", required=True)
    pred.set_defaults(handler=_cmd_predict)

    prob = commands.add_parser("prob", help="write estimated class probabilities")
    prob.add_argument("--model", required=True)
    prob.add_argument("--data", required=True)
    _add_io_options(prob)
    prob.add_argument("--out", required=True)
    prob.set_defaults(handler=_cmd_prob)

    bench = commands.add_parser("bench", help="replicate the evaluation protocol")
    source = bench.add_mutually_exclusive_group(required=True)
    source.add_argument("--example", choices=("ex1", "ex2"))
    source.add_argument("--data")
    _add_io_options(bench)
    bench.add_argument("--losses", default=",".join(DEFAULT_LOSSES),
                       help="comma-separated loss identifiers")
    bench.add_argument("--penalty", default=DEFAULT_PENALTY, choices=("none", "l1", "l2"))
    bench.add_argument("--standardize", choices=("auto", "on", "off"), default="auto",
                       help="z-score features (auto: off for examples, on for CSV data)")
    bench.add_argument("--train", type=int, default=300)
    bench.add_argument("--tune", type=int, default=300)
    bench.add_argument("--test", type=int, default=None)
    bench.add_argument("--cv-folds", type=int, default=4)
    bench.add_argument("--replicates", type=int, default=10)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--jobs", type=int, default=1,
                       help="replicates to run concurrently")
    bench.add_argument("--out", default="report.csv")
    bench.set_defaults(handler=_cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.handler(args)
    except (AngleKitError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
