"""Command-line surface.

Subcommands: ``fit``, ``predict``, ``rank``, ``refine``, ``bench-friedman``,
``bench-real``.  Machine-readable JSON goes to ``--out`` when given and to
stdout otherwise; human-readable summaries go to stderr so stdout stays
parseable.  Identical configuration and seed produce byte-identical JSON.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 numerical
failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import bench
from .basis import BasisKind
from .datasets import (
    Dataset,
    FriedmanSpec,
    Normalization,
    SplitPlan,
    apply_normalization,
    friedman_sample,
    load_csv,
    normalize,
    rng_stream,
    split,
)
from .errors import ConfigError, DataError, NumericalError
from .model import (
    RefinementConfig,
    analyze,
    drop_variables,
    fit,
    incremental_expand,
    load_model,
    model_from_obj,
    model_to_obj,
    mse,
    predict,
    relative_error,
    rmse,
    threshold_active_set,
)
from .plots import svg_bar_chart, write_svg
from .solver import SolverConfig
from .terms import (
    BandwidthProfile,
    load_termset,
    save_termset,
    superposition_terms,
)


def _dump_json(obj, out_path: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _note(message: str) -> None:
    print(message, file=sys.stderr)


def _parse_int_list(text: str, flag: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise ConfigError(f"{flag} expects comma-separated integers, got {text!r}") from None


def _parse_float_list(text: str, flag: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise ConfigError(f"{flag} expects comma-separated numbers, got {text!r}") from None


def _solver_config(args) -> SolverConfig:
    try:
        return SolverConfig(
            regularization=args.lam,
            max_iterations=args.max_iter,
            tolerance=args.tol,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _split_plan(text: str | None, *, synthetic: bool, seed: int) -> SplitPlan:
    """Parse ``--split``: a fraction like ``0.7`` or sizes like ``200:1000``."""
    if text is None:
        text = "200:1000" if synthetic else "0.7"
    if ":" in text:
        parts = _parse_int_list(text.replace(":", ","), "--split")
        if len(parts) != 2:
            raise ConfigError(f"--split sizes must look like M_train:M_test, got {text!r}")
        if not synthetic:
            raise ConfigError("size-based splits only apply to synthetic generators")
        return SplitPlan(train_size=parts[0], test_size=parts[1], seed=seed)
    try:
        fraction = float(text)
    except ValueError:
        raise ConfigError(f"--split expects a fraction or M_train:M_test, got {text!r}") from None
    if synthetic:
        raise ConfigError("fraction splits need a concrete dataset; use M_train:M_test")
    return SplitPlan(train_fraction=fraction, seed=seed)


def _load_train_test(args) -> tuple[Dataset, Dataset]:
    if (args.friedman is None) == (args.csv is None):
        raise ConfigError("select exactly one data source: --friedman or --csv")
    if args.friedman is not None:
        spec = FriedmanSpec(args.friedman)
        plan = _split_plan(args.split, synthetic=True, seed=args.seed)
        train = friedman_sample(spec, plan.train_size, rng_stream(args.seed, 0, "train"))
        test = friedman_sample(spec, plan.test_size, rng_stream(args.seed, 0, "test"))
        return train, test
    if args.target is None:
        raise ConfigError("--csv needs --target naming the target column")
    ds = load_csv(args.csv, args.target)
    plan = _split_plan(args.split, synthetic=False, seed=args.seed)
    train, test = split(ds, plan, 0)
    if args.normalize or args.normalize_target:
        train = normalize(train, include_target=args.normalize_target)
        test = normalize(test, reference=train, include_target=args.normalize_target)
    return train, test


def _metrics(y_true: np.ndarray, y_pred: np.ndarray) -> dict:
    out = {"mse": mse(y_true, y_pred), "rmse": rmse(y_true, y_pred)}
    if float(np.sum(np.abs(y_true) ** 2)) > 0.0:
        out["relative_error"] = relative_error(y_true, y_pred)
    return out


# --- subcommands -----------------------------------------------------------


def cmd_fit(args) -> int:
    kind = BasisKind.from_token(args.basis)
    config = _solver_config(args)
    train, test = _load_train_test(args)
    if args.terms:
        termset = load_termset(args.terms)
        if termset.dimension != train.dimension:
            raise ConfigError(
                f"term set is over {termset.dimension} variables but the data "
                f"has {train.dimension}"
            )
    elif args.superposition is not None:
        termset = superposition_terms(train.dimension, args.superposition)
    else:
        raise ConfigError("give either --ds or --terms")
    if args.bandwidths is None:
        raise ConfigError("--bandwidths is required")
    bandwidths = BandwidthProfile.from_list(
        _parse_int_list(args.bandwidths, "--bandwidths")
    )
    model = fit(train.nodes, train.targets, termset, bandwidths, kind, config)

    obj = model_to_obj(model)
    if train.normalization is not None:
        stats = train.normalization
        obj["normalization"] = {
            "feature_min": [float(v) for v in stats.feature_min],
            "feature_max": [float(v) for v in stats.feature_max],
            "target_min": stats.target_min,
            "target_max": stats.target_max,
        }
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    Path(args.out).write_text(text, encoding="utf-8")

    report = {
        "model": args.out,
        "coefficients": len(model.coefficients),
        "train_size": train.size,
        "test_size": test.size,
        "oversampling": model.oversampling,
        "iterations": model.iterations,
        "stop_reason": model.stop_reason,
        "metrics": _metrics(test.targets, predict(model, test.nodes)),
    }
    _dump_json(report, args.metrics_out)
    return 0


def _model_file_normalization(obj: dict) -> Normalization | None:
    block = obj.get("normalization")
    if block is None:
        return None
    return Normalization(
        feature_min=np.asarray(block["feature_min"], dtype=np.float64),
        feature_max=np.asarray(block["feature_max"], dtype=np.float64),
        target_min=block.get("target_min"),
        target_max=block.get("target_max"),
    )


def cmd_predict(args) -> int:
    with open(args.model, encoding="utf-8") as fh:
        model_obj = json.load(fh)
    model = model_from_obj(model_obj)
    ds = load_csv(args.csv, args.target)
    stats = _model_file_normalization(model_obj)
    target_normalized = False
    if stats is not None:
        include_target = args.target is not None and stats.target_min is not None
        ds = apply_normalization(ds, stats, include_target=include_target)
        target_normalized = include_target
    predictions = predict(model, ds.nodes)
    out = {"predictions": [float(v) for v in predictions]}
    if args.target is not None:
        out["metrics"] = _metrics(ds.targets, predictions)
        out["target_normalized"] = target_normalized
    _dump_json(out, args.out)
    return 0


def cmd_rank(args) -> int:
    model = load_model(args.model)
    report = analyze(model)
    _dump_json(report.to_json_obj(), args.out)

    lines = ["variable  ranking"]
    for i in range(report.dimension):
        lines.append(f"x{i + 1:<7d} {report.ranking[i]:>10.6f}")
    lines.append("")
    lines.append("term            gsi")
    for term, rho in report.sorted_indices():
        label = "{" + ",".join(str(i) for i in term) + "}"
        lines.append(f"{label:<15s} {rho:>10.6f}")
    _note("\n".join(lines))

    if args.plot_ranking:
        labels = [f"x{i + 1}" for i in range(report.dimension)]
        values = [float(v) for v in report.ranking]
        write_svg(
            args.plot_ranking,
            svg_bar_chart(labels, values, title="attribute ranking"),
        )
    if args.plot_gsi:
        pairs = report.sorted_indices()
        labels = ["{" + ",".join(str(i) for i in u) + "}" for u, _ in pairs]
        values = [float(v) for _, v in pairs]
        write_svg(
            args.plot_gsi,
            svg_bar_chart(labels, values, title="global sensitivity indices"),
        )
    return 0


def cmd_refine(args) -> int:
    if args.gsi_threshold is None and args.drop_below is None and args.expand is None:
        raise ConfigError(
            "nothing to do: give --gsi-threshold, --drop-below and/or --expand"
        )
    if args.expand is not None and args.theta is None:
        raise ConfigError("--expand needs --theta for the ranking threshold")
    model = load_model(args.model)
    report = analyze(model)
    termset = model.terms
    before = set(termset.terms)

    if args.gsi_threshold is not None:
        eps = _parse_float_list(args.gsi_threshold, "--gsi-threshold")
        if len(eps) == 1:
            eps = eps * termset.max_order
        termset = threshold_active_set(report, termset, eps)
    if args.drop_below is not None:
        keep = [
            i
            for i in range(1, report.dimension + 1)
            if report.ranking[i - 1] > args.drop_below
        ]
        if keep:
            termset = drop_variables(termset, keep)
        else:
            _note("notice: no variable exceeds --drop-below; variables unchanged")
    if args.expand is not None:
        config = RefinementConfig(
            ranking_threshold=args.theta, expansion_order=args.expand
        )
        termset = incremental_expand(report, termset, config)

    after = set(termset.terms)
    if before == after:
        _note("notice: refinement left the term set unchanged")
    save_termset(termset, args.out)
    diff = {
        "terms_file": args.out,
        "kept": len(after),
        "added": sorted([list(u) for u in after - before], key=lambda u: (len(u), u)),
        "removed": sorted([list(u) for u in before - after], key=lambda u: (len(u), u)),
    }
    _dump_json(diff, None)
    return 0


def cmd_bench_friedman(args) -> int:
    result = bench.bench_friedman(args.which, args.reps, args.seed)
    baselines = ", ".join(
        f"{name}={value:.4g}" for name, value in result["reference_baselines"].items()
    )
    _note(
        f"friedman {args.which}: median MSE {result['median_mse']:.4g} over "
        f"{args.reps} repetitions (reference {result['reference_median_mse']:.4g}; "
        f"baselines {baselines})"
    )
    _dump_json(result, args.out)
    return 0


def cmd_bench_real(args) -> int:
    preset = bench.REAL_PRESETS.get(args.name)
    if preset is None:
        if args.split is None:
            raise ConfigError(
                f"unknown dataset {args.name!r}: give --split (and other protocol "
                f"flags) or use one of {sorted(bench.REAL_PRESETS)}"
            )
        preset = bench.RealBenchConfig(train_fraction=float(args.split))
    overrides = {}
    if args.split is not None:
        overrides["train_fraction"] = float(args.split)
    if args.superposition is not None:
        overrides["superposition_threshold"] = args.superposition
    if args.bandwidths is not None:
        overrides["bandwidths"] = tuple(_parse_int_list(args.bandwidths, "--bandwidths"))
    if args.lam is not None:
        overrides["regularization"] = args.lam
    if args.gsi_threshold is not None:
        overrides["gsi_cutoff"] = float(args.gsi_threshold)
    if args.metric is not None:
        overrides["metric"] = args.metric
    if args.normalize_target:
        overrides["normalize_targets"] = True
    if args.keep is not None:
        overrides["keep"] = tuple(_parse_int_list(args.keep, "--keep"))
    config = dataclasses.replace(preset, **overrides)

    csv_path = args.csv
    if csv_path is None:
        data_dir = os.environ.get("ANOVA_DATA_DIR")
        if not data_dir:
            raise DataError(
                "no --csv given and ANOVA_DATA_DIR is not set; real datasets are "
                "user-supplied"
            )
        csv_path = str(Path(data_dir) / f"{args.name}.csv")
    if not Path(csv_path).exists():
        raise DataError(f"dataset file not found: {csv_path}")
    if args.target is None:
        with open(csv_path, encoding="utf-8") as fh:
            header = fh.readline().strip().split(",")
        target = header[-1].strip()
    else:
        target = args.target
    ds = load_csv(csv_path, target)

    result = bench.run_real_benchmark(ds, config, args.reps, args.seed)
    result["dataset"] = args.name
    result["target"] = target
    _note(
        f"{args.name}: median {config.metric} {result['median']:.5g} over "
        f"{args.reps} splits ({result['failures']} failures)"
    )
    _dump_json(result, args.out)
    return 0


# --- parser ----------------------------------------------------------------


def _add_solver_flags(parser) -> None:
    parser.add_argument("--lambda", dest="lam", type=float, default=0.0,
                        help="l2 regularization weight (default 0)")
    parser.add_argument("--max-iter", dest="max_iter", type=int, default=None,
                        help="solver iteration cap (default 10x columns)")
    parser.add_argument("--tol", type=float, default=1e-8,
                        help="solver relative tolerance (default 1e-8)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="anovafit",
        description="Interpretable ANOVA approximation of scattered data",
    )
    sub = parser.add_subparsers(dest="command")

    p_fit = sub.add_parser("fit", help="fit a model and report test metrics")
    p_fit.add_argument("--csv", help="CSV data file (with --target)")
    p_fit.add_argument("--target", help="target column name")
    p_fit.add_argument("--friedman", type=int, choices=(1, 2, 3),
                       help="use a synthetic benchmark generator")
    p_fit.add_argument("--terms", help="term set JSON file (from refine)")
    p_fit.add_argument("--ds", dest="superposition", type=int,
                       help="superposition threshold for the initial term set")
    p_fit.add_argument("--basis", default="cos", choices=("per", "cos", "cheb"))
    p_fit.add_argument("--bandwidths", help="comma-separated N per order, e.g. 6,4")
    p_fit.add_argument("--split", help="train fraction (csv) or M_train:M_test (friedman)")
    p_fit.add_argument("--seed", type=int, default=0)
    p_fit.add_argument("--normalize", action="store_true",
                       help="min-max normalize features by training extrema")
    p_fit.add_argument("--normalize-target", action="store_true",
                       help="also normalize the target into [0,1]")
    p_fit.add_argument("--out", required=True, help="model JSON output path")
    p_fit.add_argument("--metrics-out", help="metrics JSON path (default stdout)")
    _add_solver_flags(p_fit)
    p_fit.set_defaults(func=cmd_fit)

    p_pred = sub.add_parser("predict", help="evaluate a saved model on a CSV")
    p_pred.add_argument("--model", required=True)
    p_pred.add_argument("--csv", required=True)
    p_pred.add_argument("--target", help="optional target column for metrics")
    p_pred.add_argument("--out", help="predictions JSON path (default stdout)")
    p_pred.set_defaults(func=cmd_predict)

    p_rank = sub.add_parser("rank", help="sensitivity indices and attribute ranking")
    p_rank.add_argument("--model", required=True)
    p_rank.add_argument("--out", help="report JSON path (default stdout)")
    p_rank.add_argument("--plot-ranking", help="SVG bar chart of the ranking")
    p_rank.add_argument("--plot-gsi", help="SVG bar chart of the indices")
    p_rank.set_defaults(func=cmd_rank)

    p_ref = sub.add_parser("refine", help="derive a refined term set from a model")
    p_ref.add_argument("--model", required=True)
    p_ref.add_argument("--gsi-threshold",
                       help="keep terms with index above this (one value or per order)")
    p_ref.add_argument("--drop-below", type=float,
                       help="drop variables ranked at or below this")
    p_ref.add_argument("--expand", type=int,
                       help="add interactions of highly ranked variables up to this order")
    p_ref.add_argument("--theta", type=float,
                       help="ranking threshold selecting variables for --expand")
    p_ref.add_argument("--out", required=True, help="term set JSON output path")
    p_ref.set_defaults(func=cmd_refine)

    p_bf = sub.add_parser("bench-friedman", help="reproduce a synthetic benchmark")
    p_bf.add_argument("which", type=int, choices=(1, 2, 3))
    p_bf.add_argument("--reps", type=int, default=100)
    p_bf.add_argument("--seed", type=int, default=0)
    p_bf.add_argument("--out", help="summary JSON path (default stdout)")
    p_bf.set_defaults(func=cmd_bench_friedman)

    p_br = sub.add_parser("bench-real", help="repeated-split protocol on a real table")
    p_br.add_argument("name", help=f"dataset name ({', '.join(sorted(bench.REAL_PRESETS))}) or custom")
    p_br.add_argument("--csv", help="CSV path (default $ANOVA_DATA_DIR/<name>.csv)")
    p_br.add_argument("--target", help="target column (default: last column)")
    p_br.add_argument("--reps", type=int, default=100)
    p_br.add_argument("--seed", type=int, default=0)
    p_br.add_argument("--split", help="train fraction override")
    p_br.add_argument("--ds", dest="superposition", type=int)
    p_br.add_argument("--bandwidths")
    p_br.add_argument("--lambda", dest="lam", type=float, default=None)
    p_br.add_argument("--gsi-threshold", type=float)
    p_br.add_argument("--metric", choices=sorted(bench.METRICS))
    p_br.add_argument("--normalize-target", action="store_true")
    p_br.add_argument("--keep", help="comma-separated variable preselection")
    p_br.add_argument("--out", help="summary JSON path (default stdout)")
    p_br.set_defaults(func=cmd_bench_real)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "func"):
        parser.print_help(sys.stderr)
        return 2
    try:
        return args.func(args)
    except ConfigError as exc:
        _note(f"configuration error: {exc}")
        return 2
    except DataError as exc:
        _note(f"data error: {exc}")
        return 3
    except NumericalError as exc:
        _note(f"numerical failure: {exc}")
        return 4
    except OSError as exc:
        _note(f"data error: {exc}")
        return 3
    except ValueError as exc:
        _note(f"error: {exc}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
