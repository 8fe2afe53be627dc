"""Scripted benchmark pipelines.

``bench_friedman`` reruns, per seeded repetition, the staged recipe that
produces the published reference results on the three synthetic benchmark
functions: an initial fit on the order-truncated term set, an attribute
ranking or sensitivity thresholding step that shrinks the active set, and a
final fit whose test error is recorded.  Test targets carry observation
noise exactly like the training targets; the noise-free error against the
underlying function is reported alongside as a diagnostic.

``run_real_benchmark`` implements the generic protocol for real tables:
repeated random splits, min-max normalization by training extrema,
sensitivity thresholding at a cutoff, re-fit, and the median test metric.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .basis import BasisKind
from .datasets import (
    Dataset,
    FriedmanSpec,
    SplitPlan,
    friedman_eval,
    friedman_sample,
    normalize,
    rng_stream,
    split,
)
from .errors import ConfigError, NumericalError
from .model import (
    Model,
    SensitivityReport,
    analyze,
    drop_variables,
    fit,
    gsi,
    mse,
    predict,
    relative_error,
    rmse,
    threshold_active_set,
)
from .solver import SolverConfig
from .terms import BandwidthProfile, TermSet, superposition_terms

TRAIN_SIZE = 200
TEST_SIZE = 1000

# Published reference medians (and the classical baselines quoted for
# context in benchmark output).
REFERENCE_RESULTS = {
    1: {
        "median_mse": 1.43,
        "best_mse": 1.36,
        "baselines": {"svm": 4.36, "lm": 7.71, "mnet": 9.21, "rForst": 6.02},
    },
    2: {
        "median_mse": 17.21e3,
        "best_mse": 16.84e3,
        "baselines": {"svm": 18.13e3, "lm": 36.15e3, "mnet": 19.61e3, "rForst": 21.50e3},
    },
    3: {
        "median_mse": 18.12e-3,
        "best_mse": 19.30e-3,
        "baselines": {"svm": 23.15e-3, "lm": 45.42e-3, "mnet": 18.12e-3, "rForst": 22.21e-3},
    },
}

METRICS: dict[str, Callable] = {"mse": mse, "rmse": rmse, "relative": relative_error}


def _fit_cosine(train: Dataset, termset: TermSet, bandwidths, lam: float) -> Model:
    return fit(
        train.nodes,
        train.targets,
        termset,
        BandwidthProfile.from_list(bandwidths),
        BasisKind.COSINE,
        SolverConfig(regularization=lam),
    )


def friedman1_ranking_stage(train: Dataset) -> tuple[TermSet, SensitivityReport]:
    """Initial order-2 fit of benchmark function 1 and its attribute ranking."""
    termset = superposition_terms(10, 2)
    report = analyze(_fit_cosine(train, termset, (4, 2), 3.0))
    return termset, report


def friedman2_gsi_stage(train: Dataset) -> tuple[TermSet, SensitivityReport]:
    """Initial order-2 fit of benchmark function 2 and its sensitivity indices."""
    termset = superposition_terms(4, 2)
    report = gsi(_fit_cosine(train, termset, (4, 2), 0.0))
    return termset, report


def friedman3_ranking_stage(train: Dataset) -> tuple[TermSet, SensitivityReport]:
    """Initial order-3 fit of benchmark function 3 and its attribute ranking."""
    termset = superposition_terms(4, 3)
    report = analyze(_fit_cosine(train, termset, (10, 2, 2), 2.0))
    return termset, report


def _ranked_keep(report: SensitivityReport, threshold: float) -> tuple[int, ...]:
    keep = tuple(
        i for i in range(1, report.dimension + 1) if report.ranking[i - 1] > threshold
    )
    # degenerate ranking: fall back to keeping everything
    return keep or tuple(range(1, report.dimension + 1))


def _friedman1_final(train: Dataset) -> Model:
    termset, report = friedman1_ranking_stage(train)
    reduced = drop_variables(termset, _ranked_keep(report, 0.02))
    refit = _fit_cosine(train, reduced, (6, 4), 1.0)
    active = threshold_active_set(gsi(refit), reduced, (0.02, 0.02))
    return _fit_cosine(train, active, (6, 4), 1.0)


def _friedman2_final(train: Dataset) -> Model:
    termset, report = friedman2_gsi_stage(train)
    active = threshold_active_set(report, termset, (0.02, 0.02))
    return _fit_cosine(train, active, (4, 2), 0.0)


def _friedman3_final(train: Dataset) -> Model:
    _, report = friedman3_ranking_stage(train)
    reduced = drop_variables(
        superposition_terms(4, 2), _ranked_keep(report, 0.03)
    )
    return _fit_cosine(train, reduced, (12, 2), 2.0)


_FINAL_FITS = {1: _friedman1_final, 2: _friedman2_final, 3: _friedman3_final}


def friedman_rep_data(
    which: int, rep_index: int, seed: int
) -> tuple[Dataset, Dataset]:
    """Training and test samples for one repetition of the benchmark setting."""
    spec = FriedmanSpec(which)
    train = friedman_sample(spec, TRAIN_SIZE, rng_stream(seed, rep_index, "train"))
    test = friedman_sample(spec, TEST_SIZE, rng_stream(seed, rep_index, "test"))
    return train, test


def bench_friedman(which: int, repetitions: int = 100, seed: int = 0) -> dict:
    """Median test MSE of the staged pipeline over seeded repetitions."""
    spec = FriedmanSpec(which)
    final_fit = _FINAL_FITS[spec.which]
    errors = []
    errors_truth = []
    failures = 0
    for rep in range(repetitions):
        train, test = friedman_rep_data(which, rep, seed)
        try:
            model = final_fit(train)
            predictions = predict(model, test.nodes)
        except Exception:  # noqa: BLE001 - one bad repetition must not kill the sweep
            failures += 1
            continue
        errors.append(mse(test.targets, predictions))
        errors_truth.append(mse(friedman_eval(spec, test.nodes), predictions))
    if not errors:
        raise NumericalError(f"all {repetitions} repetitions failed")
    reference = REFERENCE_RESULTS[spec.which]
    return {
        "function": spec.which,
        "repetitions": repetitions,
        "seed": seed,
        "failures": failures,
        "median_mse": float(np.median(errors)),
        "q1_mse": float(np.percentile(errors, 25)),
        "q3_mse": float(np.percentile(errors, 75)),
        "median_mse_vs_truth": float(np.median(errors_truth)),
        "reference_median_mse": reference["median_mse"],
        "reference_baselines": reference["baselines"],
    }


# --- real-data protocol ----------------------------------------------------


@dataclass(frozen=True)
class RealBenchConfig:
    """Protocol parameters for one real regression table."""

    train_fraction: float
    superposition_threshold: int = 2
    bandwidths: tuple[int, ...] = (4, 2)
    regularization: float = 0.0
    gsi_cutoff: float = 0.002
    metric: str = "rmse"
    normalize_targets: bool = False
    keep: tuple[int, ...] | None = None  # optional variable preselection

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ConfigError(f"unknown metric {self.metric!r}; use one of {sorted(METRICS)}")
        if not 0.0 < self.gsi_cutoff < 1.0:
            raise ConfigError("gsi cutoff must lie in (0, 1)")


REAL_PRESETS: dict[str, RealBenchConfig] = {
    "enc": RealBenchConfig(train_fraction=0.7, gsi_cutoff=0.002, metric="rmse"),
    "enh": RealBenchConfig(train_fraction=0.7, gsi_cutoff=0.001, metric="rmse"),
    "asn": RealBenchConfig(train_fraction=0.8, gsi_cutoff=0.001, metric="relative"),
    "ch": RealBenchConfig(
        train_fraction=0.5, gsi_cutoff=0.001, metric="rmse", normalize_targets=True
    ),
    # the published ailerons run additionally pre-selects 11 of 40 variables
    # by a ranking pass; supply that list via ``keep``
    "ailerons": RealBenchConfig(
        train_fraction=0.5, gsi_cutoff=0.001, metric="rmse", normalize_targets=True
    ),
}


def run_real_rep(ds: Dataset, cfg: RealBenchConfig, plan: SplitPlan, rep: int) -> dict:
    """One repetition of the real-data protocol; returns metric and set sizes."""
    train_raw, test_raw = split(ds, plan, rep)
    train = normalize(train_raw, include_target=cfg.normalize_targets)
    test = normalize(test_raw, reference=train, include_target=cfg.normalize_targets)
    termset = superposition_terms(ds.dimension, cfg.superposition_threshold)
    if cfg.keep:
        termset = drop_variables(termset, cfg.keep)
    initial = _fit_cosine(train, termset, cfg.bandwidths, cfg.regularization)
    cutoffs = (cfg.gsi_cutoff,) * cfg.superposition_threshold
    active = threshold_active_set(gsi(initial), termset, cutoffs)
    final = _fit_cosine(train, active, cfg.bandwidths, cfg.regularization)
    value = METRICS[cfg.metric](test.targets, predict(final, test.nodes))
    return {"metric": value, "active_terms": len(active)}


def run_real_benchmark(
    ds: Dataset, cfg: RealBenchConfig, repetitions: int = 100, seed: int = 0
) -> dict:
    """Median metric of the split/normalize/threshold/refit protocol."""
    plan = SplitPlan(
        train_fraction=cfg.train_fraction, repetitions=repetitions, seed=seed
    )
    values = []
    sizes = []
    failures = 0
    for rep in range(repetitions):
        try:
            outcome = run_real_rep(ds, cfg, plan, rep)
        except Exception:  # noqa: BLE001
            failures += 1
            continue
        values.append(outcome["metric"])
        sizes.append(outcome["active_terms"])
    if not values:
        raise NumericalError(f"all {repetitions} repetitions failed")
    return {
        "metric": cfg.metric,
        "repetitions": repetitions,
        "seed": seed,
        "failures": failures,
        "median": float(np.median(values)),
        "q1": float(np.percentile(values, 25)),
        "q3": float(np.percentile(values, 75)),
        "median_active_terms": float(np.median(sizes)),
    }
