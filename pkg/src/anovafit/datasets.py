"""Data handling: synthetic benchmark generators, CSV ingestion,
min-max normalization, splitting, and repeated-split evaluation.

Random streams
--------------
Everything random is driven by ``numpy``'s PCG64 through
:func:`rng_stream`, which derives an independent, platform-stable stream
from ``(seed, repetition index, purpose)`` via ``SeedSequence`` spawn keys.
Purposes are fixed names ("train", "test", "split") so repetitions and
stages never share or reorder draws, and any repetition can be regenerated
in isolation.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace
from typing import Callable, Union

import numpy as np

from .errors import ConfigError, DataError, NumericalError

_PURPOSE_CODES = {"train": 0, "test": 1, "split": 2}


def rng_stream(seed: int, rep_index: int = 0, purpose: str = "train") -> np.random.Generator:
    """Independent generator for one (seed, repetition, purpose) triple."""
    try:
        code = _PURPOSE_CODES[purpose]
    except KeyError:
        raise ValueError(f"unknown rng purpose {purpose!r}") from None
    seq = np.random.SeedSequence(int(seed), spawn_key=(int(rep_index), code))
    return np.random.default_rng(seq)


@dataclass(frozen=True)
class Normalization:
    """Per-column extrema recorded when a dataset was normalized."""

    feature_min: np.ndarray
    feature_max: np.ndarray
    target_min: float | None = None
    target_max: float | None = None

    def matches(self, other: "Normalization | None") -> bool:
        if other is None:
            return False
        return (
            np.array_equal(self.feature_min, other.feature_min)
            and np.array_equal(self.feature_max, other.feature_max)
            and self.target_min == other.target_min
            and self.target_max == other.target_max
        )


@dataclass(frozen=True)
class Dataset:
    """Scattered nodes with target values and optional normalization state."""

    nodes: np.ndarray  # (M, d)
    targets: np.ndarray  # (M,)
    columns: tuple[str, ...]
    target_name: str = "y"
    normalization: Normalization | None = None

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=np.float64)
        targets = np.asarray(self.targets, dtype=np.float64)
        if nodes.ndim != 2 or nodes.shape[0] < 1 or nodes.shape[1] < 1:
            raise DataError(f"node matrix must be (M, d) with M, d >= 1, got {nodes.shape}")
        if targets.shape != (nodes.shape[0],):
            raise DataError(
                f"target vector shape {targets.shape} does not match {nodes.shape[0]} rows"
            )
        if not np.all(np.isfinite(nodes)):
            raise DataError("node matrix contains non-finite entries")
        if not np.all(np.isfinite(targets)):
            raise DataError("target vector contains non-finite entries")
        if len(self.columns) != nodes.shape[1]:
            raise DataError("column name count does not match dimension")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "targets", targets)
        object.__setattr__(self, "columns", tuple(self.columns))

    @property
    def size(self) -> int:
        return self.nodes.shape[0]

    @property
    def dimension(self) -> int:
        return self.nodes.shape[1]

    def take(self, rows) -> "Dataset":
        return replace(self, nodes=self.nodes[rows], targets=self.targets[rows])


# --- synthetic benchmark functions ---------------------------------------

_FRIEDMAN_DIMENSION = {1: 10, 2: 4, 3: 4}
# Gaussian noise scale (standard deviation) per function
_FRIEDMAN_NOISE = {1: 1.0, 2: 125.0, 3: 0.1}


@dataclass(frozen=True)
class FriedmanSpec:
    """One of the three synthetic benchmark regression functions on [0,1]^d."""

    which: int

    def __post_init__(self):
        if self.which not in (1, 2, 3):
            raise ConfigError(f"friedman function must be 1, 2 or 3, got {self.which}")

    @property
    def dimension(self) -> int:
        return _FRIEDMAN_DIMENSION[self.which]

    @property
    def noise_scale(self) -> float:
        return _FRIEDMAN_NOISE[self.which]


def _scale_1(x):
    return 100.0 * x


def _scale_2(x):
    return 520.0 * np.pi * x + 40.0 * np.pi


def _scale_4(x):
    return 10.0 * x + 1.0


def friedman_eval(spec: FriedmanSpec, x) -> Union[float, np.ndarray]:
    """Noise-free function value(s); ``x`` is one node or a matrix of nodes."""
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    pts = x[None, :] if single else x
    if pts.ndim != 2 or pts.shape[1] != spec.dimension:
        raise ValueError(
            f"friedman {spec.which} expects dimension {spec.dimension}, got shape {x.shape}"
        )
    if spec.which == 1:
        out = (
            10.0 * np.sin(np.pi * pts[:, 0] * pts[:, 1])
            + 20.0 * (pts[:, 2] - 0.5) ** 2
            + 10.0 * pts[:, 3]
            + 5.0 * pts[:, 4]
        )
    else:
        product = _scale_2(pts[:, 1]) * pts[:, 2]
        inverse = 1.0 / (_scale_2(pts[:, 1]) * _scale_4(pts[:, 3]))
        if spec.which == 2:
            out = np.sqrt(_scale_1(pts[:, 0]) ** 2 + (product - inverse) ** 2)
        else:
            # arctan2 realizes the arctan limit +-pi/2 when the denominator is 0
            out = np.arctan2(product - inverse, _scale_1(pts[:, 0]))
    return float(out[0]) if single else out


def friedman_sample(
    spec: FriedmanSpec,
    size: int,
    rng: Union[int, np.random.Generator],
    *,
    noisy: bool = True,
) -> Dataset:
    """Uniform i.i.d. nodes on [0,1]^d with (optionally noisy) evaluations."""
    if size < 1:
        raise ValueError("sample size must be >= 1")
    gen = np.random.default_rng(rng) if isinstance(rng, int) else rng
    nodes = gen.uniform(0.0, 1.0, size=(size, spec.dimension))
    targets = friedman_eval(spec, nodes)
    if noisy and spec.noise_scale > 0.0:
        targets = targets + spec.noise_scale * gen.standard_normal(size)
    columns = tuple(f"x{i}" for i in range(1, spec.dimension + 1))
    return Dataset(nodes, targets, columns)


# --- CSV ingestion --------------------------------------------------------


def load_csv(path, target_column: str | None) -> Dataset:
    """Load a UTF-8, comma-separated, headered table of numeric columns.

    With ``target_column=None`` every column is a feature and the targets
    are zeros (useful for prediction-only inputs).
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        header = [name.strip() for name in header]
        if target_column is None:
            target_idx = None
        elif target_column not in header:
            raise DataError(
                f"{path}: target column {target_column!r} not in header {header}"
            )
        else:
            target_idx = header.index(target_column)
        rows = []
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise DataError(
                    f"{path}:{line_no}: expected {len(header)} cells, got {len(row)}"
                )
            parsed = []
            for name, cell in zip(header, row):
                try:
                    value = float(cell)
                except ValueError:
                    raise DataError(
                        f"{path}:{line_no}: column {name!r}: non-numeric cell {cell!r}"
                    ) from None
                if not math.isfinite(value):
                    raise DataError(
                        f"{path}:{line_no}: column {name!r}: non-finite cell {cell!r}"
                    )
                parsed.append(value)
            rows.append(parsed)
    if not rows:
        raise DataError(f"{path}: no data rows")
    table = np.asarray(rows, dtype=np.float64)
    feature_idx = [i for i in range(len(header)) if i != target_idx]
    if not feature_idx:
        raise DataError(f"{path}: no feature columns besides the target")
    if target_idx is None:
        targets = np.zeros(table.shape[0])
        target_name = ""
    else:
        targets = table[:, target_idx]
        target_name = target_column
    return Dataset(
        table[:, feature_idx],
        targets,
        tuple(header[i] for i in feature_idx),
        target_name=target_name,
    )


# --- normalization and projection ----------------------------------------


def _affine_to_unit(values, lo, hi):
    span = hi - lo
    out = np.where(span > 0.0, (values - lo) / np.where(span > 0.0, span, 1.0), 0.5)
    return np.clip(out, 0.0, 1.0)


def apply_normalization(
    ds: Dataset, stats: Normalization, *, include_target: bool = False
) -> Dataset:
    """Map a dataset through previously recorded min-max extrema."""
    if stats.matches(ds.normalization):
        return ds
    if include_target and stats.target_min is None:
        raise ConfigError("normalization statistics carry no target extrema")
    nodes = _affine_to_unit(ds.nodes, stats.feature_min, stats.feature_max)
    targets = ds.targets
    if include_target:
        targets = _affine_to_unit(ds.targets, stats.target_min, stats.target_max)
    return replace(ds, nodes=nodes, targets=targets, normalization=stats)


def normalize(
    ds: Dataset, reference: Dataset | None = None, *, include_target: bool = False
) -> Dataset:
    """Min-max normalize features (and optionally the target) into [0, 1].

    Extrema come from ``reference`` (the training set) when given, else from
    ``ds`` itself; a normalized reference contributes the extrema it
    recorded.  Values outside the reference range clamp to [0, 1] and
    constant columns map to 0.5.  Normalizing an already-normalized dataset
    with the same extrema is a no-op.
    """
    ref = reference if reference is not None else ds
    if ref.normalization is not None:
        stats = ref.normalization
    else:
        stats = Normalization(
            feature_min=ref.nodes.min(axis=0),
            feature_max=ref.nodes.max(axis=0),
            target_min=float(ref.targets.min()) if include_target else None,
            target_max=float(ref.targets.max()) if include_target else None,
        )
    return apply_normalization(ds, stats, include_target=include_target)


def project_columns(ds: Dataset, keep) -> Dataset:
    """Restrict to the 1-based variable indices in ``keep`` (ascending)."""
    keep = sorted(set(int(i) for i in keep))
    if not keep or keep[0] < 1 or keep[-1] > ds.dimension:
        raise ConfigError(f"keep set {keep} outside 1..{ds.dimension}")
    cols = [i - 1 for i in keep]
    norm = ds.normalization
    if norm is not None:
        norm = replace(
            norm,
            feature_min=norm.feature_min[cols],
            feature_max=norm.feature_max[cols],
        )
    return replace(
        ds,
        nodes=ds.nodes[:, cols],
        columns=tuple(ds.columns[i] for i in cols),
        normalization=norm,
    )


# --- splitting and repeated evaluation ------------------------------------


@dataclass(frozen=True)
class SplitPlan:
    """Either a random fraction split of given data or freshly generated sets.

    Exactly one of ``train_fraction`` (fraction mode, for concrete datasets)
    or ``train_size``/``test_size`` (generated mode, for synthetic
    generators) must be set.
    """

    train_fraction: float | None = None
    train_size: int | None = None
    test_size: int | None = None
    repetitions: int = 1
    seed: int = 0

    def __post_init__(self):
        fraction_mode = self.train_fraction is not None
        generated_mode = self.train_size is not None or self.test_size is not None
        if fraction_mode == generated_mode:
            raise ConfigError(
                "set either train_fraction or train_size/test_size, not both"
            )
        if fraction_mode and not 0.0 < self.train_fraction < 1.0:
            raise ConfigError("train_fraction must lie in (0, 1)")
        if generated_mode and (
            (self.train_size or 0) < 1 or (self.test_size or 0) < 1
        ):
            raise ConfigError("train_size and test_size must both be >= 1")
        if self.repetitions < 1:
            raise ConfigError("repetitions must be >= 1")

    @property
    def generated(self) -> bool:
        return self.train_fraction is None


def split(ds: Dataset, plan: SplitPlan, rep_index: int) -> tuple[Dataset, Dataset]:
    """Disjoint random train/test partition, deterministic in (seed, rep_index)."""
    if plan.generated:
        raise ConfigError("generated plans sample fresh data; use median_evaluate")
    if not 0 <= rep_index < plan.repetitions:
        raise ValueError(f"rep_index {rep_index} outside 0..{plan.repetitions - 1}")
    n_train = int(round(plan.train_fraction * ds.size))
    if n_train < 1 or n_train >= ds.size:
        raise DataError(
            f"fraction {plan.train_fraction} leaves an empty side for {ds.size} rows"
        )
    perm = rng_stream(plan.seed, rep_index, "split").permutation(ds.size)
    return ds.take(np.sort(perm[:n_train])), ds.take(np.sort(perm[n_train:]))


@dataclass(frozen=True)
class EvaluationSummary:
    metric: str
    median: float
    q1: float
    q3: float
    repetitions: int
    failures: int
    values: tuple[float, ...]

    def to_json_obj(self) -> dict:
        return {
            "metric": self.metric,
            "median": self.median,
            "q1": self.q1,
            "q3": self.q3,
            "repetitions": self.repetitions,
            "failures": self.failures,
        }


Recipe = Callable[[Dataset, Dataset], float]


def median_evaluate(
    recipe: Recipe,
    source: Union[Dataset, FriedmanSpec],
    plan: SplitPlan,
    *,
    metric_name: str = "mse",
) -> EvaluationSummary:
    """Median and quartiles of a fit metric over repeated splits.

    Per repetition the recipe receives a training and a test dataset and
    returns one metric value.  A failing repetition is recorded and skipped
    rather than aborting the sweep; only all repetitions failing raises.
    """
    values = []
    failures = 0
    for rep in range(plan.repetitions):
        if isinstance(source, FriedmanSpec):
            if not plan.generated:
                raise ConfigError("synthetic sources need a generated split plan")
            train = friedman_sample(
                source, plan.train_size, rng_stream(plan.seed, rep, "train")
            )
            test = friedman_sample(
                source, plan.test_size, rng_stream(plan.seed, rep, "test")
            )
        else:
            train, test = split(source, plan, rep)
        try:
            values.append(float(recipe(train, test)))
        except Exception:  # noqa: BLE001 - a broken repetition must not kill the sweep
            failures += 1
    if not values:
        raise NumericalError(f"all {plan.repetitions} repetitions failed")
    return EvaluationSummary(
        metric=metric_name,
        median=float(np.median(values)),
        q1=float(np.percentile(values, 25)),
        q3=float(np.percentile(values, 75)),
        repetitions=plan.repetitions,
        failures=failures,
        values=tuple(values),
    )
