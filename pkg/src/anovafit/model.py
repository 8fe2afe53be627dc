"""Fitting, evaluating, and interpreting truncated ANOVA expansions.

A fitted :class:`Model` bundles the basis kind, the active term set, the
bandwidths, the frequency enumeration, and one coefficient per frequency.
Because every frequency's support equals exactly one term, the model
decomposes exactly: the sum of the per-term evaluations reproduces the full
prediction, the squared coefficient mass of a term is the variance of that
term, and the share of each term in the total variance is its global
sensitivity index.

Interpretation outputs:

* ``variance``  -- squared coefficient mass off the constant.
* ``gsi``       -- per-term variance shares (sum to 1).
* ``attribute_ranking`` -- per-variable scores that spread each term's
  share over its variables, down-weighted by how many same-order terms
  contain the variable, normalized to sum to 1.

Refinement operates purely on term sets (thresholding, variable removal,
incremental expansion); re-fitting after a refinement step is the caller's
loop, so each step stays auditable.
"""

from __future__ import annotations

import itertools
import json
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .basis import BasisKind
from .errors import ConfigError, DataError, DegenerateModelError
from .operators import DesignOperator
from .solver import LsqrResult, SolverConfig, lsqr_solve
from .terms import (
    BandwidthProfile,
    FrequencyIndexUnion,
    Term,
    TermSet,
    build_index_union,
    normalize_term,
)


@dataclass(frozen=True)
class Model:
    """Fitted truncated expansion with its fit diagnostics."""

    kind: BasisKind
    terms: TermSet
    bandwidths: BandwidthProfile
    index_union: FrequencyIndexUnion
    coefficients: np.ndarray
    regularization: float
    iterations: int
    relative_residual: float
    stop_reason: str
    oversampling: float
    real_output: bool = True

    @property
    def constant(self):
        """Coefficient of the zero frequency (enumeration index 0)."""
        return self.coefficients[0]


@dataclass(frozen=True)
class SensitivityReport:
    """Variance, per-term sensitivity indices, and (optionally) a ranking."""

    dimension: int
    variance: float
    indices: tuple[tuple[Term, float], ...]
    ranking: np.ndarray | None = None

    def rho(self, term) -> float:
        term = normalize_term(term)
        for u, value in self.indices:
            if u == term:
                return value
        raise ValueError(f"term {term} not present in report")

    def sorted_indices(self) -> tuple[tuple[Term, float], ...]:
        """Indices by descending share; ties broken by order then lexicographic."""
        return tuple(
            sorted(self.indices, key=lambda item: (-item[1], len(item[0]), item[0]))
        )

    def to_json_obj(self) -> dict:
        obj = {
            "variance": float(self.variance),
            "gsi": [
                {"term": list(u), "rho": float(value)}
                for u, value in self.sorted_indices()
            ],
        }
        obj["ranking"] = (
            None if self.ranking is None else [float(r) for r in self.ranking]
        )
        return obj


@dataclass(frozen=True)
class RefinementConfig:
    """Thresholds steering the active-set refinement procedures."""

    gsi_thresholds: tuple[float, ...] | None = None  # entry per term order
    ranking_threshold: float | None = None
    expansion_order: int | None = None

    def __post_init__(self):
        if self.gsi_thresholds is not None:
            thresholds = tuple(float(e) for e in self.gsi_thresholds)
            if not thresholds or any(not 0.0 < e < 1.0 for e in thresholds):
                raise ConfigError("gsi thresholds must lie in (0, 1)")
            object.__setattr__(self, "gsi_thresholds", thresholds)
        if self.ranking_threshold is not None and not 0.0 < self.ranking_threshold < 1.0:
            raise ConfigError("ranking threshold must lie in (0, 1)")
        if self.expansion_order is not None and self.expansion_order < 1:
            raise ConfigError("expansion order must be >= 1")


def fit(
    nodes,
    values,
    termset: TermSet,
    bandwidths: BandwidthProfile,
    kind: BasisKind,
    config: SolverConfig | None = None,
) -> Model:
    """Fit expansion coefficients by damped least squares on scattered data."""
    nodes = np.asarray(nodes, dtype=np.float64)
    values = np.asarray(values)
    if nodes.size == 0 or values.size == 0:
        raise DataError("cannot fit on empty data")
    cfg = config if config is not None else SolverConfig()
    union = build_index_union(termset, bandwidths, kind)
    op = DesignOperator(nodes, union)
    if op.oversampling <= 1.0:
        warnings.warn(
            f"oversampling ratio {op.oversampling:.3f} <= 1: the least-squares "
            "system may be rank-deficient",
            stacklevel=2,
        )
    result: LsqrResult = lsqr_solve(op, values, cfg)
    return Model(
        kind=kind,
        terms=termset,
        bandwidths=bandwidths,
        index_union=union,
        coefficients=result.coefficients,
        regularization=cfg.regularization,
        iterations=result.iterations,
        relative_residual=result.relative_residual,
        stop_reason=result.stop_reason,
        oversampling=op.oversampling,
        real_output=not np.iscomplexobj(values),
    )


def _finalize(model: Model, values: np.ndarray) -> np.ndarray:
    if model.real_output and np.iscomplexobj(values):
        return values.real.copy()
    return values


def predict(model: Model, nodes) -> np.ndarray:
    """Evaluate the fitted expansion at new nodes."""
    op = DesignOperator(nodes, model.index_union)
    return _finalize(model, op.matvec(model.coefficients))


def predict_term(model: Model, term, nodes) -> np.ndarray:
    """Evaluate a single ANOVA term of the fitted expansion at new nodes."""
    term = normalize_term(term)
    union = model.index_union
    for i, (u, freqs) in enumerate(union.groups):
        if u == term:
            sub = FrequencyIndexUnion(
                union.dimension, union.kind, ((u, freqs),), (0,), len(freqs)
            )
            op = DesignOperator(nodes, sub)
            block = model.coefficients[union.group_slice(i)]
            return _finalize(model, op.matvec(block))
    raise ValueError(f"term {term} is not part of the model")


def variance(model: Model) -> float:
    """Total variance of the expansion: squared coefficient mass off index 0."""
    c = model.coefficients
    return float(np.sum(np.abs(c[1:]) ** 2))


def gsi(model: Model) -> SensitivityReport:
    """Global sensitivity indices: each nonempty term's share of the variance."""
    sigma2 = variance(model)
    if sigma2 == 0.0:
        raise DegenerateModelError(
            "model variance is zero; sensitivity indices are undefined"
        )
    union = model.index_union
    indices = []
    for i, (term, _) in enumerate(union.groups):
        if not term:
            continue
        block = model.coefficients[union.group_slice(i)]
        indices.append((term, float(np.sum(np.abs(block) ** 2)) / sigma2))
    return SensitivityReport(model.terms.dimension, sigma2, tuple(indices))


def attribute_ranking(report: SensitivityReport, termset: TermSet) -> np.ndarray:
    """Per-variable importance scores normalized to sum to 1.

    Each term's sensitivity index is credited to each of its variables with
    weight ``1 / #{same-order terms containing that variable}``; the scores
    are then normalized.  Variables absent from every term score 0.
    """
    counts: dict[tuple[int, int], int] = {}
    for u in termset.nonempty_terms:
        for i in u:
            key = (len(u), i)
            counts[key] = counts.get(key, 0) + 1
    scores = np.zeros(termset.dimension)
    for u, rho in report.indices:
        for i in u:
            scores[i - 1] += rho / counts[(len(u), i)]
    total = scores.sum()
    if total == 0.0:
        raise DegenerateModelError("no sensitivity mass on any variable")
    return scores / total


def analyze(model: Model) -> SensitivityReport:
    """Sensitivity report with the attribute ranking filled in."""
    report = gsi(model)
    return replace(report, ranking=attribute_ranking(report, model.terms))


def threshold_active_set(
    report: SensitivityReport, termset: TermSet, thresholds
) -> TermSet:
    """Keep the empty term plus every term whose index exceeds its order's threshold.

    ``thresholds`` is indexed by term order (entry 0 applies to order-1
    terms).  The result is generally not downward closed; absent subsets are
    understood as zero terms, and :func:`~anovafit.terms.closure`
    materializes them when a closed set is structurally required.
    """
    thresholds = tuple(float(e) for e in thresholds)
    if any(not 0.0 < e < 1.0 for e in thresholds):
        raise ConfigError("gsi thresholds must lie in (0, 1)")
    orders = termset.orders()
    if orders and max(orders) > len(thresholds):
        raise ConfigError(
            f"need a threshold for every order up to {max(orders)}, "
            f"got {len(thresholds)}"
        )
    kept = [
        u for u in termset.nonempty_terms if report.rho(u) > thresholds[len(u) - 1]
    ]
    return TermSet(termset.dimension, tuple(kept), termset.superposition_threshold)


def drop_variables(termset: TermSet, keep) -> TermSet:
    """Restrict to terms whose variables all lie in ``keep``.

    The dimension is unchanged, so the result still applies to the original
    dataset; pair with a column projection when re-indexing is wanted.
    """
    keep = sorted(set(int(i) for i in keep))
    if not keep:
        raise ConfigError("keep set must be nonempty")
    if keep[0] < 1 or keep[-1] > termset.dimension:
        raise ConfigError(f"keep set {keep} outside 1..{termset.dimension}")
    keep_set = set(keep)
    kept = [u for u in termset.terms if set(u) <= keep_set]
    return TermSet(termset.dimension, tuple(kept), termset.superposition_threshold)


def incremental_expand(
    report: SensitivityReport, termset: TermSet, config: RefinementConfig
) -> TermSet:
    """Add higher-order interactions among the highly ranked variables.

    Variables with ranking score above the configured threshold form a pool
    ``v``; all subsets of ``v`` with order between the current superposition
    threshold (exclusive) and the expansion order (inclusive) are added.
    """
    if config.ranking_threshold is None or config.expansion_order is None:
        raise ConfigError(
            "incremental expansion needs ranking_threshold and expansion_order"
        )
    if report.ranking is None:
        raise ValueError("report carries no ranking; compute attribute_ranking first")
    current = termset.superposition_threshold or termset.max_order
    n_v = config.expansion_order
    if not current < n_v < termset.dimension:
        raise ConfigError(
            f"expansion order {n_v} must lie strictly between the current "
            f"threshold {current} and the dimension {termset.dimension}"
        )
    pool = tuple(
        i
        for i in range(1, termset.dimension + 1)
        if report.ranking[i - 1] > config.ranking_threshold
    )
    if not pool:
        warnings.warn(
            "no variable exceeds the ranking threshold; term set unchanged",
            stacklevel=2,
        )
        return termset
    additions = {
        u
        for order in range(current + 1, n_v + 1)
        for u in itertools.combinations(pool, order)
    }
    if not additions:
        return termset
    merged = set(termset.terms) | additions
    return TermSet(termset.dimension, tuple(merged), n_v)


# --- error metrics -------------------------------------------------------


def _paired(y_true, y_pred) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(y_true)
    b = np.asarray(y_pred)
    if a.shape != b.shape or a.ndim != 1 or a.size == 0:
        raise ValueError(
            f"metric inputs must be equal-length nonempty vectors, "
            f"got {a.shape} and {b.shape}"
        )
    return a, b


def mse(y_true, y_pred) -> float:
    a, b = _paired(y_true, y_pred)
    return float(np.mean(np.abs(a - b) ** 2))


def rmse(y_true, y_pred) -> float:
    return float(np.sqrt(mse(y_true, y_pred)))


def relative_error(y_true, y_pred) -> float:
    """Energy-normalized error ``sqrt(sum |a - b|^2 / sum |a|^2)``."""
    a, b = _paired(y_true, y_pred)
    denom = float(np.sum(np.abs(a) ** 2))
    if denom == 0.0:
        raise DataError("relative error undefined for an all-zero reference")
    return float(np.sqrt(np.sum(np.abs(a - b) ** 2) / denom))


# --- serialization -------------------------------------------------------


def _coeffs_to_obj(coefficients: np.ndarray) -> list:
    if np.iscomplexobj(coefficients):
        return [[float(c.real), float(c.imag)] for c in coefficients]
    return [float(c) for c in coefficients]


def _coeffs_from_obj(obj, kind: BasisKind) -> np.ndarray:
    if kind.is_complex:
        return np.asarray([complex(re, im) for re, im in obj], dtype=np.complex128)
    return np.asarray(obj, dtype=np.float64)


def model_to_obj(model: Model) -> dict:
    return {
        "basis": model.kind.token,
        "dimension": model.terms.dimension,
        "superposition_threshold": model.terms.superposition_threshold,
        "terms": model.terms.to_json_obj(),
        "bandwidths": model.bandwidths.to_json_obj(),
        "lambda": float(model.regularization),
        "coefficients": _coeffs_to_obj(model.coefficients),
        "real_output": model.real_output,
        "diagnostics": {
            "iterations": model.iterations,
            "relative_residual": float(model.relative_residual),
            "stop_reason": model.stop_reason,
            "oversampling": float(model.oversampling),
        },
    }


def model_from_obj(obj: dict) -> Model:
    try:
        kind = BasisKind.from_token(obj["basis"])
        termset = TermSet.from_json_obj(
            int(obj["dimension"]), obj["terms"], obj.get("superposition_threshold")
        )
        bandwidths = BandwidthProfile.from_json_obj(obj["bandwidths"])
        coefficients = _coeffs_from_obj(obj["coefficients"], kind)
        diagnostics = obj.get("diagnostics", {})
        model = Model(
            kind=kind,
            terms=termset,
            bandwidths=bandwidths,
            index_union=build_index_union(termset, bandwidths, kind),
            coefficients=coefficients,
            regularization=float(obj["lambda"]),
            iterations=int(diagnostics.get("iterations", 0)),
            relative_residual=float(diagnostics.get("relative_residual", 0.0)),
            stop_reason=str(diagnostics.get("stop_reason", "unknown")),
            oversampling=float(diagnostics.get("oversampling", 0.0)),
            real_output=bool(obj.get("real_output", True)),
        )
    except (KeyError, TypeError) as exc:
        raise DataError(f"malformed model object: {exc}") from exc
    if len(model.coefficients) != model.index_union.size:
        raise DataError(
            f"model has {len(model.coefficients)} coefficients but the index "
            f"union holds {model.index_union.size} frequencies"
        )
    return model


def save_model(model: Model, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_obj(model), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_model(path) -> Model:
    with open(path, encoding="utf-8") as fh:
        return model_from_obj(json.load(fh))
