"""Matrix-free action of the scattered-data design matrix.

The design matrix has one row per node and one column per frequency of a
:class:`~anovafit.terms.FrequencyIndexUnion`; the entry is the tensor basis
function of that frequency at that node.  The operator never materializes
the matrix: at construction it caches, per dimension, a table of the 1-d
basis values actually needed, and each application rebuilds the per-term
column blocks as products of table columns (an apply costs
``O(rows * cols)`` scalar work for bounded term order).

Accumulation order over groups and within numpy reductions is fixed, so
repeated applications of the same operator are bitwise-identical.
"""

from __future__ import annotations

import numpy as np

from .basis import check_domain, eval_1d_table, eval_tensor
from .terms import FrequencyIndexUnion

# matrix entries allowed for the dense test oracle
DENSE_ORACLE_MAX_ENTRIES = 2_000_000


class DesignOperator:
    """Evaluation map from basis coefficients to values at fixed nodes."""

    def __init__(self, nodes, index_union: FrequencyIndexUnion):
        X = np.asarray(nodes, dtype=np.float64)
        if X.ndim != 2:
            raise ValueError(f"nodes must be a 2-d array, got shape {X.shape}")
        if X.shape[1] != index_union.dimension:
            raise ValueError(
                f"nodes have {X.shape[1]} coordinates but the index union "
                f"expects {index_union.dimension}"
            )
        kind = index_union.kind
        X = np.array(check_domain(kind, X, what="node coordinate"), order="C")
        X.setflags(write=False)

        self.kind = kind
        self.index_union = index_union
        self.nodes = X
        self.rows = X.shape[0]
        self.cols = index_union.size
        self.shape = (self.rows, self.cols)

        # per-dimension tables over the distinct frequencies used there
        needed: dict[int, set[int]] = {}
        for term, freqs in index_union.groups:
            for pos, var in enumerate(term):
                needed.setdefault(var, set()).update(freqs[:, pos].tolist())
        tables: dict[int, tuple[np.ndarray, np.ndarray]] = {}
        for var, freq_set in needed.items():
            uniq = np.asarray(sorted(freq_set), dtype=np.int64)
            tables[var] = (uniq, eval_1d_table(kind, uniq, X[:, var - 1]))

        # per-group plan: coefficient slice plus column-index arrays into tables
        plan = []
        for i, (term, freqs) in enumerate(index_union.groups):
            factors = []
            for pos, var in enumerate(term):
                uniq, table = tables[var]
                factors.append(table[:, np.searchsorted(uniq, freqs[:, pos])])
            plan.append((index_union.group_slice(i), factors))
        self._plan = plan

    @property
    def oversampling(self) -> float:
        """Row/column ratio; values above 1 support the full-rank assumption."""
        return self.rows / self.cols

    def _coerce(self, vec, length: int, what: str) -> np.ndarray:
        v = np.asarray(vec)
        if v.shape != (length,):
            raise ValueError(f"{what} must have shape ({length},), got {v.shape}")
        if np.iscomplexobj(v) and not self.kind.is_complex:
            raise ValueError(f"{what} is complex but the basis is real")
        return v.astype(self.kind.dtype, copy=False)

    def _block(self, factors) -> np.ndarray:
        block = factors[0]
        for extra in factors[1:]:
            block = block * extra
        return block

    def matvec(self, coeffs) -> np.ndarray:
        """Values ``sum_k coeffs[k] * phi_k(x_m)`` at every node."""
        c = self._coerce(coeffs, self.cols, "coefficient vector")
        out = np.zeros(self.rows, dtype=self.kind.dtype)
        for sl, factors in self._plan:
            if not factors:  # empty term: constant basis function
                out += c[sl.start]
            else:
                out += self._block(factors) @ c[sl]
        return out

    def adjoint_matvec(self, values) -> np.ndarray:
        """Adjoint application ``sum_m conj(phi_k(x_m)) * values[m]`` per frequency."""
        r = self._coerce(values, self.rows, "value vector")
        out = np.empty(self.cols, dtype=self.kind.dtype)
        for sl, factors in self._plan:
            if not factors:
                out[sl.start] = r.sum()
            else:
                out[sl] = self._block(factors).conj().T @ r
        return out


def dense_design_matrix(
    nodes, index_union: FrequencyIndexUnion, *, max_entries: int = DENSE_ORACLE_MAX_ENTRIES
) -> np.ndarray:
    """Entry-by-entry dense design matrix, as an independent test oracle.

    Built directly from :func:`eval_tensor` per (node, frequency) pair, so it
    shares no code path with the grouped operator.  Restricted to small
    instances; production code must use :class:`DesignOperator`.
    """
    kind = index_union.kind
    X = check_domain(kind, np.asarray(nodes, dtype=np.float64))
    full = index_union.frequencies_full()
    if X.shape[0] * len(full) > max_entries:
        raise ValueError(
            f"dense oracle limited to {max_entries} entries, "
            f"requested {X.shape[0] * len(full)}"
        )
    out = np.empty((X.shape[0], len(full)), dtype=kind.dtype)
    for m in range(X.shape[0]):
        for j, k in enumerate(full):
            out[m, j] = eval_tensor(kind, k, X[m])
    return out
