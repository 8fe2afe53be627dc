"""Iterative least-squares solver for the coefficient fit.

Minimizes the damped objective

    || y - F g ||_2^2  +  lam * || g ||_2^2

with the LSQR recurrence (Golub-Kahan bidiagonalization plus plane
rotations, damping parameter ``sqrt(lam)``), using only ``matvec`` and
``adjoint_matvec`` applications of the design operator.  Works unchanged in
real and complex arithmetic; all rotation scalars stay real.

The damped residual norm is available per iteration and is non-increasing,
which the test suite asserts.  Stopping follows the two standard tests:
the damped residual dropping below ``tolerance`` relative to ``||y||``
(consistent systems), or the normal-equation residual
``||F* r - lam g||`` dropping below ``tolerance`` relative to its natural
scale (incompatible systems).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError


@dataclass(frozen=True)
class SolverConfig:
    """Regularization weight and stopping controls for :func:`lsqr_solve`."""

    regularization: float = 0.0
    max_iterations: int | None = None  # default: 10 * number of columns
    tolerance: float = 1e-8

    def __post_init__(self):
        if not self.regularization >= 0.0:
            raise ValueError("regularization must be >= 0")
        if not 0.0 < self.tolerance < 1.0:
            raise ValueError("tolerance must lie in (0, 1)")
        if self.max_iterations is not None and self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")

    def iteration_limit(self, n_columns: int) -> int:
        if self.max_iterations is not None:
            return self.max_iterations
        return 10 * n_columns


@dataclass(frozen=True)
class LsqrResult:
    coefficients: np.ndarray
    iterations: int
    relative_residual: float  # damped residual norm / ||y||
    stop_reason: str  # "tolerance" or "max_iterations"
    residual_history: np.ndarray  # damped residual norm, entry per iteration


def lsqr_solve(op, y, config: SolverConfig | None = None) -> LsqrResult:
    """Solve the damped least-squares problem for the operator ``op``."""
    cfg = config if config is not None else SolverConfig()
    m, n = op.shape
    if m < 1 or n < 1:
        raise ValueError(f"zero-length system: operator shape {op.shape}")
    y = np.asarray(y)
    if y.shape != (m,):
        raise ValueError(f"value vector must have shape ({m},), got {y.shape}")
    if not np.all(np.isfinite(y)):
        raise NumericalError("value vector contains non-finite entries")
    if np.iscomplexobj(y) and not op.kind.is_complex:
        raise ValueError("complex values with a real basis")

    dtype = op.kind.dtype
    damp = math.sqrt(cfg.regularization)
    eps = np.finfo(np.float64).eps
    limit = cfg.iteration_limit(n)

    x = np.zeros(n, dtype=dtype)
    u = y.astype(dtype, copy=True)
    bnorm = float(np.linalg.norm(u))
    if bnorm == 0.0:
        return LsqrResult(x, 0, 0.0, "tolerance", np.zeros(1))

    beta = bnorm
    u /= beta
    v = op.adjoint_matvec(u)
    alpha = float(np.linalg.norm(v))
    if alpha > 0.0:
        v /= alpha
    w = v.copy()

    rhobar = alpha
    phibar = beta
    anorm = 0.0
    res2 = 0.0
    rnorm = beta
    arnorm = alpha * beta
    history = [rnorm]

    if arnorm == 0.0:  # y orthogonal to the range: x = 0 is optimal
        return LsqrResult(x, 0, 1.0, "tolerance", np.asarray(history))

    itn = 0
    reason = "max_iterations"
    while itn < limit:
        itn += 1

        # next bidiagonalization step
        u = op.matvec(v) - alpha * u
        beta = float(np.linalg.norm(u))
        if beta > 0.0:
            u /= beta
            anorm = math.sqrt(anorm**2 + alpha**2 + beta**2 + damp**2)
            v = op.adjoint_matvec(u) - beta * v
            alpha = float(np.linalg.norm(v))
            if alpha > 0.0:
                v /= alpha

        # rotation absorbing the damping row
        if damp > 0.0:
            rhobar1 = math.sqrt(rhobar**2 + damp**2)
            cs1 = rhobar / rhobar1
            sn1 = damp / rhobar1
            psi = sn1 * phibar
            phibar = cs1 * phibar
        else:
            rhobar1 = rhobar
            psi = 0.0

        # rotation eliminating the subdiagonal
        rho = math.sqrt(rhobar1**2 + beta**2)
        cs = rhobar1 / rho
        sn = beta / rho
        theta = sn * alpha
        rhobar = -cs * alpha
        phi = cs * phibar
        phibar = sn * phibar
        tau = sn * phi

        x += (phi / rho) * w
        w = v - (theta / rho) * w

        res2 += psi * psi
        rnorm = math.sqrt(res2 + phibar * phibar)
        arnorm = alpha * abs(tau)
        history.append(rnorm)

        xnorm = float(np.linalg.norm(x))
        test1 = rnorm / bnorm
        test2 = arnorm / (anorm * rnorm + eps)
        rtol = cfg.tolerance + cfg.tolerance * anorm * xnorm / bnorm
        if test1 <= rtol or test2 <= cfg.tolerance:
            reason = "tolerance"
            break

    return LsqrResult(x, itn, rnorm / bnorm, reason, np.asarray(history))
