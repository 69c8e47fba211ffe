"""QFI-based quantum correlation: minimum and maximum local QFI over generators."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qfi import IndefiniteQFIError, direction_from_angles, direction_gram
from .states import (
    GaussianState,
    STSParams,
    SymmetricCMParams,
    log_negativity,
    pt_min_symplectic_eigenvalue,
    purity,
)

__all__ = [
    "KAPPA",
    "CorrelationReport",
    "OptimizationError",
    "q2_closed",
    "p2_closed",
    "q2_sts",
    "q2_numeric",
    "p2_numeric",
    "correlation_report",
]

#: Normalization between the minimum local QFI and the reported measure.
KAPPA = 4.0

DEFAULT_GRID = 64
DEFAULT_TOL = 1e-10
MAX_ITER = 20_000
_FLAT = 1e-14
_DEGENERATE_DIRECTION = (0.0, 1.0, 0.0)


class OptimizationError(RuntimeError):
    pass


@dataclass(frozen=True)
class CorrelationReport:
    q2: float
    p2: float
    argmin_direction: tuple
    log_neg: float
    nu_tilde: float
    purity: float
    qcr_low: float
    qcr_high: float


def q2_closed(params: SymmetricCMParams) -> float:
    a, d = params.a, params.d
    return 2 * min(d**2, 2 * a**2 - d**2) / (1 + a**2 - d**2)


def p2_closed(params: SymmetricCMParams) -> float:
    a, d = params.a, params.d
    return 2 * max(d**2, 2 * a**2 - d**2) / (1 + a**2 - d**2)


def q2_sts(p: STSParams) -> float:
    s2 = (1 + 2 * p.n_thermal) ** 2
    return 2 * s2 * math.sinh(2 * p.m_squeeze) ** 2 / (4 + s2)


def _refine(f, theta, phi, step, tol):
    """Coordinate descent on ``(theta, phi)``; step halves when no move helps."""
    best = f(theta, phi)
    for _ in range(MAX_ITER):
        if step < tol:
            return best, theta, phi
        moved = False
        for dt, dp in ((-step, 0.0), (step, 0.0), (0.0, -step), (0.0, step)):
            t = min(max(theta + dt, 0.0), math.pi)
            val = f(t, phi + dp)
            if val < best:
                best, theta, phi = val, t, phi + dp
                moved = True
                break
        if not moved:
            step /= 2
    raise OptimizationError(f"no convergence within {MAX_ITER} iterations")


def _extremize(state, sign, grid_steps, refine_tol, side="A"):
    if grid_steps < 16:
        raise ValueError("grid_steps must be at least 16")
    G = sign * direction_gram(state, side)

    def f(theta, phi):
        m = direction_from_angles(theta, phi)
        return float(m @ G @ m)

    thetas = np.linspace(0.0, math.pi, grid_steps)
    phis = np.linspace(0.0, 2 * math.pi, grid_steps, endpoint=False)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    ms = np.stack(
        [np.cos(tt), np.sin(tt) * np.cos(pp), np.sin(tt) * np.sin(pp)], axis=-1
    )
    vals = np.einsum("...i,ij,...j->...", ms, G, ms)
    # row-major argmin: ties go to the smaller theta, then the smaller phi
    i, j = np.unravel_index(np.argmin(vals), vals.shape)
    step = min(thetas[1] - thetas[0], phis[1] - phis[0])
    best, theta, phi = _refine(f, thetas[i], phis[j], step, refine_tol)
    direction = direction_from_angles(theta, phi)
    return sign * best, tuple(float(x) for x in direction / np.linalg.norm(direction))


def q2_numeric(state: GaussianState, grid_steps: int = DEFAULT_GRID,
               refine_tol: float = DEFAULT_TOL, side: str = "A"):
    """``KAPPA * min_m lqfi(m)`` by grid search plus refinement.

    Returns
    -------
    (float, tuple)
        The measure and the minimizing unit direction.  If the minimum is
        flat at zero the direction ``(0, 1, 0)`` is reported.

    Raises
    ------
    IndefiniteQFIError
        If the minimum is negative, which happens only outside
        :func:`~gaussqfi.qfi.in_psd_domain`.
    """
    value, direction = _extremize(state, 1.0, grid_steps, refine_tol, side)
    value = KAPPA * value
    if value < -_FLAT:
        raise IndefiniteQFIError(f"negative local QFI {value:.3g}; see qfi.in_psd_domain")
    if value < _FLAT:
        # rounding noise around an exactly flat minimum
        value = 0.0
        if direction_gram(state, side)[1, 1] < _FLAT:
            direction = _DEGENERATE_DIRECTION
    return value, direction


def p2_numeric(state: GaussianState, grid_steps: int = DEFAULT_GRID,
               refine_tol: float = DEFAULT_TOL, side: str = "A"):
    """``KAPPA * max_m lqfi(m)``; same machinery as :func:`q2_numeric`."""
    value, direction = _extremize(state, -1.0, grid_steps, refine_tol, side)
    return KAPPA * value, direction


def qcr_bounds(q2: float, p2: float) -> tuple[float, float]:
    low = 1 / math.sqrt(p2) if p2 > 0 else math.inf
    high = 1 / math.sqrt(q2) if q2 > 0 else math.inf
    return low, high


def correlation_report(state: GaussianState, grid_steps: int = DEFAULT_GRID,
                       refine_tol: float = DEFAULT_TOL) -> CorrelationReport:
    """Collect the correlation measure and related diagnostics for one state.

    ``qcr_high`` is ``inf`` when ``q2 == 0``.
    """
    q2, argmin = q2_numeric(state, grid_steps, refine_tol)
    p2, _ = p2_numeric(state, grid_steps, refine_tol)
    low, high = qcr_bounds(q2, p2)
    return CorrelationReport(
        q2=q2,
        p2=p2,
        argmin_direction=argmin,
        log_neg=log_negativity(state),
        nu_tilde=pt_min_symplectic_eigenvalue(state),
        purity=purity(state),
        qcr_low=low,
        qcr_high=high,
    )
