"""Symplectic linear algebra on covariance matrices.

All matrices use quadrature ordering ``r = (x_1, ..., x_N, p_1, ..., p_N)``.
Block-form (mode-ordered) inputs ``(x_1, p_1, x_2, p_2)`` are converted with
:func:`mode_permutation`.  Covariance matrices follow the half-scale
convention in which the vacuum is ``I/2``.
"""

from __future__ import annotations

from functools import lru_cache
from typing import NamedTuple

import numpy as np

__all__ = [
    "NU_MIN",
    "NonPhysicalError",
    "SymplecticInvariants",
    "SymplecticSpectrum",
    "symplectic_form",
    "mode_permutation",
    "check_cov",
    "is_physical",
    "symplectic_invariants",
    "symplectic_eigenvalues",
    "symplectic_eigenvalues_direct",
    "partial_transpose",
    "phi_operator",
    "solve_phi",
]

#: Smallest admissible symplectic eigenvalue (vacuum at ``Gamma = I/2``).
NU_MIN = 0.5

SYM_TOL = 1e-12
PHYS_TOL = 1e-12
PINV_RCOND = 1e-12


class NonPhysicalError(ValueError):
    """Raised when a covariance matrix violates the uncertainty principle."""


class SymplecticInvariants(NamedTuple):
    i1: float
    i2: float
    i3: float
    i4: float
    delta: float


class SymplecticSpectrum(NamedTuple):
    nu_minus: float
    nu_plus: float


@lru_cache(maxsize=None)
def _form(n_modes: int) -> np.ndarray:
    eye = np.eye(n_modes)
    zero = np.zeros((n_modes, n_modes))
    J = np.block([[zero, eye], [-eye, zero]])
    J.setflags(write=False)
    return J


def symplectic_form(n_modes: int) -> np.ndarray:
    """Return ``J = [[0, I], [-I, 0]]`` for ``n_modes`` modes."""
    if int(n_modes) != n_modes or n_modes < 1:
        raise ValueError(f"n_modes must be a positive integer, got {n_modes!r}")
    return _form(int(n_modes)).copy()


@lru_cache(maxsize=None)
def _perm() -> np.ndarray:
    T = np.zeros((4, 4))
    for i in range(1, 5):
        for j in range(1, 5):
            T[i - 1, j - 1] = float(j == 2 * i - 1) + float(j + 4 == 2 * i)
    T.setflags(write=False)
    return T


def mode_permutation(n_modes: int = 2) -> np.ndarray:
    """Permutation between mode ordering and quadrature ordering.

    Row ``i`` has a single one in column ``j`` where ``j = 2i - 1`` or
    ``j + 4 = 2i`` (1-based), i.e. indices 2 and 3 are exchanged.  The
    matrix is an involution, so the same ``T`` converts in both directions:
    ``Gamma_quad = T @ Gamma_mode @ T``.
    """
    if n_modes != 2:
        raise ValueError("mode_permutation is only defined for two modes")
    return _perm().copy()


def _as_square(gamma, size: int | None = None) -> np.ndarray:
    gamma = np.asarray(gamma, dtype=float)
    if gamma.ndim != 2 or gamma.shape[0] != gamma.shape[1] or gamma.shape[0] % 2:
        raise ValueError(f"expected a 2N x 2N matrix, got shape {gamma.shape}")
    if size is not None and gamma.shape[0] != size:
        raise ValueError(f"expected a {size}x{size} matrix, got shape {gamma.shape}")
    return gamma


def symplectic_eigenvalues_direct(gamma) -> np.ndarray:
    """Sorted symplectic eigenvalues from the spectrum of ``J @ Gamma``.

    Works for any number of modes; each modulus appears twice in the
    spectrum of ``J Gamma`` and is returned once.
    """
    gamma = _as_square(gamma)
    n = gamma.shape[0] // 2
    ev = np.linalg.eigvals(symplectic_form(n) @ gamma)
    if np.max(np.abs(ev.real)) > 1e-10 * max(1.0, np.max(np.abs(ev))):
        raise NonPhysicalError("symplectic spectrum is not purely imaginary")
    return np.sort(np.abs(ev.imag))[::2]


def check_cov(gamma, n_modes: int | None = None) -> np.ndarray:
    """Validate a covariance matrix and return it as a read-only array.

    Raises
    ------
    ValueError
        On bad shape or asymmetry beyond ``1e-12``.
    NonPhysicalError
        If any symplectic eigenvalue is below ``NU_MIN``.
    """
    gamma = _as_square(gamma, None if n_modes is None else 2 * n_modes)
    if np.max(np.abs(gamma - gamma.T)) > SYM_TOL:
        raise ValueError("covariance matrix is not symmetric")
    if not np.all(np.isfinite(gamma)):
        raise ValueError("covariance matrix has non-finite entries")
    nus = symplectic_eigenvalues_direct(gamma)
    if nus[0] < NU_MIN - PHYS_TOL or np.any(np.linalg.eigvalsh(gamma) <= 0):
        raise NonPhysicalError(
            f"smallest symplectic eigenvalue {nus[0]:.6g} is below NU_MIN={NU_MIN}"
        )
    gamma = gamma.copy()
    gamma.setflags(write=False)
    return gamma


def is_physical(gamma) -> bool:
    try:
        check_cov(gamma)
    except ValueError:
        return False
    return True


def _mode_blocks(gamma: np.ndarray):
    g = _perm() @ gamma @ _perm()
    return g[:2, :2], g[2:, 2:], g[:2, 2:]


def symplectic_invariants(gamma) -> SymplecticInvariants:
    """``I1 = det(alpha)``, ``I2 = det(beta)``, ``I3 = det(gamma_AB)``,
    ``I4 = det(Gamma)`` and ``Delta = I1 + I2 + 2 I3``."""
    gamma = _as_square(gamma, 4)
    alpha, beta, cross = _mode_blocks(gamma)
    i1 = float(np.linalg.det(alpha))
    i2 = float(np.linalg.det(beta))
    i3 = float(np.linalg.det(cross))
    i4 = float(np.linalg.det(gamma))
    return SymplecticInvariants(i1, i2, i3, i4, i1 + i2 + 2 * i3)


def symplectic_eigenvalues(gamma, tol: float = 1e-10) -> SymplecticSpectrum:
    """Two-mode symplectic eigenvalues from the invariants.

    Uses ``nu_pm^2 = (Delta +- sqrt(Delta^2 - 4 I4)) / 2``.  The
    discriminant is evaluated as
    ``(I1 - I2)^2 + 4 (I1 + I2) I3 + 4 Tr(J alpha J gamma J beta J gamma^T)``,
    which equals ``Delta^2 - 4 I4`` without the cancellation at degenerate
    spectra, and ``nu_-^2`` is taken as ``I4 / nu_+^2``.  A discriminant more
    negative than ``tol * Delta^2`` is rejected.
    """
    gamma = _as_square(gamma, 4)
    inv = symplectic_invariants(gamma)
    alpha, beta, cross = _mode_blocks(gamma)
    j = _form(1)
    t = float(np.trace(j @ alpha @ j @ cross @ j @ beta @ j @ cross.T))
    disc = (inv.i1 - inv.i2) ** 2 + 4 * (inv.i1 + inv.i2) * inv.i3 + 4 * t
    if disc < -tol * max(1.0, inv.delta**2):
        raise NonPhysicalError(f"negative discriminant {disc:.3g}")
    hi = (inv.delta + np.sqrt(max(disc, 0.0))) / 2
    if hi <= 0 or inv.i4 < -tol * hi**2:
        raise NonPhysicalError("complex symplectic spectrum")
    lo = min(max(inv.i4, 0.0) / hi, hi)
    return SymplecticSpectrum(float(np.sqrt(lo)), float(np.sqrt(hi)))


def partial_transpose(gamma) -> np.ndarray:
    """Time reversal on mode B (``p_B -> -p_B``), which sends ``I3`` to ``-I3``."""
    gamma = _as_square(gamma, 4)
    flip = np.diag([1.0, 1.0, 1.0, -1.0])
    return flip @ gamma @ flip


@lru_cache(maxsize=None)
def _sym_basis(dim: int) -> np.ndarray:
    """Frobenius-orthonormal basis of real symmetric ``dim x dim`` matrices."""
    mats = []
    for i in range(dim):
        for j in range(i, dim):
            e = np.zeros((dim, dim))
            if i == j:
                e[i, i] = 1.0
            else:
                e[i, j] = e[j, i] = 1 / np.sqrt(2)
            mats.append(e)
    basis = np.array(mats)
    basis.setflags(write=False)
    return basis


def phi_operator(gamma) -> np.ndarray:
    """Matrix of ``X -> Gamma X Gamma^T - J X J^T`` on symmetric matrices.

    Returned in the orthonormal symmetric basis, so it has shape
    ``(k, k)`` with ``k = 2N(2N+1)/2`` (10 for two modes).
    """
    gamma = _as_square(gamma)
    dim = gamma.shape[0]
    J = _form(dim // 2)
    basis = _sym_basis(dim)
    images = gamma @ basis @ gamma.T - J @ basis @ J.T
    return np.einsum("aij,bij->ab", basis, images)


def _vec(x: np.ndarray) -> np.ndarray:
    return np.einsum("aij,ij->a", _sym_basis(x.shape[0]), x)


def _unvec(v: np.ndarray, dim: int) -> np.ndarray:
    return np.einsum("a,aij->ij", v, _sym_basis(dim))


class _PhiSolver:
    """Cached Moore-Penrose inverse of the Phi superoperator for one Gamma."""

    def __init__(self, gamma):
        self.gamma = _as_square(gamma)
        self.dim = self.gamma.shape[0]
        op = phi_operator(self.gamma)
        self.pinv = np.linalg.pinv(op, rcond=PINV_RCOND)
        sv = np.linalg.svd(op, compute_uv=False)
        self.rank = int(np.sum(sv > PINV_RCOND * sv[0])) if sv[0] > 0 else 0

    def __call__(self, gamma_dot: np.ndarray) -> np.ndarray:
        gamma_dot = np.asarray(gamma_dot, dtype=float)
        if gamma_dot.shape != (self.dim, self.dim):
            raise ValueError("gamma_dot shape does not match Gamma")
        return _unvec(self.pinv @ _vec(gamma_dot), self.dim)


def solve_phi(gamma, gamma_dot, return_rank: bool = False):
    """Least-squares, minimum-norm solution of ``Gamma Phi Gamma^T - J Phi J^T = Gamma_dot``.

    The linear map acts on the space of symmetric matrices; singular values
    below ``1e-12 * sigma_max`` are treated as zero.  If ``return_rank`` is
    true, the effective rank of the map is returned as a second value.
    """
    gamma_dot = np.asarray(gamma_dot, dtype=float)
    if np.max(np.abs(gamma_dot - gamma_dot.T), initial=0.0) > SYM_TOL * max(
        1.0, np.max(np.abs(gamma_dot), initial=0.0)
    ):
        raise ValueError("gamma_dot must be symmetric")
    solver = _PhiSolver(gamma)
    phi = solver((gamma_dot + gamma_dot.T) / 2)
    phi = (phi + phi.T) / 2
    if return_rank:
        return phi, solver.rank
    return phi
