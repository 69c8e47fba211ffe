"""Local quadratic generators and quantum Fisher information of Gaussian states.

Generators are real ``2N x 2N`` matrices ``K`` in the symplectic algebra; a
state evolves as ``Gamma_dot = K Gamma + Gamma K^T``.  The single-mode
basis is ``sigma_x``, ``-i sigma_y`` (the phase-rotation generator) and
``sigma_z``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .states import GaussianState
from .symplectic import _PhiSolver, _perm, symplectic_eigenvalues_direct, symplectic_form

__all__ = [
    "SIGMA_X",
    "SIGMA_Y_REAL",
    "SIGMA_Z",
    "GeneratorSpec",
    "build_generator",
    "gamma_dot",
    "isotropic_nu2",
    "is_isotropic",
    "in_psd_domain",
    "IndefiniteQFIError",
    "qfi_general",
    "qfi_isotropic",
    "qfi_bilinear",
    "qfi",
    "lqfi",
    "direction_gram",
    "direction_from_angles",
]

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])
SIGMA_Y_REAL = np.array([[0.0, -1.0], [1.0, 0.0]])  # -i * sigma_y
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]])
_BASIS = (SIGMA_X, SIGMA_Y_REAL, SIGMA_Z)

ISO_TOL = 1e-10


class IndefiniteQFIError(ValueError):
    """The covariance-matrix QFI form is not positive semidefinite for this state."""


def direction_from_angles(theta: float, phi: float) -> np.ndarray:
    return np.array(
        [np.cos(theta), np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi)]
    )


@dataclass(frozen=True)
class GeneratorSpec:
    """Unit direction ``(m_x, m_y, m_z)`` of a single-mode generator on ``side``."""

    direction: tuple
    side: str = "A"

    def __post_init__(self):
        m = np.asarray(self.direction, dtype=float)
        if m.shape != (3,) or not np.all(np.isfinite(m)):
            raise ValueError("direction must be a finite 3-vector")
        if abs(np.linalg.norm(m) - 1) > 1e-12:
            raise ValueError(f"direction must have unit norm, got |m|={np.linalg.norm(m):.6g}")
        if self.side not in ("A", "B"):
            raise ValueError("side must be 'A' or 'B'")
        object.__setattr__(self, "direction", tuple(float(x) for x in m))

    @classmethod
    def from_angles(cls, theta: float, phi: float, side: str = "A") -> "GeneratorSpec":
        m = direction_from_angles(theta, phi)
        return cls(tuple(m / np.linalg.norm(m)), side)


def _embed(k: np.ndarray, side: str) -> np.ndarray:
    mode = np.zeros((4, 4))
    if side == "A":
        mode[:2, :2] = k
    else:
        mode[2:, 2:] = k
    T = _perm()
    return T @ mode @ T


def _local_generator(m, side: str) -> np.ndarray:
    k = sum(c * s for c, s in zip(m, _BASIS))
    return _embed(k, side)


def build_generator(spec: GeneratorSpec) -> np.ndarray:
    """4x4 generator for ``spec``, zero outside the chosen mode."""
    return _local_generator(spec.direction, spec.side)


def gamma_dot(gamma, K) -> np.ndarray:
    gamma = np.asarray(gamma, dtype=float)
    K = np.asarray(K, dtype=float)
    if gamma.shape != K.shape:
        raise ValueError(f"dimension mismatch: Gamma {gamma.shape}, K {K.shape}")
    return K @ gamma + gamma @ K.T


def isotropic_nu2(gamma) -> float | None:
    """``nu^2`` if ``(Gamma J)^2 = -nu^2 I`` within tolerance, otherwise ``None``."""
    gamma = np.asarray(gamma, dtype=float)
    J = symplectic_form(gamma.shape[0] // 2)
    sq = gamma @ J @ gamma @ J
    nu2 = -np.trace(sq) / sq.shape[0]
    if np.max(np.abs(sq + nu2 * np.eye(sq.shape[0]))) > ISO_TOL * max(1.0, nu2):
        return None
    return float(nu2)


def is_isotropic(state: GaussianState) -> bool:
    return isotropic_nu2(state.cov) is not None


def in_psd_domain(state: GaussianState, tol: float = 1e-12) -> bool:
    """Whether the QFI bilinear form is positive semidefinite for ``state``.

    With the vacuum at ``I/2``, the superoperator has eigenvalues
    ``nu_i nu_j - 1`` on the cross blocks of the Williamson frame, so
    ``qfi_general`` can turn negative when two symplectic eigenvalues have
    a product below one.  Isotropic states never populate those blocks.
    """
    if is_isotropic(state):
        return True
    nus = symplectic_eigenvalues_direct(state.cov)
    return bool(nus[0] * nus[1] >= 1 - tol) if len(nus) > 1 else True


@lru_cache(maxsize=256)
def _solver_for(key: bytes, dim: int) -> _PhiSolver:
    return _PhiSolver(np.frombuffer(key).reshape(dim, dim))


def _solver(gamma: np.ndarray) -> _PhiSolver:
    gamma = np.ascontiguousarray(gamma, dtype=float)
    return _solver_for(gamma.tobytes(), gamma.shape[0])


def qfi_general(state: GaussianState, K, d_dot=None) -> float:
    """QFI from the covariance-matrix formula with a pseudo-inverse ``Phi``.

    ``F^2 = (Tr(Phi Gamma_dot) / 2 + 2 d_dot . Gamma^{-1} d_dot) / 4`` with
    ``Phi`` the minimum-norm solution of
    ``Gamma Phi Gamma^T - J Phi J^T = Gamma_dot``.

    Parameters
    ----------
    state : GaussianState
    K : array_like
        Generator matrix of the same size as ``state.cov``.
    d_dot : array_like, optional
        Rate of change of the first moments; zero by default.
    """
    gamma = state.cov
    gd = gamma_dot(gamma, K)
    phi = _solver(gamma)(gd)
    value = 0.5 * np.sum(phi * gd)
    if d_dot is not None:
        d_dot = np.asarray(d_dot, dtype=float)
        if d_dot.shape != (gamma.shape[0],):
            raise ValueError("d_dot has the wrong length")
        value += 2 * d_dot @ np.linalg.solve(gamma, d_dot)
    return float(value / 4)


def qfi_isotropic(state: GaussianState, K) -> float:
    """``Tr((Gamma_dot J)^2) / (8 (nu^2 + 1))``, valid when ``(Gamma J)^2 = -nu^2 I``."""
    nu2 = isotropic_nu2(state.cov)
    if nu2 is None:
        raise ValueError("state is not in the isotropic class (Gamma J)^2 = -nu^2 I")
    gd = gamma_dot(state.cov, K)
    J = symplectic_form(state.n_modes)
    gj = gd @ J
    return float(np.sum(gj * gj.T) / (8 * (nu2 + 1)))


def qfi_bilinear(state: GaussianState, K1, K2) -> float:
    """Symmetric bilinear form whose diagonal is the QFI, so ``qfi(K) = B(K, K)``."""
    gamma = state.cov
    gd1 = gamma_dot(gamma, K1)
    gd2 = gamma_dot(gamma, K2)
    nu2 = isotropic_nu2(gamma)
    if nu2 is not None:
        J = symplectic_form(state.n_modes)
        return float(np.trace(gd1 @ J @ gd2 @ J) / (8 * (nu2 + 1)))
    solve = _solver(gamma)
    cross = np.sum(solve(gd1) * gd2) + np.sum(solve(gd2) * gd1)
    return float(cross / 16)


def qfi(state: GaussianState, K) -> float:
    """QFI of generator ``K``; the isotropic shortcut is used when it applies."""
    if is_isotropic(state):
        return qfi_isotropic(state, K)
    return qfi_general(state, K)


def lqfi(state: GaussianState, spec: GeneratorSpec) -> float:
    return qfi(state, build_generator(spec))


def direction_gram(state: GaussianState, side: str = "A") -> np.ndarray:
    """3x3 matrix ``G`` with ``lqfi(m) = m^T G m`` for every direction ``m``."""
    ks = [_local_generator(e, side) for e in np.eye(3)]
    G = np.empty((3, 3))
    for i in range(3):
        for j in range(i, 3):
            G[i, j] = G[j, i] = qfi_bilinear(state, ks[i], ks[j])
    return G
