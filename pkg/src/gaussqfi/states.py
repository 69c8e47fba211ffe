"""Two-mode Gaussian state families and elementary descriptors."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .symplectic import (
    NU_MIN,
    NonPhysicalError,
    _perm,
    check_cov,
    partial_transpose,
    symplectic_eigenvalues,
    symplectic_form,
)

__all__ = [
    "GaussianState",
    "STSParams",
    "SymmetricCMParams",
    "make_two_mode_symmetric",
    "make_sts",
    "sts_parameters",
    "symmetric_parameters",
    "purity",
    "pt_min_symplectic_eigenvalue",
    "log_negativity",
    "is_entangled",
    "rotation",
    "squeezer",
    "apply_local_symplectic",
    "apply_pure_loss",
]


@dataclass(frozen=True)
class GaussianState:
    """First moments and covariance matrix (quadrature ordering)."""

    cov: np.ndarray
    first_moment: np.ndarray = field(default=None)

    def __post_init__(self):
        cov = check_cov(self.cov)
        dim = cov.shape[0]
        if self.first_moment is None:
            mean = np.zeros(dim)
        else:
            mean = np.array(self.first_moment, dtype=float)
        if mean.shape != (dim,) or not np.all(np.isfinite(mean)):
            raise ValueError(f"first_moment must be a finite vector of length {dim}")
        mean.setflags(write=False)
        object.__setattr__(self, "cov", cov)
        object.__setattr__(self, "first_moment", mean)

    @property
    def n_modes(self) -> int:
        return self.cov.shape[0] // 2


@dataclass(frozen=True)
class SymmetricCMParams:
    """``a = b`` on the diagonal, ``gamma_AB = diag(-d, d)`` in mode ordering."""

    a: float
    d: float

    def __post_init__(self):
        if not (np.isfinite(self.a) and np.isfinite(self.d)):
            raise ValueError("a and d must be finite")
        if self.a <= 0 or self.a**2 - self.d**2 < NU_MIN**2 - 1e-12:
            raise NonPhysicalError(
                f"(a={self.a}, d={self.d}) violates a^2 - d^2 >= {NU_MIN**2}"
            )

    @property
    def nu2(self) -> float:
        return self.a**2 - self.d**2


@dataclass(frozen=True)
class STSParams:
    """Squeezed thermal state: ``n_thermal`` photons per mode, squeezing ``m_squeeze``."""

    n_thermal: float
    m_squeeze: float

    def __post_init__(self):
        for name in ("n_thermal", "m_squeeze"):
            v = getattr(self, name)
            if not np.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be finite and non-negative, got {v!r}")


def sts_parameters(p: STSParams) -> SymmetricCMParams:
    s = 1 + 2 * p.n_thermal
    nm = np.sinh(p.m_squeeze) ** 2
    a = nm * s + p.n_thermal + 0.5
    c = s * np.sqrt(nm * (nm + 1))
    return SymmetricCMParams(a=float(a), d=float(-c))


def make_two_mode_symmetric(params: SymmetricCMParams) -> GaussianState:
    a, d = params.a, params.d
    block = np.array(
        [
            [a, 0.0, -d, 0.0],
            [0.0, a, 0.0, d],
            [-d, 0.0, a, 0.0],
            [0.0, d, 0.0, a],
        ]
    )
    T = _perm()
    return GaussianState(T @ block @ T)


def make_sts(p: STSParams) -> GaussianState:
    return make_two_mode_symmetric(sts_parameters(p))


def symmetric_parameters(state: GaussianState, tol: float = 1e-10):
    """Recover ``(a, d)`` if ``state`` has the symmetric block pattern, else ``None``."""
    if state.n_modes != 2:
        return None
    T = _perm()
    g = T @ state.cov @ T
    a, d = g[0, 0], g[1, 3]
    try:
        ref = make_two_mode_symmetric(SymmetricCMParams(a, d)).cov
    except ValueError:
        return None
    if np.max(np.abs(ref - state.cov)) > tol * max(1.0, abs(a)):
        return None
    return SymmetricCMParams(float(a), float(d))


def purity(state: GaussianState) -> float:
    """``Tr(rho^2) = 1 / (2^N sqrt(det Gamma))``; for symmetric states ``1/(2 nu)^2``."""
    return float(1.0 / (2**state.n_modes * np.sqrt(np.linalg.det(state.cov))))


def pt_min_symplectic_eigenvalue(state: GaussianState) -> float:
    if state.n_modes != 2:
        raise ValueError("partial transpose is defined here for two modes only")
    return symplectic_eigenvalues(partial_transpose(state.cov)).nu_minus


def log_negativity(state: GaussianState) -> float:
    return max(0.0, -float(np.log(pt_min_symplectic_eigenvalue(state))))


def is_entangled(state: GaussianState, threshold: float = 0.5) -> bool:
    """PPT test ``nu_tilde_minus < threshold``.

    ``threshold=0.5`` is the vacuum-scale criterion; ``threshold=1`` matches
    the onset of a positive log-negativity.
    """
    if threshold not in (0.5, 1.0):
        raise ValueError("threshold must be 0.5 or 1")
    return pt_min_symplectic_eigenvalue(state) < threshold


def rotation(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def squeezer(r: float) -> np.ndarray:
    return np.diag([np.exp(r), np.exp(-r)])


def _local_blocks(s_a, s_b) -> np.ndarray:
    j2 = symplectic_form(1)
    blocks = []
    for name, s in (("S_A", s_a), ("S_B", s_b)):
        s = np.asarray(s, dtype=float)
        if s.shape != (2, 2):
            raise ValueError(f"{name} must be 2x2")
        if np.max(np.abs(s.T @ j2 @ s - j2)) > 1e-10:
            raise ValueError(f"{name} is not symplectic")
        blocks.append(s)
    mode = np.zeros((4, 4))
    mode[:2, :2], mode[2:, 2:] = blocks
    T = _perm()
    return T @ mode @ T


def apply_local_symplectic(state: GaussianState, s_a, s_b) -> GaussianState:
    """Act with ``S_A (+) S_B`` on both moments."""
    S = _local_blocks(s_a, s_b)
    return GaussianState(S @ state.cov @ S.T, S @ state.first_moment)


def apply_pure_loss(state: GaussianState, eta: float, mode: str = "B") -> GaussianState:
    """Beam-splitter loss with transmissivity ``eta`` on one mode.

    The chosen mode's block becomes ``eta * block + (1 - eta) * NU_MIN * I``
    and its cross-correlations are scaled by ``sqrt(eta)``.
    """
    if not 0 <= eta <= 1:
        raise ValueError(f"eta must lie in [0, 1], got {eta!r}")
    if state.n_modes != 2:
        raise ValueError("apply_pure_loss expects a two-mode state")
    if mode not in ("A", "B"):
        raise ValueError("mode must be 'A' or 'B'")
    idx = [0, 2] if mode == "A" else [1, 3]
    X = np.eye(4)
    Y = np.zeros((4, 4))
    for i in idx:
        X[i, i] = np.sqrt(eta)
        Y[i, i] = (1 - eta) * NU_MIN
    return GaussianState(X @ state.cov @ X.T + Y, X @ state.first_moment)
