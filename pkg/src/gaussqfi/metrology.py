"""Two-party phase estimation: total QFI, interference term and precision bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .correlation import p2_numeric, q2_numeric, qcr_bounds
from .qfi import (
    GeneratorSpec,
    build_generator,
    gamma_dot,
    isotropic_nu2,
    lqfi,
    qfi,
)
from .states import GaussianState, SymmetricCMParams
from .symplectic import symplectic_form

__all__ = [
    "MetrologyPoint",
    "interference_trace",
    "interference_term",
    "interference_closed",
    "total_qfi",
    "schwarz_check",
    "ratio_profile",
    "qcr_interval",
]


@dataclass(frozen=True)
class MetrologyPoint:
    theta: float
    phi: float
    lqfi_a: float
    lqfi_b: float
    tqfi: float
    interference: float
    ratio: float  # nan when lqfi_a == 0


def _opposite(spec_a: GeneratorSpec, spec_b: GeneratorSpec):
    if spec_a.side == spec_b.side:
        raise ValueError("generators must act on opposite modes")
    if spec_a.side == "B":
        spec_a, spec_b = spec_b, spec_a
    return spec_a, spec_b


def interference_trace(state: GaussianState, spec_a: GeneratorSpec,
                       spec_b: GeneratorSpec) -> float:
    """Raw ``Tr(Gamma_dot_A J Gamma_dot_B J)`` without normalization."""
    J = symplectic_form(state.n_modes)
    ga = gamma_dot(state.cov, build_generator(spec_a))
    gb = gamma_dot(state.cov, build_generator(spec_b))
    return float(np.trace(ga @ J @ gb @ J))


def interference_term(state: GaussianState, spec_a: GeneratorSpec,
                      spec_b: GeneratorSpec) -> float:
    """Cross term C with ``tqfi = lqfi_A + lqfi_B + 2 C``.

    For isotropic states this is the raw trace over ``8 (nu^2 + 1)``;
    otherwise it is obtained from the decomposition itself.
    """
    spec_a, spec_b = _opposite(spec_a, spec_b)
    nu2 = isotropic_nu2(state.cov)
    if nu2 is not None:
        return interference_trace(state, spec_a, spec_b) / (8 * (nu2 + 1))
    k = build_generator(spec_a) + build_generator(spec_b)
    return 0.5 * (qfi(state, k) - lqfi(state, spec_a) - lqfi(state, spec_b))


def interference_closed(m_a, m_b, params: SymmetricCMParams) -> float:
    """``4 (a_x b_x + a_y b_y - a_z b_z) d^2 / (8 (nu^2 + 1))`` for symmetric states."""
    m_a = np.asarray(m_a, dtype=float)
    m_b = np.asarray(m_b, dtype=float)
    for m in (m_a, m_b):
        if m.shape != (3,) or abs(np.linalg.norm(m) - 1) > 1e-12:
            raise ValueError("directions must be unit 3-vectors")
    dot = m_a[0] * m_b[0] + m_a[1] * m_b[1] - m_a[2] * m_b[2]
    return 4 * dot * params.d**2 / (8 * (params.nu2 + 1))


def total_qfi(state: GaussianState, spec_a: GeneratorSpec, spec_b: GeneratorSpec) -> float:
    spec_a, spec_b = _opposite(spec_a, spec_b)
    return qfi(state, build_generator(spec_a) + build_generator(spec_b))


def schwarz_check(state: GaussianState, spec_a: GeneratorSpec, spec_b: GeneratorSpec,
                  slack: float = 1e-12) -> bool:
    """``|C| <= F_A F_B`` up to ``slack``."""
    c = interference_term(state, spec_a, spec_b)
    bound = math.sqrt(max(lqfi(state, spec_a), 0.0) * max(lqfi(state, spec_b), 0.0))
    return abs(c) <= bound + slack


def metrology_point(state: GaussianState, theta: float, phi: float) -> MetrologyPoint:
    """Same local generator ``m(theta, phi)`` applied to both modes."""
    spec_a = GeneratorSpec.from_angles(theta, phi, "A")
    spec_b = GeneratorSpec.from_angles(theta, phi, "B")
    la = lqfi(state, spec_a)
    lb = lqfi(state, spec_b)
    c = interference_term(state, spec_a, spec_b)
    tq = la + lb + 2 * c
    direct = total_qfi(state, spec_a, spec_b)
    if abs(tq - direct) > 1e-12 * max(1.0, abs(direct)):
        raise ArithmeticError(f"decomposition mismatch: {tq!r} vs {direct!r}")
    ratio = direct / la if la > 0 else math.nan
    return MetrologyPoint(theta, phi, la, lb, direct, c, ratio)


def ratio_profile(state: GaussianState, phi: float = 0.0, theta_grid: int = 181):
    """Sweep ``theta`` over ``[0, pi]`` (endpoints included) at fixed ``phi``."""
    if theta_grid < 2:
        raise ValueError("theta_grid must be at least 2")
    return [metrology_point(state, float(t), phi)
            for t in np.linspace(0.0, math.pi, theta_grid)]


def qcr_interval(state: GaussianState) -> tuple[float, float]:
    """``(1/P_A, 1/Q_A)``; the upper end is ``inf`` without correlation."""
    q2, _ = q2_numeric(state)
    p2, _ = p2_numeric(state)
    return qcr_bounds(q2, p2)
