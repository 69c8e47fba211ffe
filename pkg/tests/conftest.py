import numpy as np
import pytest
import scipy.linalg

from gaussqfi.states import STSParams, make_sts
from gaussqfi.symplectic import symplectic_form


@pytest.fixture
def sep_state():
    return make_sts(STSParams(3.0, 0.4))


@pytest.fixture
def ent_state():
    return make_sts(STSParams(1.0, 0.6))


def random_symplectic(rng, n_modes=2, scale=0.25):
    J = symplectic_form(n_modes)
    H = rng.normal(size=(2 * n_modes, 2 * n_modes)) * scale
    return scipy.linalg.expm(J @ (H + H.T))


def random_physical_cov(rng, n_modes=2):
    """Williamson form: S diag(nu, nu) S^T with every nu >= 1/2."""
    nus = rng.uniform(0.5, 4.0, size=n_modes)
    S = random_symplectic(rng, n_modes)
    G = S @ np.diag(np.concatenate([nus, nus])) @ S.T
    return (G + G.T) / 2, np.sort(nus)
