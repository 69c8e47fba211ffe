import math

import numpy as np
import pytest

from gaussqfi.states import (
    GaussianState,
    STSParams,
    SymmetricCMParams,
    apply_local_symplectic,
    apply_pure_loss,
    is_entangled,
    log_negativity,
    make_sts,
    make_two_mode_symmetric,
    pt_min_symplectic_eigenvalue,
    purity,
    rotation,
    squeezer,
    sts_parameters,
    symmetric_parameters,
)
from gaussqfi.symplectic import NonPhysicalError, mode_permutation, symplectic_eigenvalues_direct

# 30-digit reference values (mpmath), rounded to double
A_SEP, D_SEP = 4.68102231206695609, 3.10837093765668052
A_ENT, D_ENT = 2.71598335098656219, 2.26419203311825904


@pytest.mark.parametrize(
    "n, m, a, c, nu2",
    [(3.0, 0.4, A_SEP, D_SEP, 12.25), (1.0, 0.6, A_ENT, D_ENT, 2.25)],
)
def test_sts_parameters_oracle(n, m, a, c, nu2):
    p = sts_parameters(STSParams(n, m))
    assert p.a == pytest.approx(a, rel=1e-14)
    assert p.d == pytest.approx(-c, rel=1e-14)
    assert p.nu2 == pytest.approx(nu2, rel=1e-13)


def test_sts_zero_squeezing_is_thermal():
    p = sts_parameters(STSParams(2.0, 0.0))
    assert p.a == 2.5 and p.d == 0


def test_symmetric_block_layout():
    g = make_two_mode_symmetric(SymmetricCMParams(2.0, 1.0)).cov
    T = mode_permutation()
    block = T @ g @ T
    expected = np.array([[2, 0, -1, 0], [0, 2, 0, 1], [-1, 0, 2, 0], [0, 1, 0, 2.0]])
    np.testing.assert_array_equal(block, expected)


def test_symmetric_parameters_roundtrip(ent_state):
    p = symmetric_parameters(ent_state)
    assert p.a == pytest.approx(A_ENT, rel=1e-14)
    assert p.d == pytest.approx(-D_ENT, rel=1e-14)


def test_symmetric_parameters_rejects_other_patterns():
    state = GaussianState(np.diag([1.0, 2.0, 1.0, 0.5]))
    assert symmetric_parameters(state) is None


@pytest.mark.parametrize("a, d", [(0.4, 0.0), (1.0, 0.95), (-1.0, 0.0)])
def test_symmetric_params_unphysical(a, d):
    with pytest.raises(NonPhysicalError):
        SymmetricCMParams(a, d)


def test_symmetric_params_nonfinite():
    with pytest.raises(ValueError):
        SymmetricCMParams(float("nan"), 0.0)


@pytest.mark.parametrize("n, m", [(-0.1, 0.2), (1.0, -0.5), (float("inf"), 0.1)])
def test_sts_params_invalid(n, m):
    with pytest.raises(ValueError):
        STSParams(n, m)


def test_gaussian_state_is_readonly_and_validated():
    s = GaussianState(0.5 * np.eye(4))
    assert s.n_modes == 2
    np.testing.assert_array_equal(s.first_moment, np.zeros(4))
    with pytest.raises(ValueError):
        s.cov[0, 0] = 1.0
    with pytest.raises(NonPhysicalError):
        GaussianState(0.4 * np.eye(4))
    with pytest.raises(ValueError):
        GaussianState(0.5 * np.eye(4), first_moment=[0.0, 1.0])


@pytest.mark.parametrize("n, mu", [(1.0, 1 / 9), (0.0, 1.0), (3.0, 1 / 49)])
def test_purity(n, mu):
    # squeezing does not change purity
    for m in (0.0, 0.4, 0.9):
        assert purity(make_sts(STSParams(n, m))) == pytest.approx(mu, rel=1e-12)


def test_pt_eigenvalue_oracles(sep_state, ent_state):
    assert pt_min_symplectic_eigenvalue(sep_state) == pytest.approx(1.57265137441027557, rel=1e-12)
    assert pt_min_symplectic_eigenvalue(ent_state) == pytest.approx(0.451791317868303145, rel=1e-12)
    assert log_negativity(sep_state) == 0.0
    assert log_negativity(ent_state) == pytest.approx(0.794534891891835618, rel=1e-12)


@pytest.mark.parametrize("n", np.linspace(0.0, 5.0, 11))
@pytest.mark.parametrize("m", np.linspace(0.0, 1.0, 11))
def test_pt_eigenvalue_identity(n, m):
    # nu_tilde = (1 + 2N) exp(-2m) / 2 on the squeezed thermal family
    expected = (1 + 2 * n) * math.exp(-2 * m) / 2
    assert pt_min_symplectic_eigenvalue(make_sts(STSParams(n, m))) == pytest.approx(
        expected, rel=1e-12
    )


def test_entanglement_boundary():
    n = 1.0
    m_star = math.log(1 + 2 * n) / 2
    assert pt_min_symplectic_eigenvalue(make_sts(STSParams(n, m_star))) == pytest.approx(
        0.5, rel=1e-12
    )
    assert not is_entangled(make_sts(STSParams(n, m_star - 1e-6)))
    assert is_entangled(make_sts(STSParams(n, m_star + 1e-6)))


def test_entanglement_thresholds(sep_state, ent_state):
    assert not is_entangled(sep_state)
    assert is_entangled(ent_state)
    assert is_entangled(ent_state, threshold=1.0)
    # nu_tilde = 0.75: entangled only on the unit-vacuum scale
    s = make_sts(STSParams(1.0, math.log(2) / 2))
    assert not is_entangled(s, 0.5)
    assert is_entangled(s, 1.0)
    with pytest.raises(ValueError):
        is_entangled(sep_state, 0.7)


def test_local_symplectic_preserves_spectra(ent_state):
    s_a = rotation(0.3) @ squeezer(0.4)
    s_b = squeezer(-0.2) @ rotation(1.1)
    out = apply_local_symplectic(ent_state, s_a, s_b)
    np.testing.assert_allclose(
        symplectic_eigenvalues_direct(out.cov), symplectic_eigenvalues_direct(ent_state.cov), rtol=1e-12
    )
    assert pt_min_symplectic_eigenvalue(out) == pytest.approx(
        pt_min_symplectic_eigenvalue(ent_state), rel=1e-10
    )


def test_local_symplectic_rejects_non_symplectic(sep_state):
    with pytest.raises(ValueError):
        apply_local_symplectic(sep_state, np.diag([2.0, 1.0]), np.eye(2))
    with pytest.raises(ValueError):
        apply_local_symplectic(sep_state, np.eye(3), np.eye(2))


def test_loss_identity_and_full_loss(ent_state):
    np.testing.assert_allclose(apply_pure_loss(ent_state, 1.0).cov, ent_state.cov, atol=1e-15)
    out = apply_pure_loss(ent_state, 0.0)
    T = mode_permutation()
    block = T @ out.cov @ T
    np.testing.assert_allclose(block[2:, 2:], 0.5 * np.eye(2))
    np.testing.assert_allclose(block[:2, 2:], 0.0)


def test_loss_on_mode_a_mirrors_mode_b(ent_state):
    T = mode_permutation()
    a = T @ apply_pure_loss(ent_state, 0.3, "A").cov @ T
    b = T @ apply_pure_loss(ent_state, 0.3, "B").cov @ T
    np.testing.assert_allclose(a[:2, :2], b[2:, 2:])
    np.testing.assert_allclose(a[:2, 2:], b[:2, 2:])


@pytest.mark.parametrize("eta", np.round(np.arange(0.0, 1.01, 0.1), 10))
def test_loss_stays_physical(sep_state, ent_state, eta):
    for s in (sep_state, ent_state):
        apply_pure_loss(s, eta)


def test_loss_errors(sep_state):
    with pytest.raises(ValueError):
        apply_pure_loss(sep_state, 1.5)
    with pytest.raises(ValueError):
        apply_pure_loss(sep_state, 0.5, mode="C")
    with pytest.raises(ValueError):
        apply_pure_loss(GaussianState(0.5 * np.eye(2)), 0.5)
