import math

import numpy as np
import pytest

from gaussqfi.metrology import (
    interference_closed,
    interference_term,
    interference_trace,
    metrology_point,
    qcr_interval,
    ratio_profile,
    schwarz_check,
    total_qfi,
)
from gaussqfi.qfi import GeneratorSpec, direction_from_angles, lqfi
from gaussqfi.states import (
    GaussianState,
    STSParams,
    SymmetricCMParams,
    make_sts,
    make_two_mode_symmetric,
    sts_parameters,
)

C_SEP = 0.364602637210138539  # |C| for aligned x, y or z generators at N=3, m=0.4
LX_SEP, LY_SEP = 1.28913093909693099, 0.364602637210138539

X, Y, Z = (1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0)


def pair(ma, mb):
    return GeneratorSpec(ma, "A"), GeneratorSpec(mb, "B")


@pytest.mark.parametrize("m, sign", [(X, 1), (Y, 1), (Z, -1)])
def test_interference_aligned(sep_state, m, sign):
    assert interference_term(sep_state, *pair(m, m)) == pytest.approx(sign * C_SEP, rel=1e-12)


@pytest.mark.parametrize("ma, mb", [(X, Y), (Y, Z), (X, Z)])
def test_interference_orthogonal_vanishes(sep_state, ma, mb):
    assert interference_term(sep_state, *pair(ma, mb)) == pytest.approx(0.0, abs=1e-14)


def test_interference_argument_order(sep_state):
    a, b = pair(X, Z)
    assert interference_term(sep_state, b, a) == interference_term(sep_state, a, b)
    with pytest.raises(ValueError):
        interference_term(sep_state, a, GeneratorSpec(Z, "A"))


def test_closed_form_matches_trace():
    rng = np.random.default_rng(9)
    for _ in range(50):
        params = sts_parameters(STSParams(*rng.uniform(0, 3, 2)))
        state = make_two_mode_symmetric(params)
        ma = direction_from_angles(*rng.uniform(0, 2 * math.pi, 2))
        mb = direction_from_angles(*rng.uniform(0, 2 * math.pi, 2))
        closed = interference_closed(ma, mb, params)
        assert interference_term(state, *pair(tuple(ma), tuple(mb))) == pytest.approx(
            closed, rel=1e-10, abs=1e-13
        )


def test_interference_trace_raw(sep_state):
    params = sts_parameters(STSParams(3.0, 0.4))
    assert interference_trace(sep_state, *pair(Y, Y)) == pytest.approx(4 * params.d**2, rel=1e-12)


def test_interference_closed_rejects_bad_directions():
    with pytest.raises(ValueError):
        interference_closed((1.0, 1.0, 0.0), X, SymmetricCMParams(2.0, 1.0))


def test_total_qfi_examples(sep_state, ent_state):
    assert total_qfi(sep_state, *pair(Z, Z)) == pytest.approx(1.84905660377358491, rel=1e-12)
    assert total_qfi(ent_state, *pair(Z, Z)) == pytest.approx(1.38461538461538462, rel=1e-12)
    assert total_qfi(sep_state, *pair(Y, Y)) == pytest.approx(4 * LY_SEP, rel=1e-12)
    assert total_qfi(sep_state, *pair(X, X)) == pytest.approx(2 * LX_SEP + 2 * C_SEP, rel=1e-12)


def test_product_state_is_additive():
    state = make_two_mode_symmetric(SymmetricCMParams(1.7, 0.0))
    for m in (X, Y, Z):
        a, b = pair(m, m)
        assert interference_term(state, a, b) == 0.0
        assert total_qfi(state, a, b) == pytest.approx(2 * lqfi(state, a), rel=1e-13)


def test_product_of_different_modes_non_isotropic():
    state = GaussianState(np.diag([0.8, 1.4, 1.25, 1 / 1.4 * 0.98]))
    a, b = pair(X, Z)
    assert interference_term(state, a, b) == pytest.approx(0.0, abs=1e-12)


def test_schwarz(ent_state):
    rng = np.random.default_rng(21)
    for _ in range(100):
        ma = tuple(direction_from_angles(*rng.uniform(0, 2 * math.pi, 2)))
        mb = tuple(direction_from_angles(*rng.uniform(0, 2 * math.pi, 2)))
        assert schwarz_check(ent_state, *pair(ma, mb))
    # saturated for aligned y generators on a symmetric state
    a, b = pair(Y, Y)
    assert abs(interference_term(ent_state, a, b)) == pytest.approx(
        math.sqrt(lqfi(ent_state, a) * lqfi(ent_state, b)), rel=1e-12
    )


def test_ratio_profile_shape(sep_state):
    params = sts_parameters(STSParams(3.0, 0.4))
    q, p = params.d**2, 2 * params.a**2 - params.d**2
    pts = ratio_profile(sep_state, phi=0.0, theta_grid=181)
    assert len(pts) == 181
    assert pts[0].theta == 0.0 and pts[-1].theta == pytest.approx(math.pi)
    assert pts[90].ratio == pytest.approx(4.0, rel=1e-12)
    assert pts[0].ratio == pytest.approx(2 + 2 * q / p, rel=1e-12)
    assert pts[-1].ratio == pytest.approx(2 + 2 * q / p, rel=1e-12)
    assert all(pt.lqfi_a == pytest.approx(pt.lqfi_b, rel=1e-12) for pt in pts)
    with pytest.raises(ValueError):
        ratio_profile(sep_state, theta_grid=1)


def test_ratio_uncorrelated_is_two():
    state = make_two_mode_symmetric(SymmetricCMParams(0.5, 0.0))
    for pt in ratio_profile(state, theta_grid=13):
        # the vacuum is unchanged by the y generator; there the ratio is undefined
        if pt.lqfi_a > 1e-20:
            assert pt.ratio == pytest.approx(2.0, rel=1e-12)
        assert pt.interference == 0.0


def test_ratio_nan_without_local_information(monkeypatch):
    # cos(pi/2) is not exactly zero, so force a vanishing local QFI directly
    import gaussqfi.metrology as met

    state = make_two_mode_symmetric(SymmetricCMParams(0.5, 0.0))
    monkeypatch.setattr(met, "lqfi", lambda s, spec: 0.0)
    monkeypatch.setattr(met, "interference_term", lambda s, a, b: 0.0)
    monkeypatch.setattr(met, "total_qfi", lambda s, a, b: 0.0)
    assert math.isnan(met.metrology_point(state, math.pi / 2, 0.0).ratio)


def test_metrology_point_decomposition(ent_state):
    pt = metrology_point(ent_state, 0.9, 2.1)
    assert pt.tqfi == pytest.approx(pt.lqfi_a + pt.lqfi_b + 2 * pt.interference, rel=1e-12)
    assert pt.ratio == pytest.approx(pt.tqfi / pt.lqfi_a)


@pytest.mark.parametrize(
    "n, m, low, high",
    [(3.0, 0.4, 0.440373816009814, 0.828056749619192),
     (1.0, 0.6, 0.410857288988542, 0.563006520539071)],
)
def test_qcr_interval(n, m, low, high):
    lo, hi = qcr_interval(make_sts(STSParams(n, m)))
    assert lo == pytest.approx(low, rel=1e-9)
    assert hi == pytest.approx(high, rel=1e-9)


def test_qcr_interval_without_correlation():
    lo, hi = qcr_interval(make_two_mode_symmetric(SymmetricCMParams(2.0, 0.0)))
    assert lo == pytest.approx(1 / math.sqrt(16 / 5))
    assert hi == math.inf
