"""Acceptance checks shared by ``gaussqfi selftest`` and the test suite.

Each check returns a :class:`CheckResult`; the measured value is the worst
deviation seen, compared against a fixed tolerance.
"""

from __future__ import annotations

import io
import math
from dataclasses import asdict, dataclass

import numpy as np

from . import correlation
from .metrology import (
    interference_closed,
    interference_term,
    ratio_profile,
    schwarz_check,
)
from .qfi import (
    GeneratorSpec,
    build_generator,
    in_psd_domain,
    lqfi,
    qfi_general,
    qfi_isotropic,
)
from .states import (
    STSParams,
    SymmetricCMParams,
    apply_local_symplectic,
    apply_pure_loss,
    is_entangled,
    log_negativity,
    make_sts,
    make_two_mode_symmetric,
    pt_min_symplectic_eigenvalue,
    rotation,
    squeezer,
    sts_parameters,
)

SEED = 20140917


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    measured: float
    tolerance: float
    detail: str = ""

    def __post_init__(self):
        # checks often hand back numpy scalars, which json cannot encode
        self.passed = bool(self.passed)
        self.measured = float(self.measured)
        self.tolerance = float(self.tolerance)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"[{status}] {self.number:2d} {self.name}: "
                f"delta={self.measured:.3e} tol={self.tolerance:.1e} {self.detail}").rstrip()

    def as_dict(self) -> dict:
        return asdict(self)


def _sep_state():
    return make_sts(STSParams(3.0, 0.4))


def _ent_state():
    return make_sts(STSParams(1.0, 0.6))


def check_sep_state_values() -> CheckResult:
    state = _sep_state()
    q2, _ = correlation.q2_numeric(state)
    nu = pt_min_symplectic_eigenvalue(state)
    dq, dn = abs(q2 - 1.4584), abs(nu - 1.5727)
    separable = not is_entangled(state, 0.5) and not is_entangled(state, 1.0)
    ok = dq <= 0.005 and dn <= 0.005 and separable
    return CheckResult(1, "N=3 m=0.4 state: q2 / nu_tilde / separable", ok, max(dq, dn), 0.005,
                       f"q2={q2:.6f} nu_tilde={nu:.6f} separable={separable}")


def check_ent_state_values() -> CheckResult:
    state = _ent_state()
    q2, _ = correlation.q2_numeric(state)
    nu = pt_min_symplectic_eigenvalue(state)
    dq, dn = abs(q2 - 3.1549), abs(nu - 0.4518)
    entangled = is_entangled(state, 0.5)
    ok = dq <= 0.0005 and dn <= 0.005 and entangled
    return CheckResult(2, "N=1 m=0.6 state: q2 / nu_tilde / entangled", ok, max(dq, dn), 0.0005,
                       f"q2={q2:.6f} nu_tilde={nu:.6f} entangled={entangled}")


def check_ratio_four() -> CheckResult:
    worst = 0.0
    for state in (_sep_state(), _ent_state()):
        pts = ratio_profile(state, phi=0.0, theta_grid=181)
        mid = pts[90]
        assert abs(mid.theta - math.pi / 2) < 1e-15
        worst = max(worst, abs(mid.ratio - 4.0))
    separable = not is_entangled(_sep_state(), 1.0)
    return CheckResult(3, "ratio tqfi/lqfi = 4 at theta=pi/2 (separable state too)",
                       worst <= 1e-9 and separable, worst, 1e-9)


def isotropic_test_states():
    """Ten isotropic-class two-mode states: STS points and local symplectic images."""
    states = [make_sts(STSParams(n, m)) for n, m in
              [(0.0, 0.3), (0.5, 0.2), (1.0, 0.6), (2.0, 0.1), (3.0, 0.4), (5.0, 1.0)]]
    base = make_sts(STSParams(1.5, 0.5))
    states.append(apply_local_symplectic(base, rotation(0.7), rotation(-1.3)))
    states.append(apply_local_symplectic(base, squeezer(0.4), np.eye(2)))
    states.append(apply_local_symplectic(base, squeezer(-0.3) @ rotation(0.2), squeezer(0.5)))
    states.append(make_two_mode_symmetric(SymmetricCMParams(2.0, 0.0)))
    return states


def fibonacci_directions(n: int) -> np.ndarray:
    i = np.arange(n) + 0.5
    z = 1 - 2 * i / n
    r = np.sqrt(1 - z**2)
    ang = math.pi * (3 - math.sqrt(5)) * i
    return np.stack([r * np.cos(ang), r * np.sin(ang), z], axis=1)


def check_general_vs_isotropic() -> CheckResult:
    worst = 0.0
    count = 0
    for state in isotropic_test_states():
        for m in fibonacci_directions(100):
            k = build_generator(GeneratorSpec(tuple(m / np.linalg.norm(m))))
            g = qfi_general(state, k)
            i = qfi_isotropic(state, k)
            worst = max(worst, abs(g - i) / (1 + abs(g)))
            count += 1
    return CheckResult(4, f"qfi_general == qfi_isotropic over {count} points",
                       worst <= 1e-9, worst, 1e-9)


def dense_scan_kappa(state, params: SymmetricCMParams, n_theta=61, n_phi=120) -> float:
    """Independent estimate of KAPPA: closed form over a brute-force minimum."""
    best = math.inf
    for t in np.linspace(0, math.pi, n_theta):
        for p in np.linspace(0, 2 * math.pi, n_phi, endpoint=False):
            k = build_generator(GeneratorSpec.from_angles(t, p))
            best = min(best, qfi_isotropic(state, k))
    return correlation.q2_closed(params) / best


def check_numeric_vs_closed() -> CheckResult:
    kappas = []
    for n, m in [(3.0, 0.4), (1.0, 0.6), (0.5, 0.9)]:
        p = STSParams(n, m)
        kappas.append(dense_scan_kappa(make_sts(p), sts_parameters(p)))
    kappa_err = max(abs(k - 4.0) for k in kappas)
    worst = 0.0
    for n in np.arange(0, 5.01, 0.5):
        for m in np.arange(0, 1.01, 0.1):
            p = STSParams(float(n), float(m))
            closed = correlation.q2_closed(sts_parameters(p))
            num, _ = correlation.q2_numeric(make_sts(p))
            err = abs(num - closed) / closed if closed > 0 else num
            worst = max(worst, err)
    ok = worst <= 1e-6 and kappa_err <= 1e-9 and correlation.KAPPA == 4.0
    return CheckResult(5, "q2_numeric == q2_closed; scan-oracle kappa = 4", ok, worst, 1e-6,
                       f"kappa_scan_err={kappa_err:.1e} KAPPA={correlation.KAPPA}")


def check_sts_identity() -> CheckResult:
    worst = 0.0
    for n in np.linspace(0, 5, 21):
        for m in np.linspace(0, 1, 21):
            p = STSParams(float(n), float(m))
            worst = max(worst, abs(correlation.q2_sts(p)
                                   - correlation.q2_closed(sts_parameters(p))))
    return CheckResult(6, "q2_sts == q2_closed(make_sts)", worst <= 1e-12, worst, 1e-12)


def separability_onset(n_thermal: float, threshold: float = 1.0) -> float:
    """Smallest squeezing at which ``is_entangled(.., threshold)`` turns true (bisection)."""
    lo, hi = 0.0, 5.0
    for _ in range(200):
        mid = (lo + hi) / 2
        if is_entangled(make_sts(STSParams(n_thermal, mid)), threshold):
            hi = mid
        else:
            lo = mid
        if hi - lo < 1e-14:
            break
    return hi


def check_separability_boundary() -> CheckResult:
    worst = 0.0
    for n in np.arange(0.5, 5.01, 0.5):
        nm = n**2 / (1 + 2 * n)
        state = make_sts(STSParams(float(n), float(np.arcsinh(np.sqrt(nm)))))
        worst = max(worst, abs(pt_min_symplectic_eigenvalue(state) - 0.5))
    onset = separability_onset(1.0, threshold=1.0)
    onset_err = abs(onset - 0.5 * math.log(1.5))
    below = log_negativity(make_sts(STSParams(1.0, 0.2)))
    ok = worst <= 1e-12 and onset_err <= 1e-9 and below == 0.0 and round(onset, 1) == 0.2
    return CheckResult(7, "nu_tilde = 1/2 at separability boundary; log-negativity onset",
                       ok, worst, 1e-12, f"onset={onset:.6f}")


def random_directions(rng, n):
    v = rng.normal(size=(n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def check_interference_closed() -> CheckResult:
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(20):
        a = rng.uniform(0.6, 6.0)
        d = rng.uniform(-1, 1) * math.sqrt(a**2 - 0.25)
        params = SymmetricCMParams(a, d)
        state = make_two_mode_symmetric(params)
        for ma, mb in zip(random_directions(rng, 25), random_directions(rng, 25)):
            sa = GeneratorSpec(tuple(ma), "A")
            sb = GeneratorSpec(tuple(mb), "B")
            worst = max(worst, abs(interference_closed(sa.direction, sb.direction, params)
                                   - interference_term(state, sa, sb)))
    product = make_two_mode_symmetric(SymmetricCMParams(2.0, 0.0))
    zero = max(abs(interference_term(product, GeneratorSpec(tuple(ma), "A"),
                                     GeneratorSpec(tuple(mb), "B")))
               for ma, mb in zip(random_directions(rng, 50), random_directions(rng, 50)))
    return CheckResult(8, "interference_closed == interference_term; product -> 0",
                       worst <= 1e-10 and zero == 0.0, worst, 1e-10, f"product_max={zero:.1e}")


def random_states(rng, n):
    """STS states, their local symplectic images, and lossy states.

    A lossy state outside ``in_psd_domain`` is redrawn a few times, then
    replaced by the lossless state.
    """
    out = []
    for k in range(n):
        state = make_sts(STSParams(rng.uniform(0, 4), rng.uniform(0, 1.2)))
        if k % 3 == 1:
            state = apply_local_symplectic(
                state, squeezer(rng.normal(0, 0.4)) @ rotation(rng.uniform(0, 2 * math.pi)),
                rotation(rng.uniform(0, 2 * math.pi)) @ squeezer(rng.normal(0, 0.4)))
        elif k % 3 == 2:
            for _ in range(10):
                lossy = apply_pure_loss(state, rng.uniform(0, 1), "B")
                if in_psd_domain(lossy):
                    state = lossy
                    break
        out.append(state)
    return out


def check_schwarz() -> CheckResult:
    rng = np.random.default_rng(SEED + 1)
    violations = 0
    trials = 0
    for state in random_states(rng, 100):
        for ma, mb in zip(random_directions(rng, 100), random_directions(rng, 100)):
            trials += 1
            if not schwarz_check(state, GeneratorSpec(tuple(ma), "A"),
                                 GeneratorSpec(tuple(mb), "B"), slack=1e-12):
                violations += 1
    state = _sep_state()
    sa, sb = GeneratorSpec((0.0, 1.0, 0.0), "A"), GeneratorSpec((0.0, 1.0, 0.0), "B")
    gap = abs(interference_term(state, sa, sb)
              - math.sqrt(lqfi(state, sa) * lqfi(state, sb)))
    ok = violations == 0 and gap <= 1e-12
    return CheckResult(9, f"Schwarz bound over {trials} trials; equality at (0,1,0)",
                       ok, gap, 1e-12, f"violations={violations}")


def check_monotonicity() -> CheckResult:
    ms = np.linspace(0, 1, 51)
    mus = np.linspace(0.02, 1, 50)
    inc_m = all(np.all(np.diff([correlation.q2_sts(STSParams((1 / math.sqrt(mu) - 1) / 2, m))
                                for m in ms]) > 0) for mu in (1 / 9, 0.3, 1.0))
    dec_mu = all(np.all(np.diff([correlation.q2_sts(STSParams((1 / math.sqrt(mu) - 1) / 2, m))
                                 for mu in mus]) < 0) for m in (0.3, 0.4, 0.5))
    formula = max(abs(correlation.q2_sts(STSParams((1 / math.sqrt(mu) - 1) / 2, m))
                      - 2 * math.sinh(2 * m) ** 2 / (4 * mu + 1))
                  for mu in mus for m in (0.3, 0.4, 0.5))
    base = _sep_state()
    lossy = [correlation.q2_numeric(apply_pure_loss(base, eta, "B"))[0]
             for eta in np.linspace(0, 1, 11)]
    rises = min(np.diff(lossy))
    ok = inc_m and dec_mu and formula <= 1e-12 and rises >= -1e-12
    return CheckResult(10, "q2 up in m, down in mu, non-increasing under loss on B",
                       ok, formula, 1e-12,
                       f"inc_m={inc_m} dec_mu={dec_mu} min_step_eta={rises:.3e}")


def check_passive_invariance() -> CheckResult:
    rng = np.random.default_rng(SEED + 2)
    worst = 0.0
    for _ in range(100):
        p = STSParams(rng.uniform(0, 4), rng.uniform(0, 1.2))
        state = make_sts(p)
        if rng.uniform() < 0.5:
            lossy = apply_pure_loss(state, rng.uniform(0.05, 1), "B")
            if in_psd_domain(lossy):
                state = lossy
        rotated = apply_local_symplectic(state, rotation(rng.uniform(0, 2 * math.pi)),
                                         rotation(rng.uniform(0, 2 * math.pi)))
        worst = max(worst, abs(correlation.q2_numeric(rotated)[0]
                               - correlation.q2_numeric(state)[0]))
    return CheckResult(11, "q2_numeric invariant under local rotations (100 trials)",
                       worst <= 1e-6, worst, 1e-6)


def check_cli_determinism() -> CheckResult:
    from .cli import main

    commands = [
        ["fig1a", "--mu", "0.1111111111111111", "--steps", "41"],
        ["fig1b", "--m", "0.3,0.4,0.5", "--steps", "20"],
        ["fig3", "--N", "3", "--m", "0.4", "--steps", "37", "--jobs", "3"],
        ["report", "--N", "1", "--m", "0.6"],
    ]
    mismatches = 0
    for argv in commands:
        outs = []
        for _ in range(2):
            buf = io.StringIO()
            code = main(argv, stdout=buf)
            outs.append((code, buf.getvalue().encode()))
        if outs[0] != outs[1] or outs[0][0] != 0:
            mismatches += 1
    return CheckResult(12, "CLI sweeps byte-identical across runs", mismatches == 0,
                       float(mismatches), 0.0)


CHECKS = [
    check_sep_state_values,
    check_ent_state_values,
    check_ratio_four,
    check_general_vs_isotropic,
    check_numeric_vs_closed,
    check_sts_identity,
    check_separability_boundary,
    check_interference_closed,
    check_schwarz,
    check_monotonicity,
    check_passive_invariance,
    check_cli_determinism,
]


def run_all() -> list[CheckResult]:
    results = []
    for check in CHECKS:
        try:
            results.append(check())
        except Exception as exc:  # a crashing check is a failing check
            num = CHECKS.index(check) + 1
            results.append(CheckResult(num, check.__name__, False, math.nan, math.nan,
                                       f"{type(exc).__name__}: {exc}"))
    return results
