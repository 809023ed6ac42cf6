"""Closed-form layer: frozen high-precision values, identities, limits.

Reference numbers were precomputed independently with 50-digit arithmetic
(mpmath) from the defining formulas and are frozen here verbatim.
"""

import numpy as np
import pytest

from graysol.analytic import SolitonParams, advance_log_derivative, \
    advance_zero_limit, corrected_group_velocity, dispersion, \
    dispersion_curvature, dressing_phase_step, dressing_profile, \
    envelope_second_order, eta_zeta, excited_number_ratio, \
    excited_numbers, group_velocity, mode_quantities, packet_advance, \
    phase_shift_theta, soliton_profile, soliton_shift_prediction, \
    sound_frequency, stationary_residual, uniform_mode_derivatives, \
    uniform_modes, wkb_advance, zero_modes
from graysol.errors import InvalidParamsError, ZeroWavenumberError

from helpers import richardson_derivative

P_PLUS = SolitonParams(beta=0.5, v=0.5)
P_MINUS = SolitonParams(beta=-0.5, v=-0.5)

# 50-digit reference values (defining formulas evaluated with mpmath)
OMEGA_K1_B0 = 1.1180339887498948          # Ω(1)  at β=0, μ=1
OMEGA_K07_B05 = 0.39163670351459818       # Ω(0.7) at β=1/2
OMEGA0_K07 = 0.74163670351459818          # ω0(0.7)
NU_K07_B05 = 0.67510365367569167          # ν(0.7) at β=1/2
NU_K2_BM05 = 2.6213203435596426           # ν(2)   at β=-1/2
OMEGA0PP_K07 = 0.47749983440654979        # ω0''(0.7)
ADV_K07_B05 = 1.4610063734991829          # Δ(0.7) at β=1/2
ADV_K07_BM05 = 0.52415214520440142        # Δ(0.7) at β=-1/2
ADV_K10_B0 = 0.038461538461538462         # Δ(10)  at β=0
ADV_K20_B0 = 0.009900990099009901         # Δ(20)  at β=0
ADV_K30_B0 = 0.0044247787610619469        # Δ(30)  at β=0
ADV_K1M3_B05 = 1.7320501580500545         # Δ(1e-3) at β=1/2
ADV0_B05_PLUS = 1.7320508075688773        # κ/(c(c-β)) at β=1/2 (=√3)
UBAR_K07_B05 = 0.46169873858251499
VBAR_K07_B05 = -0.23240219903604653
ONE_OVER_2PI = 0.15915494309189534
ETA_K07_B05 = 0.15987670518673044
ZETA_K07_B05 = -0.10127581488507498
N2N1_K07 = 0.80321285140562249            # 2μ/(k²+2μ) at k=0.7
N2_FRACTION_K1M4 = 0.49999999874999875    # N2/(N1+N2) at k=1e-4
N2_FRACTION_K20 = 0.0049504950495049505   # N2/(N1+N2) at k=20
STEP_PER_EPS2_K07 = 1.7019775181057904    # rescaled, λ-independent
STEP_RAW_K07_L12 = 0.067165426612828129   # raw convention, λ=12, per ε²
NU_TILDE_K07_L12_B05 = 0.6772137211731576
DXEPS2_K07_L12_B05 = 1.5210324415235058
DXEPS2_K07_L12_BM05 = 0.54568715894139099
DXEPS2_K2_L12_BM05 = 0.24626537501208619
ZMODE_MASS_B05 = -3.4641016151377546      # -4κ at β=1/2
N1_RAW_PREF_K07_L12 = 0.055809348964932836  # √2π(ū²+v̄²)/λ


def test_params_validation():
    with pytest.raises(InvalidParamsError):
        SolitonParams(beta=1.1, v=0.0)
    with pytest.raises(InvalidParamsError):
        SolitonParams(beta=0.0, v=0.0, mu=-1.0)
    p = SolitonParams(beta=0.5, v=0.2, mu=4.0)
    assert p.c == 2.0
    assert p.kappa == pytest.approx(np.sqrt(3.75), rel=1e-15)
    assert p.mu_tilde == pytest.approx(4.0 + 0.1 - 0.02, rel=1e-15)


def test_soliton_profile_shape():
    x = np.linspace(-40, 40, 2001)
    psi = soliton_profile(P_PLUS, x, x0=3.0)
    rho = np.abs(psi)**2
    assert rho[0] == pytest.approx(1.0, abs=1e-12)
    assert rho[-1] == pytest.approx(1.0, abs=1e-12)
    i0 = np.argmin(rho)
    assert abs(x[i0] - 3.0) < 0.05
    assert rho[i0] == pytest.approx(P_PLUS.beta**2, abs=1e-5)


def test_stationary_residual_identically_zero():
    x = np.linspace(-30, 30, 4001)
    for beta, v in [(0.5, 0.5), (-0.3, 0.8), (0.7, -1.2), (0.2, 0.0)]:
        p = SolitonParams(beta=beta, v=v)
        res = stationary_residual(p, x, x0=1.7)
        assert np.max(np.abs(res)) < 1e-12


def test_dispersion_oracles():
    assert float(dispersion(1.0, SolitonParams(beta=0.0, v=0.0))) == \
        pytest.approx(OMEGA_K1_B0, rel=1e-14)
    assert float(dispersion(0.7, P_PLUS)) == \
        pytest.approx(OMEGA_K07_B05, rel=1e-14)
    assert float(sound_frequency(0.7, 1.0)) == \
        pytest.approx(OMEGA0_K07, rel=1e-14)


def test_dispersion_positive_for_subsonic_flow():
    k = np.linspace(1e-3, 30, 500)
    for beta in (-0.9, -0.5, 0.0, 0.5, 0.9):
        p = SolitonParams(beta=beta, v=beta)
        assert np.all(dispersion(k, p) > 0)


def test_group_velocity_oracles_and_fd():
    assert float(group_velocity(0.7, P_PLUS)) == \
        pytest.approx(NU_K07_B05, rel=1e-14)
    assert float(group_velocity(2.0, P_MINUS)) == \
        pytest.approx(NU_K2_BM05, rel=1e-14)
    fd = richardson_derivative(lambda k: float(dispersion(k, P_PLUS)), 0.7)
    assert float(group_velocity(0.7, P_PLUS)) == pytest.approx(fd, rel=1e-9)


def test_dispersion_curvature_oracle_and_fd():
    assert float(dispersion_curvature(0.7, P_PLUS)) == \
        pytest.approx(OMEGA0PP_K07, rel=1e-13)
    fd = richardson_derivative(
        lambda k: float(group_velocity(k, P_PLUS)), 0.7)
    assert float(dispersion_curvature(0.7, P_PLUS)) == \
        pytest.approx(fd, rel=1e-8)
    # β enters Ω only linearly: curvature is β-independent
    assert float(dispersion_curvature(0.7, P_MINUS)) == \
        pytest.approx(OMEGA0PP_K07, rel=1e-13)


def test_theta_branch_continuity():
    k = np.linspace(1e-3, 8.0, 4000)
    th = phase_shift_theta(k, P_PLUS)
    assert abs(th[0]) < 2e-3          # θ → 0 as k → 0+
    assert np.max(np.abs(np.diff(th))) < 0.05
    assert np.all(np.diff(th) < 0)    # θ strictly decreasing (Δ > 0)


def test_zero_wavenumber_raises():
    with pytest.raises(ZeroWavenumberError):
        phase_shift_theta(0.0, P_PLUS)
    with pytest.raises(ZeroWavenumberError):
        uniform_modes(0.0, P_PLUS)


def test_advance_oracles():
    p0 = SolitonParams(beta=0.0, v=0.0)
    assert float(packet_advance(0.7, P_PLUS)) == \
        pytest.approx(ADV_K07_B05, rel=1e-13)
    assert float(packet_advance(0.7, P_MINUS)) == \
        pytest.approx(ADV_K07_BM05, rel=1e-13)
    assert float(packet_advance(10.0, p0)) == \
        pytest.approx(ADV_K10_B0, rel=1e-13)
    assert float(packet_advance(20.0, p0)) == \
        pytest.approx(ADV_K20_B0, rel=1e-13)
    assert float(packet_advance(30.0, p0)) == \
        pytest.approx(ADV_K30_B0, rel=1e-13)


def test_advance_is_minus_dtheta_dk():
    for p in (P_PLUS, P_MINUS):
        for k in (0.3, 0.7, 1.4, 2.0, 5.0):
            fd = -richardson_derivative(
                lambda kk: float(phase_shift_theta(kk, p)), k, h=1e-5)
            assert abs(fd - float(packet_advance(k, p))) < 1e-6


def test_advance_limits():
    assert float(packet_advance(1e-3, P_PLUS)) == \
        pytest.approx(ADV_K1M3_B05, rel=1e-13)
    assert advance_zero_limit(P_PLUS, sign=1) == \
        pytest.approx(ADV0_B05_PLUS, rel=1e-14)
    # k → 0 limit reached to well under 1% by k = 1e-3
    assert abs(float(packet_advance(1e-3, P_PLUS))
               / advance_zero_limit(P_PLUS) - 1) < 1e-4
    # WKBJ asymptote at k = 30 to 1% (β = 0; finite β adds a βk/ω0 tail)
    p0 = SolitonParams(beta=0.0, v=0.0)
    assert abs(float(packet_advance(30.0, p0))
               / float(wkb_advance(30.0, p0.kappa)) - 1) < 0.01


def test_advance_derivative_fd():
    for k in (0.5, 1.0, 2.0):
        fd = richardson_derivative(
            lambda kk: float(packet_advance(kk, P_PLUS)), k)
        assert float(advance_log_derivative(k, P_PLUS)) == \
            pytest.approx(fd, rel=1e-8)


def test_uniform_modes_oracles():
    ub, vb = uniform_modes(0.7, P_PLUS)
    assert ub == pytest.approx(UBAR_K07_B05, rel=1e-14)
    assert vb == pytest.approx(VBAR_K07_B05, rel=1e-14)


def test_uniform_modes_normalization_and_sign():
    rng = np.random.default_rng(7)
    for _ in range(40):
        k = rng.uniform(0.05, 20.0)
        beta = rng.uniform(-0.9, 0.9)
        ub, vb = uniform_modes(k, SolitonParams(beta=beta, v=beta))
        assert ub*ub - vb*vb == pytest.approx(ONE_OVER_2PI, rel=1e-13)
        assert vb < 0.0 < ub


def test_uniform_mode_derivatives_vs_fd():
    for k in (0.4, 0.7, 1.5, 3.0):
        up, vp, upp, vpp = uniform_mode_derivatives(k, P_PLUS)
        fd_u = richardson_derivative(
            lambda kk: uniform_modes(kk, P_PLUS)[0], k)
        fd_v = richardson_derivative(
            lambda kk: uniform_modes(kk, P_PLUS)[1], k)
        fd_up = richardson_derivative(
            lambda kk: uniform_mode_derivatives(kk, P_PLUS)[0], k)
        fd_vp = richardson_derivative(
            lambda kk: uniform_mode_derivatives(kk, P_PLUS)[1], k)
        assert up == pytest.approx(fd_u, rel=1e-8)
        assert vp == pytest.approx(fd_v, rel=1e-8)
        assert upp == pytest.approx(fd_up, rel=1e-7)
        assert vpp == pytest.approx(fd_vp, rel=1e-7)


def test_eta_zeta_oracles_and_closed_forms():
    eta, zeta = eta_zeta(0.7, P_PLUS)
    assert eta == pytest.approx(ETA_K07_B05, rel=1e-13)
    assert zeta == pytest.approx(ZETA_K07_B05, rel=1e-13)
    for k in (0.3, 0.7, 2.0, 6.0):
        e2 = 1.0 + k*k/4.0
        eta, zeta = eta_zeta(k, P_MINUS)
        assert eta == pytest.approx(
            (k*k + 1.0)/(4.0*np.pi*k*np.sqrt(e2)), rel=1e-12)
        assert zeta == pytest.approx(-1.0/(4.0*np.pi*k*e2), rel=1e-12)


def test_excited_number_ratio():
    assert excited_number_ratio(0.7, P_PLUS) == \
        pytest.approx(N2N1_K07, rel=1e-14)
    assert excited_number_ratio(0.7, P_MINUS) == \
        pytest.approx(N2N1_K07, rel=1e-14)   # β-independent
    assert excited_number_ratio(2.0, P_MINUS) == \
        pytest.approx(1.0/3.0, rel=1e-14)


def test_n2_fraction_limits():
    r = excited_number_ratio(1e-4, P_PLUS)
    assert r/(1.0 + r) == pytest.approx(N2_FRACTION_K1M4, rel=1e-12)
    r = excited_number_ratio(20.0, P_PLUS)
    assert r/(1.0 + r) == pytest.approx(N2_FRACTION_K20, rel=1e-12)
    # free-particle tail: N2/N → 2μ/k²
    assert abs((r/(1.0 + r))/(2.0/400.0) - 1) < 0.02


def test_phase_step_oracles():
    for p in (P_PLUS, P_MINUS):
        for lam in (8.0, 12.0, 20.0):   # rescaled step is λ-independent
            assert dressing_phase_step(0.7, lam, 0.1, p) == \
                pytest.approx(STEP_PER_EPS2_K07*0.01, rel=1e-12)
    assert dressing_phase_step(0.7, 12.0, 1.0, P_PLUS, rescaled=False) == \
        pytest.approx(STEP_RAW_K07_L12, rel=1e-12)


def test_excited_numbers_conventions():
    n1, n2 = excited_numbers(0.7, 12.0, 0.2, P_PLUS)
    assert n1 == pytest.approx(0.04, rel=1e-15)
    assert n2/n1 == pytest.approx(N2N1_K07, rel=1e-13)
    n1_raw, _ = excited_numbers(0.7, 12.0, 1.0, P_PLUS, rescaled=False)
    assert n1_raw == pytest.approx(N1_RAW_PREF_K07_L12, rel=1e-12)


def test_shift_prediction_oracles():
    assert soliton_shift_prediction(0.7, 12.0, 1.0, P_PLUS) == \
        pytest.approx(DXEPS2_K07_L12_B05, rel=1e-12)
    assert soliton_shift_prediction(0.7, 12.0, 1.0, P_MINUS) == \
        pytest.approx(DXEPS2_K07_L12_BM05, rel=1e-12)
    assert soliton_shift_prediction(2.0, 12.0, 1.0, P_MINUS) == \
        pytest.approx(DXEPS2_K2_L12_BM05, rel=1e-12)
    # dropping the dressing quanta must underestimate
    assert soliton_shift_prediction(0.7, 12.0, 1.0, P_PLUS,
                                    include_second_order=False) < \
        DXEPS2_K07_L12_B05


def test_corrected_group_velocity_oracle():
    assert corrected_group_velocity(0.7, 12.0, P_PLUS) == \
        pytest.approx(NU_TILDE_K07_L12_B05, rel=1e-12)
    assert corrected_group_velocity(0.7, 12.0, P_PLUS) > \
        float(group_velocity(0.7, P_PLUS))


def test_zero_modes_pairing_and_mass():
    x = np.linspace(-60.0, 60.0, 12001)
    dx = x[1] - x[0]
    pair = zero_modes(P_PLUS, x)
    assert pair.mass == pytest.approx(ZMODE_MASS_B05, rel=1e-13)
    overlap = np.sum(np.conj(pair.translation)*pair.conjugate
                     + pair.translation*np.conj(pair.conjugate)).real*dx
    assert overlap == pytest.approx(1.0, rel=1e-10)


def test_dressing_profile_step_consistency():
    x = np.linspace(-300.0, 300.0, 4096)
    psi2 = dressing_profile(0.7, 12.0, 0.2, P_PLUS, t=0.0, x=x)
    # far-field phase of ψ2/ψ0 jumps by the analytic step
    ratio = psi2/soliton_profile(P_PLUS, x)
    jump = ratio.imag[-1] - ratio.imag[0]
    assert jump == pytest.approx(
        dressing_phase_step(0.7, 12.0, 0.2, P_PLUS), rel=1e-6)


def test_envelope_second_order_norm():
    x = np.linspace(-400.0, 400.0, 8192)
    dx = x[1] - x[0]
    env = envelope_second_order(0.7, 12.0, 0.1, P_PLUS, t=0.0, x=x)
    norm = np.sum(np.abs(env)**2)*dx
    assert norm == pytest.approx(0.01, rel=0.05)


def test_mode_quantities_bundle():
    mq = mode_quantities(0.7, 12.0, 0.1, P_PLUS)
    assert mq.advance == pytest.approx(ADV_K07_B05, rel=1e-13)
    assert mq.group_velocity == pytest.approx(NU_K07_B05, rel=1e-13)
    assert mq.n1 == pytest.approx(0.01, rel=1e-14)
    assert mq.shift == pytest.approx(DXEPS2_K07_L12_B05*0.01, rel=1e-12)
    assert mq.ubar == pytest.approx(UBAR_K07_B05, rel=1e-13)
