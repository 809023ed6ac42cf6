"""Position measurements: notch fit, centroids, winding."""

import numpy as np
import pytest

from graysol.analytic import SolitonParams, soliton_profile
from graysol.errors import DegenerateWindowError, FitDivergedError, \
    LowMassError
from graysol.measure import envelope_centroid, fit_soliton_position, \
    packet_centroid, winding_number
from graysol.ring import RingGeometry

P = SolitonParams(beta=-0.5, v=-0.5)
GEOM = RingGeometry(half_length=400.0, n_points=8192)


def _notch(x, pos):
    return np.abs(soliton_profile(P, x, x0=pos))**2


def test_fit_exact_recovery():
    fit = fit_soliton_position(_notch(GEOM.x, 1.234), GEOM.x, P, guess=0.0)
    assert fit.position == pytest.approx(1.234, abs=1e-9)
    assert fit.depth == pytest.approx(P.kappa, rel=1e-9)
    assert fit.floor == pytest.approx(abs(P.beta), rel=1e-9)
    assert fit.residual < 1e-10


def test_fit_with_noise():
    rng = np.random.default_rng(3)
    rho = _notch(GEOM.x, -2.0) + 1e-6*rng.standard_normal(GEOM.n_points)
    fit = fit_soliton_position(rho, GEOM.x, P, guess=0.0)
    assert fit.position == pytest.approx(-2.0, abs=1e-5)


def test_fit_translation_equivariance():
    base = fit_soliton_position(_notch(GEOM.x, 0.0), GEOM.x, P).position
    for delta in (-5.0, -1.3, 2.2, 5.0):
        fit = fit_soliton_position(_notch(GEOM.x, delta), GEOM.x, P,
                                   guess=0.0)
        assert fit.position - base == pytest.approx(delta, abs=1e-5)


def test_fit_degenerate_window():
    with pytest.raises(DegenerateWindowError):
        fit_soliton_position(_notch(GEOM.x, 0.0), GEOM.x, P, window=0.5)


def test_fit_no_notch_raises():
    flat = np.full(GEOM.n_points, P.mu)
    with pytest.raises(FitDivergedError):
        fit_soliton_position(flat, GEOM.x, P)


def test_fit_wrong_depth_raises():
    shallow = 1.0 - 0.1*np.exp(-(GEOM.x/3.0)**2)
    with pytest.raises(FitDivergedError):
        fit_soliton_position(shallow, GEOM.x, P)


def test_packet_centroid_gaussian():
    rho_ref = np.ones_like(GEOM.x)
    rho = rho_ref + 0.01*np.exp(-((GEOM.x - 37.5)/12.0)**2)
    assert packet_centroid(rho, rho_ref, GEOM.x) == \
        pytest.approx(37.5, abs=1e-6)


def test_packet_centroid_low_mass():
    rho_ref = np.ones_like(GEOM.x)
    with pytest.raises(LowMassError):
        packet_centroid(rho_ref, rho_ref, GEOM.x)


def test_envelope_centroid_recenders():
    rho_ref = np.ones_like(GEOM.x)
    rho = rho_ref + 0.05*np.exp(-((GEOM.x - 60.0)/12.0)**2) \
        * np.cos(0.7*GEOM.x)
    c = envelope_centroid(rho, rho_ref, GEOM.x, lam_eff=12.0, guess=48.0)
    assert c == pytest.approx(60.0, abs=0.1)


def test_envelope_centroid_core_collision():
    rho_ref = np.ones_like(GEOM.x)
    rho = rho_ref + 0.05*np.exp(-((GEOM.x - 10.0)/12.0)**2)
    with pytest.raises(DegenerateWindowError):
        envelope_centroid(rho, rho_ref, GEOM.x, lam_eff=12.0, guess=10.0,
                          core_halfwidth=11.0)


def test_envelope_centroid_empty_window():
    rho_ref = np.ones_like(GEOM.x)
    with pytest.raises(DegenerateWindowError):
        envelope_centroid(rho_ref, rho_ref, GEOM.x, lam_eff=12.0,
                          guess=100.0)


def test_winding_plane_waves():
    for m in (-3, 0, 1, 7):
        q = 2.0*np.pi*m/(2.0*GEOM.half_length)
        assert winding_number(np.exp(1j*q*GEOM.x)) == m


def test_winding_kink(tuned_minus):
    p, geom = tuned_minus
    w = winding_number(soliton_profile(p, geom.x))
    # carrier e^{-ivx} with v = -1/2 on 2L ≈ 800 plus the core's jump
    assert w == 64
