"""Split-step engine: fixed points, conservation, symmetry, guards, io."""

import numpy as np
import pytest

from graysol.analytic import dispersion_curvature, group_velocity, \
    soliton_profile
from graysol.errors import CheckpointError, InstabilityError, \
    SeamCrossingError, StabilityError
from graysol.evolve import SeamGuard, WaveField, check_stability, evolve, \
    load_checkpoint, observables, save_checkpoint, stability_limit, step
from graysol.ring import RingGeometry
from graysol.synthesis import build_packet

from test_synthesis import SPEC


@pytest.fixture(scope="module")
def packet_field(tuned_minus, spectrum_minus):
    p, geom = tuned_minus
    psi1 = build_packet(SPEC, spectrum_minus, p, geom)
    return WaveField(geometry=geom, psi=soliton_profile(p, geom.x) + psi1,
                     t=0.0, beta=p.beta, v=p.v, mu_tilde=p.mu_tilde)


def test_uniform_fixed_point():
    geom = RingGeometry(half_length=200.0, n_points=2048)
    field = WaveField(geometry=geom, psi=np.full(2048, np.sqrt(1.3),
                                                 dtype=complex),
                      t=0.0, beta=0.3, v=0.0, mu_tilde=1.3)
    out, _ = evolve(field, 10.0, dt=5e-3)
    assert np.max(np.abs(out.psi - field.psi)) < 1e-13


def test_kink_fixed_point(kink_field_minus):
    out, _ = evolve(kink_field_minus, 20.0, dt=5e-3)
    assert np.max(np.abs(out.psi - kink_field_minus.psi)) < 2e-5
    assert out.t == pytest.approx(20.0, rel=1e-12)


def test_conservation(packet_field):
    o0 = observables(packet_field)
    out, samples = evolve(packet_field, 10.0, dt=5e-3)
    o1 = observables(out)
    assert abs(o1.number - o0.number)/o0.number < 1e-12
    assert abs(o1.momentum - o0.momentum) < 1e-10
    assert len(samples) >= 2
    assert samples[0].t == 0.0
    assert samples[-1].t == pytest.approx(10.0, rel=1e-12)


def test_dt_quadratic_convergence(packet_field):
    ref, _ = evolve(packet_field, 4.0, dt=5e-4)
    e1, _ = evolve(packet_field, 4.0, dt=1e-2)
    e2, _ = evolve(packet_field, 4.0, dt=5e-3)
    r1 = np.max(np.abs(e1.psi - ref.psi))
    r2 = np.max(np.abs(e2.psi - ref.psi))
    assert r1/r2 == pytest.approx(4.0, rel=0.15)


def test_time_reversal(packet_field):
    """On tuned rings the drift vanishes, so conjugation reverses time."""
    fwd, _ = evolve(packet_field, 5.0, dt=5e-3)
    back = WaveField(geometry=packet_field.geometry,
                     psi=np.conj(fwd.psi), t=0.0,
                     beta=packet_field.beta, v=packet_field.v,
                     mu_tilde=packet_field.mu_tilde)
    out, _ = evolve(back, 5.0, dt=5e-3)
    assert np.max(np.abs(np.conj(out.psi) - packet_field.psi)) < 1e-9


def test_translation_covariance(packet_field):
    """x-autonomy: evolving a shifted state equals shifting the evolved."""
    geom = packet_field.geometry
    q = geom.wavenumbers

    def shift(psi, d):
        return np.fft.ifft(np.exp(-1j*q*d)*np.fft.fft(psi))

    moved = WaveField(geometry=geom, psi=shift(packet_field.psi, 3.7),
                      t=0.0, beta=packet_field.beta, v=packet_field.v,
                      mu_tilde=packet_field.mu_tilde)
    a, _ = evolve(moved, 5.0, dt=5e-3)
    b, _ = evolve(packet_field, 5.0, dt=5e-3)
    assert np.max(np.abs(a.psi - shift(b.psi, 3.7))) < 1e-9


def test_stability_guard(packet_field):
    limit = stability_limit(packet_field)
    assert 0.0 < limit < 0.05
    with pytest.raises(StabilityError):
        check_stability(packet_field, 10.0*limit)
    with pytest.raises(StabilityError):
        evolve(packet_field, 1.0, dt=10.0*limit)
    # an empty field occupies no band: no finite limit to enforce
    empty = WaveField(geometry=packet_field.geometry,
                      psi=np.zeros_like(packet_field.psi), t=0.0,
                      beta=0.0, v=0.0, mu_tilde=1.0)
    assert stability_limit(empty) == np.inf


def test_nan_blowup_trips_guard(kink_field_minus):
    bad = kink_field_minus.psi.copy()
    bad[100] = np.nan
    field = WaveField(geometry=kink_field_minus.geometry, psi=bad, t=0.0,
                      beta=kink_field_minus.beta, v=kink_field_minus.v,
                      mu_tilde=kink_field_minus.mu_tilde)
    with pytest.raises(InstabilityError):
        step(field, 5e-3)


def test_seam_guard_fires(kink_field_minus):
    geom = kink_field_minus.geometry
    guard = SeamGuard(center0=geom.half_length - 20.0, speed=1.0, lam=12.0,
                      curvature=0.5, clearance=24.0)
    with pytest.raises(SeamCrossingError):
        evolve(kink_field_minus, 1.0, dt=5e-3, guard=guard)


def test_seam_guard_mass_estimate():
    guard = SeamGuard(center0=0.0, speed=1.0, lam=12.0, curvature=0.5,
                      clearance=24.0)
    assert guard.mass_near_seam(0.0, 400.0) < 1e-100
    assert guard.mass_near_seam(370.0, 400.0) > 0.2


def test_checkpoint_roundtrip(tmp_path, packet_field):
    path = tmp_path/"state.grsl"
    save_checkpoint(packet_field, str(path))
    loaded = load_checkpoint(str(path))
    assert np.array_equal(loaded.psi, packet_field.psi)
    assert loaded.t == packet_field.t
    assert loaded.beta == packet_field.beta
    assert loaded.v == packet_field.v
    assert loaded.mu_tilde == packet_field.mu_tilde
    assert loaded.geometry.half_length == \
        packet_field.geometry.half_length
    assert loaded.geometry.n_points == packet_field.geometry.n_points


def test_checkpoint_bad_magic(tmp_path, packet_field):
    path = tmp_path/"state.grsl"
    save_checkpoint(packet_field, str(path))
    raw = bytearray(path.read_bytes())
    raw[:4] = b"XXXX"
    path.write_bytes(bytes(raw))
    with pytest.raises(CheckpointError):
        load_checkpoint(str(path))


def test_checkpoint_truncated(tmp_path, packet_field):
    path = tmp_path/"state.grsl"
    save_checkpoint(packet_field, str(path))
    path.write_bytes(path.read_bytes()[:100])
    with pytest.raises(CheckpointError):
        load_checkpoint(str(path))


def test_observables_plane_wave():
    geom = RingGeometry(half_length=200.0, n_points=2048)
    q5 = 2.0*np.pi*5/(2.0*geom.half_length)
    field = WaveField(geometry=geom, psi=np.exp(1j*q5*geom.x), t=0.0,
                      beta=0.0, v=0.0, mu_tilde=1.0)
    obs = observables(field)
    assert obs.number == pytest.approx(2.0*geom.half_length, rel=1e-12)
    assert obs.momentum == pytest.approx(q5*obs.number, rel=1e-10)
    # half-open grid [-L, L): the uniform density's first moment is -L dx
    assert obs.first_moment == pytest.approx(
        -geom.half_length*geom.dx, rel=1e-12)
