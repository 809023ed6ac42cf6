"""Split-step Fourier evolution of the ring field.

Strang splitting of i ∂t ψ = [-½ ∂xx + iD ∂x + |ψ|² - μ̃] ψ with D = β - v:
half a nonlinear phase rotation in x-space, one full linear multiplier
exp(-i(q²/2 - Dq) dt) in q-space, half a rotation again.  Both substeps are
exactly norm-preserving, so the scheme is unconditionally stable in N and
second-order accurate in dt; N is in fact conserved to rounding and the
momentum P to ~1e-9 per full run, which the acceptance suite pins.

The per-step stability guard is an *accuracy* guard: the spectral phase
advanced per step, dt·(q²/2 + |D||q|), must stay ≤ 0.5 over the occupied
band (|ψ̂| above 1e-9 of its peak).  The formal limit over the full grid
would be violated ~5-60× by perfectly converged production grids, because
unoccupied high-q modes advance large exact phases harmlessly; occupancy is
what matters for trajectory accuracy.

Center-of-mass bookkeeping on the ring: with flux G = Im(ψ*ψx) - Dρ the
exact law is  dQ/dt = P - D N - 2L·G(seam), so Q(t) is a straight line
whenever nothing moves near the seam; observables() reports Q, P, N so the
drivers can fit Q̇ over windows.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import erfc

from .errors import CheckpointError, InstabilityError, SeamCrossingError, \
    StabilityError
from .kernels import nonlinear_phase
from .ring import RingGeometry

__all__ = [
    "WaveField",
    "Observables",
    "SeamGuard",
    "observables",
    "stability_limit",
    "check_stability",
    "step",
    "evolve",
    "save_checkpoint",
    "load_checkpoint",
]

_CHECKPOINT_MAGIC = b"GRSL"
_CHECKPOINT_VERSION = 1


@dataclass(frozen=True)
class WaveField:
    """Field configuration on the ring plus the frame it evolves in.

    mu_tilde is stored explicitly rather than derived because second-order
    initial states renormalize the background chemical potential while beta
    and v keep their nominal roles as labels of the physical frame.
    """

    geometry: RingGeometry
    psi: np.ndarray
    t: float
    beta: float
    v: float
    mu_tilde: float

    @property
    def drift(self) -> float:
        return self.beta - self.v

    def copy(self) -> "WaveField":
        return replace(self, psi=self.psi.copy())


@dataclass(frozen=True)
class Observables:
    """Conserved/monitored integrals at one sample time."""

    t: float
    number: float        # N  = ∫ |ψ|² dx
    momentum: float      # P  = ∫ Im(ψ* ∂x ψ) dx
    first_moment: float  # Q  = ∫ x |ψ|² dx  (ring coordinates, seam at ±L)


def observables(field: WaveField) -> Observables:
    geom = field.geometry
    rho = np.abs(field.psi)**2
    psi_k = np.fft.fft(field.psi)
    dpsi = np.fft.ifft(1j*geom.wavenumbers*psi_k)
    p = float(np.sum((np.conj(field.psi)*dpsi).imag)*geom.dx)
    return Observables(
        t=field.t,
        number=float(np.sum(rho)*geom.dx),
        momentum=p,
        first_moment=float(np.sum(geom.x*rho)*geom.dx),
    )


# --------------------------------------------------------------------------
# guards
# --------------------------------------------------------------------------

def stability_limit(field: WaveField, occupancy: float = 1e-9) -> float:
    """Largest dt satisfying the occupied-band phase-per-step bound."""
    spec = np.abs(np.fft.fft(field.psi))
    band = spec > occupancy*spec.max()
    if not band.any():
        return np.inf
    q = np.abs(field.geometry.wavenumbers[band])
    phase_rate = np.max(q*q/2.0 + abs(field.drift)*q)
    return 0.5/phase_rate if phase_rate > 0.0 else np.inf


def check_stability(field: WaveField, dt: float) -> None:
    """Raise StabilityError if dt over-rotates the occupied band."""
    dt_max = stability_limit(field)
    if dt > dt_max:
        raise StabilityError(
            f"dt = {dt:g} exceeds the occupied-band accuracy limit "
            f"{dt_max:.3e}; refine dt or check the state for high-q content")


@dataclass(frozen=True)
class SeamGuard:
    """Predictive watch on a packet's distance to the ring seam.

    Models the tracked packet as a dispersing Gaussian density envelope
    exp(-z²/w(t)²) with w(t) = λ sqrt(1 + (Ω'' t/λ²)²) moving at its
    envelope speed from center0.  The mass fraction within ``clearance``
    of the seam is the erfc tail; if it exceeds ``threshold`` the run
    aborts rather than silently wrapping packet density around the ring.
    """

    center0: float
    speed: float
    lam: float
    curvature: float        # Ω''(k) of the carrier
    clearance: float        # keep-out distance from the seam
    threshold: float = 1e-6

    def mass_near_seam(self, t: float, half_length: float) -> float:
        center = self.center0 + self.speed*t
        width = self.lam*np.sqrt(1.0 + (self.curvature*t/self.lam**2)**2)
        # wrap the predicted center into the ring; distance to nearest seam
        wrapped = (center + half_length) % (2.0*half_length) - half_length
        dist = half_length - abs(wrapped)
        return 0.5*erfc((dist - self.clearance)/width)

    def check(self, t: float, half_length: float) -> None:
        frac = self.mass_near_seam(t, half_length)
        if frac > self.threshold:
            raise SeamCrossingError(
                f"predicted packet mass fraction {frac:.2e} within "
                f"{self.clearance:g} of the seam at t = {t:.2f}")


# --------------------------------------------------------------------------
# stepping
# --------------------------------------------------------------------------

def _linear_multiplier(geom: RingGeometry, dt: float,
                       drift: float) -> np.ndarray:
    q = geom.wavenumbers
    return np.exp(-1j*(q*q/2.0 - drift*q)*dt)

_N_DRIFT_LIMIT = 1e-8  # relative, per step


def step(field: WaveField, dt: float) -> WaveField:
    """One Strang split step; checks the per-step norm drift.

    Convenience wrapper that rebuilds the linear multiplier each call; the
    evolve() loop caches it.
    """
    expk = _linear_multiplier(field.geometry, dt, field.drift)
    n0 = float(np.vdot(field.psi, field.psi).real)
    psi = _step_raw(field.psi, expk, dt, field.mu_tilde)
    n1 = float(np.vdot(psi, psi).real)
    # "not <=" instead of ">" so a NaN norm (blow-up) also trips the guard
    if not abs(n1 - n0) <= _N_DRIFT_LIMIT*n0:
        raise InstabilityError(
            f"norm drifted by {abs(n1 - n0)/n0:.3e} in one step at "
            f"t = {field.t:.3f}")
    return replace(field, psi=psi, t=field.t + dt)


def _step_raw(psi: np.ndarray, expk: np.ndarray, dt: float,
              mu_tilde: float) -> np.ndarray:
    psi = nonlinear_phase(psi, dt/2.0, mu_tilde)
    psi = np.fft.ifft(expk*np.fft.fft(psi))
    return nonlinear_phase(psi, dt/2.0, mu_tilde)


def evolve(field: WaveField, duration: float, dt: float = 5e-3,
           sample_every: int = 100, guard: SeamGuard | None = None,
           check_dt: bool = True) -> tuple[WaveField, list[Observables]]:
    """Evolve for ``duration`` (rounded to a whole number of steps).

    Samples observables every ``sample_every`` steps (and at the end);
    checks the per-step norm drift continuously and the seam guard at
    sample times.  Returns the final field and the sample list.
    """
    n_steps = max(1, int(round(duration/dt)))
    if check_dt:
        check_stability(field, dt)
    if guard is not None:
        guard.check(0.0, field.geometry.half_length)
        # also verify the guard holds at the end before paying for the run
        guard.check(n_steps*dt, field.geometry.half_length)
    expk = _linear_multiplier(field.geometry, dt, field.drift)
    psi = field.psi.copy()
    samples = [observables(field)]
    n_prev = float(np.vdot(psi, psi).real)
    t0 = field.t
    for s in range(1, n_steps + 1):
        psi = _step_raw(psi, expk, dt, field.mu_tilde)
        n_now = float(np.vdot(psi, psi).real)
        if not abs(n_now - n_prev) <= _N_DRIFT_LIMIT*n_prev:
            raise InstabilityError(
                f"norm drifted by {abs(n_now - n_prev)/n_prev:.3e} in one "
                f"step at t = {t0 + s*dt:.3f}")
        n_prev = n_now
        if s % sample_every == 0 or s == n_steps:
            current = replace(field, psi=psi, t=t0 + s*dt)
            if guard is not None:
                guard.check(s*dt, field.geometry.half_length)
            samples.append(observables(current))
    final = replace(field, psi=psi, t=t0 + n_steps*dt)
    return final, samples


# --------------------------------------------------------------------------
# checkpoints
# --------------------------------------------------------------------------
#
# Byte layout (little endian throughout):
#   bytes 0:4    magic  b"GRSL"
#   bytes 4:8    u32    format version (currently 1)
#   bytes 8:12   u32    header length H in bytes
#   bytes 12:12+H      UTF-8 JSON: {n_points, half_length, t, beta, v,
#                                   mu_tilde}
#   remainder          n_points interleaved (re, im) float64 pairs
# --------------------------------------------------------------------------

def save_checkpoint(field: WaveField, path: str) -> None:
    header = json.dumps({
        "n_points": field.geometry.n_points,
        "half_length": field.geometry.half_length,
        "t": field.t,
        "beta": field.beta,
        "v": field.v,
        "mu_tilde": field.mu_tilde,
    }).encode("utf-8")
    payload = np.empty(2*field.geometry.n_points, dtype="<f8")
    payload[0::2] = field.psi.real
    payload[1::2] = field.psi.imag
    with open(path, "wb") as fh:
        fh.write(_CHECKPOINT_MAGIC)
        fh.write(struct.pack("<II", _CHECKPOINT_VERSION, len(header)))
        fh.write(header)
        fh.write(payload.tobytes())


def load_checkpoint(path: str) -> WaveField:
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:4] != _CHECKPOINT_MAGIC:
        raise CheckpointError(f"{path}: not a graysol checkpoint")
    version, hlen = struct.unpack("<II", blob[4:12])
    if version != _CHECKPOINT_VERSION:
        raise CheckpointError(
            f"{path}: version {version} not supported "
            f"(this build reads {_CHECKPOINT_VERSION})")
    try:
        header = json.loads(blob[12:12 + hlen].decode("utf-8"))
        n = int(header["n_points"])
        raw = np.frombuffer(blob[12 + hlen:], dtype="<f8")
        if raw.size != 2*n:
            raise ValueError(f"payload holds {raw.size//2} points, "
                             f"header says {n}")
        psi = raw[0::2] + 1j*raw[1::2]
        geom = RingGeometry(float(header["half_length"]), n)
    except (KeyError, ValueError, json.JSONDecodeError) as exc:
        raise CheckpointError(f"{path}: malformed checkpoint: {exc}") from exc
    return WaveField(geometry=geom, psi=psi, t=float(header["t"]),
                     beta=float(header["beta"]), v=float(header["v"]),
                     mu_tilde=float(header["mu_tilde"]))
