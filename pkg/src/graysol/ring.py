"""Periodic ring geometry and the discrete mode spectrum on it.

A kink on a ring of circumference 2L is only a smooth periodic solution if
the carrier phase -v·2L plus the kink's internal phase jump

    π - 2 atan2(β, κ)

closes to a multiple of 2π.  tune_ring adjusts L near a requested target so
this holds exactly (v = β: the frame rides the soliton and the background
flows through it).  On a tuned ring the scattering modes quantize through
the transmission phase:

    F(k) = 2kL + θ(k) = 2πn ,

one root per integer since dF/dk = 2L - Δ(k) > 0.  This is equivalent to
the textbook form k cot(kL) = 2(κ - βΩ/(κk)) but is monotone, so every
root is bracketed by construction; discrete_wavenumbers polishes each with
Brent's method and cross-checks the cot form.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .analytic import SolitonParams, packet_advance, phase_shift_theta, \
    dispersion
from .errors import InvalidParamsError, NoSolutionError, RootBracketingError, \
    InsufficientSpectrumError

__all__ = [
    "RingGeometry",
    "DiscreteSpectrum",
    "seam_phase_jump",
    "tune_ring",
    "discrete_wavenumbers",
]


@dataclass(frozen=True)
class RingGeometry:
    """Uniform grid on the ring x ∈ [-L, L), seam at ±L.

    n_points must be a power of two (FFT stepping) and at least 256; the
    spacing must resolve the shortest structures we propagate (dx ≤ 0.2 at
    unit sound speed) and the ring must be long against the kink core
    (κL ≥ 15 is checked at tune time, not here, since κ is not known to
    the geometry).
    """

    half_length: float
    n_points: int

    def __post_init__(self):
        n = self.n_points
        if n < 256 or (n & (n - 1)) != 0:
            raise InvalidParamsError(
                f"n_points must be a power of two >= 256, got {n}")
        if self.half_length <= 0.0:
            raise InvalidParamsError("half_length must be positive")
        if self.dx > 0.2:
            raise InvalidParamsError(
                f"grid spacing {self.dx:.4f} exceeds 0.2; increase n_points")

    @property
    def dx(self) -> float:
        return 2.0*self.half_length/self.n_points

    @property
    def x(self) -> np.ndarray:
        L = self.half_length
        return np.linspace(-L, L, self.n_points, endpoint=False)

    @property
    def wavenumbers(self) -> np.ndarray:
        """Spectral grid q conjugate to x (fftfreq ordering)."""
        return 2.0*np.pi*np.fft.fftfreq(self.n_points, d=self.dx)


@dataclass(frozen=True)
class DiscreteSpectrum:
    """Quantized scattering wavenumbers on a tuned ring.

    wavenumbers[i] solves 2kL + θ(k) = 2π·indices[i]; spacings approach
    π/L from above as k grows (the advance steals -θ'/2L per mode).
    """

    params: SolitonParams
    geometry: RingGeometry
    wavenumbers: np.ndarray
    indices: np.ndarray = field(repr=False)

    def mode_measure(self) -> np.ndarray:
        """Density-of-states weight dk_n = 2π/(2L - Δ(k_n)) per root."""
        return 2.0*np.pi/(2.0*self.geometry.half_length
                          - packet_advance(self.wavenumbers, self.params))


def seam_phase_jump(p: SolitonParams) -> float:
    """Internal phase jump of the kink profile across its core,

        arg ψ0(+∞) - arg ψ0(-∞) = π - 2 atan2(β, κ)

    (carrier excluded).  This is what the ring tuning must absorb.
    """
    return np.pi - 2.0*np.arctan2(p.beta, p.kappa)


def tune_ring(beta: float, mu: float,
              target_half_length: float) -> tuple[SolitonParams, float]:
    """Choose L near the target so the kink closes smoothly on the ring.

    Solves 2vL + (π - 2 atan2(β, κ)) ≡ 0 (mod 2π) with v = β, picking the
    winding integer nearest the target.  Returns (params, half_length); the
    caller picks n_points and builds the RingGeometry.

    β = 0 admits no solution (the jump is exactly π and the carrier cannot
    absorb it at zero flow): raise with guidance.  Small |β| forces a
    coarse family of lengths, e.g. β = -0.0058 allows only L ≈ 271.8,
    813.5, ...; the caller must pick a target near an allowed value.
    """
    if beta == 0.0:
        raise NoSolutionError(
            "a black (beta = 0) kink cannot be closed on a flowing ring: "
            "the pi phase jump has no carrier to absorb it; use a small "
            "nonzero beta instead")
    p = SolitonParams(beta, beta, mu)
    jump = seam_phase_jump(p)
    v = beta
    m = round((2.0*v*target_half_length + jump)/(2.0*np.pi))
    L = (2.0*np.pi*m - jump)/(2.0*v)
    if L <= 0.0:
        # nearest winding gave a nonpositive length; step to the first
        # admissible integer on the correct side of zero
        m += 1 if v > 0 else -1
        L = (2.0*np.pi*m - jump)/(2.0*v)
    if p.kappa*L < 15.0:
        raise NoSolutionError(
            f"tuned ring kappa*L = {p.kappa*L:.2f} < 15: ring too short "
            f"against the kink core; raise target_half_length")
    return p, L


def _quantization_residual_cot(k: float, p: SolitonParams, L: float) -> float:
    """Residual of the equivalent k cot(kL) = 2(κ - βΩ/(κk)) form."""
    kap = p.kappa
    om = float(dispersion(k, p))
    return k/np.tan(k*L) - 2.0*(kap - p.beta*om/(kap*k))


def discrete_wavenumbers(p: SolitonParams, geom: RingGeometry,
                         k_max: float, k_min: float = 1e-4) -> DiscreteSpectrum:
    """All quantized wavenumbers in (k_min, k_max] on the tuned ring.

    Brackets one root per integer n with F(k) = 2kL + θ(k) strictly
    increasing, polishes with brentq to |F - 2πn| < 1e-12, and verifies
    |quantization residual| < 1e-10 in the cot form for every root.
    """
    L = geom.half_length
    if 2.0*L <= float(packet_advance(k_min, p)):
        raise InvalidParamsError("ring shorter than the advance: no spectrum")

    def f(k):
        return 2.0*k*L + float(phase_shift_theta(k, p))

    n_lo = int(np.ceil(f(k_min)/(2.0*np.pi)))
    n_hi = int(np.floor(f(k_max)/(2.0*np.pi)))
    if n_hi < n_lo:
        raise InsufficientSpectrumError(
            f"no quantized modes in ({k_min}, {k_max}] on this ring")
    roots = np.empty(n_hi - n_lo + 1)
    k_lo = k_min
    for i, n in enumerate(range(n_lo, n_hi + 1)):
        target = 2.0*np.pi*n
        # monotone F: the previous root is a strict lower bracket; roots are
        # at most 2pi/(2L - Delta) apart, so a pi/L extension always lands
        k_hi = k_lo + 2.0*np.pi/L
        while f(k_hi) < target:
            k_hi += np.pi/L
        try:
            roots[i] = brentq(lambda k: f(k) - target, k_lo, k_hi,
                              xtol=1e-14, rtol=8.9e-16)
        except ValueError as exc:
            raise RootBracketingError(
                f"root for n = {n} not bracketed in [{k_lo}, {k_hi}]") from exc
        k_lo = roots[i]
    # independent cross-check in the cot form (catches branch mistakes,
    # which would show as O(1) residuals; machine roots sit near 1e-14)
    for k in roots:
        res = _quantization_residual_cot(float(k), p, L)
        if abs(res) > 1e-8:
            raise RootBracketingError(
                f"root k = {k:.12f} fails the cot-form residual: {res:.3e}")
    return DiscreteSpectrum(params=p, geometry=geom, wavenumbers=roots,
                            indices=np.arange(n_lo, n_hi + 1))
