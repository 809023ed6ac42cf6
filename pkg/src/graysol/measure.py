"""Observables extracted from density profiles.

The kink position comes from a damped Gauss–Newton fit of the dark-notch
model ρ(x) = c1² + c2²·tanh²(c2(x - c3)); c3 estimates the kink center to
~1e-6 even with a small packet riding on the background, because the fit
weights the whole notch rather than a single grid point.  Packet positions
come from moments of the density excess δρ = ρ - ρ_bare: its plain first
moment (the quanta-weighted mean position, exact at build time), and the
centroid of (δρ)², whose motion tracks the envelope peak with the
odd-dispersion skew suppressed.  The winding counter sums phase increments
around the ring, giving an exactly integer topological charge.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .analytic import SolitonParams
from .errors import DegenerateWindowError, FitDivergedError, LowMassError

__all__ = [
    "SolitonFit",
    "ShiftResult",
    "winding_number",
    "fit_soliton_position",
    "packet_centroid",
    "envelope_centroid",
    "measure_packet_advance",
    "measure_soliton_shift",
]


def winding_number(psi: np.ndarray) -> int:
    """Total phase accumulated around the ring, in units of 2π.

    Computed from nearest-neighbor phase increments (each well inside
    (-π, π) for resolved fields), so the result is exactly an integer.
    """
    inc = np.angle(psi[1:]/psi[:-1])
    inc_wrap = np.angle(psi[0]/psi[-1])
    total = (np.sum(inc) + inc_wrap)/(2.0*np.pi)
    n = int(np.rint(total))
    if abs(total - n) > 1e-6:
        raise LowMassError(
            f"winding sum {total:.6f} is not close to an integer: field "
            f"has near-zeros between grid points")
    return n


@dataclass(frozen=True)
class SolitonFit:
    """Result of the dark-notch fit ρ = c1² + c2²tanh²(c2(x - c3))."""

    position: float     # c3
    depth: float        # c2 (≈ κ)
    floor: float        # c1 (≈ |β|)
    residual: float     # rms of ρ_model - ρ_data over the window
    iterations: int


@dataclass(frozen=True)
class ShiftResult:
    """Kink displacement between two snapshots."""

    dx: float
    dx_over_eps2: float
    before: SolitonFit
    after: SolitonFit


def _notch_model(c1, c2, c3, x):
    t = np.tanh(c2*(x - c3))
    return c1*c1 + c2*c2*t*t


def fit_soliton_position(rho: np.ndarray, x: np.ndarray, p: SolitonParams,
                         guess: float = 0.0, window: float = 15.0,
                         rho_tol: float = 5e-3) -> SolitonFit:
    """Fit the dark notch within |x - guess| <= window.

    Damped Gauss–Newton from (c1, c2) = (|β|, κ) and c3 at the in-window
    density minimum (``guess`` only selects the window); raises
    FitDivergedError if it fails to converge in 200
    iterations, if the recovered depths violate c1² + c2² = μ by more than
    1% or c2 strays more than 10% from κ, or if the rms residual exceeds
    rho_tol (the fit latched onto a packet or ripple instead of the notch).
    """
    mask = np.abs(x - guess) <= window
    if np.count_nonzero(mask) < 25:
        raise DegenerateWindowError(
            f"only {np.count_nonzero(mask)} samples within {window} of "
            f"x = {guess}")
    xw = x[mask]
    rw = rho[mask]

    # seed c3 at the in-window density minimum: the Gauss-Newton basin is
    # only a few core widths wide, but the notch minimum is unambiguous
    c1, c2, c3 = abs(p.beta), p.kappa, float(xw[np.argmin(rw)])
    cost = float(np.sum((_notch_model(c1, c2, c3, xw) - rw)**2))
    n_iter = 0
    for n_iter in range(1, 201):
        t = np.tanh(c2*(xw - c3))
        s2 = 1.0 - t*t
        r = c1*c1 + c2*c2*t*t - rw
        jac = np.column_stack([
            2.0*c1*np.ones_like(xw),
            2.0*c2*t*t + 2.0*c2*c2*(xw - c3)*t*s2,
            -2.0*c2**3*t*s2,
        ])
        step, *_ = np.linalg.lstsq(jac, -r, rcond=None)
        if float(np.max(np.abs(step))) < 1e-13*(1.0 + abs(c3)):
            break
        damp = 1.0
        improved = False
        for _ in range(25):
            trial = (c1 + damp*step[0], c2 + damp*step[1],
                     c3 + damp*step[2])
            new_cost = float(
                np.sum((_notch_model(*trial, xw) - rw)**2))
            if new_cost < cost:
                improved = True
                break
            damp *= 0.5
        if not improved:
            # cost is flat to roundoff around the current point: converged
            break
        converged = (cost - new_cost) < 1e-16*max(cost, 1e-30) \
            or float(np.max(np.abs(damp*step))) < 1e-13
        c1, c2, c3 = trial
        cost = new_cost
        if converged:
            break
    else:
        raise FitDivergedError("notch fit did not converge in 200 iterations")

    c1, c2 = abs(c1), abs(c2)
    if abs(c1*c1 + c2*c2 - p.mu) > 0.01*p.mu:
        raise FitDivergedError(
            f"fitted depths give c1^2 + c2^2 = {c1*c1 + c2*c2:.4f}, "
            f"expected mu = {p.mu:.4f}: wrong feature in window?")
    if abs(c2 - p.kappa) > 0.1*p.kappa:
        raise FitDivergedError(
            f"fitted notch depth {c2:.4f} far from kappa = {p.kappa:.4f}: "
            f"no dark notch in window?")
    rms = float(np.sqrt(cost/xw.size))
    if rms > rho_tol:
        raise FitDivergedError(
            f"notch fit rms residual {rms:.2e} exceeds {rho_tol:g}")
    return SolitonFit(position=float(c3), depth=float(c2), floor=float(c1),
                      residual=rms, iterations=n_iter)


def packet_centroid(rho: np.ndarray, rho_ref: np.ndarray,
                    x: np.ndarray) -> float:
    """Quanta-weighted mean position: first moment of δρ = ρ - ρ_ref.

    The net mass ∫δρ equals the packet's particle number, so this is exact
    at build time; during flight the oscillatory parts average out.
    """
    d = rho - rho_ref
    dx = x[1] - x[0]
    mass = float(np.sum(d))*dx
    if abs(mass) < 1e-8:
        raise LowMassError(
            f"density excess carries net mass {mass:.2e}: nothing to locate")
    return float(np.sum(x*d))*dx/mass


def envelope_centroid(rho: np.ndarray, rho_ref: np.ndarray, x: np.ndarray,
                      lam_eff: float, guess: float,
                      core_halfwidth: float = 0.0) -> float:
    """Centroid of (δρ)² in a recentered symmetric window.

    The squared excess is even in the fast phase, so its centroid follows
    the envelope without carrier ripple; a symmetric window (half-width
    min(4.5·lam_eff, distance to the kink-core exclusion)) keeps the
    truncation bias even as dispersion grows the tails.  Recenters three
    times from ``guess``.
    """
    w = (rho - rho_ref)**2
    dx = x[1] - x[0]
    c = guess
    for _ in range(3):
        half = 4.5*lam_eff
        if core_halfwidth > 0.0:
            half = min(half, abs(c) - core_halfwidth)
        if half < lam_eff:
            raise DegenerateWindowError(
                f"envelope window around x = {c:.1f} collides with the "
                f"kink-core exclusion |x| <= {core_halfwidth:.1f}")
        mask = np.abs(x - c) <= half
        mass = float(np.sum(w[mask]))*dx
        if mass <= 0.0 or np.count_nonzero(mask) < 25:
            raise DegenerateWindowError(
                f"no envelope mass within {half:.1f} of x = {c:.1f}")
        c = float(np.sum(x[mask]*w[mask]))*dx/mass
    return c


def measure_packet_advance(rho_kink: np.ndarray, rho_kink_ref: np.ndarray,
                           rho_uni: np.ndarray, rho_uni_ref: np.ndarray,
                           x: np.ndarray, lam_eff: float, guess: float,
                           core_halfwidth: float = 0.0) -> tuple:
    """Positional advance of the kink-run packet over its uniform twin.

    Both runs share wavenumbers and weights, so free-flight group motion
    cancels in the difference and the remainder is the transmission
    advance.  Returns (advance, kink-run centroid, twin centroid).
    """
    c_kink = envelope_centroid(rho_kink, rho_kink_ref, x, lam_eff, guess,
                               core_halfwidth)
    c_uni = envelope_centroid(rho_uni, rho_uni_ref, x, lam_eff, guess)
    return c_kink - c_uni, c_kink, c_uni


def measure_soliton_shift(rho_before: np.ndarray, rho_after: np.ndarray,
                          x: np.ndarray, epsilon: float, p: SolitonParams,
                          window: float = 15.0,
                          control_drift: float = 0.0) -> ShiftResult:
    """Kink displacement between two snapshots, minus the control drift.

    ``control_drift`` is the displacement of a packet-free kink evolved
    identically (integrator bias, exactly dt²-small); subtracting it
    isolates the packet-induced back-action.
    """
    before = fit_soliton_position(rho_before, x, p, guess=0.0, window=window)
    after = fit_soliton_position(rho_after, x, p, guess=before.position,
                                 window=window)
    dx = (after.position - before.position) - control_drift
    return ShiftResult(dx=dx, dx_over_eps2=dx/epsilon**2,
                       before=before, after=after)
