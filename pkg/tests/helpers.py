"""Shared numerical checks for the test suite."""

import numpy as np

from graysol.analytic import SolitonParams, dispersion, mode_functions, \
    soliton_profile
from graysol.ring import RingGeometry


def bdg_residual(k: float, p: SolitonParams, geom: RingGeometry) -> float:
    """Max residual of the linearized-equation eigenproblem for mode k.

    δψ = u e^{-iΩt} + v* e^{+iΩt} linearizes the evolution equation iff

        Ω u = -u''/2 + i(β - v)u' + (2ρ0 - μ̃)u + ψ0² v
       -Ω v = -v''/2 - i(β - v)v' + (2ρ0 - μ̃)v + ψ0*² u.

    Valid with spectral derivatives only at ring-quantized k (u, v are
    then periodic to rounding).
    """
    x = geom.x
    q = geom.wavenumbers
    psi0 = soliton_profile(p, x)
    rho0 = np.abs(psi0)**2
    omega = float(dispersion(k, p))
    u, v = mode_functions(k, p, x)
    drift = p.beta - p.v

    def d1(f):
        return np.fft.ifft(1j*q*np.fft.fft(f))

    def d2(f):
        return np.fft.ifft(-(q*q)*np.fft.fft(f))

    r1 = -0.5*d2(u) + 1j*drift*d1(u) + (2.0*rho0 - p.mu_tilde)*u \
        + psi0**2*v - omega*u
    r2 = -0.5*d2(v) - 1j*drift*d1(v) + (2.0*rho0 - p.mu_tilde)*v \
        + np.conj(psi0)**2*u + omega*v
    scale = max(float(np.max(np.abs(u))), float(np.max(np.abs(v))))
    return max(float(np.max(np.abs(r1))), float(np.max(np.abs(r2))))/scale


def nearest_mode(spectrum, k: float) -> float:
    ks = spectrum.wavenumbers
    return float(ks[np.argmin(np.abs(ks - k))])


def richardson_derivative(fn, x0: float, h: float = 1e-4) -> float:
    """4th-order central difference f'(x0)."""
    return (fn(x0 - 2*h) - 8*fn(x0 - h) + 8*fn(x0 + h)
            - fn(x0 + 2*h))/(12*h)
