"""Hot pointwise kernels with a numba fast path and a numpy fallback.

The split-step integrator spends its time in two places: FFTs (numpy's
pocketfft, not compilable) and the pointwise nonlinear phase rotation
ψ ← ψ exp(-i(|ψ|² - μ̃)τ).  The rotation is the only kernel worth jitting:
the fused single pass avoids materializing |ψ|² and the complex exponential
as temporaries.  Set GRAYSOL_DISABLE_NUMBA=1 before import to force the
numpy path (bit-reproducibility across machines without numba, debugging);
the active backend is reported by ``backend_name()``.

python -m graysol.bench times both paths side by side.
"""

from __future__ import annotations

import math
import os

import numpy as np

__all__ = ["HAS_NUMBA", "USING_NUMBA", "backend_name",
           "nonlinear_phase", "nonlinear_phase_numpy"]

try:
    from numba import njit
    HAS_NUMBA = True
except ImportError:          # pragma: no cover - exercised via env flag
    njit = None
    HAS_NUMBA = False

USING_NUMBA = HAS_NUMBA and os.environ.get("GRAYSOL_DISABLE_NUMBA", "0") != "1"


def backend_name() -> str:
    return "numba" if USING_NUMBA else "numpy"


def nonlinear_phase_numpy(psi: np.ndarray, tau: float,
                          mu_tilde: float) -> np.ndarray:
    """ψ exp(-i(|ψ|² - μ̃)τ), vectorized numpy reference implementation."""
    rho = psi.real*psi.real + psi.imag*psi.imag
    return psi*np.exp(-1j*(rho - mu_tilde)*tau)


if HAS_NUMBA:

    @njit(cache=True)
    def _nonlinear_phase_jit(psi, tau, mu_tilde, out):  # pragma: no cover
        for i in range(psi.shape[0]):
            re = psi[i].real
            im = psi[i].imag
            ang = -(re*re + im*im - mu_tilde)*tau
            c = math.cos(ang)
            s = math.sin(ang)
            out[i] = complex(re*c - im*s, re*s + im*c)
        return out


def nonlinear_phase(psi: np.ndarray, tau: float,
                    mu_tilde: float) -> np.ndarray:
    """Nonlinear phase rotation via the selected backend.

    Returns a new array; never mutates the input.
    """
    if USING_NUMBA:
        out = np.empty_like(psi)
        return _nonlinear_phase_jit(psi, tau, mu_tilde, out)
    return nonlinear_phase_numpy(psi, tau, mu_tilde)
