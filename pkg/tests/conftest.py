import os

import numpy as np
import pytest

from graysol.analytic import soliton_profile
from graysol.evolve import WaveField
from graysol.ring import RingGeometry, discrete_wavenumbers, tune_ring

SMOKE = os.environ.get("GRAYSOL_SMOKE", "0") == "1"


@pytest.fixture(scope="session")
def tuned_minus():
    """β = -1/2 ring near L = 400 with an n = 8192 grid."""
    p, half_length = tune_ring(-0.5, 1.0, 400.0)
    geom = RingGeometry(half_length=half_length, n_points=8192)
    return p, geom


@pytest.fixture(scope="session")
def tuned_plus():
    """β = +1/2 ring near L = 190 with an n = 4096 grid."""
    p, half_length = tune_ring(0.5, 1.0, 190.0)
    geom = RingGeometry(half_length=half_length, n_points=4096)
    return p, geom


@pytest.fixture(scope="session")
def spectrum_minus(tuned_minus):
    p, geom = tuned_minus
    return discrete_wavenumbers(p, geom, k_max=0.7 + 8.0/12.0,
                                k_min=0.7 - 8.0/12.0)


@pytest.fixture(scope="session")
def kink_field_minus(tuned_minus):
    p, geom = tuned_minus
    return WaveField(geometry=geom, psi=soliton_profile(p, geom.x), t=0.0,
                     beta=p.beta, v=p.v, mu_tilde=p.mu_tilde)


def spectral_derivative(f: np.ndarray, geom: RingGeometry,
                        order: int = 1) -> np.ndarray:
    q = geom.wavenumbers
    return np.fft.ifft((1j*q)**order*np.fft.fft(f))
