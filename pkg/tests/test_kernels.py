"""Kernel backends: numba/numpy parity and the selection flag."""

import subprocess
import sys

import numpy as np
import pytest

from graysol import kernels


@pytest.fixture
def psi():
    rng = np.random.default_rng(11)
    return (rng.standard_normal(4096)
            + 1j*rng.standard_normal(4096)).astype(complex)


def test_backends_agree(psi):
    if not kernels.HAS_NUMBA:
        pytest.skip("numba not installed")
    ref = kernels.nonlinear_phase_numpy(psi, 2.5e-3, 1.0)
    saved = kernels.USING_NUMBA
    try:
        kernels.USING_NUMBA = True
        jit = kernels.nonlinear_phase(psi, 2.5e-3, 1.0)
    finally:
        kernels.USING_NUMBA = saved
    assert np.max(np.abs(jit - ref)) < 2e-15*np.max(np.abs(ref))


def test_kernel_does_not_mutate_input(psi):
    before = psi.copy()
    kernels.nonlinear_phase(psi, 2.5e-3, 1.0)
    assert np.array_equal(psi, before)


def test_kernel_is_pure_phase(psi):
    out = kernels.nonlinear_phase(psi, 2.5e-3, 0.7)
    assert np.allclose(np.abs(out), np.abs(psi), rtol=1e-14)


def test_disable_flag_selects_numpy():
    code = ("import graysol.kernels as k; "
            "print(k.backend_name())")
    out = subprocess.run(
        [sys.executable, "-c", code],
        env={"PATH": "/usr/bin:/bin", "GRAYSOL_DISABLE_NUMBA": "1"},
        capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"


def test_backend_name_consistent():
    assert kernels.backend_name() in ("numba", "numpy")
    assert kernels.backend_name() == (
        "numba" if kernels.USING_NUMBA else "numpy")
