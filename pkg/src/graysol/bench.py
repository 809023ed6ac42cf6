"""Kernel benchmark: ``python -m graysol.bench``.

Times the nonlinear phase kernel and a full split step under both
backends (jit scalar loop vs vectorized numpy).  The linear half of the
step is FFT-bound either way, so the end-to-end speedup is what matters
for run planning.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from . import kernels
from .analytic import SolitonParams, soliton_profile
from .evolve import WaveField, evolve
from .ring import RingGeometry, tune_ring


def _best_of(fn, repeats: int) -> float:
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _time_kernel(psi: np.ndarray, use_numba: bool, repeats: int,
                 loops: int) -> float:
    saved = kernels.USING_NUMBA
    kernels.USING_NUMBA = use_numba
    try:
        kernels.nonlinear_phase(psi, 2.5e-3, 1.0)  # warm-up / jit compile
        def run():
            for _ in range(loops):
                kernels.nonlinear_phase(psi, 2.5e-3, 1.0)
        return _best_of(run, repeats)/loops
    finally:
        kernels.USING_NUMBA = saved


def _time_step(field: WaveField, use_numba: bool, repeats: int,
               steps: int) -> float:
    saved = kernels.USING_NUMBA
    kernels.USING_NUMBA = use_numba
    try:
        evolve(field, 2*5e-3, dt=5e-3)  # warm-up
        def run():
            evolve(field, steps*5e-3, dt=5e-3)
        return _best_of(run, repeats)/steps
    finally:
        kernels.USING_NUMBA = saved


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="python -m graysol.bench",
        description="Time the nonlinear kernel and full split steps")
    parser.add_argument("--points", type=int, nargs="*",
                        default=[4096, 8192, 16384])
    parser.add_argument("--steps", type=int, default=200,
                        help="steps per full-step timing (default 200)")
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args(argv)

    if not kernels.HAS_NUMBA:
        print("numba not available: timing the numpy path only")

    print(f"{'n':>7s} {'kernel numpy':>14s} {'kernel numba':>14s} "
          f"{'step numpy':>14s} {'step numba':>14s} {'step speedup':>13s}")
    for n in args.points:
        p, half_length = tune_ring(0.5, 1.0, max(190.0, 0.09*n))
        geom = RingGeometry(half_length=half_length, n_points=n)
        field = WaveField(geometry=geom, psi=soliton_profile(p, geom.x),
                          t=0.0, beta=p.beta, v=p.v, mu_tilde=p.mu_tilde)
        kn = _time_kernel(field.psi, False, args.repeats, 50)
        sn = _time_step(field, False, args.repeats, args.steps)
        if kernels.HAS_NUMBA:
            kj = _time_kernel(field.psi, True, args.repeats, 50)
            sj = _time_step(field, True, args.repeats, args.steps)
            print(f"{n:7d} {kn*1e6:11.1f} us {kj*1e6:11.1f} us "
                  f"{sn*1e6:11.1f} us {sj*1e6:11.1f} us {sn/sj:12.2f}x")
        else:
            print(f"{n:7d} {kn*1e6:11.1f} us {'-':>14s} "
                  f"{sn*1e6:11.1f} us {'-':>14s} {'-':>13s}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
