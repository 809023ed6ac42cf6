"""Experiment driver.

Two experiment kinds:

``advance``
    Wave-packet transmission advance.  A packet crosses the kink on a
    tuned ring; a twin run propagates the *same* wavenumbers and spectral
    weights on a uniform background whose carrier is snapped to the ring
    (identical in-frame dispersion), so free-flight group motion cancels
    in the centroid difference and the remainder is the transmission
    advance -dθ/dk.

``shift``
    Second-order kink back-action.  Full second-order initial states
    (packet + dressing + compensation) are evolved until the packet has
    crossed and separated; the kink displacement is read from dark-notch
    fits, minus the displacement of a packet-free control run evolved
    identically (removes the integrator's dt²-secular kink drift).  The
    prediction is Δ(k)·(N1+N2)/(2κ).

Outputs: ``records.csv`` (fixed column schema, sorted, byte-deterministic),
``records.partial.jsonl`` (appended as runs finish, crash-safe),
``metadata.json`` (config echo, per-run details, errors), and per-kind
plot data (``advance_profiles.csv`` or ``shift_summary.csv``).
"""

from __future__ import annotations

import argparse
import json
import logging
import multiprocessing
import os
import sys
import time
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import kernels
from .analytic import SolitonParams, corrected_group_velocity, \
    dispersion_curvature, dressing_phase_step, excited_numbers, \
    group_velocity, packet_advance, soliton_profile, \
    soliton_shift_prediction
from .errors import ConfigError, GraysolError
from .evolve import SeamGuard, WaveField, evolve, observables
from .measure import envelope_centroid, fit_soliton_position, \
    measure_soliton_shift
from .ring import RingGeometry, discrete_wavenumbers, tune_ring
from .synthesis import PacketSpec, build_initial_state, build_uniform_state

logger = logging.getLogger("graysol.cli")

CSV_COLUMNS = [
    "experiment", "beta", "v", "mu", "k_requested", "k_snapped", "lambda",
    "epsilon", "delta_k_analytic", "advance_measured", "n1", "n2",
    "dx_pred", "dx_measured", "dx_over_eps2", "p_drift", "n_drift",
    "runtime_s",
]


@dataclass(frozen=True)
class ExperimentConfig:
    """Sweep definition.  ``half_length`` maps β to the ring half-length
    target (key None = default); rings needing extra clearance for the
    compensation pulse or a near-zero β get their own entry."""

    experiment: str
    betas: tuple = ()
    ks: tuple = ()
    epsilons: tuple = ()
    mu: float = 1.0
    lam: float = 12.0
    x_init: float = -66.0
    travel: float = 132.0
    half_length: dict = field(default_factory=lambda: {None: 400.0})
    n_points: int = 8192
    dt: float = 5e-3
    order: int = 2
    control_runs: bool = True
    qdot_windows: bool = False
    workers: int = 1

    def half_length_for(self, beta: float) -> float:
        for key, val in self.half_length.items():
            if key is not None and abs(key - beta) < 1e-12:
                return float(val)
        if None in self.half_length:
            return float(self.half_length[None])
        raise ConfigError(f"no half_length entry for beta = {beta}")

    def validate(self) -> None:
        if self.experiment not in ("advance", "shift"):
            raise ConfigError(
                f"experiment must be 'advance' or 'shift', got "
                f"{self.experiment!r}")
        if not self.betas or not self.ks or not self.epsilons:
            raise ConfigError("betas, ks and epsilons must be non-empty")
        if any(e <= 0 or e > 0.3 for e in self.epsilons):
            raise ConfigError("epsilons must lie in (0, 0.3]")
        if any(k <= 0 for k in self.ks):
            raise ConfigError("wavenumbers must be positive")
        if any(abs(b) >= np.sqrt(self.mu) for b in self.betas):
            raise ConfigError("need |beta| < sqrt(mu) for a gray kink")
        if not 0 < self.dt <= 0.02:
            raise ConfigError(f"dt = {self.dt} outside (0, 0.02]")
        if self.n_points < 256 or self.n_points & (self.n_points - 1):
            raise ConfigError("n_points must be a power of two >= 256")
        if self.order not in (1, 2):
            raise ConfigError("order must be 1 or 2")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["half_length"] = {
            "default" if k is None else repr(k): v
            for k, v in self.half_length.items()}
        return d

    @staticmethod
    def from_json(path: str) -> "ExperimentConfig":
        with open(path, "r", encoding="utf-8") as fh:
            try:
                raw = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"malformed config {path}: {exc}") from exc
        return ExperimentConfig.from_dict(raw)

    @staticmethod
    def from_dict(raw: dict) -> "ExperimentConfig":
        known = {f for f in ExperimentConfig.__dataclass_fields__}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if "experiment" not in raw:
            raise ConfigError("config must set 'experiment'")
        kwargs = dict(raw)
        for key in ("betas", "ks", "epsilons"):
            if key in kwargs:
                kwargs[key] = tuple(float(v) for v in kwargs[key])
        hl = kwargs.get("half_length")
        if hl is not None:
            if isinstance(hl, (int, float)):
                kwargs["half_length"] = {None: float(hl)}
            elif isinstance(hl, dict):
                parsed = {}
                for key, val in hl.items():
                    parsed[None if key == "default" else float(key)] = \
                        float(val)
                kwargs["half_length"] = parsed
            else:
                raise ConfigError("half_length must be a number or mapping")
        cfg = ExperimentConfig(**kwargs)
        cfg.validate()
        return cfg


PRESETS = {
    # single-crossing advance measurement with its uniform twin
    "advance": ExperimentConfig(
        experiment="advance", betas=(0.5,), ks=(0.7,), epsilons=(0.02,),
        lam=12.0, x_init=-80.0, travel=145.0, half_length={None: 190.0},
        n_points=4096, order=1, control_runs=False),
    # back-action sweep: 4 flows x 4 carriers x 4 amplitudes
    "shift-sweep": ExperimentConfig(
        experiment="shift",
        betas=(-0.5, -0.0058, 1.0/3.0, 0.5),
        ks=(0.7, 1.0, 1.4, 2.0),
        epsilons=(0.03, 0.1, 0.2, 0.3),
        lam=12.0, x_init=-66.0, travel=132.0,
        half_length={None: 400.0, -0.5: 500.0, -0.0058: 813.0},
        n_points=8192, order=2, control_runs=True),
    # long ring, long flight: clean windows for the phase-drift law
    "phase-law": ExperimentConfig(
        experiment="shift", betas=(-0.5,), ks=(0.7,), epsilons=(0.1, 0.2),
        lam=12.0, x_init=-120.0, travel=240.0, half_length={None: 650.0},
        n_points=8192, order=2, control_runs=True, qdot_windows=True),
}


@dataclass(frozen=True)
class RunRecord:
    """One CSV row; nan marks columns not applicable to the run kind."""

    experiment: str
    beta: float
    v: float
    mu: float
    k_requested: float
    k_snapped: float
    lam: float
    epsilon: float
    delta_k_analytic: float
    advance_measured: float
    n1: float
    n2: float
    dx_pred: float
    dx_measured: float
    dx_over_eps2: float
    p_drift: float
    n_drift: float
    runtime_s: float

    def as_row(self) -> list:
        return [self.experiment, self.beta, self.v, self.mu,
                self.k_requested, self.k_snapped, self.lam, self.epsilon,
                self.delta_k_analytic, self.advance_measured, self.n1,
                self.n2, self.dx_pred, self.dx_measured, self.dx_over_eps2,
                self.p_drift, self.n_drift, self.runtime_s]


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    return f"{value:.10g}"


def write_records_csv(path: str, records: list) -> None:
    """Fixed schema, sorted rows, %.10g floats: byte-deterministic."""
    rows = sorted(records, key=lambda r: (r.experiment, r.beta,
                                          r.k_requested, r.epsilon))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(CSV_COLUMNS) + "\n")
        for rec in rows:
            fh.write(",".join(_fmt(v) for v in rec.as_row()) + "\n")


# --------------------------------------------------------------------------
# run planning
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class PointJob:
    """One evolution job, self-contained and picklable."""

    experiment: str
    kind: str            # "measure" or "control"
    beta: float
    k: float
    eps: float
    mu: float
    lam: float
    x_init: float
    travel: float
    half_length_target: float
    n_points: int
    dt: float
    order: int
    qdot_windows: bool
    control_drift: float = 0.0


def plan_jobs(config: ExperimentConfig) -> list:
    """Expand the sweep into jobs, validating every geometry up front."""
    config.validate()
    jobs = []
    for beta in config.betas:
        target = config.half_length_for(beta)
        p, half_length = tune_ring(beta, config.mu, target)
        geom = RingGeometry(half_length=half_length,
                            n_points=config.n_points)
        for k in config.ks:
            spec = PacketSpec(k_center=k, lam=config.lam, eps=min(
                config.epsilons), x_init=config.x_init)
            spec.validate_geometry(p, geom)
            spectrum = discrete_wavenumbers(
                p, geom, k_max=k + 8.0/config.lam,
                k_min=max(1e-4, k - 8.0/config.lam))
            k_c = float(spectrum.wavenumbers[np.argmin(
                np.abs(spectrum.wavenumbers - k))])
            if config.experiment == "shift" and config.order == 2:
                # cheap feasibility: compensation amplitude and placement
                step = dressing_phase_step(
                    k_c, config.lam, max(config.epsilons), p)
                if abs(step) >= np.pi/4.0:
                    raise ConfigError(
                        f"beta={beta}, k={k}: compensation step "
                        f"{step:.3f} at or beyond pi/4")
                width_c = 3.0*config.lam
                center_c = config.x_init - (4.0*config.lam
                                            + 3.0*width_c + 10.0)
                if center_c - 3.0*width_c <= -half_length:
                    raise ConfigError(
                        f"beta={beta}: ring half-length {half_length:.0f} "
                        f"too small for the compensation pulse")
            if config.experiment == "shift" and config.control_runs:
                jobs.append(PointJob(
                    experiment=config.experiment, kind="control", beta=beta,
                    k=k, eps=0.0, mu=config.mu, lam=config.lam,
                    x_init=config.x_init, travel=config.travel,
                    half_length_target=target, n_points=config.n_points,
                    dt=config.dt, order=config.order,
                    qdot_windows=False))
            for eps in config.epsilons:
                jobs.append(PointJob(
                    experiment=config.experiment, kind="measure", beta=beta,
                    k=k, eps=eps, mu=config.mu, lam=config.lam,
                    x_init=config.x_init, travel=config.travel,
                    half_length_target=target, n_points=config.n_points,
                    dt=config.dt, order=config.order,
                    qdot_windows=config.qdot_windows))
    return jobs


def describe_job(job: PointJob) -> str:
    p, half_length = tune_ring(job.beta, job.mu, job.half_length_target)
    nu = group_velocity(job.k, p)
    duration = job.travel/nu
    steps = int(round(duration/job.dt))
    return (f"{job.experiment:8s} {job.kind:8s} beta={job.beta:+.4f} "
            f"k={job.k:<4.2f} eps={job.eps:<5.3f} L={half_length:7.2f} "
            f"T={duration:6.1f} steps={steps}")


# --------------------------------------------------------------------------
# advance experiment
# --------------------------------------------------------------------------

def run_packet_advance(job: PointJob) -> tuple:
    """One kink run plus its uniform twin; returns (RunRecord, details)."""
    t0 = time.perf_counter()
    p, half_length = tune_ring(job.beta, job.mu, job.half_length_target)
    geom = RingGeometry(half_length=half_length, n_points=job.n_points)
    spec = PacketSpec(k_center=job.k, lam=job.lam, eps=job.eps,
                      x_init=job.x_init)
    spectrum = discrete_wavenumbers(
        p, geom, k_max=job.k + 8.0/job.lam,
        k_min=max(1e-4, job.k - 8.0/job.lam))

    state, report = build_initial_state(p, geom, spec, spectrum,
                                        order=job.order)
    twin = build_uniform_state(spec, spectrum, p, geom)
    k_c = report.k_snapped
    nu = float(group_velocity(k_c, p))
    nu_t = float(corrected_group_velocity(k_c, job.lam, p))
    curv = float(dispersion_curvature(k_c, p))
    duration = job.travel/nu
    guard = SeamGuard(center0=job.x_init, speed=nu, lam=job.lam,
                      curvature=curv, clearance=2.0*job.lam)

    obs0 = observables(state)
    final, _ = evolve(state, duration, dt=job.dt, guard=guard)
    obs1 = observables(final)
    twin_final, _ = evolve(twin, duration, dt=job.dt)

    x = geom.x
    rho_ref = np.abs(soliton_profile(p, x))**2
    lam_eff = job.lam*np.sqrt(1.0 + (curv*duration/job.lam**2)**2)
    adv = float(packet_advance(k_c, p))
    core = 8.0/p.kappa + 2.0
    c_kink = envelope_centroid(
        np.abs(final.psi)**2, rho_ref, x, lam_eff,
        guess=job.x_init + nu_t*duration + adv, core_halfwidth=core)
    c_uni = envelope_centroid(
        np.abs(twin_final.psi)**2, np.full_like(x, job.mu), x, lam_eff,
        guess=job.x_init + nu_t*duration)
    measured = c_kink - c_uni

    n1, n2 = excited_numbers(k_c, job.lam, job.eps, p)
    record = RunRecord(
        experiment=job.experiment, beta=job.beta, v=p.v, mu=job.mu,
        k_requested=job.k, k_snapped=k_c, lam=job.lam, epsilon=job.eps,
        delta_k_analytic=adv, advance_measured=measured, n1=n1, n2=n2,
        dx_pred=np.nan, dx_measured=np.nan, dx_over_eps2=np.nan,
        p_drift=abs(obs1.momentum - obs0.momentum)
        / max(1.0, abs(obs0.momentum)),
        n_drift=abs(obs1.number - obs0.number)/obs0.number,
        runtime_s=time.perf_counter() - t0)
    details = {
        "kink_centroid": c_kink, "twin_centroid": c_uni,
        "duration": duration, "nu": nu, "nu_corrected": nu_t,
        "twin_speed_measured": (c_uni - job.x_init)/duration,
        "lam_eff": lam_eff, "half_length": half_length,
        "profiles": {
            "x": x, "drho_kink": np.abs(final.psi)**2 - rho_ref,
            "drho_twin": np.abs(twin_final.psi)**2 - job.mu,
        },
    }
    return record, details


# --------------------------------------------------------------------------
# shift experiment
# --------------------------------------------------------------------------

def _window_slope(ts: np.ndarray, qs: np.ndarray, t0: float,
                  t1: float) -> float:
    mask = (ts >= t0) & (ts <= t1)
    if np.count_nonzero(mask) < 5:
        return np.nan
    return float(np.polyfit(ts[mask], qs[mask], 1)[0])


def run_soliton_shift(job: PointJob) -> tuple:
    """One back-action run (or packet-free control); (record, details)."""
    t0 = time.perf_counter()
    p, half_length = tune_ring(job.beta, job.mu, job.half_length_target)
    geom = RingGeometry(half_length=half_length, n_points=job.n_points)
    nu_plan = float(group_velocity(job.k, p))
    duration = job.travel/nu_plan

    if job.kind == "control":
        state = WaveField(geometry=geom, psi=soliton_profile(p, geom.x),
                          t=0.0, beta=p.beta, v=p.v, mu_tilde=p.mu_tilde)
        rho0 = np.abs(state.psi)**2
        final, _ = evolve(state, duration, dt=job.dt)
        f0 = fit_soliton_position(rho0, geom.x, p)
        f1 = fit_soliton_position(np.abs(final.psi)**2, geom.x, p,
                                  guess=f0.position)
        details = {"control_drift": f1.position - f0.position,
                   "duration": duration}
        return None, details

    spec = PacketSpec(k_center=job.k, lam=job.lam, eps=job.eps,
                      x_init=job.x_init)
    spectrum = discrete_wavenumbers(
        p, geom, k_max=job.k + 8.0/job.lam,
        k_min=max(1e-4, job.k - 8.0/job.lam))
    state, report = build_initial_state(p, geom, spec, spectrum,
                                        order=job.order)
    k_c = report.k_snapped
    nu = float(group_velocity(k_c, p))
    curv = float(dispersion_curvature(k_c, p))
    guard = SeamGuard(center0=job.x_init, speed=nu, lam=job.lam,
                      curvature=curv, clearance=2.0*job.lam)

    rho0 = np.abs(state.psi)**2
    obs0 = observables(state)
    final, samples = evolve(state, duration, dt=job.dt, guard=guard)
    obs1 = observables(final)

    shift = measure_soliton_shift(
        rho0, np.abs(final.psi)**2, geom.x, job.eps, p,
        control_drift=job.control_drift)
    pred = float(soliton_shift_prediction(k_c, job.lam, job.eps, p))
    adv = float(packet_advance(k_c, p))
    n1, n2 = excited_numbers(k_c, job.lam, job.eps, p)

    record = RunRecord(
        experiment=job.experiment, beta=job.beta, v=p.v, mu=job.mu,
        k_requested=job.k, k_snapped=k_c, lam=job.lam, epsilon=job.eps,
        delta_k_analytic=adv, advance_measured=np.nan, n1=n1, n2=n2,
        dx_pred=pred, dx_measured=shift.dx, dx_over_eps2=shift.dx_over_eps2,
        p_drift=abs(obs1.momentum - obs0.momentum)
        / max(1.0, abs(obs0.momentum)),
        n_drift=abs(obs1.number - obs0.number)/obs0.number,
        runtime_s=time.perf_counter() - t0)
    details = {
        "duration": duration, "half_length": half_length,
        "mu_prime": report.mu_prime, "comp_step": report.comp_step,
        "number_residual": report.number_residual,
        "fit_before": asdict(shift.before), "fit_after": asdict(shift.after),
        "control_drift": job.control_drift,
    }
    if job.qdot_windows:
        ts = np.array([s.t for s in samples])
        qs = np.array([s.first_moment for s in samples])
        t_cross = abs(job.x_init)/nu
        margin = 5.0*job.lam/nu
        details["qdot_before"] = _window_slope(ts, qs, 2.0,
                                               t_cross - margin)
        details["qdot_after"] = _window_slope(ts, qs, t_cross + margin,
                                              duration - 2.0)
    return record, details


# --------------------------------------------------------------------------
# orchestration
# --------------------------------------------------------------------------

def _execute(job: PointJob) -> dict:
    """Worker wrapper: never raises, reports errors in-band."""
    try:
        if job.experiment == "advance":
            record, details = run_packet_advance(job)
        else:
            record, details = run_soliton_shift(job)
        profiles = details.pop("profiles", None)
        return {"job": job, "record": record, "details": details,
                "profiles": profiles, "error": None}
    except Exception as exc:  # noqa: BLE001 - crash isolation per point
        logger.exception("run failed: %s", describe_job(job))
        return {"job": job, "record": None, "details": None,
                "profiles": None, "error": f"{type(exc).__name__}: {exc}"}


def _job_key(job: PointJob) -> tuple:
    return (job.beta, job.k)


def run_experiment(config: ExperimentConfig, outdir: str) -> tuple:
    """Execute the sweep, writing records and metadata into ``outdir``.

    Returns (records, metadata)."""
    os.makedirs(outdir, exist_ok=True)
    jobs = plan_jobs(config)
    controls = [j for j in jobs if j.kind == "control"]
    measures = [j for j in jobs if j.kind == "measure"]
    workers = config.workers if config.workers > 0 else \
        multiprocessing.cpu_count()
    logger.info("%d control and %d measurement runs (%d worker%s, %s "
                "kernels)", len(controls), len(measures), workers,
                "s" if workers != 1 else "", kernels.backend_name())

    partial_path = os.path.join(outdir, "records.partial.jsonl")
    if os.path.exists(partial_path):
        os.remove(partial_path)

    def _consume(results, sink):
        for res in results:
            sink.append(res)
            with open(partial_path, "a", encoding="utf-8") as fh:
                rec = res["record"]
                fh.write(json.dumps({
                    "job": asdict(res["job"]),
                    "record": None if rec is None else asdict(rec),
                    "error": res["error"]}) + "\n")
            if res["error"] is None:
                logger.info("done: %s", describe_job(res["job"]))

    def _map(job_list):
        out = []
        if workers <= 1 or len(job_list) <= 1:
            _consume((_execute(j) for j in job_list), out)
        else:
            with multiprocessing.get_context("fork").Pool(workers) as pool:
                _consume(pool.imap_unordered(_execute, job_list), out)
        return out

    t_start = time.perf_counter()
    control_results = _map(controls)
    drifts = {}
    for res in control_results:
        if res["error"] is None:
            drifts[_job_key(res["job"])] = \
                res["details"]["control_drift"]
    measures = [replace(j, control_drift=drifts.get(_job_key(j), 0.0))
                for j in measures]
    results = _map(measures)

    records = [r["record"] for r in results if r["record"] is not None]
    errors = [{"job": asdict(r["job"]), "error": r["error"]}
              for r in control_results + results if r["error"]]

    write_records_csv(os.path.join(outdir, "records.csv"), records)
    _write_plot_data(config, outdir, results, records)

    metadata = {
        "config": config.to_dict(),
        "kernel_backend": kernels.backend_name(),
        "control_drifts": {f"beta={b:g},k={k:g}": d
                           for (b, k), d in sorted(drifts.items())},
        "runs": [{
            "job": asdict(r["job"]), "details": r["details"],
        } for r in results if r["error"] is None],
        "errors": errors,
        "runtime_total_s": time.perf_counter() - t_start,
    }
    with open(os.path.join(outdir, "metadata.json"), "w",
              encoding="utf-8") as fh:
        json.dump(metadata, fh, indent=1, default=float)
    logger.info("wrote %d records (%d errors) to %s", len(records),
                len(errors), outdir)
    return records, metadata


def _write_plot_data(config, outdir, results, records):
    if config.experiment == "advance":
        for res in results:
            if res["profiles"] is None:
                continue
            prof = res["profiles"]
            path = os.path.join(outdir, "advance_profiles.csv")
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write("x,drho_kink,drho_twin\n")
                for xi, dk, dt_ in zip(prof["x"], prof["drho_kink"],
                                       prof["drho_twin"]):
                    fh.write(f"{xi:.10g},{dk:.10g},{dt_:.10g}\n")
            break
    else:
        summary = summarize_shift_records(records)
        path = os.path.join(outdir, "shift_summary.csv")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("beta,k_snapped,dx_over_eps2_mean,dx_over_eps2_spread,"
                     "dx_pred_over_eps2,ratio_to_pred,eps_slope\n")
            for key in sorted(summary):
                s = summary[key]
                fh.write(",".join(_fmt(v) for v in (
                    s["beta"], s["k_snapped"], s["mean"], s["spread"],
                    s["pred"], s["ratio"], s["slope"])) + "\n")


def summarize_shift_records(records: list) -> dict:
    """Per-(β, k) ε-statistics: mean and spread of dx/ε², ratio to the
    prediction, and the log|dx| vs log ε slope (quadratic law → 2)."""
    grouped = {}
    for rec in records:
        if rec.experiment != "shift" or not np.isfinite(rec.dx_measured):
            continue
        grouped.setdefault((rec.beta, rec.k_requested), []).append(rec)
    out = {}
    for (beta, k), recs in grouped.items():
        recs = sorted(recs, key=lambda r: r.epsilon)
        vals = np.array([r.dx_over_eps2 for r in recs])
        eps = np.array([r.epsilon for r in recs])
        dxs = np.array([abs(r.dx_measured) for r in recs])
        pred = recs[0].dx_pred/recs[0].epsilon**2
        mean = float(np.mean(vals))
        slope = np.nan
        if len(recs) >= 2 and np.all(dxs > 0):
            slope = float(np.polyfit(np.log(eps), np.log(dxs), 1)[0])
        out[(beta, k)] = {
            "beta": beta, "k_snapped": recs[0].k_snapped, "mean": mean,
            "spread": float((vals.max() - vals.min())/abs(mean)),
            "pred": float(pred), "ratio": mean/pred, "slope": slope,
            "epsilons": [float(e) for e in eps],
            "values": [float(v) for v in vals],
        }
    return out


# --------------------------------------------------------------------------
# entry point
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graysol",
        description="Kink/packet scattering experiments on a ring "
                    "condensate")
    parser.add_argument("--config", help="JSON experiment config")
    parser.add_argument("--experiment", choices=sorted(PRESETS),
                        help="built-in preset (ignored with --config)")
    parser.add_argument("--out", default="runs",
                        help="output directory (default: runs)")
    parser.add_argument("--dt", type=float, help="override time step")
    parser.add_argument("--grid", type=int,
                        help="override number of grid points")
    parser.add_argument("--dry-run", action="store_true",
                        help="validate and list planned runs, then exit")
    return parser


def main(argv=None) -> int:
    logging.basicConfig(
        level=logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        if args.config:
            if args.experiment:
                logger.warning("--experiment ignored: --config given")
            config = ExperimentConfig.from_json(args.config)
        elif args.experiment:
            config = PRESETS[args.experiment]
        else:
            raise ConfigError("provide --config or --experiment")
        if args.dt is not None:
            config = replace(config, dt=args.dt)
        if args.grid is not None:
            config = replace(config, n_points=args.grid)
        config.validate()

        jobs = plan_jobs(config)
        if args.dry_run:
            print(f"{len(jobs)} runs planned "
                  f"({kernels.backend_name()} kernels):")
            for job in jobs:
                print("  " + describe_job(job))
            return 0
        run_experiment(config, args.out)
        return 0
    except GraysolError as exc:
        logger.error("%s", exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
