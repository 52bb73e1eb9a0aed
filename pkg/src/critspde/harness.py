"""Monte Carlo experiment orchestration with deterministic parallelism.

Per-path seeds come from a splittable-style 64-bit mix of (master seed,
path index), so an ensemble is reproducible path by path regardless of how
many workers execute it.  Reduction always folds results in path-index
order; the worker pool only changes wall-clock time, never bytes.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .exponents import ParameterError
from .monitors import HoelderFit, hoelder_estimate
from .sim import (
    NonlinearitySpec,
    SimConfig,
    Trajectory,
    coarsen_increments,
    draw_increments,
    l2_norm_sq,
    simulate_path,
)

_MASK64 = (1 << 64) - 1


def mix_seed(master: int, index: int) -> int:
    """Splittable 64-bit hash of (master, index); documented bit-exactly."""
    z = (master + index * 0x9E3779B97F4A7C15) & _MASK64
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK64
    return z ^ (z >> 31)


@dataclass(frozen=True)
class EnsembleConfig:
    base: SimConfig
    n_paths: int = 8
    parallelism: int = 1
    experiment: str = "ensemble"
    outdir: Optional[str] = None
    n_save: Optional[int] = None

    def __post_init__(self):
        if self.n_paths < 1:
            raise ParameterError("need at least one path")
        if self.parallelism < 1:
            raise ParameterError("parallelism degree must be >= 1")


@dataclass(frozen=True)
class FunctionalStats:
    mean: float
    var: float
    ci_low: Optional[float]
    ci_high: Optional[float]


@dataclass(frozen=True)
class EnsembleStats:
    n_paths: int
    seeds: Tuple[int, ...]
    functionals: Dict[str, FunctionalStats]
    survival: float
    ci_mode: str

    def to_dict(self) -> dict:
        return {
            "n_paths": self.n_paths,
            "seeds": list(self.seeds),
            "survival": self.survival,
            "ci_mode": self.ci_mode,
            "functionals": {
                name: {"mean": fs.mean, "var": fs.var,
                       "ci_low": fs.ci_low, "ci_high": fs.ci_high}
                for name, fs in self.functionals.items()
            },
        }


# --- persistence ------------------------------------------------------------


def save_trajectory_csv(traj: Trajectory, path: Path) -> None:
    arr = np.column_stack([traj.times, traj.states])
    header = "t," + ",".join(f"x{j}" for j in range(traj.states.shape[1]))
    np.savetxt(path, arr, fmt="%.17g", delimiter=",", header=header,
               comments="")


def load_trajectory_csv(path: Path) -> Tuple[np.ndarray, np.ndarray]:
    arr = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return arr[:, 0], arr[:, 1:]


def write_summary(directory: Path, payload: dict) -> Path:
    directory.mkdir(parents=True, exist_ok=True)
    out = directory / "summary.json"
    out.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    return out


# --- ensemble core ------------------------------------------------------------


def _run_indexed(cfg: EnsembleConfig, worker: Callable[[int], object]) -> list:
    """Map worker over path indices; output order is always index order."""
    if cfg.parallelism == 1:
        return [worker(i) for i in range(cfg.n_paths)]
    with ThreadPoolExecutor(max_workers=cfg.parallelism) as pool:
        return list(pool.map(worker, range(cfg.n_paths)))


def run_ensemble(cfg: EnsembleConfig) -> List[Trajectory]:
    """All trajectories of the ensemble, in path-index order."""

    def worker(i: int) -> Trajectory:
        seed = mix_seed(cfg.base.seed, i)
        return simulate_path(replace(cfg.base, seed=seed), n_save=cfg.n_save)

    trajs = _run_indexed(cfg, worker)
    if cfg.outdir is not None:
        directory = Path(cfg.outdir) / cfg.experiment
        directory.mkdir(parents=True, exist_ok=True)
        for i, traj in enumerate(trajs):
            save_trajectory_csv(traj, directory / f"path_{i}.csv")
    return trajs


def _reduce_stats(cfg: EnsembleConfig,
                  trajs: Sequence[Trajectory]) -> EnsembleStats:
    seeds = tuple(mix_seed(cfg.base.seed, i) for i in range(cfg.n_paths))
    samples = {
        "initial_l2_sq": np.array([t.stats.initial_l2_sq for t in trajs]),
        "sup_l2_sq": np.array([t.stats.sup_l2_sq for t in trajs]),
        "grad_integral": np.array([t.stats.grad_integral for t in trajs]),
        "final_l2_sq": np.array([t.stats.final_l2_sq for t in trajs]),
        "sigma_hat": np.array([t.sigma_hat for t in trajs]),
    }
    n = cfg.n_paths
    ci_mode = "normal" if n >= 30 else "wide"
    functionals = {}
    for name, xs in samples.items():
        mean = float(np.mean(xs))
        var = float(np.var(xs, ddof=1)) if n >= 2 else 0.0
        if ci_mode == "normal":
            half = 1.96 * math.sqrt(var / n)
            lo, hi = mean - half, mean + half
        else:
            lo = hi = None
        functionals[name] = FunctionalStats(mean, var, lo, hi)
    survived = sum(
        1 for t in trajs
        if t.completed and t.sigma_hat >= cfg.base.t_end - 1e-12)
    return EnsembleStats(n, seeds, functionals, survived / n, ci_mode)


def mc_run(cfg: EnsembleConfig) -> EnsembleStats:
    trajs = run_ensemble(cfg)
    stats = _reduce_stats(cfg, trajs)
    if cfg.outdir is not None:
        write_summary(Path(cfg.outdir) / cfg.experiment,
                      {"experiment": cfg.experiment, **stats.to_dict()})
    return stats


# --- experiments ---------------------------------------------------------------


@dataclass(frozen=True)
class EnergyReport:
    c_hat: float
    c_hat_refined: float
    drift: float
    growth_rate: float
    blew_up: bool
    stats: EnsembleStats
    stats_refined: EnsembleStats

    def to_dict(self) -> dict:
        return {"c_hat": self.c_hat, "c_hat_refined": self.c_hat_refined,
                "drift": self.drift, "growth_rate": self.growth_rate,
                "blew_up": self.blew_up, "stats": self.stats.to_dict(),
                "stats_refined": self.stats_refined.to_dict()}


def _energy_constant(stats: EnsembleStats) -> float:
    lhs = stats.functionals["sup_l2_sq"].mean \
        + stats.functionals["grad_integral"].mean
    return lhs / (1.0 + stats.functionals["initial_l2_sq"].mean)


def experiment_energy(cfg: EnsembleConfig,
                      c_g: Optional[float] = None) -> EnergyReport:
    """Estimate the constant in the a-priori energy bound and its stability.

    The bound says E sup ||u||^2 + E int ||grad u||^2 <= C (1 + E||u0||^2)
    whenever the noise coefficient grows at most linearly; c_g documents the
    declared linear-growth constant (metadata only, never enforced).  Any
    path blow-up flags the report as invalid for the bound.
    """
    del c_g
    stats = mc_run(cfg)
    refined_base = replace(cfg.base, dt=cfg.base.dt / 2.0)
    refined_cfg = replace(cfg, base=refined_base, outdir=None)
    stats_refined = mc_run(refined_cfg)
    c_hat = _energy_constant(stats)
    c_ref = _energy_constant(stats_refined)
    drift = abs(c_hat - c_ref) / max(c_hat, 1e-300)
    rate = math.log(max(c_hat, 1.0)) / cfg.base.t_end
    report = EnergyReport(c_hat, c_ref, drift, rate,
                          stats.survival < 1.0, stats, stats_refined)
    if cfg.outdir is not None:
        write_summary(Path(cfg.outdir) / cfg.experiment,
                      {"experiment": cfg.experiment, **report.to_dict()})
    return report


@dataclass(frozen=True)
class SurvivalReport:
    h: float
    noise_scale: float
    survival: float
    stats: EnsembleStats

    def to_dict(self) -> dict:
        return {"h": self.h, "noise_scale": self.noise_scale,
                "survival": self.survival, "stats": self.stats.to_dict()}


def experiment_global(h: float, cfg: EnsembleConfig,
                      noise_scale: float = 1.0) -> SurvivalReport:
    """Survival fraction with noise coefficient g(y) = scale * |y|^h.

    The linear case h=1 is expected to survive every desk-scale horizon;
    h > 1 is exploratory and only reported.
    """
    if not 1.0 <= h < 3.0:
        raise ParameterError("noise growth power must lie in [1, 3)")
    nl = cfg.base.nonlinearity
    wired = NonlinearitySpec(
        f=nl.f, g=lambda y: noise_scale * np.abs(y) ** h, nu=nl.nu,
        f_x_independent=nl.f_x_independent, growth=nl.growth,
        sublinear_noise_bound=nl.sublinear_noise_bound)
    run_cfg = replace(cfg, base=replace(cfg.base, nonlinearity=wired))
    stats = mc_run(run_cfg)
    report = SurvivalReport(float(h), float(noise_scale), stats.survival,
                            stats)
    if cfg.outdir is not None:
        write_summary(Path(cfg.outdir) / cfg.experiment,
                      {"experiment": cfg.experiment, **report.to_dict()})
    return report


@dataclass(frozen=True)
class RegularityReport:
    median_theta_time: float
    median_theta_space: float
    median_r2_time: float
    median_r2_space: float
    n_paths: int
    n_completed: int
    fits: Tuple[HoelderFit, ...]

    def to_dict(self) -> dict:
        return {"median_theta_time": self.median_theta_time,
                "median_theta_space": self.median_theta_space,
                "median_r2_time": self.median_r2_time,
                "median_r2_space": self.median_r2_space,
                "n_paths": self.n_paths, "n_completed": self.n_completed}


def experiment_regularity(cfg: EnsembleConfig,
                          t0: Optional[float] = None) -> RegularityReport:
    """Aggregate empirical Hoelder exponents over an ensemble."""
    save = cfg.n_save if cfg.n_save is not None else 257

    def worker(i: int):
        seed = mix_seed(cfg.base.seed, i)
        traj = simulate_path(replace(cfg.base, seed=seed), n_save=save)
        if not traj.completed:
            return None
        return hoelder_estimate(traj, t0=t0)

    results = _run_indexed(cfg, worker)
    fits = tuple(f for f in results if f is not None)
    if not fits:
        raise ParameterError("no completed paths to fit")
    report = RegularityReport(
        float(np.median([f.theta_time for f in fits])),
        float(np.median([f.theta_space for f in fits])),
        float(np.median([f.r2_time for f in fits])),
        float(np.median([f.r2_space for f in fits])),
        cfg.n_paths, len(fits), fits)
    if cfg.outdir is not None:
        write_summary(Path(cfg.outdir) / cfg.experiment,
                      {"experiment": cfg.experiment, **report.to_dict()})
    return report


@dataclass(frozen=True)
class ConvergenceReport:
    temporal_errors: Tuple[float, ...]
    temporal_order: Optional[float]
    temporal_exact: bool
    spatial_errors: Tuple[float, ...]
    spatial_ratios: Tuple[float, ...]
    spatial_exact: bool

    def to_dict(self) -> dict:
        return {"temporal_errors": list(self.temporal_errors),
                "temporal_order": self.temporal_order,
                "temporal_exact": self.temporal_exact,
                "spatial_errors": list(self.spatial_errors),
                "spatial_ratios": list(self.spatial_ratios),
                "spatial_exact": self.spatial_exact}


def convergence_study(cfg: EnsembleConfig, levels: int = 3) -> ConvergenceReport:
    """Strong dt refinement (common noise) and spectral N refinement.

    Temporal part: each path's Brownian table is drawn at the base dt and
    aggregated onto coarser steps, the base-resolution run serving as the
    reference.  Spatial part: the deterministic drift-only problem is run at
    n, 2n, 4n, ... and consecutive solutions compared at shared grid points.
    """
    if levels < 3:
        raise ParameterError("need at least three refinement levels")
    base = cfg.base

    temporal_errors: List[float] = []
    temporal_exact = False
    if base.nonlinearity.has_noise:
        per_level: List[List[float]] = [[] for _ in range(levels - 1)]
        for i in range(cfg.n_paths):
            seed = mix_seed(base.seed, i)
            path_cfg = replace(base, seed=seed)
            fine = draw_increments(path_cfg)
            ref = simulate_path(path_cfg, n_save=2, increments=fine)
            for m in range(1, levels):
                factor = 2 ** m
                coarse_cfg = replace(base, seed=seed, dt=base.dt * factor)
                table = coarsen_increments(fine, factor)
                traj = simulate_path(coarse_cfg, n_save=2, increments=table)
                err = np.sqrt(l2_norm_sq(traj.states[-1] - ref.states[-1]))
                per_level[m - 1].append(float(err))
        temporal_errors = [float(np.mean(errs)) for errs in per_level]
    else:
        ref = simulate_path(base, n_save=2)
        for m in range(1, levels):
            traj = simulate_path(replace(base, dt=base.dt * 2 ** m), n_save=2)
            temporal_errors.append(float(
                np.sqrt(l2_norm_sq(traj.states[-1] - ref.states[-1]))))
    if all(e < 1e-13 for e in temporal_errors):
        temporal_exact = True
        temporal_order = None
    else:
        # errors are ordered from the finest coarsening up; consecutive
        # ratios estimate 2^order
        orders = [math.log2(b / a)
                  for a, b in zip(temporal_errors, temporal_errors[1:])
                  if a > 0]
        temporal_order = float(np.mean(orders)) if orders else None

    det_nl = NonlinearitySpec(f=base.nonlinearity.f, g=None,
                              nu=base.nonlinearity.nu,
                              f_x_independent=base.nonlinearity.f_x_independent)
    grids = []
    n = base.grid.n
    for _ in range(levels):
        grids.append(n)
        n *= 2
    runs = []
    for n in grids:
        det_cfg = replace(base, grid=type(base.grid)(n), nonlinearity=det_nl,
                          noise=None)
        runs.append(simulate_path(det_cfg, n_save=2).states[-1])
    spatial_errors = []
    for coarse, fine in zip(runs, runs[1:]):
        restricted = fine[::2]
        spatial_errors.append(float(np.sqrt(l2_norm_sq(coarse - restricted))))
    spatial_exact = all(e < 1e-13 for e in spatial_errors)
    ratios = tuple(
        a / b for a, b in zip(spatial_errors, spatial_errors[1:]) if b > 0)

    report = ConvergenceReport(tuple(temporal_errors), temporal_order,
                               temporal_exact, tuple(spatial_errors), ratios,
                               spatial_exact)
    if cfg.outdir is not None:
        write_summary(Path(cfg.outdir) / cfg.experiment,
                      {"experiment": cfg.experiment, **report.to_dict()})
    return report
