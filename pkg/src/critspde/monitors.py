"""Diagnostic functionals along simulated trajectories.

Covers the energy bookkeeping the discrete scheme should respect (an Ito
identity residual), the weighted space-time norms whose finiteness governs
continuation past a candidate blow-up time, Hilbert-Schmidt norms of the
noise coefficient, and empirical Hoelder exponents estimated from saved
snapshots.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from .exponents import CriticalityReport, ParameterError, Setting
from .sim import (
    NoiseSpec,
    SimConfig,
    SpectralStepper,
    TorusState,
    Trajectory,
    l2_norm_sq_spectral,
    simulate_path,
    spectral_weights,
)
from .weights import PowerWeight, SampledFunction, TimeGrid, weighted_lp_norm

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class MonitorSeries:
    times: np.ndarray
    values: Dict[str, np.ndarray]

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        object.__setattr__(self, "times", t)
        if t.ndim != 1 or np.any(np.diff(t) < 0):
            raise ParameterError("monitor times must be nondecreasing")
        for name, v in self.values.items():
            v = np.asarray(v, dtype=float)
            if v.shape != t.shape:
                raise ParameterError(f"series {name} length mismatch")
            if not np.all(np.isfinite(v)):
                raise ParameterError(f"series {name} has non-finite entries")


@dataclass(frozen=True)
class HoelderFit:
    theta_time: float
    theta_space: float
    t_start: float
    t_end: float
    r2_time: float
    r2_space: float

    def __post_init__(self):
        if not 0.0 <= self.theta_time <= 1.0 or not 0.0 <= self.theta_space <= 1.0:
            raise ParameterError("fitted exponents must lie in [0, 1]")
        if self.t_start <= 0.0:
            raise ParameterError("fit window must stay away from t = 0")


FieldLike = Union[np.ndarray, TorusState]


def _field_values(u: FieldLike) -> np.ndarray:
    if isinstance(u, TorusState):
        return u.values
    return np.asarray(u, dtype=float)


def _coefficient_values(g, values: np.ndarray) -> np.ndarray:
    if g is None:
        return np.zeros_like(values)
    if callable(g):
        return np.asarray(g(values), dtype=float)
    return np.full_like(values, float(g))


def hs_norm_G(u: FieldLike, g, noise: NoiseSpec) -> float:
    """Hilbert-Schmidt norm of v -> g(u) * v over the truncated noise basis.

    Equals (sum_k sigma_k^2 ||g(u) e_k||_{L2}^2)^{1/2}; the paired cos/sin
    basis makes sum_k sigma_k^2 e_k(x)^2 a constant in x, but the quadrature
    below stays literal about the mode sum.
    """
    values = _field_values(u)
    n = values.size
    x = TWO_PI * np.arange(n) / n
    sigma = noise.amplitudes()
    density = np.full(n, sigma[0] ** 2 / TWO_PI)
    for k in range(1, sigma.size):
        density += sigma[k] ** 2 * (np.cos(k * x) ** 2 + np.sin(k * x) ** 2) / np.pi
    gu = _coefficient_values(g, values)
    return float(np.sqrt(TWO_PI * np.mean(gu ** 2 * density)))


def spatial_norm(values: np.ndarray, smoothness: float, q: float = 2.0) -> float:
    """Fractional Sobolev norm via the Bessel multiplier (1+k^2)^{s/2}.

    Exact on band-limited fields.  For q = 2 the mode sum is used directly;
    otherwise the multiplied field is brought back to the grid and its
    L^q norm taken by quadrature.
    """
    values = np.asarray(values, dtype=float)
    n = values.size
    u_hat = np.fft.rfft(values) / n
    k = np.arange(n // 2 + 1, dtype=float)
    mult = (1.0 + k * k) ** (smoothness / 2.0)
    if q == 2.0:
        w = spectral_weights(n)
        return float(np.sqrt(l2_norm_sq_spectral(mult * u_hat, w)))
    shifted = np.fft.irfft(mult * u_hat * n, n=n)
    return float((TWO_PI * np.mean(np.abs(shifted) ** q)) ** (1.0 / q))


def h_minus1_flux_norm(values: np.ndarray, f) -> float:
    """H^{-1} norm of d/dx f(u), with the simulator's dealiased derivative."""
    values = np.asarray(values, dtype=float)
    n = values.size
    if f is None:
        return 0.0
    fu = np.asarray(f(values), dtype=float)
    f_hat = np.fft.rfft(fu) / n
    k = np.arange(n // 2 + 1, dtype=float)
    f_hat[np.arange(n // 2 + 1) > n // 3] = 0.0
    w = spectral_weights(n)
    mode_sq = (k * k / (1.0 + k * k)) * (f_hat.real ** 2 + f_hat.imag ** 2)
    return float(np.sqrt(TWO_PI * float(w @ mode_sq)))


def _window_grid(traj: Trajectory, window: Tuple[float, float]) -> TimeGrid:
    a, b = float(window[0]), float(window[1])
    if not 0.0 <= a < b:
        raise ParameterError("window must satisfy 0 <= a < b")
    if b > traj.sigma_hat + 1e-12:
        raise ParameterError("window extends beyond the trajectory lifetime")
    mask = (traj.times >= a - 1e-12) & (traj.times <= b + 1e-12)
    nodes = traj.times[mask]
    if nodes.size < 3:
        raise ParameterError("window contains too few saved snapshots")
    return TimeGrid(nodes)


def _window_states(traj: Trajectory, grid: TimeGrid) -> np.ndarray:
    idx = np.searchsorted(traj.times, grid.nodes)
    return traj.states[idx]


def blowup_functional(traj: Trajectory, setting: Setting,
                      window: Tuple[float, float]) -> float:
    """Weighted drift + noise space-time norm over the window.

    Drift part: L^p(window, w_kappa; H^{-1}) norm of d/dx f(u).  Noise part:
    same time norm of the Hilbert-Schmidt coefficient norm (the L^2-target
    realization of the noise functional).  Finiteness of this quantity is
    what the continuation criteria interrogate as t approaches the lifetime.
    """
    grid = _window_grid(traj, window)
    states = _window_states(traj, grid)
    nl = traj.config.nonlinearity
    p = float(setting.p)
    w = PowerWeight(float(setting.kappa), offset=grid.a)
    drift_series = np.array([h_minus1_flux_norm(s, nl.f) for s in states])
    total = weighted_lp_norm(SampledFunction(grid, drift_series), p, w)
    if nl.has_noise:
        hs_series = np.array([
            hs_norm_G(s, nl.g, traj.config.noise) for s in states])
        total += weighted_lp_norm(SampledFunction(grid, hs_series), p, w)
    return float(total)


@dataclass(frozen=True)
class XNormValue:
    part: str
    index: int
    slot: str
    time_exponent: float
    smoothness: float
    space_q: float
    value: float


def x_space_norm(traj: Trajectory, report: CriticalityReport,
                 window: Tuple[float, float],
                 kappa: float = 0.0) -> List[XNormValue]:
    """Per-term space-time norms in the continuation class.

    Each growth term contributes two entries: a higher-smoothness one at its
    trace exponent and a lower-smoothness one at the interpolated exponent.
    Values are weighted time norms (weight exponent kappa, default
    unweighted) of spatial Bessel norms of the saved snapshots.
    """
    grid = _window_grid(traj, window)
    states = _window_states(traj, grid)
    w = PowerWeight(float(kappa), offset=grid.a)
    out: List[XNormValue] = []
    for term in report.exponents:
        for slot, entry in zip(("trace", "interp"), term.x_entries):
            series = np.array([
                spatial_norm(s, float(entry.smoothness), float(entry.space_q))
                for s in states])
            p_time = float(entry.time_exponent)
            val = weighted_lp_norm(SampledFunction(grid, series), p_time, w)
            out.append(XNormValue(term.part, term.index, slot, p_time,
                                  float(entry.smoothness),
                                  float(entry.space_q), float(val)))
    return out


# --- Ito energy identity -----------------------------------------------------


def ito_energy_residual(traj: Trajectory) -> MonitorSeries:
    """Cumulative defect of the discrete L^2 energy identity.

    Replays the trajectory from its config (the path is deterministic given
    the seed) and accumulates, step by step,

        d||u||^2 + 2 ||grad u||^2 dt - (I + II + III)

    where I is the drift pairing (identically zero when f is declared
    x-independent), II the Ito correction dt * ||g(u)||_HS^2, and III the
    realized martingale increment 2 <u, g(u) dW>.  For the pure heat flow the
    residual is roundoff; with noise it is the (mean-zero) quadratic
    variation mismatch, shrinking like sqrt(dt) at fixed horizon.
    """
    cfg = traj.config
    stepper = SpectralStepper(cfg)
    x_indep = cfg.nonlinearity.f_x_independent
    records: List[Tuple[float, float]] = []

    def watch(i, t, before, f_hat, g_hat, after):
        l2_before = l2_norm_sq_spectral(before, stepper.weights)
        l2_after = l2_norm_sq_spectral(after, stepper.weights)
        plus = before + stepper.dt * f_hat
        if g_hat is not None:
            plus = plus + g_hat
        if cfg.scheme == "exp_euler":
            k2 = stepper.k.astype(float) ** 2
            decay = 0.5 * (1.0 - np.exp(-2.0 * k2 * stepper.dt))
            mode_sq = plus.real ** 2 + plus.imag ** 2
            grad_inc = TWO_PI * float((stepper.weights * decay) @ mode_sq)
        else:
            g0 = grad_sq(before)
            g1 = grad_sq(after)
            grad_inc = 0.5 * stepper.dt * (g0 + g1)
        term_i = 0.0
        if cfg.nonlinearity.f is not None and not x_indep:
            term_i = 2.0 * stepper.dt * TWO_PI * float(
                stepper.weights @ (before * np.conj(f_hat)).real)
        term_ii = 0.0
        term_iii = 0.0
        if g_hat is not None:
            values = np.fft.irfft(before * stepper.n, n=stepper.n)
            hs = hs_norm_G(values, cfg.nonlinearity.g, cfg.noise)
            term_ii = stepper.dt * hs * hs
            term_iii = 2.0 * TWO_PI * float(
                stepper.weights @ (before * np.conj(g_hat)).real)
        res = (l2_after - l2_before) + 2.0 * grad_inc \
            - (term_i + term_ii + term_iii)
        records.append(((i + 1) * stepper.dt, res))

    def grad_sq(u_hat):
        k2 = stepper.k.astype(float) ** 2
        return TWO_PI * float(
            (stepper.weights * k2) @ (u_hat.real ** 2 + u_hat.imag ** 2))

    replay = simulate_path(cfg, n_save=2, observer=watch)
    if replay.status != traj.status or replay.sigma_hat != traj.sigma_hat:
        raise ParameterError("trajectory does not replay from its config")
    if traj.completed and traj.states.size:
        if not np.allclose(replay.states[-1], traj.states[-1],
                           rtol=1e-10, atol=1e-12):
            raise ParameterError("trajectory does not replay from its config")

    times = np.array([t for t, _ in records])
    resid = np.cumsum([r for _, r in records])
    return MonitorSeries(times, {"residual": resid})


# --- empirical Hoelder exponents ---------------------------------------------


def _loglog_slope(lags: np.ndarray, vals: np.ndarray) -> Tuple[float, float]:
    x = np.log(lags)
    y = np.log(vals)
    slope, intercept = np.polyfit(x, y, 1)
    fit = slope * x + intercept
    ss_res = float(np.sum((y - fit) ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(slope), r2


def hoelder_estimate(traj: Trajectory, t0: Optional[float] = None,
                     min_lags: int = 6) -> HoelderFit:
    """Empirical time and space Hoelder exponents from saved snapshots.

    Time: median over x of |u(t+lag) - u(t)|, averaged over t >= t0, fitted
    log-log against dyadic lags.  Space: the analogous statistic for dyadic
    circular grid shifts.  Exponents are clipped to [0, 1]; the early window
    (0, t0) is excluded because smoothing needs positive time to act.
    """
    times = traj.times
    if times.size < 8:
        raise ParameterError("need more saved snapshots for a Hoelder fit")
    t_end = float(times[-1])
    if t0 is None:
        t0 = 0.1 * t_end
    if t0 <= 0.0 or t0 >= t_end:
        raise ParameterError("fit start must lie inside (0, T)")
    if np.any(np.diff(times) <= 0):
        raise ParameterError("save times must be strictly increasing")

    start = int(np.searchsorted(times, t0 - 1e-12))
    lags = []
    m = 1
    while start + 2 * m < times.size:
        lags.append(m)
        m *= 2
    if len(lags) < min_lags:
        raise ParameterError("insufficient dyadic lags for the time fit")

    block = traj.states[start:]
    block_times = times[start:]
    d_time = []
    lag_dt = []
    for m in lags:
        diffs = np.abs(block[m:] - block[:-m])
        d_time.append(float(np.mean(np.median(diffs, axis=1))))
        lag_dt.append(float(np.mean(block_times[m:] - block_times[:-m])))
    slope_t, r2_t = _loglog_slope(np.array(lag_dt), np.array(d_time))

    n = traj.states.shape[1]
    shifts = []
    h = 1
    while h <= n // 4:
        shifts.append(h)
        h *= 2
    if len(shifts) < min_lags:
        raise ParameterError("insufficient dyadic shifts for the space fit")
    sub = block[:: max(1, block.shape[0] // 40)]
    d_space = []
    for h in shifts:
        diffs = np.abs(np.roll(sub, -h, axis=1) - sub)
        d_space.append(float(np.mean(np.median(diffs, axis=1))))
    slope_x, r2_x = _loglog_slope(
        TWO_PI * np.array(shifts) / n, np.array(d_space))

    return HoelderFit(
        theta_time=float(np.clip(slope_t, 0.0, 1.0)),
        theta_space=float(np.clip(slope_x, 0.0, 1.0)),
        t_start=float(t0), t_end=t_end, r2_time=r2_t, r2_space=r2_x)
