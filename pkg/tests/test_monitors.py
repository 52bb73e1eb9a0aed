import numpy as np
import pytest
from fractions import Fraction as F

from critspde.exponents import (
    ParameterError,
    Setting,
    SobolevScale,
    full_report,
    one_d_growth_params,
)
from critspde.monitors import (
    HoelderFit,
    MonitorSeries,
    blowup_functional,
    h_minus1_flux_norm,
    hoelder_estimate,
    hs_norm_G,
    ito_energy_residual,
    spatial_norm,
    x_space_norm,
)
from critspde.sim import (
    NoiseSpec,
    NonlinearitySpec,
    PathStats,
    SimConfig,
    TorusGrid,
    Trajectory,
    l2_norm_sq,
    simulate_path,
)

H2 = SobolevScale(F(-1), F(1), F(2))
L2_SETTING = Setting(H2, F(2), F(0))
GRID = TorusGrid(64)


def heat_cfg(**kw):
    base = dict(grid=GRID, nonlinearity=NonlinearitySpec(),
                t_end=1.0, dt=1e-3, u0=np.cos)
    base.update(kw)
    return SimConfig(**base)


def additive_cfg(dt=1e-3, seed=0, n=64, t_end=1.0):
    return SimConfig(grid=TorusGrid(n), nonlinearity=NonlinearitySpec(g=1.0),
                     noise=NoiseSpec(lam=0.75, modes=21), t_end=t_end,
                     dt=dt, seed=seed, u0=None)


def constant_trajectory(values, cfg, n_times=5, t_end=1.0):
    times = np.linspace(0.0, t_end, n_times)
    states = np.tile(values, (n_times, 1))
    return Trajectory(times, states, PathStats(), "completed", t_end, cfg)


# --- Hilbert-Schmidt norm ------------------------------------------------------

def test_hs_norm_zero_and_constant():
    spec = NoiseSpec(lam=0.75, modes=4)
    u = np.cos(GRID.x)
    assert hs_norm_G(u, 0.0, spec) == 0.0
    assert hs_norm_G(u, None, spec) == 0.0
    sig = spec.amplitudes()
    want = np.sqrt(sig[0] ** 2 + 2.0 * np.sum(sig[1:] ** 2))
    assert hs_norm_G(u, 1.0, spec) == pytest.approx(want, rel=1e-12)
    # independent of the state for constant g
    assert hs_norm_G(5 * u + 1, 1.0, spec) == pytest.approx(want, rel=1e-12)


def test_hs_norm_linear_scaling():
    spec = NoiseSpec(lam=0.75, modes=8)
    u = np.sin(3 * GRID.x) + 0.2
    a = hs_norm_G(u, lambda y: y, spec)
    b = hs_norm_G(3.0 * u, lambda y: y, spec)
    assert b == pytest.approx(3.0 * a, rel=1e-12)


def test_hs_norm_bounded_by_lq_norm():
    # density is constant, so hs <= sqrt(D) * ||u||_{L2} <= C ||u||_{L6}
    spec = NoiseSpec(lam=0.75, modes=21)
    sig = spec.amplitudes()
    density = sig[0] ** 2 / (2 * np.pi) + np.sum(sig[1:] ** 2) / np.pi
    c_chain = np.sqrt(density) * (2 * np.pi) ** (1 / 3)
    rng = np.random.default_rng(17)
    for _ in range(100):
        u_hat = np.zeros(33, dtype=complex)
        u_hat[:12] = rng.standard_normal(12) + 1j * rng.standard_normal(12)
        u_hat[0] = u_hat[0].real
        u = np.fft.irfft(u_hat * 64, n=64)
        l6 = (2 * np.pi * np.mean(np.abs(u) ** 6)) ** (1 / 6)
        assert hs_norm_G(u, lambda y: y, spec) <= c_chain * l6 * (1 + 1e-12)


# --- spatial norms ---------------------------------------------------------------

def test_spatial_norm_single_mode():
    u = np.cos(3 * GRID.x)
    want = np.sqrt(np.pi) * 10.0 ** (1.0 / 6.0)
    assert spatial_norm(u, 1.0 / 3.0) == pytest.approx(want, rel=1e-12)
    assert spatial_norm(u, 0.0) == pytest.approx(np.sqrt(np.pi), rel=1e-12)


def test_spatial_norm_lq_constant():
    u = np.full(64, 2.0)
    want = 2.0 * (2 * np.pi) ** 0.25
    assert spatial_norm(u, 0.0, q=4.0) == pytest.approx(want, rel=1e-12)


def test_flux_norm_linear_oracle():
    u = np.cos(GRID.x)
    assert h_minus1_flux_norm(u, lambda y: y) == pytest.approx(
        np.sqrt(np.pi / 2.0), rel=1e-12)
    assert h_minus1_flux_norm(u, None) == 0.0


# --- blow-up functional ----------------------------------------------------------

def test_blowup_functional_zero_path():
    cfg = heat_cfg(u0=None, nonlinearity=NonlinearitySpec(f=lambda y: y ** 3),
                   dt=0.05)
    traj = simulate_path(cfg)
    assert blowup_functional(traj, L2_SETTING, (0.0, 1.0)) == 0.0


def test_blowup_functional_monotone_and_finite():
    traj = simulate_path(additive_cfg(dt=1e-3, seed=3), n_save=201)
    vals = [blowup_functional(traj, L2_SETTING, (0.0, b))
            for b in (0.25, 0.5, 0.75, 1.0)]
    assert all(np.isfinite(v) for v in vals)
    assert all(a <= b + 1e-12 for a, b in zip(vals, vals[1:]))


def test_blowup_functional_weight_comparison():
    # (t-0)^1 <= T^1 pointwise, so the weighted value is bounded by the
    # unweighted one times T^{1/p}
    traj = simulate_path(additive_cfg(dt=1e-3, seed=5), n_save=201)
    s6 = Setting(H2, F(6), F(0))
    s6w = Setting(H2, F(6), F(1))
    v0 = blowup_functional(traj, s6, (0.0, 1.0))
    v1 = blowup_functional(traj, s6w, (0.0, 1.0))
    assert v1 <= v0 * 1.0 ** (1 / 6) * (1 + 1e-9)
    assert v1 > 0


def test_blowup_functional_window_guard():
    traj = simulate_path(heat_cfg(dt=0.05))
    with pytest.raises(ParameterError):
        blowup_functional(traj, L2_SETTING, (0.0, 1.5))
    with pytest.raises(ParameterError):
        blowup_functional(traj, L2_SETTING, (0.9, 0.2))


# --- continuation-class norms -----------------------------------------------------

def l2_report():
    return full_report(one_d_growth_params("l2_eps", eps=F(0)), L2_SETTING)


def test_x_space_norm_critical_entries():
    traj = simulate_path(heat_cfg(dt=0.05))
    out = x_space_norm(traj, l2_report(), (0.0, 1.0))
    assert len(out) == 4  # two terms, two slots each
    f_entries = [o for o in out if o.part == "f"]
    assert all(o.time_exponent == 6.0 for o in f_entries)
    assert all(o.smoothness == pytest.approx(1 / 3) for o in f_entries)
    # critical case: trace and interpolation slots coincide
    assert f_entries[0].value == pytest.approx(f_entries[1].value, rel=1e-12)


def test_x_space_norm_zero_path():
    cfg = heat_cfg(u0=None, dt=0.05)
    traj = simulate_path(cfg)
    out = x_space_norm(traj, l2_report(), (0.0, 1.0))
    assert all(o.value == 0.0 for o in out)


def test_x_space_norm_heat_closed_form():
    traj = simulate_path(heat_cfg(dt=1e-3))
    out = x_space_norm(traj, l2_report(), (0.0, 1.0))
    want = (np.pi ** 3 * 2.0 * (1.0 - np.exp(-6.0)) / 6.0) ** (1 / 6)
    assert out[0].value == pytest.approx(want, rel=1e-3)


def test_x_space_norm_monotone_in_endpoint():
    traj = simulate_path(additive_cfg(dt=1e-3, seed=7), n_save=201)
    a = x_space_norm(traj, l2_report(), (0.0, 0.5))
    b = x_space_norm(traj, l2_report(), (0.0, 1.0))
    assert all(x.value <= y.value + 1e-12 for x, y in zip(a, b))


# --- growth-vs-continuation ratio --------------------------------------------------

def test_functional_ratio_bounded_and_grid_stable():
    growth = one_d_growth_params("l2_eps", eps=F(0))
    zeta = 3.0  # 1 + max growth power
    rng = np.random.default_rng(23)
    nl = NonlinearitySpec(f=lambda y: y ** 3, g=lambda y: y, growth=growth)
    ratios = []
    drifts = []
    for _ in range(100):
        scale = 10.0 ** rng.uniform(-1.0, 1.2)
        u_hat = np.zeros(33, dtype=complex)
        u_hat[:11] = rng.standard_normal(11) + 1j * rng.standard_normal(11)
        u_hat[0] = u_hat[0].real
        vals = {}
        for n in (64, 128):
            full = np.zeros(n // 2 + 1, dtype=complex)
            full[:33] = u_hat
            u = scale * np.fft.irfft(full * n, n=n)
            cfg = SimConfig(grid=TorusGrid(n), nonlinearity=nl,
                            noise=NoiseSpec(lam=0.75, modes=21),
                            t_end=1.0, dt=0.25, u0=u)
            traj = constant_trajectory(u, cfg)
            num = blowup_functional(traj, L2_SETTING, (0.0, 1.0))
            xn = max(o.value for o in
                     x_space_norm(traj, l2_report(), (0.0, 1.0)))
            vals[n] = num / (1.0 + xn + xn ** zeta)
        ratios.append(vals[64])
        drifts.append(abs(vals[128] - vals[64]) / vals[64])
    assert max(ratios) < 10.0
    assert max(drifts) <= 0.15


# --- Ito residual -------------------------------------------------------------------

def test_ito_residual_pure_heat():
    series = ito_energy_residual(simulate_path(heat_cfg(dt=0.05)))
    assert np.max(np.abs(series.values["residual"])) <= 1e-10


def test_ito_residual_conservative_drift():
    # with an x-independent flux the pairing term vanishes exactly; what is
    # left is the scheme's own dt^2 ||F||^2 per-step quadrature error, so the
    # cumulative residual is O(dt) and refines at first order
    def worst(dt):
        cfg = heat_cfg(nonlinearity=NonlinearitySpec(f=lambda y: y ** 3),
                       t_end=0.2, dt=dt)
        series = ito_energy_residual(simulate_path(cfg))
        return float(np.max(np.abs(series.values["residual"])))

    coarse = worst(1e-3)
    fine = worst(2.5e-4)
    assert coarse <= 1e-3
    assert fine / coarse == pytest.approx(0.25, abs=0.1)


def test_ito_residual_rms_scales_like_sqrt_dt():
    def rms_at(dt, n_paths=40):
        finals = []
        for seed in range(n_paths):
            traj = simulate_path(additive_cfg(dt=dt, seed=seed, t_end=0.5),
                                 n_save=2)
            res = ito_energy_residual(traj)
            finals.append(res.values["residual"][-1])
        return float(np.sqrt(np.mean(np.square(finals))))

    coarse = rms_at(4e-3)
    fine = rms_at(1e-3)
    assert coarse / fine == pytest.approx(2.0, abs=0.9)


def test_ito_residual_rejects_foreign_states():
    traj = simulate_path(heat_cfg(dt=0.05))
    traj.states[-1] = traj.states[-1] + 1.0
    with pytest.raises(ParameterError):
        ito_energy_residual(traj)


# --- Hoelder fits --------------------------------------------------------------------

def test_hoelder_smooth_heat_path():
    cfg = SimConfig(grid=TorusGrid(128), nonlinearity=NonlinearitySpec(),
                    t_end=1.0, dt=1.0 / 1024, u0=np.cos)
    traj = simulate_path(cfg, n_save=257)
    fit = hoelder_estimate(traj)
    assert fit.theta_time >= 0.9
    assert fit.theta_space >= 0.9
    assert fit.r2_time > 0.99
    assert fit.t_start == pytest.approx(0.1)


def test_hoelder_stochastic_bands_loose():
    thetas_t, thetas_x = [], []
    for seed in range(4):
        cfg = SimConfig(grid=TorusGrid(128), nonlinearity=NonlinearitySpec(g=1.0),
                        noise=NoiseSpec(lam=0.75, modes=42), t_end=1.0,
                        dt=1.0 / 1024, seed=seed, u0=None)
        traj = simulate_path(cfg, n_save=257)
        fit = hoelder_estimate(traj)
        thetas_t.append(fit.theta_time)
        thetas_x.append(fit.theta_space)
    assert 0.3 <= float(np.median(thetas_t)) <= 0.65
    assert float(np.median(thetas_x)) >= 0.7


def test_hoelder_needs_enough_lags():
    traj = simulate_path(heat_cfg(dt=0.05), n_save=11)
    with pytest.raises(ParameterError):
        hoelder_estimate(traj)


def test_hoelder_window_validation():
    cfg = SimConfig(grid=TorusGrid(128), nonlinearity=NonlinearitySpec(),
                    t_end=1.0, dt=1.0 / 1024, u0=np.cos)
    traj = simulate_path(cfg, n_save=257)
    with pytest.raises(ParameterError):
        hoelder_estimate(traj, t0=0.0)
    with pytest.raises(ParameterError):
        hoelder_estimate(traj, t0=1.0)


# --- containers -----------------------------------------------------------------------

def test_monitor_series_validation():
    with pytest.raises(ParameterError):
        MonitorSeries(np.array([0.0, -1.0]), {})
    with pytest.raises(ParameterError):
        MonitorSeries(np.array([0.0, 1.0]), {"x": np.array([1.0])})
    with pytest.raises(ParameterError):
        MonitorSeries(np.array([0.0, 1.0]), {"x": np.array([1.0, np.inf])})


def test_hoelder_fit_validation():
    with pytest.raises(ParameterError):
        HoelderFit(1.5, 0.5, 0.1, 1.0, 0.9, 0.9)
    with pytest.raises(ParameterError):
        HoelderFit(0.5, 0.5, 0.0, 1.0, 0.9, 0.9)
