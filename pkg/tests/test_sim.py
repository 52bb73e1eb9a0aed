import numpy as np
import pytest

from critspde.exponents import ParameterError
from critspde.sim import (
    BlowUpSignal,
    NoiseSpec,
    NonlinearitySpec,
    SimConfig,
    SpectralStepper,
    TorusGrid,
    TorusState,
    basis_coefficient,
    coarsen_increments,
    draw_increments,
    drift_pairing,
    initial_values,
    l2_norm_sq,
    l2_norm_sq_spectral,
    noise_increment,
    nonlinearity_drift,
    simulate_path,
    spectral_weights,
    step,
)

GRID = TorusGrid(64)


def heat_cfg(**kw):
    base = dict(grid=GRID, nonlinearity=NonlinearitySpec(),
                t_end=1.0, dt=0.05, u0=np.cos)
    base.update(kw)
    return SimConfig(**base)


def ou_cfg(dt=5e-3, seed=0, modes=21, n=64):
    return SimConfig(grid=TorusGrid(n), nonlinearity=NonlinearitySpec(g=1.0),
                     noise=NoiseSpec(lam=0.75, modes=modes), t_end=1.0,
                     dt=dt, seed=seed, u0=None)


# --- validation ------------------------------------------------------------

def test_grid_validation():
    with pytest.raises(ParameterError):
        TorusGrid(12)
    with pytest.raises(ParameterError):
        TorusGrid(4)
    assert TorusGrid(8).nyquist == 4


def test_noise_spec_validation():
    with pytest.raises(ParameterError):
        NoiseSpec(lam=0.5)
    with pytest.raises(ParameterError):
        NoiseSpec(lam=1.0)
    amps = NoiseSpec(lam=0.75, modes=2).amplitudes()
    assert amps[0] == 1.0
    assert amps[1] == pytest.approx(2.0 ** -0.375)


def test_nonlinearity_validation():
    with pytest.raises(ParameterError):
        NonlinearitySpec(nu=0.0)
    spec = NonlinearitySpec(g=2)
    assert spec.g == 2.0 and spec.has_noise


def test_config_validation():
    with pytest.raises(ParameterError):
        heat_cfg(dt=-1.0)
    with pytest.raises(ParameterError):
        heat_cfg(scheme="euler")
    # noise cutoff outside the dealiased band
    with pytest.raises(ParameterError):
        SimConfig(grid=GRID, nonlinearity=NonlinearitySpec(g=1.0),
                  noise=NoiseSpec(modes=22), t_end=1.0, dt=0.1)
    # g present but no noise spec
    with pytest.raises(ParameterError):
        SimConfig(grid=GRID, nonlinearity=NonlinearitySpec(g=1.0),
                  t_end=1.0, dt=0.1)
    with pytest.raises(ParameterError):
        heat_cfg(dt=0.3).n_steps
    assert heat_cfg(dt=0.05).n_steps == 20


def test_initial_values_forms():
    assert np.all(initial_values(heat_cfg(u0=None)) == 0.0)
    assert initial_values(heat_cfg(u0=2.5))[3] == 2.5
    v = initial_values(heat_cfg(u0=np.cos))
    assert v[0] == pytest.approx(1.0)
    arr = np.arange(64.0)
    assert np.array_equal(initial_values(heat_cfg(u0=arr)), arr)
    with pytest.raises(ParameterError):
        initial_values(heat_cfg(u0=np.arange(32.0)))


# --- spectral bookkeeping ----------------------------------------------------

def test_parseval_consistency():
    rng = np.random.default_rng(1)
    u_hat_band = rng.standard_normal(11) + 1j * rng.standard_normal(11)
    full = np.zeros(33, dtype=complex)
    full[:11] = u_hat_band
    full[0] = full[0].real
    state = TorusState.from_spectrum(0.0, full, 64)
    w = spectral_weights(64)
    a = l2_norm_sq(state.values)
    b = l2_norm_sq_spectral(state.spectrum, w)
    assert a == pytest.approx(b, rel=1e-10)


def test_state_round_trip():
    x = GRID.x
    state = TorusState(0.5, np.cos(3 * x) + 0.25)
    back = TorusState.from_spectrum(state.t, state.spectrum, 64)
    assert np.allclose(back.values, state.values, atol=1e-13)
    spec = state.spectrum
    assert spec[0] == pytest.approx(0.25)
    assert spec[3] == pytest.approx(0.5)


def test_basis_coefficient_recovers_modes():
    x = GRID.x
    u = 3.0 * np.cos(2 * x) / np.sqrt(np.pi) + 0.5 / np.sqrt(2 * np.pi)
    assert basis_coefficient(u, 2, "cos") == pytest.approx(3.0, abs=1e-12)
    assert basis_coefficient(u, 0) == pytest.approx(0.5, abs=1e-12)
    assert basis_coefficient(u, 2, "sin") == pytest.approx(0.0, abs=1e-12)


# --- noise ------------------------------------------------------------------

def test_noise_constant_mode_only():
    spec = NoiseSpec(lam=0.75, modes=0)
    rng = np.random.default_rng(3)
    field = noise_increment(spec, GRID, 0.01, rng)
    assert np.ptp(field) == pytest.approx(0.0, abs=1e-15)
    draws = np.array([basis_coefficient(
        noise_increment(spec, GRID, 0.01, rng), 0) for _ in range(10000)])
    assert draws.var() == pytest.approx(0.01, rel=0.05)
    assert abs(draws.mean()) < 3 * 0.1 / np.sqrt(10000)


def test_noise_per_mode_variance():
    spec = NoiseSpec(lam=0.75, modes=8)
    rng = np.random.default_rng(5)
    dt = 0.02
    fields = np.array([noise_increment(spec, GRID, dt, rng)
                       for _ in range(10000)])
    sig = spec.amplitudes()
    for k, kind in [(1, "cos"), (1, "sin"), (4, "cos"), (8, "sin")]:
        coef = np.array([basis_coefficient(f, k, kind) for f in fields])
        assert coef.var() == pytest.approx(sig[k] ** 2 * dt, rel=0.05)


def test_noise_determinism():
    spec = NoiseSpec(modes=5)
    a = noise_increment(spec, GRID, 0.1, np.random.default_rng(42))
    b = noise_increment(spec, GRID, 0.1, np.random.default_rng(42))
    assert np.array_equal(a, b)


def test_noise_rejects_wide_band():
    with pytest.raises(ParameterError):
        noise_increment(NoiseSpec(modes=22), GRID, 0.1,
                        np.random.default_rng(0))


# --- drift --------------------------------------------------------------------

def test_drift_cubic_flux_oracle():
    x = GRID.x
    state = TorusState(0.0, np.cos(x))
    got = nonlinearity_drift(state, lambda y: y ** 3)
    want = -3.0 * np.cos(x) ** 2 * np.sin(x)
    assert np.max(np.abs(got - want)) <= 1e-8


def test_drift_zero_and_linear():
    x = GRID.x
    state = TorusState(0.0, np.cos(5 * x))
    assert np.all(nonlinearity_drift(state, None) == 0.0)
    got = nonlinearity_drift(state, lambda y: y)
    assert np.allclose(got, -5.0 * np.sin(5 * x), atol=1e-12)


def test_drift_overflow_flags_blowup():
    state = TorusState(0.75, np.full(64, 1e200))
    with np.errstate(over="ignore"), pytest.raises(BlowUpSignal) as ei:
        nonlinearity_drift(state, lambda y: y ** 3)
    assert ei.value.t == 0.75


def test_drift_pairing_vanishes():
    rng = np.random.default_rng(11)
    n = 128
    for _ in range(20):
        u_hat = np.zeros(n // 2 + 1, dtype=complex)
        u_hat[:32] = rng.standard_normal(32) + 1j * rng.standard_normal(32)
        u_hat[0] = u_hat[0].real
        u = np.fft.irfft(u_hat * n, n=n)
        val = drift_pairing(u, lambda y: y ** 3)
        l4 = (2 * np.pi / n) * float(np.sum(u ** 4))
        assert abs(val) <= 1e-8 * (1.0 + l4)


# --- stepping -------------------------------------------------------------------

def test_single_heat_step_exact():
    cfg = heat_cfg(dt=0.05)
    state = TorusState(0.0, np.cos(GRID.x))
    out = step(state, cfg, np.random.default_rng(0))
    assert out.t == pytest.approx(0.05)
    assert np.allclose(out.values, np.exp(-0.05) * np.cos(GRID.x), atol=1e-14)


def test_semi_implicit_multiplier():
    cfg = heat_cfg(dt=0.1, scheme="semi_implicit")
    state = TorusState(0.0, np.cos(GRID.x))
    out = step(state, cfg, np.random.default_rng(0))
    assert np.allclose(out.values, np.cos(GRID.x) / 1.1, atol=1e-14)


def test_heat_path_exactness_any_partition():
    for dt in (0.5, 0.05, 0.01):
        traj = simulate_path(heat_cfg(dt=dt))
        err = traj.states[-1] - np.exp(-1.0) * np.cos(GRID.x)
        assert np.sqrt(l2_norm_sq(err)) <= 1e-12
        assert traj.completed and traj.sigma_hat == 1.0


def test_ou_mode_variance():
    # d a = -a dt + sigma_1 d beta; Var a(1) = sigma_1^2 (1-e^-2)/2
    target = 2.0 ** -0.75 * (1.0 - np.exp(-2.0)) / 2.0
    vals = []
    for seed in range(300):
        traj = simulate_path(ou_cfg(seed=seed), n_save=2)
        vals.append(basis_coefficient(traj.states[-1], 1, "cos") ** 2)
    est = float(np.mean(vals))
    mc = 3.0 * target * np.sqrt(2.0 / len(vals))
    assert abs(est - target) <= mc


def test_cubic_conservative_l2_decrease():
    cfg = heat_cfg(nonlinearity=NonlinearitySpec(f=lambda y: y ** 3),
                   dt=1e-3)
    traj = simulate_path(cfg, n_save=11)
    assert traj.completed
    assert traj.stats.sup_l2_sq <= traj.stats.initial_l2_sq * (1 + 1e-9)
    assert traj.stats.final_l2_sq < traj.stats.initial_l2_sq


def test_blowup_cap_at_start():
    cfg = heat_cfg(u0=lambda x: 2.0 * np.cos(x), blowup_cap=1.0)
    traj = simulate_path(cfg)
    assert traj.status == "blew_up"
    assert traj.sigma_hat == 0.0
    assert traj.times.shape == (1,)


def test_blowup_mid_path_truncates():
    # unstable growth: f pumps energy through a negative flux gradient
    cfg = heat_cfg(nonlinearity=NonlinearitySpec(f=lambda y: 1e8 * y ** 3),
                   dt=0.05, blowup_cap=10.0)
    traj = simulate_path(cfg)
    assert traj.status == "blew_up"
    assert 0.0 < traj.sigma_hat <= 1.0
    assert traj.times.size < 21
    assert np.all(np.abs(traj.states) <= 10.0)


def test_path_determinism_and_table_equivalence():
    cfg = ou_cfg(dt=0.01, seed=9)
    a = simulate_path(cfg)
    b = simulate_path(cfg)
    assert np.array_equal(a.states, b.states)
    table = draw_increments(cfg)
    c = simulate_path(cfg, increments=table)
    assert np.array_equal(a.states[-1], c.states[-1])


def test_increment_table_shape_enforced():
    cfg = ou_cfg(dt=0.01)
    with pytest.raises(ParameterError):
        simulate_path(cfg, increments=np.zeros((5, 43)))


def test_coarsen_increments():
    rng = np.random.default_rng(2)
    fine = rng.standard_normal((8, 3))
    coarse = coarsen_increments(fine, 4)
    assert coarse.shape == (2, 3)
    assert np.allclose(coarse[0], fine[:4].sum(axis=0) / 2.0)
    with pytest.raises(ParameterError):
        coarsen_increments(fine, 3)


def test_common_noise_refinement_agrees():
    # same Brownian path at two resolutions: solutions stay close and the
    # gap shrinks as the coarse step halves (strong self-convergence)
    base = ou_cfg(dt=1.0 / 512, seed=21, modes=5, n=32)
    fine_table = draw_increments(base)
    ref = simulate_path(base, increments=fine_table, n_save=2)
    errs = []
    for m in (8, 4):
        cfg = ou_cfg(dt=m / 512, seed=21, modes=5, n=32)
        table = coarsen_increments(fine_table, m)
        traj = simulate_path(cfg, increments=table, n_save=2)
        errs.append(np.sqrt(l2_norm_sq(traj.states[-1] - ref.states[-1])))
    assert errs[1] < errs[0]
    assert errs[0] / errs[1] > 1.3


def test_observer_sees_every_step():
    seen = []

    def watch(i, t, before, f_hat, g_hat, after):
        seen.append((i, t, g_hat is None))
        assert before.shape == (33,) and after.shape == (33,)
        assert f_hat.shape == (33,)

    simulate_path(heat_cfg(dt=0.25), observer=watch)
    assert [s[0] for s in seen] == [0, 1, 2, 3]
    assert all(s[2] for s in seen)


def test_save_schedule():
    traj = simulate_path(heat_cfg(dt=0.05), n_save=5)
    assert np.allclose(traj.times, [0.0, 0.25, 0.5, 0.75, 1.0])
    assert traj.states.shape == (5, 64)
    with pytest.raises(ParameterError):
        simulate_path(heat_cfg(dt=0.05), n_save=1)


def test_grad_integral_heat_oracle():
    # d/dt ||u||^2 = -2||grad u||^2 for pure heat flow, so the accumulated
    # integral must match (||u0||^2 - ||u(T)||^2)/2
    cfg = heat_cfg(dt=1e-3)
    traj = simulate_path(cfg, n_save=2)
    drop = (traj.stats.initial_l2_sq - traj.stats.final_l2_sq) / 2.0
    assert traj.stats.grad_integral == pytest.approx(drop, rel=2e-3)


def test_stepper_mode_tables():
    st = SpectralStepper(heat_cfg(dt=0.1))
    assert st.linear[0] == 1.0
    assert st.linear[2] == pytest.approx(np.exp(-0.4))
    assert not st.keep[22]
    assert st.keep[21]
    assert st.deriv[-1] == 1j * 32.0
