import numpy as np
import pytest

from mvmam import InvalidArgumentError, Trajectory, build_model, integrate_skeleton
from mvmam.exceptions import ConfigurationError
from mvmam.particles import (
    SimConfig,
    empirical_transition_stats,
    mean_field,
    simulate_corresponding_sde,
    simulate_particles,
)
from mvmam.skeleton import uniform_grid


def test_simconfig_validation():
    with pytest.raises(ConfigurationError):
        SimConfig(dt=0.0)
    with pytest.raises(ConfigurationError):
        SimConfig(dt=0.1, t_end=0.05)
    with pytest.raises(ConfigurationError):
        SimConfig(n_particles=0)
    with pytest.raises(ConfigurationError):
        SimConfig(epsilon=-1.0)
    with pytest.raises(ConfigurationError):
        SimConfig(seed=-1)


def test_noiseless_single_particle_is_skeleton():
    m = build_model("maier-stein", None, "biot-savart-regularized", None, (0.5, 0.2), (1.0, 0.0))
    cfg = SimConfig(n_particles=1, epsilon=0.0, dt=0.01, t_end=0.5)
    snaps = simulate_particles(m, cfg, record_stride=1)
    skel = integrate_skeleton(m, m.x1, uniform_grid(cfg.t_end, cfg.dt))
    got = np.array([s.positions[0] for s in snaps])
    np.testing.assert_array_equal(got, skel.states)
    np.testing.assert_allclose([s.time for s in snaps], skel.grid)


def test_noiseless_particles_stay_identical(fig2):
    m = build_model("maier-stein", None, "biot-savart-regularized", None, (0.3, 0.4), (1.0, 0.0))
    snaps = simulate_particles(m, SimConfig(n_particles=7, epsilon=0.0, dt=0.01, t_end=0.3), record_stride=3)
    for s in snaps:
        assert np.all(s.positions == s.positions[0])


def test_mean_field_zero_at_common_state(fig2):
    X = np.tile([0.2, -0.7], (5, 1))
    assert np.all(mean_field(fig2, X) == 0.0)


def test_mean_field_matches_loop(fig2):
    X = np.random.default_rng(3).uniform(-1, 1, (6, 2))
    ref = np.array([sum(fig2.F(X[i] - X[j]) for j in range(6)) / 6 for i in range(6)])
    np.testing.assert_allclose(mean_field(fig2, X), ref, atol=1e-15)


def test_determinism(fig2):
    cfg = SimConfig(n_particles=8, epsilon=0.05, dt=0.01, t_end=0.5, seed=42)
    a = simulate_particles(fig2, cfg, record_stride=10)
    b = simulate_particles(fig2, cfg, record_stride=10)
    assert len(a) == len(b) == 6
    for x, y in zip(a, b):
        assert x.time == y.time and x.positions.tobytes() == y.positions.tobytes()


def test_exchangeability(fig2):
    cfg = SimConfig(n_particles=8, epsilon=0.05, dt=0.01, t_end=0.3, seed=9)
    perm = [3, 1, 7, 0, 5, 2, 6, 4]
    a = simulate_particles(fig2, cfg, 5)
    b = simulate_particles(fig2, cfg, 5, substreams=perm)
    for x, y in zip(a, b):
        # same empirical measure, up to summation order
        np.testing.assert_allclose(np.sort(x.positions, axis=0), np.sort(y.positions, axis=0), atol=1e-12)
        np.testing.assert_allclose(y.positions, x.positions[perm], atol=1e-12)


def test_particle_noise_does_not_depend_on_ensemble_size(ms_zero):
    # without interaction, particle 0 must see the same increments for any N
    a = simulate_particles(ms_zero, SimConfig(n_particles=1, epsilon=0.1, dt=0.01, t_end=0.2, seed=5))
    b = simulate_particles(ms_zero, SimConfig(n_particles=4, epsilon=0.1, dt=0.01, t_end=0.2, seed=5))
    np.testing.assert_array_equal(a[-1].positions[0], b[-1].positions[0])


def test_increment_variance_one_step(fig1):
    eps, dt, n = 0.1, 0.01, 20000
    cfg = SimConfig(n_particles=1, epsilon=eps, dt=dt, t_end=dt, seed=123, n_paths=n)
    skel = integrate_skeleton(fig1, fig1.x1, uniform_grid(dt, dt))
    paths = simulate_corresponding_sde(fig1, skel, cfg)
    inc = np.array([p.states[1] - p.states[0] for p in paths])
    var = inc.var(axis=0, ddof=1)
    se = eps * dt * np.sqrt(2.0 / (n - 1))
    assert np.all(np.abs(var - eps * dt) < 3 * se)


def test_corresponding_sde_grid_mismatch(fig2):
    cfg = SimConfig(dt=0.01, t_end=0.1)
    skel = integrate_skeleton(fig2, fig2.x1, np.linspace(0, 0.1, 5))
    with pytest.raises(InvalidArgumentError):
        simulate_corresponding_sde(fig2, skel, cfg)


def test_corresponding_sde_noiseless_is_flow(fig2):
    m = build_model("maier-stein", None, "linear", None, (-1.0, 0.0), (1.0, 0.0))
    cfg = SimConfig(dt=0.01, t_end=1.0, n_paths=2, epsilon=0.0)
    skel = integrate_skeleton(m, m.x1, uniform_grid(1.0, 0.01))
    paths = simulate_corresponding_sde(m, skel, cfg)
    assert np.array_equal(paths[0].states, paths[1].states)
    assert np.all(paths[0].states == m.x1)


def test_transition_stats():
    grid = np.linspace(0, 1, 11)
    still = Trajectory(grid, np.zeros((11, 2)))
    mover = Trajectory(grid, np.column_stack([grid, np.zeros(11)]))
    assert empirical_transition_stats([still, mover], (0.0, 0.0), 0.05) == (1.0, 0.0)
    frac, t = empirical_transition_stats([still, mover], (1.0, 0.0), 0.15)
    assert frac == 0.5 and t == pytest.approx(0.9)
    assert empirical_transition_stats([still], (5.0, 5.0), 0.1) == (0.0, None)
    with pytest.raises(InvalidArgumentError):
        empirical_transition_stats([], (0.0, 0.0), 0.1)
    with pytest.raises(InvalidArgumentError):
        empirical_transition_stats([still], (0.0, 0.0), 0.0)


def test_pure_field_sde_stays_in_basin(ms_zero):
    cfg = SimConfig(epsilon=0.01, dt=0.01, t_end=5.0, n_paths=1000, seed=1)
    skel = integrate_skeleton(ms_zero, ms_zero.x1, uniform_grid(cfg.t_end, cfg.dt))
    paths = simulate_corresponding_sde(ms_zero, skel, cfg)
    exited = np.mean([np.any(p.states[:, 0] > 0.0) for p in paths])
    assert exited < 0.05
