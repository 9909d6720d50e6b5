import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mvmam import InvalidArgumentError, Trajectory, action, action_gradient_fd, integrate_skeleton
from mvmam.action import action_gradient, action_value, segment_residuals

from .conftest import smooth_random_path


def _const(model, x, grid):
    return Trajectory(grid, np.tile(x, (len(grid), 1)))


def three_node(model):
    grid = np.array([0.0, 1.0, 2.0])
    path = Trajectory(grid, [[-1.0, 0.0], [0.0, 0.0], [1.0, 0.0]])
    return path, _const(model, model.x1, grid)


def test_three_node_value(fig1):
    path, skel = three_node(fig1)
    # exact rational evaluation: 225/128 + 289/128
    assert action(fig1, path, skel) == pytest.approx(257 / 64, abs=1e-14)
    dt, r, _, _ = segment_residuals(fig1, path.grid, path.states, skel.states)
    np.testing.assert_allclose(0.5 * dt * np.sum(r * r, axis=1), [225 / 128, 289 / 128], atol=1e-14)


def test_constant_path_zero(fig1):
    grid = np.linspace(0, 3, 7)
    p = _const(fig1, fig1.x1, grid)
    assert action(fig1, p, p) == 0.0
    g = action_gradient_fd(fig1, p, p, h=1e-5)
    assert np.max(np.abs(g)) <= 1e-8
    # time rescaling keeps the stationary set
    p2 = _const(fig1, fig1.x1, grid * 3.7)
    assert np.max(np.abs(action_gradient_fd(fig1, p2, p2, h=1e-5))) <= 1e-8


def test_three_node_gradient_nonzero_and_second_order(fig1):
    path, skel = three_node(fig1)
    g1 = action_gradient_fd(fig1, path, skel, h=1e-3)
    g2 = action_gradient_fd(fig1, path, skel, h=1e-4)
    assert np.linalg.norm(g2[1]) > 0.1
    assert np.all(g2[0] == 0) and np.all(g2[-1] == 0)
    exact = action_gradient(fig1, path.grid, path.states, skel.states)
    # central differences: error shrinks ~100x for a 10x smaller step
    e1, e2 = np.linalg.norm(g1[1] - exact[1]), np.linalg.norm(g2[1] - exact[1])
    assert e2 <= 0.05 * e1 + 1e-10


def test_grid_mismatch(fig1):
    path, skel = three_node(fig1)
    other = Trajectory(np.array([0.0, 1.0, 2.5]), skel.states)
    with pytest.raises(InvalidArgumentError):
        action(fig1, path, other)
    with pytest.raises(InvalidArgumentError):
        action_gradient_fd(fig1, path, other)


def test_quadrature_second_order(fig2):
    def sample(n):
        t = np.linspace(0, 2.0, n + 1)
        s = t / 2.0
        states = np.column_stack([-np.cos(np.pi * s), 0.3 * np.sin(np.pi * s)])
        return Trajectory(t, states)

    def val(n):
        p = sample(n)
        return action(fig2, p, integrate_skeleton(fig2, fig2.x1, p.grid))

    a, b, c = val(40), val(80), val(160)
    ratio = (a - b) / (b - c)
    assert 2.0 <= ratio <= 8.0


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_nonnegative(seed):
    from mvmam import figure2_model

    m = figure2_model()
    rng = np.random.default_rng(seed)
    states = smooth_random_path(rng, m.x1, m.x2, 12)
    t = np.cumsum(np.r_[0.0, rng.uniform(0.05, 1.0, 11)])
    assert action_value(m, t, states, integrate_skeleton(m, m.x1, t).states) >= 0.0


def test_analytic_gradient_matches_fd(fig2):
    rng = np.random.default_rng(5)
    states = smooth_random_path(rng, fig2.x1, fig2.x2, 30)
    t = np.linspace(0, 5, 30)
    path = Trajectory(t, states)
    skel = integrate_skeleton(fig2, fig2.x1, t)
    exact = action_gradient(fig2, t, states, skel.states)
    fd = action_gradient_fd(fig2, path, skel, h=1e-6)
    assert np.linalg.norm(exact - fd) <= 1e-6 * np.linalg.norm(fd)
