"""Skeleton and zero-action flow integration."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validation import (
    BLOWUP_NORM,
    check_positive,
    check_state,
    check_time_grid,
)
from .exceptions import InvalidArgumentError, NumericalBlowupError


@dataclass(frozen=True)
class Trajectory:
    """A time grid (starting at 0, strictly increasing) and one state per node."""

    grid: np.ndarray
    states: np.ndarray

    def __post_init__(self):
        grid = check_time_grid(self.grid)
        states = np.asarray(self.states, dtype=float)
        if states.ndim == 1:
            states = states[:, None]
        if states.shape[0] != grid.shape[0]:
            raise InvalidArgumentError(
                f"{states.shape[0]} states for a grid of {grid.shape[0]} nodes"
            )
        if not np.all(np.isfinite(states)):
            raise InvalidArgumentError("trajectory states must be finite")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "states", states)

    def __len__(self):
        return self.grid.shape[0]

    @property
    def dim(self):
        return self.states.shape[1]

    @property
    def T(self):
        return float(self.grid[-1])


# the action is evaluated on paths with the same layout
PathWithTimes = Trajectory


@dataclass(frozen=True)
class FlowFailure:
    """Placeholder for a seed whose flow integration failed."""

    seed_index: int
    error: Exception


def _guard(state, step):
    if not np.all(np.isfinite(state)):
        raise NumericalBlowupError(f"non-finite state at step {step}", step=step)
    if np.linalg.norm(state) > BLOWUP_NORM:
        raise NumericalBlowupError(
            f"state norm exceeded {BLOWUP_NORM:g} at step {step}", step=step
        )


def euler_skeleton_states(model, x0, grid):
    """Explicit Euler for ``eta' = V(eta) - F(0)`` on ``grid``; no validation."""
    shift = model.F(np.zeros(model.dim))
    out = np.empty((grid.shape[0], model.dim))
    out[0] = x0
    if np.all(model.V(out[0]) - shift == 0.0):
        # every Euler increment is exactly zero
        out[1:] = out[0]
        return out
    dts = np.diff(grid)
    eta = out[0]
    for k, dt in enumerate(dts):
        rate = model.V(eta) - shift
        if not np.all(np.isfinite(rate)):
            raise NumericalBlowupError(f"non-finite skeleton drift at step {k}", step=k)
        eta = eta + dt * rate
        _guard(eta, k + 1)
        out[k + 1] = eta
    return out


def integrate_skeleton(model, x0, grid) -> Trajectory:
    """Integrate the skeleton equation ``eta' = V(eta) - F(0)`` by explicit Euler.

    The scheme runs on exactly the given (possibly nonuniform) grid and
    returns ``x0`` verbatim as the first state.
    """
    x0 = check_state(x0, model.dim, "x0")
    grid = check_time_grid(grid)
    return Trajectory(grid, euler_skeleton_states(model, x0, grid))


def uniform_grid(t_end, dt):
    """Uniform nodes of step ``dt`` on ``[0, t_end]``, last step shortened to land on ``t_end``."""
    t_end = check_positive(t_end, "t_end")
    dt = check_positive(dt, "dt")
    n = max(int(np.ceil(t_end / dt - 1e-9)), 1)
    grid = np.arange(n + 1, dtype=float) * dt
    grid[-1] = t_end
    return grid


def integrate_flow(model, anchor, x0, t_end, dt) -> Trajectory:
    """Classical RK4 integration of ``xi' = V(xi) - F(xi - anchor)``."""
    anchor = check_state(anchor, model.dim, "anchor")
    x = check_state(x0, model.dim, "x0")
    grid = uniform_grid(t_end, dt)

    def rhs(z):
        return model.drift(z, anchor)

    out = np.empty((grid.shape[0], model.dim))
    out[0] = x
    for k in range(grid.shape[0] - 1):
        h = grid[k + 1] - grid[k]
        k1 = rhs(x)
        k2 = rhs(x + 0.5 * h * k1)
        k3 = rhs(x + 0.5 * h * k2)
        k4 = rhs(x + h * k3)
        x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        _guard(x, k + 1)
        out[k + 1] = x
    return Trajectory(grid, out)


def equipotential_field(model, anchor, seeds, t_end, dt):
    """One flow trajectory per seed, in seed order.

    A seed whose integration blows up yields a :class:`FlowFailure` in its
    slot; the remaining seeds are still integrated.
    """
    seeds = list(seeds)
    if not seeds:
        raise InvalidArgumentError("seeds must be non-empty")
    out = []
    for i, seed in enumerate(seeds):
        try:
            out.append(integrate_flow(model, anchor, seed, t_end, dt))
        except NumericalBlowupError as exc:
            out.append(FlowFailure(i, exc))
    return out
