"""Monte Carlo validation: the interacting particle system and single-particle SDEs.

Noise comes from one master seed. Particle (or path) ``i`` draws from its own
Philox stream keyed by ``SeedSequence(seed, spawn_key=(i,))``, so neither the
ensemble size nor the chunking of draws changes any particle's increments.
Gaussians come from numpy's ``Generator.standard_normal`` (ziggurat).
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from ._validation import BLOWUP_NORM, check_positive, check_state
from .exceptions import ConfigurationError, InvalidArgumentError, NumericalBlowupError
from .skeleton import Trajectory, uniform_grid

CHUNK_STEPS = 256
ROW_BLOCK = 256


@dataclass(frozen=True)
class SimConfig:
    n_particles: int = 1
    epsilon: float = 0.0
    dt: float = 1e-3
    t_end: float = 1.0
    seed: int = 0
    n_paths: int = 1

    def __post_init__(self):
        if not self.dt > 0:
            raise ConfigurationError("dt must be > 0")
        if not self.t_end >= self.dt:
            raise ConfigurationError("t_end must be >= dt")
        if self.n_particles < 1:
            raise ConfigurationError("n_particles must be >= 1")
        if self.n_paths < 1:
            raise ConfigurationError("n_paths must be >= 1")
        if self.epsilon < 0:
            raise ConfigurationError("epsilon must be >= 0")
        if not 0 <= self.seed < 2**64:
            raise ConfigurationError("seed must be an unsigned 64-bit integer")

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class EnsembleState:
    time: float
    positions: np.ndarray


def substream(seed, index):
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(int(index),))))


class _NoiseSource:
    """Per-member Gaussian increments, drawn in chunks of steps."""

    def __init__(self, seed, indices, dim):
        self.gens = [substream(seed, i) for i in indices]
        self.dim = dim
        self.buf = None
        self.pos = CHUNK_STEPS

    def next(self):
        if self.pos == CHUNK_STEPS:
            self.buf = np.stack([g.standard_normal((CHUNK_STEPS, self.dim)) for g in self.gens], axis=1)
            self.pos = 0
        out = self.buf[self.pos]
        self.pos += 1
        return out


def mean_field(model, X):
    """``(1/N) sum_j F(X_i - X_j)`` for every particle, summed in index order."""
    n = X.shape[0]
    out = np.empty_like(X)
    for start in range(0, n, ROW_BLOCK):
        block = X[start:start + ROW_BLOCK]
        out[start:start + ROW_BLOCK] = model.F(block[:, None, :] - X[None, :, :]).sum(axis=1) / n
    return out


def _check_finite(X, step):
    if not np.all(np.isfinite(X)):
        raise NumericalBlowupError(f"non-finite particle state at step {step}", step=step)
    if np.max(np.linalg.norm(X, axis=-1)) > BLOWUP_NORM:
        raise NumericalBlowupError(f"particle state norm exceeded {BLOWUP_NORM:g} at step {step}", step=step)


def simulate_particles(model, cfg: SimConfig, record_stride=1, substreams=None):
    """Euler-Maruyama for the N-particle system, all particles starting at ``x1``.

    Drift of particle ``i`` is ``V(X_i) - (1/N) sum_j F(X_i - X_j)``; noise is
    ``sqrt(epsilon) dB_i``. Snapshots are kept every ``record_stride`` steps
    and at the final time. ``substreams`` overrides the per-particle stream
    indices (default ``0..N-1``).
    """
    if record_stride < 1:
        raise InvalidArgumentError("record_stride must be >= 1")
    n = cfg.n_particles
    indices = list(range(n)) if substreams is None else [int(i) for i in substreams]
    if len(indices) != n:
        raise InvalidArgumentError(f"need {n} substream indices, got {len(indices)}")
    grid = uniform_grid(cfg.t_end, cfg.dt)
    X = np.tile(model.x1, (n, 1))
    noise = _NoiseSource(cfg.seed, indices, model.dim)
    sigma = np.sqrt(cfg.epsilon)
    snaps = [EnsembleState(0.0, X.copy())]
    steps = grid.shape[0] - 1
    for k in range(steps):
        h = grid[k + 1] - grid[k]
        xi = noise.next()
        X = X + h * (model.V(X) - mean_field(model, X)) + sigma * np.sqrt(h) * xi
        _check_finite(X, k + 1)
        if (k + 1) % record_stride == 0 or k + 1 == steps:
            snaps.append(EnsembleState(float(grid[k + 1]), X.copy()))
    return snaps


def simulate_corresponding_sde(model, skeleton, cfg: SimConfig):
    """``n_paths`` Euler-Maruyama paths of ``dZ = (V(Z) - F(Z - eta(t))) dt + sqrt(eps) dB``.

    ``skeleton`` must live on the simulation grid ``uniform_grid(t_end, dt)``.
    """
    grid = uniform_grid(cfg.t_end, cfg.dt)
    if skeleton.grid.shape != grid.shape or not np.allclose(skeleton.grid, grid, rtol=0, atol=1e-12 * cfg.t_end):
        raise InvalidArgumentError("skeleton grid must match the simulation grid uniform_grid(t_end, dt)")
    if skeleton.dim != model.dim:
        raise InvalidArgumentError(f"skeleton must have dimension {model.dim}")
    eta = skeleton.states
    Z = np.tile(model.x1, (cfg.n_paths, 1))
    out = np.empty((grid.shape[0], cfg.n_paths, model.dim))
    out[0] = Z
    noise = _NoiseSource(cfg.seed, range(cfg.n_paths), model.dim)
    sigma = np.sqrt(cfg.epsilon)
    for k in range(grid.shape[0] - 1):
        h = grid[k + 1] - grid[k]
        Z = Z + h * model.drift(Z, eta[k]) + sigma * np.sqrt(h) * noise.next()
        _check_finite(Z, k + 1)
        out[k + 1] = Z
    return [Trajectory(grid, out[:, p, :]) for p in range(cfg.n_paths)]


def empirical_transition_stats(trajectories, target, radius):
    """Fraction of trajectories entering the open ball ``B(target, radius)`` and
    the mean first-hit time among those that do (``None`` if none do)."""
    trajectories = list(trajectories)
    if not trajectories:
        raise InvalidArgumentError("trajectories must be non-empty")
    radius = check_positive(radius, "radius")
    target = check_state(target, trajectories[0].dim, "target")
    hit_times = []
    for tr in trajectories:
        inside = np.linalg.norm(tr.states - target, axis=1) < radius
        if inside.any():
            hit_times.append(float(tr.grid[np.argmax(inside)]))
    frac = len(hit_times) / len(trajectories)
    return frac, (float(np.mean(hit_times)) if hit_times else None)
