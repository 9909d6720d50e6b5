"""Discrete action functional.

For a path ``phi`` and skeleton ``eta`` sharing a time grid, segment ``i``
contributes ``0.5 * dt_i * |v_i - b(mid phi_i, mid eta_i)|^2`` where ``v_i`` is
the segment velocity and ``mid`` denotes the segment midpoint.
"""

import numpy as np

from ._validation import check_positive, check_same_grid
from .exceptions import InvalidArgumentError


def _check_pair(model, path, skeleton):
    check_same_grid(path.grid, skeleton.grid)
    if path.dim != model.dim or skeleton.dim != model.dim:
        raise InvalidArgumentError(f"path and skeleton must have dimension {model.dim}")


def segment_residuals(model, t, phi, eta):
    """Return ``(dt, r, mid_phi, mid_eta)`` with ``r_i = v_i - b(mid_phi_i, mid_eta_i)``."""
    dt = np.diff(t)
    v = np.diff(phi, axis=0) / dt[:, None]
    mid_phi = 0.5 * (phi[1:] + phi[:-1])
    mid_eta = 0.5 * (eta[1:] + eta[:-1])
    return dt, v - model.drift(mid_phi, mid_eta), mid_phi, mid_eta


def action_value(model, t, phi, eta):
    dt, r, _, _ = segment_residuals(model, t, phi, eta)
    return float(np.sum(0.5 * dt * np.sum(r * r, axis=1)))


def action_gradient(model, t, phi, eta):
    """Exact gradient of the discrete action in the node states; endpoint rows zero."""
    dt, r, mid_phi, mid_eta = segment_residuals(model, t, phi, eta)
    J = model.jac_x(mid_phi, mid_eta)
    # dt_i * J_i^T r_i
    Jtr = dt[:, None] * np.einsum("nji,nj->ni", J, r)
    grad = np.zeros_like(phi)
    grad[1:-1] = r[:-1] - r[1:] - 0.5 * (Jtr[:-1] + Jtr[1:])
    return grad


def node_masses(t):
    """Dual-cell lengths ``(dt_{i-1} + dt_i) / 2``; half cells at the ends."""
    dt = np.diff(t)
    m = np.empty(t.shape[0])
    m[1:-1] = 0.5 * (dt[:-1] + dt[1:])
    m[0] = 0.5 * dt[0]
    m[-1] = 0.5 * dt[-1]
    return m


def action(model, path, skeleton) -> float:
    """Midpoint-rule action of ``path`` relative to ``skeleton``; always >= 0."""
    _check_pair(model, path, skeleton)
    return action_value(model, path.grid, path.states, skeleton.states)


def action_gradient_fd(model, path, skeleton, h=1e-6):
    """Central finite-difference gradient of :func:`action` in the interior node states.

    Endpoint rows are zero since the endpoints are pinned.
    """
    _check_pair(model, path, skeleton)
    h = check_positive(h, "h")
    t, eta = path.grid, skeleton.states
    phi = path.states.copy()
    grad = np.zeros_like(phi)
    for i in range(1, phi.shape[0] - 1):
        for k in range(phi.shape[1]):
            orig = phi[i, k]
            phi[i, k] = orig + h
            up = action_value(model, t, phi, eta)
            phi[i, k] = orig - h
            down = action_value(model, t, phi, eta)
            phi[i, k] = orig
            grad[i, k] = (up - down) / (2.0 * h)
    return grad
