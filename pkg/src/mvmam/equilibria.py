"""Fixed points of the effective drift ``x -> V(x) - F(x - anchor)`` and their stability."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validation import check_positive, check_state
from .exceptions import InvalidArgumentError

KINDS = ("stable", "saddle", "unstable", "non-hyperbolic")


@dataclass(frozen=True)
class FixedPoint:
    location: np.ndarray
    kind: str
    eigen_real_parts: np.ndarray
    residual_norm: float

    def to_dict(self):
        return {
            "location": [float(c) for c in self.location],
            "kind": self.kind,
            "eigen_real_parts": [float(c) for c in self.eigen_real_parts],
            "residual_norm": float(self.residual_norm),
        }


def eigen_real_parts(jacobian):
    J = np.asarray(jacobian, dtype=float)
    if J.ndim != 2 or J.shape[0] != J.shape[1]:
        raise InvalidArgumentError(f"jacobian must be square, got shape {J.shape}")
    if not np.all(np.isfinite(J)):
        raise InvalidArgumentError("jacobian has non-finite entries")
    if J.shape[0] == 1:
        return J[0].copy()
    if J.shape[0] == 2:
        tr = J[0, 0] + J[1, 1]
        det = J[0, 0] * J[1, 1] - J[0, 1] * J[1, 0]
        disc = tr * tr - 4.0 * det
        if disc < 0:
            return np.array([0.5 * tr, 0.5 * tr])
        root = np.sqrt(disc)
        return np.sort(np.array([0.5 * (tr - root), 0.5 * (tr + root)]))
    return np.sort(np.linalg.eigvals(J).real)


def classify(jacobian, tol=1e-8):
    """Hyperbolicity class of a Jacobian from the signs of its eigenvalue real parts."""
    re = eigen_real_parts(jacobian)
    if np.any(np.abs(re) <= tol):
        return "non-hyperbolic"
    if np.all(re < 0):
        return "stable"
    if np.all(re > 0):
        return "unstable"
    return "saddle"


def _accept(jac, x, g, step_tol):
    # a tiny residual is not enough: far out along a slow direction |b| can be
    # ~1e-13 with no root nearby, and the Newton step there is huge
    try:
        step = np.linalg.solve(jac(x), g)
    except np.linalg.LinAlgError:
        return False
    return bool(np.linalg.norm(step) <= step_tol * (1.0 + np.linalg.norm(x)))


def newton_root(func, jac, x0, tol=1e-12, max_iter=100, max_halvings=30, step_tol=1e-6):
    """Damped Newton iteration; returns the root or ``None`` on failure.

    A point counts as a root when ``|func| <= tol`` and the next Newton step
    is below ``step_tol * (1 + |x|)``.
    """
    x = np.array(x0, dtype=float)
    g = func(x)
    gn = np.linalg.norm(g)
    for _ in range(max_iter):
        if gn <= tol:
            return x if _accept(jac, x, g, step_tol) else None
        try:
            step = np.linalg.solve(jac(x), g)
        except np.linalg.LinAlgError:
            return None
        lam = 1.0
        for _ in range(max_halvings + 1):
            trial = x - lam * step
            gt = func(trial)
            gtn = np.linalg.norm(gt)
            if np.isfinite(gtn) and gtn < gn:
                break
            lam *= 0.5
        else:
            return None
        x, g, gn = trial, gt, gtn
    return x if gn <= tol and _accept(jac, x, g, step_tol) else None


def find_fixed_points(model, anchor=None, seeds=None, tol=1e-12, max_iter=100, eig_tol=1e-8, max_norm=1e3):
    """Multi-start damped Newton on the effective drift.

    Default seeds are a 5x5 grid on ``[-1.5, 1.5]^d`` plus the field's own
    listed fixed points. The anchor is always appended: it is a root whenever
    ``V(anchor) = F(0)``, and with a singular-looking kernel (small ``delta``)
    its Newton basin can be far smaller than any reasonable grid spacing.
    Seeds that fail to converge, and roots with norm above ``max_norm``,
    contribute nothing. Roots closer than
    ``10 * tol`` are merged; the result is sorted lexicographically so it does
    not depend on seed order.
    """
    anchor = model.x1 if anchor is None else check_state(anchor, model.dim, "anchor")
    tol = check_positive(tol, "tol")
    if seeds is None:
        seeds = list(seed_grid(model.dim)) + list(model.field_fixed_points())
    seeds = [check_state(s, model.dim, "seed") for s in seeds]
    if not seeds:
        raise InvalidArgumentError("seeds must be non-empty")
    seeds.append(anchor)

    def func(x):
        return model.drift(x, anchor)

    def jac(x):
        return model.jac_x(x, anchor)

    roots = []
    for s in seeds:
        r = newton_root(func, jac, s, tol, max_iter)
        if r is not None and np.linalg.norm(r) <= max_norm:
            roots.append(r)
    roots.sort(key=lambda r: tuple(r))
    unique = []
    for r in roots:
        if all(np.linalg.norm(r - u) >= 10 * tol for u in unique):
            unique.append(r)
    out = []
    for r in unique:
        J = jac(r)
        out.append(FixedPoint(r, classify(J, eig_tol), eigen_real_parts(J), float(np.linalg.norm(func(r)))))
    return out


def seed_grid(dim, lo=-1.5, hi=1.5, n=5):
    """Tensor grid of ``n`` points per axis on ``[lo, hi]^dim``."""
    axes = [np.linspace(lo, hi, n)] * dim
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def sign_change_cells(model, anchor=None, lo=-1.5, hi=1.5, h=0.01):
    """Brute-force root bracketing for 2-D models.

    Returns the centres of grid cells of side ``h`` on ``[lo, hi]^2`` whose
    corners show a sign change in both drift components, grouped into
    clusters of touching cells (one array of centres per cluster).
    """
    if model.dim != 2:
        raise InvalidArgumentError("sign_change_cells supports 2-D models only")
    anchor = model.x1 if anchor is None else np.asarray(anchor, dtype=float)
    n = int(round((hi - lo) / h))
    g = lo + h * np.arange(n + 1)
    U, W = np.meshgrid(g, g, indexing="ij")
    B = model.drift(np.stack([U, W], axis=-1), anchor)
    hits = np.ones((n, n), dtype=bool)
    for c in range(2):
        s = np.sign(B[..., c])
        corners = np.stack([s[:-1, :-1], s[1:, :-1], s[:-1, 1:], s[1:, 1:]])
        hits &= (corners.max(axis=0) >= 0) & (corners.min(axis=0) <= 0)
    idx = list(zip(*np.nonzero(hits)))
    # group touching cells (8-neighbourhood)
    remaining = set(idx)
    clusters = []
    while remaining:
        stack = [remaining.pop()]
        members = []
        while stack:
            i, j = stack.pop()
            members.append((i, j))
            for di in (-1, 0, 1):
                for dj in (-1, 0, 1):
                    nb = (i + di, j + dj)
                    if nb in remaining:
                        remaining.remove(nb)
                        stack.append(nb)
        centres = np.array([[lo + h * (i + 0.5), lo + h * (j + 0.5)] for i, j in sorted(members)])
        clusters.append(centres)
    clusters.sort(key=lambda c: tuple(c.mean(axis=0)))
    return clusters
