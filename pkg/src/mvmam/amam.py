"""Adaptive minimum action method.

Each iteration redistributes the nodes of the current path so that a monitor
``|b(phi, eta)|^r`` is equidistributed over uniform cells in a reparametrizing
variable ``alpha``, regenerates the skeleton on the new physical time grid and
takes one semi-implicit pseudo-time step of the Euler-Lagrange gradient flow.
The step is implicit in the second-difference term and explicit in the rest,
so each coordinate costs one tridiagonal solve.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field, replace

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.linalg import solve_banded

from ._validation import check_states
from .action import action_gradient, action_value, node_masses
from .exceptions import ConfigurationError, InvalidArgumentError, NumericalBlowupError, NumericalError
from .skeleton import Trajectory, euler_skeleton_states

logger = logging.getLogger(__name__)

INTERP_MODES = ("linear", "cubic")
MOMENTUM_MODES = ("nesterov", "none")


@dataclass(frozen=True)
class SolverConfig:
    """Discretization and iteration settings.

    ``dtau`` is the pseudo-time step. ``dtau=None`` selects the CFL-style
    heuristic ``dtau_scale * dalpha / max_i(w_i * |grad_x b|_inf + 1)``
    recomputed each iteration; it is safe but tiny (about 1e-4 for the
    builtin figure problems), so the default is a fixed step instead.
    ``stabilize`` adds the per-node stiffness from :func:`node_stiffness`
    to the implicit part; ``momentum="nesterov"`` accelerates the descent
    with restarts whenever the action would go up.
    """

    N: int = 200
    K: int = 5000
    T: float = 20.0
    dtau: float | None = 0.02
    r: float = 1.0
    theta: float = 0.01
    tol_residual: float = 1e-6
    tol_action: float = 1e-10
    interp: str = "linear"
    fd_step: float = 1e-6
    dtau_scale: float = 0.1
    equi_tol: float = 0.005
    remesh_trigger: float = 0.01
    max_remesh_sweeps: int = 40
    remesh_cooldown: int = 10
    max_halvings: int = 30
    momentum: str = "nesterov"
    stabilize: bool = True
    skew_weight: float = 1.0

    def __post_init__(self):
        checks = [
            (isinstance(self.N, (int, np.integer)) and self.N >= 4, "N must be an integer >= 4"),
            (isinstance(self.K, (int, np.integer)) and self.K >= 1, "K must be an integer >= 1"),
            (self.T > 0, "T must be > 0"),
            (self.dtau is None or self.dtau > 0, "dtau must be > 0"),
            (self.r > 0, "r must be > 0"),
            (0 < self.theta < 1, "theta must lie in (0, 1)"),
            (self.tol_residual > 0, "tol_residual must be > 0"),
            (self.tol_action > 0, "tol_action must be > 0"),
            (self.interp in INTERP_MODES, f"interp must be one of {INTERP_MODES}"),
            (self.fd_step > 0, "fd_step must be > 0"),
            (self.dtau_scale > 0, "dtau_scale must be > 0"),
            (self.equi_tol > 0, "equi_tol must be > 0"),
            (self.remesh_trigger >= self.equi_tol, "remesh_trigger must be >= equi_tol"),
            (self.max_remesh_sweeps >= 1, "max_remesh_sweeps must be >= 1"),
            (self.remesh_cooldown >= 1, "remesh_cooldown must be >= 1"),
            (self.skew_weight >= 0, "skew_weight must be >= 0"),
            (self.max_halvings >= 0, "max_halvings must be >= 0"),
            (self.momentum in MOMENTUM_MODES, f"momentum must be one of {MOMENTUM_MODES}"),
        ]
        for ok, msg in checks:
            if not ok:
                raise ConfigurationError(msg)

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class DiscretePath:
    """Path on the uniform ``alpha`` grid with its physical times."""

    alpha: np.ndarray
    times: np.ndarray
    states: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        states = np.asarray(self.states, dtype=float)
        if states.ndim == 1:
            states = states[:, None]
        alpha = np.asarray(self.alpha, dtype=float)
        n = times.shape[0]
        if alpha.shape != (n,) or states.shape[0] != n:
            raise InvalidArgumentError("alpha, times and states must have matching lengths")
        if times[0] != 0.0 or np.any(np.diff(times) <= 0):
            raise InvalidArgumentError("times must start at 0 and increase strictly")
        if not np.all(np.isfinite(states)):
            raise NumericalBlowupError("path states must be finite")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", states)

    @classmethod
    def from_states(cls, states, T):
        states = np.asarray(states, dtype=float)
        n = states.shape[0]
        return cls(uniform_alpha(n - 1), np.linspace(0.0, T, n), states)

    @property
    def N(self):
        return self.times.shape[0] - 1

    @property
    def T(self):
        return float(self.times[-1])

    def trajectory(self):
        return Trajectory(self.times, self.states)


@dataclass(frozen=True)
class MeshWeights:
    """Monitor values per node, normalizer and per-cell alpha measures."""

    w: np.ndarray
    C: float
    dalpha: np.ndarray

    @property
    def alpha(self):
        """Cumulative alpha nodes, pinned to exactly 0 and 1."""
        a = np.concatenate([[0.0], np.cumsum(self.dalpha)])
        a /= a[-1]
        a[-1] = 1.0
        return a


@dataclass
class SolveReport:
    path: DiscretePath
    action_value: float
    action_history: list
    residual_history: list
    iterations: int
    converged: bool
    equidistribution_history: list = field(default_factory=list)
    remesh_accepted: list = field(default_factory=list)
    dtau_history: list = field(default_factory=list)
    stop_reason: str = ""
    restarts: int = 0

    def summary(self):
        return {
            "action_value": self.action_value,
            "iterations": self.iterations,
            "converged": self.converged,
            "stop_reason": self.stop_reason,
            "final_residual": self.residual_history[-1] if self.residual_history else None,
        }


@dataclass
class QuasiPotentialTable:
    rows: list  # dicts with keys T, min_action, converged, iterations, error

    @property
    def running_min(self):
        out, best = [], math.inf
        for row in self.rows:
            val = row["min_action"]
            if val is not None and val < best:
                best = val
            out.append(best)
        return out

    @property
    def estimate(self):
        rm = self.running_min
        return rm[-1] if rm else math.inf


# -- small numerical kernels ----------------------------------------------------

def uniform_alpha(N):
    a = np.arange(N + 1, dtype=float) / N
    a[-1] = 1.0
    return a


def thomas_solve(lower, diag, upper, rhs):
    """Solve a tridiagonal system; ``lower[0]`` and ``upper[-1]`` are ignored.

    ``rhs`` may be ``(n,)`` or ``(n, m)`` for ``m`` right-hand sides sharing
    the matrix. Uses LAPACK's banded solver (``scipy.linalg.solve_banded``).
    """
    diag = np.asarray(diag, dtype=float)
    n = diag.shape[0]
    ab = np.zeros((3, n))
    ab[0, 1:] = np.asarray(upper, dtype=float)[:-1]
    ab[1] = diag
    ab[2, :-1] = np.asarray(lower, dtype=float)[1:]
    try:
        out = solve_banded((1, 1), ab, np.asarray(rhs, dtype=float), check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"singular tridiagonal system: {exc}") from None
    if not np.all(np.isfinite(out)):
        raise NumericalError("tridiagonal solve produced non-finite values")
    return out


def _skeleton_on(model, grid):
    return euler_skeleton_states(model, model.x1, grid)


# -- monitor and remeshing ------------------------------------------------------

def monitor_weights(model, t, phi, eta, r=1.0, theta=0.01):
    """Array-level core of :func:`monitor`."""
    raw_nodes = np.linalg.norm(model.drift(phi, eta), axis=1) ** r
    mid_phi = 0.5 * (phi[1:] + phi[:-1])
    mid_eta = 0.5 * (eta[1:] + eta[:-1])
    raw_mid = np.linalg.norm(model.drift(mid_phi, mid_eta), axis=1) ** r
    dt = np.diff(t)
    top = max(raw_nodes.max(), raw_mid.max())
    if not np.isfinite(top):
        raise NumericalBlowupError("non-finite monitor value")
    if top == 0.0:
        # b vanishes on the whole path: the floor dominates and weights are uniform
        T = t[-1] - t[0]
        return MeshWeights(np.full(t.shape[0], 1.0 / T), float(T), dt / T)
    floor = theta * top
    mid = np.maximum(raw_mid, floor)
    C = float(np.sum(dt * mid))
    return MeshWeights(np.maximum(raw_nodes, floor) / C, C, dt * mid / C)


def monitor(model, path, skeleton, r=1.0, theta=0.01) -> MeshWeights:
    """Floored monitor ``|b(phi_i, eta_i)|^r`` with cell measures from segment midpoints.

    ``C`` sums ``dt_i`` times the floored midpoint value, and
    ``dalpha_i = dt_i * floored_mid_i / C`` so the cell measures sum to one.
    """
    times = path.times if isinstance(path, DiscretePath) else path.grid
    if not np.array_equal(times, skeleton.grid):
        raise InvalidArgumentError("path and skeleton must share the same time grid")
    return monitor_weights(model, times, path.states, skeleton.states, r, theta)


def remesh(alpha_old, values, alpha_new, mode="linear"):
    """Interpolate ``values`` given at ``alpha_old`` onto ``alpha_new``.

    The first and last outputs are copied verbatim from the inputs.
    """
    alpha_old = np.asarray(alpha_old, dtype=float)
    alpha_new = np.asarray(alpha_new, dtype=float)
    vals = np.asarray(values, dtype=float)
    if alpha_old.ndim != 1 or alpha_old.shape[0] != vals.shape[0]:
        raise InvalidArgumentError("alpha_old and values must have matching lengths")
    if np.any(np.diff(alpha_old) <= 0):
        raise InvalidArgumentError("alpha_old must be strictly increasing")
    if mode not in INTERP_MODES:
        raise InvalidArgumentError(f"unknown interpolation mode {mode!r}")
    squeeze = vals.ndim == 1
    v2 = vals[:, None] if squeeze else vals
    if mode == "linear":
        out = np.column_stack([np.interp(alpha_new, alpha_old, v2[:, k]) for k in range(v2.shape[1])])
    else:
        out = CubicSpline(alpha_old, v2, axis=0)(alpha_new)
    out[0] = v2[0]
    out[-1] = v2[-1]
    return out[:, 0] if squeeze else out


def equidistribution_deviation(weights):
    """``max_i |N * dalpha_i - 1|`` for the given cell measures."""
    n = weights.dalpha.shape[0]
    return float(np.max(np.abs(n * weights.dalpha - 1.0)))


def remesh_path(model, path, config, eta=None):
    """Steps 1-4 of one iteration: monitor, alpha cells, interpolation, skeleton.

    Nothing moves while the floored monitor mass per cell stays within
    ``remesh_trigger`` of ``1/N``. Otherwise sweeps repeat until it is within
    ``equi_tol`` or ``max_remesh_sweeps`` is reached. Returns the path, its
    skeleton states, the final deviation and the number of sweeps.
    """
    alpha_u = path.alpha
    t, phi = path.times, path.states
    if eta is None:
        eta = _skeleton_on(model, t)
    dev = equidistribution_deviation(monitor_weights(model, t, phi, eta, config.r, config.theta))
    if dev < config.remesh_trigger:
        return path, eta, dev, 0
    sweeps = 0
    for _ in range(config.max_remesh_sweeps):
        if dev < config.equi_tol:
            break
        sweeps += 1
        wts = monitor_weights(model, t, phi, eta, config.r, config.theta)
        a_old = wts.alpha
        t_new = remesh(a_old, t, alpha_u, config.interp)
        phi_new = remesh(a_old, phi, alpha_u, config.interp)
        t_new[0] = 0.0
        t_new[-1] = path.T
        if np.any(np.diff(t_new) <= 0):
            break
        t, phi = t_new, phi_new
        eta = _skeleton_on(model, t)
        dev = equidistribution_deviation(monitor_weights(model, t, phi, eta, config.r, config.theta))
    phi = phi.copy()
    phi[0] = path.states[0]
    phi[-1] = path.states[-1]
    return DiscretePath(alpha_u, t, phi), eta, dev, sweeps


# -- Euler-Lagrange residual and the semi-implicit update ------------------------

def el_residual_arrays(model, t, phi, eta):
    return -action_gradient(model, t, phi, eta) / node_masses(t)[:, None]


def el_residual(model, path, skeleton):
    """Discrete Euler-Lagrange residual per node (endpoint rows zero).

    This is ``-(dI/dphi_i) / m_i`` with ``I`` the midpoint action and ``m_i``
    the dual-cell length around node ``i``. It is a second-order consistent
    discretization of
    ``phi'' - grad_x b phi' + (grad_x b)^T (phi' - b) - grad_y b b(eta, eta)``.
    """
    times = path.times if isinstance(path, DiscretePath) else path.grid
    if not np.array_equal(times, skeleton.grid):
        raise InvalidArgumentError("path and skeleton must share the same time grid")
    check_states(path.states, model.dim, "path states")
    return el_residual_arrays(model, times, path.states, skeleton.states)


def default_dtau(model, t, phi, eta, config):
    wts = monitor_weights(model, t, phi, eta, config.r, config.theta)
    J = model.jac_x(phi, eta)
    jnorm = np.max(np.sum(np.abs(J), axis=2), axis=1)
    return config.dtau_scale * (1.0 / config.N) / float(np.max(wts.w * jnorm + 1.0))


def node_stiffness(model, phi, eta, skew_weight=1.0):
    """Per-node stabilizer ``|J|_2^2 + skew_weight * |J - J^T|_2^2`` with ``J = grad_x b``.

    The first term bounds the zeroth-order part of the linearized residual,
    the second its first-order (rotational) part.
    """
    J = model.jac_x(phi, eta)
    out = np.linalg.norm(J, ord=2, axis=(1, 2)) ** 2
    if skew_weight > 0:
        out = out + skew_weight * np.linalg.norm(J - np.swapaxes(J, 1, 2), ord=2, axis=(1, 2)) ** 2
    return out


def semi_implicit_update(model, t, phi, eta, dtau, residual=None, stiffness=None):
    """Solve ``(I - dtau * L + dtau * S) delta = dtau * residual``; return ``phi + delta``.

    ``L`` is the second difference on the time grid with homogeneous boundary
    values and ``S`` an optional diagonal of per-node stiffness values; the
    matrix is shared by all coordinates.
    """
    if residual is None:
        residual = el_residual_arrays(model, t, phi, eta)
    dt = np.diff(t)
    m = node_masses(t)[1:-1]
    left = 1.0 / dt[:-1]
    right = 1.0 / dt[1:]
    diag = 1.0 + dtau * (left + right) / m
    if stiffness is not None:
        diag = diag + dtau * stiffness[1:-1]
    lower = -dtau * left / m
    upper = -dtau * right / m
    delta = thomas_solve(lower, diag, upper, dtau * residual[1:-1])
    out = phi.copy()
    out[1:-1] += delta
    if not np.all(np.isfinite(out)):
        raise NumericalBlowupError("non-finite path after update")
    return out


def _update(model, path, eta, config, dtau=None):
    t, phi = path.times, path.states
    res = el_residual_arrays(model, t, phi, eta)
    nominal = dtau is None
    if dtau is None:
        dtau = config.dtau if config.dtau is not None else default_dtau(model, t, phi, eta, config)
    stiff = node_stiffness(model, phi, eta, config.skew_weight) if config.stabilize else None
    new = semi_implicit_update(model, t, phi, eta, dtau, res, stiff)
    new[0] = model.x1
    new[-1] = model.x2
    info = {
        "dtau": dtau,
        "nominal": nominal,
        "residual": float(np.max(np.abs(res))) if res.size else 0.0,
        "displacement": float(np.max(np.abs(new - phi))),
    }
    return DiscretePath(path.alpha, t, new), info


def amam_step(model, path, config, dtau=None):
    """One full iteration: remesh, regenerate the skeleton, semi-implicit update.

    Returns ``(new_path, skeleton_states, info)``; ``info`` carries the step
    size, the pre-step residual sup-norm, the equidistribution deviation after
    remeshing and the number of remesh sweeps performed.
    """
    path, eta, dev, sweeps = remesh_path(model, path, config)
    new, info = _update(model, path, eta, config, dtau)
    info.update(equidistribution=dev, sweeps=sweeps)
    return new, eta, info


# -- driver ---------------------------------------------------------------------

def _check_initial(model, config, initial_path):
    if not isinstance(initial_path, DiscretePath):
        raise InvalidArgumentError("initial_path must be a DiscretePath")
    if initial_path.N != config.N:
        raise InvalidArgumentError(f"initial path has {initial_path.N + 1} nodes, expected N+1 = {config.N + 1}")
    if initial_path.states.shape[1] != model.dim:
        raise InvalidArgumentError(f"initial path must have dimension {model.dim}")
    if not (np.array_equal(initial_path.states[0], model.x1) and np.array_equal(initial_path.states[-1], model.x2)):
        raise InvalidArgumentError("initial path endpoints must equal (x1, x2)")
    times = initial_path.times
    if times[-1] != config.T:
        times = times * (config.T / times[-1])
        times[-1] = config.T
    return DiscretePath(uniform_alpha(config.N), times, initial_path.states)


def _slack(value):
    return 1e-13 * max(1.0, abs(value))


def _line_search(model, base, eta, config, I_prev):
    dtau = None
    for _ in range(config.max_halvings + 1):
        cand, info = _update(model, base, eta, config, dtau)
        I_new = action_value(model, cand.times, cand.states, eta)
        if I_new <= I_prev + _slack(I_prev):
            return cand, info, I_new
        dtau = info["dtau"] * 0.5
    return None


def _descend(model, base, eta, velocity, beta, config, I_prev):
    """One accepted update from ``base`` or ``None``.

    Tries the momentum lookahead first (when ``beta > 0``), then the plain
    update with step halving. Returns ``(cand, info, I_new, restarted)``.
    """
    restarted = False
    if beta > 0.0:
        ahead = DiscretePath(base.alpha, base.times, base.states + beta * velocity)
        cand, info = _update(model, ahead, eta, config)
        I_new = action_value(model, cand.times, cand.states, eta)
        if I_new <= I_prev + _slack(I_prev):
            return cand, info, I_new, False
        restarted = True
    found = _line_search(model, base, eta, config, I_prev)
    if found is None:
        return None
    return (*found, restarted)


def solve_mlp(model, config: SolverConfig, initial_path: DiscretePath) -> SolveReport:
    """Minimize the discrete action from ``initial_path`` with the adaptive MAM.

    Every accepted iteration lowers (or keeps) the discrete action. The mesh
    is redistributed when the monitor mass per cell drifts more than
    ``remesh_trigger`` from ``1/N``; a remeshed update that cannot be made to
    descend is dropped in favour of an update on the current mesh, and
    remeshing then pauses for ``remesh_cooldown`` iterations (doubling on
    each consecutive failure). With ``momentum="nesterov"`` each update is
    first tried from an extrapolated path; if that raises the action the
    momentum is reset and the plain update is used, halving the pseudo-time
    step until the action does not increase. Stops when
    ``max displacement / dtau`` falls below ``tol_residual`` or the action
    changes by less than ``tol_action``; running out of iterations is
    reported through ``converged=False``.
    """
    if config.fd_step != model.fd_step:
        model = replace(model, fd_step=config.fd_step)
    path = _check_initial(model, config, initial_path)
    eta = _skeleton_on(model, path.times)
    I_prev = action_value(model, path.times, path.states, eta)

    report = SolveReport(path, I_prev, [], [], 0, False)
    velocity = np.zeros_like(path.states)
    streak = 0
    wait, cooldown = 0, config.remesh_cooldown
    for k in range(1, config.K + 1):
        beta = streak / (streak + 3.0) if config.momentum == "nesterov" else 0.0
        accepted, moved, dev = None, False, None
        try:
            if wait > 0:
                wait -= 1
            else:
                remeshed, eta_r, dev, sweeps = remesh_path(model, path, config, eta)
                if sweeps > 0:
                    accepted = _descend(model, remeshed, eta_r, velocity, beta, config, I_prev)
                    if accepted is not None:
                        moved, base, eta = True, remeshed, eta_r
                        cooldown = config.remesh_cooldown
                    else:
                        wait, cooldown = cooldown, min(2 * cooldown, config.K)
            if accepted is None:
                accepted = _descend(model, path, eta, velocity, beta, config, I_prev)
                base = path
        except (NumericalError, InvalidArgumentError) as exc:
            raise type(exc)(f"iteration {k}: {exc}") from exc
        if accepted is None:
            # no descent direction left at floating-point resolution
            report.stop_reason = "stalled"
            break
        cand, info, I_new, restarted = accepted
        if restarted:
            streak = 0
            report.restarts += 1
        velocity = cand.states - base.states
        streak += 1
        report.action_history.append(I_new)
        report.residual_history.append(info["residual"])
        report.dtau_history.append(info["dtau"])
        report.remesh_accepted.append(moved)
        report.equidistribution_history.append(dev if moved else None)
        report.iterations = k
        change = abs(I_new - I_prev)
        rate = info["displacement"] / info["dtau"]
        path, I_prev = cand, I_new
        if rate < config.tol_residual:
            report.converged, report.stop_reason = True, "displacement"
            break
        if change < config.tol_action and info["nominal"]:
            report.converged, report.stop_reason = True, "action-change"
            break
        if k % 500 == 0:
            logger.info("iteration %d: action %.12g residual %.3e dtau %.3e", k, I_new, info["residual"], info["dtau"])
    else:
        report.stop_reason = "max-iterations"

    eta = _skeleton_on(model, path.times)
    report.path = path
    report.action_value = action_value(model, path.times, path.states, eta)
    return report


def final_residual(model, report):
    """Sup-norm of the EL residual of the reported path on its own grid."""
    p = report.path
    eta = _skeleton_on(model, p.times)
    return float(np.max(np.abs(el_residual_arrays(model, p.times, p.states, eta))))


def rescale_path(path, T):
    times = path.times * (T / path.T)
    times[-1] = T
    return DiscretePath(path.alpha, times, path.states)


def _scan_row(model, config, T, start):
    cfg = replace(config, T=float(T))
    try:
        rep = solve_mlp(model, cfg, rescale_path(start, T))
    except (NumericalError, InvalidArgumentError) as exc:
        return {"T": float(T), "min_action": None, "converged": False, "iterations": 0, "error": str(exc)}, None
    row = {"T": float(T), "min_action": rep.action_value, "converged": rep.converged,
           "iterations": rep.iterations, "error": None}
    return row, rep


def quasi_potential_scan(model, base_config, T_list, initial_path, warm_start=True, jobs=1):
    """Minimal action for each horizon in ``T_list`` and their running minimum.

    With ``warm_start`` each run starts from the previous converged path
    rescaled to the new horizon; otherwise every row starts from
    ``initial_path`` and rows may run in ``jobs`` worker processes.
    """
    T_list = [float(T) for T in T_list]
    if not T_list or any(not T > 0 for T in T_list):
        raise InvalidArgumentError("T_list must be a non-empty list of positive horizons")
    rows = []
    if warm_start:
        start = initial_path
        for T in T_list:
            row, rep = _scan_row(model, base_config, T, start)
            rows.append(row)
            if rep is not None:
                start = rep.path
    elif jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_scan_row, model, base_config, T, initial_path) for T in T_list]
            rows = [f.result()[0] for f in futures]
    else:
        rows = [_scan_row(model, base_config, T, initial_path)[0] for T in T_list]
    return QuasiPotentialTable(rows)


# -- initial paths -----------------------------------------------------------------

def build_initial_path(kind, model, N, T):
    """Initial guess on ``N + 1`` nodes with uniform times on ``[0, T]``.

    ``kind`` is ``"parabola"`` (2-D only: first coordinate linear from x1 to
    x2, second ``-0.5 x^2 + 0.5``), ``"line"``, or a CSV file path holding
    ``N + 1`` rows of ``d`` columns.
    """
    x1, x2 = model.x1, model.x2
    s = np.linspace(0.0, 1.0, N + 1)
    if kind == "parabola":
        if model.dim != 2:
            raise ConfigurationError(f"initial path 'parabola' needs a 2-D model, got dim = {model.dim}")
        x = x1[0] + s * (x2[0] - x1[0])
        states = np.column_stack([x, -0.5 * x**2 + 0.5])
    elif kind == "line":
        states = x1[None, :] + s[:, None] * (x2 - x1)[None, :]
    else:
        try:
            states = np.loadtxt(kind, delimiter=",", ndmin=2)
        except OSError as exc:
            raise ConfigurationError(f"cannot read initial path file {kind!r}: {exc}") from exc
        except ValueError as exc:
            raise ConfigurationError(f"malformed initial path file {kind!r}: {exc}") from exc
        if states.shape != (N + 1, model.dim):
            raise ConfigurationError(
                f"initial path file {kind!r} has shape {states.shape}, expected N+1 = {N + 1} rows of {model.dim} columns"
            )
    states = np.array(states, dtype=float)
    states[0] = x1
    states[-1] = x2
    return DiscretePath(uniform_alpha(N), np.linspace(0.0, T, N + 1), states)


def compare_paths(path_a, path_b, tol=1e-2):
    """Pointwise sup distance of two paths aligned on the uniform alpha grid.

    Returns ``(distance, distinct)`` where ``distinct`` flags separate local
    minimizers (distance at or above ``tol``).
    """
    if path_a.states.shape != path_b.states.shape:
        raise InvalidArgumentError("paths must have the same shape")
    dist = float(np.max(np.linalg.norm(path_a.states - path_b.states, axis=1)))
    return dist, dist >= tol
