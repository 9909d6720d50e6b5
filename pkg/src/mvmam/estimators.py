"""scikit-learn style wrappers.

The "data" here is a :class:`~mvmam.model.ModelSpec` rather than a sample
matrix, so these estimators borrow ``get_params``/``set_params``/``clone``
from :class:`sklearn.base.BaseEstimator` but are not meant for pipelines.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError
from sklearn.utils.validation import check_is_fitted

from .amam import DiscretePath, SolverConfig, build_initial_path, final_residual, quasi_potential_scan, solve_mlp
from .equilibria import find_fixed_points
from .exceptions import InvalidArgumentError
from .model import ModelSpec


def _check_model(model):
    if not isinstance(model, ModelSpec):
        raise InvalidArgumentError(f"expected a ModelSpec, got {type(model).__name__}")
    return model


class MinimumActionPath(BaseEstimator):
    """Adaptive minimum action method as an estimator.

    ``fit(model)`` minimizes the action from ``initial_path`` (a kind string,
    a CSV path or a :class:`DiscretePath`) and sets ``path_``, ``action_``,
    ``converged_``, ``residual_`` and ``report_``.
    """

    def __init__(self, N=200, K=5000, T=20.0, dtau=0.02, initial_path="parabola", interp="linear",
                 momentum="nesterov", r=1.0, theta=0.01, tol_residual=1e-6, tol_action=1e-10,
                 stabilize=True, skew_weight=1.0):
        self.N = N
        self.K = K
        self.T = T
        self.dtau = dtau
        self.initial_path = initial_path
        self.interp = interp
        self.momentum = momentum
        self.r = r
        self.theta = theta
        self.tol_residual = tol_residual
        self.tol_action = tol_action
        self.stabilize = stabilize
        self.skew_weight = skew_weight

    def solver_config(self):
        return SolverConfig(N=self.N, K=self.K, T=self.T, dtau=self.dtau, interp=self.interp,
                            momentum=self.momentum, r=self.r, theta=self.theta,
                            tol_residual=self.tol_residual, tol_action=self.tol_action,
                            stabilize=self.stabilize, skew_weight=self.skew_weight)

    def _start(self, model):
        if isinstance(self.initial_path, DiscretePath):
            return self.initial_path
        return build_initial_path(self.initial_path, model, self.N, self.T)

    def fit(self, model, y=None):
        model = _check_model(model)
        cfg = self.solver_config()
        rep = solve_mlp(model, cfg, self._start(model))
        self.model_ = model
        self.report_ = rep
        self.path_ = rep.path
        self.action_ = rep.action_value
        self.converged_ = rep.converged
        self.n_iter_ = rep.iterations
        self.residual_ = final_residual(model, rep)
        return self

    def transform(self, t=None):
        """Path states, or the path interpolated at physical times ``t``."""
        check_is_fitted(self, "path_")
        if t is None:
            return self.path_.states.copy()
        t = np.asarray(t, dtype=float)
        p = self.path_
        return np.column_stack([np.interp(t, p.times, p.states[:, j]) for j in range(p.states.shape[1])])

    def score(self, model=None, y=None):
        """Negative action, so larger is better."""
        check_is_fitted(self, "action_")
        return -self.action_


class QuasiPotentialEstimator(BaseEstimator):
    """Running minimum of the optimal action over a list of horizons."""

    def __init__(self, T_list=(5.0, 10.0, 20.0, 40.0), N=200, K=5000, initial_path="line",
                 warm_start=True, momentum="nesterov", jobs=1):
        self.T_list = T_list
        self.N = N
        self.K = K
        self.initial_path = initial_path
        self.warm_start = warm_start
        self.momentum = momentum
        self.jobs = jobs

    def fit(self, model, y=None):
        model = _check_model(model)
        T0 = float(self.T_list[0])
        cfg = SolverConfig(N=self.N, K=self.K, T=T0, momentum=self.momentum)
        start = build_initial_path(self.initial_path, model, self.N, T0)
        self.table_ = quasi_potential_scan(model, cfg, self.T_list, start, self.warm_start, self.jobs)
        self.quasi_potential_ = self.table_.estimate
        return self


class FixedPointFinder(BaseEstimator):
    """Multi-start Newton for the effective drift; ``fixed_points_`` after ``fit``."""

    def __init__(self, seeds=None, anchor=None, tol=1e-12, max_iter=100):
        self.seeds = seeds
        self.anchor = anchor
        self.tol = tol
        self.max_iter = max_iter

    def fit(self, model, y=None):
        model = _check_model(model)
        self.fixed_points_ = find_fixed_points(model, self.anchor, self.seeds, self.tol, self.max_iter)
        self.locations_ = np.array([fp.location for fp in self.fixed_points_]).reshape(-1, model.dim)
        self.kinds_ = [fp.kind for fp in self.fixed_points_]
        return self

    def predict(self, X):
        """Index of the nearest fixed point for each row of ``X``."""
        check_is_fitted(self, "locations_")
        if self.locations_.shape[0] == 0:
            raise NotFittedError("no fixed points were found")
        X = np.atleast_2d(np.asarray(X, dtype=float))
        d = np.linalg.norm(X[:, None, :] - self.locations_[None, :, :], axis=-1)
        return np.argmin(d, axis=1)
