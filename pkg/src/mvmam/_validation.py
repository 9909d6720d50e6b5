"""Input checking helpers in the spirit of ``sklearn.utils.validation``."""

import numpy as np

from .exceptions import InvalidArgumentError

BLOWUP_NORM = 1e8


def check_state(x, dim, name="x"):
    """Return ``x`` as a finite float vector of length ``dim``."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1 or arr.shape[0] != dim:
        raise InvalidArgumentError(
            f"{name} must be a vector of length {dim}, got shape {np.shape(x)}"
        )
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError(f"{name} has non-finite entries")
    return arr


def check_states(X, dim, name="states"):
    """Return ``X`` as a finite ``(n, dim)`` array. 1-D input is read as n points when dim == 1."""
    arr = np.asarray(X, dtype=float)
    if arr.ndim == 1 and dim == 1:
        arr = arr[:, None]
    if arr.ndim != 2 or arr.shape[1] != dim:
        raise InvalidArgumentError(
            f"{name} must have shape (n, {dim}), got {np.shape(X)}"
        )
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError(f"{name} has non-finite entries")
    return arr


def check_time_grid(t, name="grid"):
    t = np.asarray(t, dtype=float)
    if t.ndim != 1 or t.size < 2:
        raise InvalidArgumentError(f"{name} must be a 1-D array with at least 2 nodes")
    if not np.all(np.isfinite(t)):
        raise InvalidArgumentError(f"{name} has non-finite nodes")
    if t[0] != 0.0:
        raise InvalidArgumentError(f"{name} must start at 0, got {t[0]!r}")
    if np.any(np.diff(t) <= 0):
        raise InvalidArgumentError(f"{name} must be strictly increasing")
    return t


def check_positive(value, name):
    if not (np.isfinite(value) and value > 0):
        raise InvalidArgumentError(f"{name} must be a positive finite number, got {value!r}")
    return float(value)


def check_same_grid(t_a, t_b, what="path and skeleton"):
    if np.shape(t_a) != np.shape(t_b) or not np.array_equal(t_a, t_b):
        raise InvalidArgumentError(f"{what} must share the same time grid")
