"""Builtin vector fields and interaction kernels.

Maier-Stein field (``beta`` defaults to 10), the linear kernel
``F(u, v) = (u, -v)``, the regularized Biot-Savart kernel (``delta`` defaults
to 0.01), the zero kernel, and a 1-D double well ``V(x) = x - x^3`` used as an
analytic benchmark.
"""

import numpy as np

from .exceptions import ConfigurationError
from .model import FIELDS, INTERACTIONS, ModelSpec, register_field, register_interaction


def maier_stein(x, beta):
    u, v = x[..., 0], x[..., 1]
    return np.stack([u - u**3 - beta * u * v**2, -(1.0 + u**2) * v], axis=-1)


def maier_stein_jac(x, beta):
    u, v = x[..., 0], x[..., 1]
    row0 = np.stack([1.0 - 3.0 * u**2 - beta * v**2, -2.0 * beta * u * v], axis=-1)
    row1 = np.stack([-2.0 * u * v, -(1.0 + u**2)], axis=-1)
    return np.stack([row0, row1], axis=-2)


def double_well(x):
    return x - x**3


def double_well_jac(x):
    return (1.0 - 3.0 * x**2)[..., None]


def linear_kernel(r):
    return np.stack([r[..., 0], -r[..., 1]], axis=-1)


def linear_kernel_jac(r):
    out = np.zeros(r.shape + (2,))
    out[..., 0, 0] = 1.0
    out[..., 1, 1] = -1.0
    return out


def biot_savart(r, delta):
    u, v = r[..., 0], r[..., 1]
    s = 2.0 * np.pi * (u**2 + v**2 + delta)
    return np.stack([-v / s, u / s], axis=-1)


def biot_savart_jac(r, delta):
    u, v = r[..., 0], r[..., 1]
    s = u**2 + v**2 + delta
    c = 1.0 / (2.0 * np.pi * s**2)
    row0 = np.stack([2.0 * u * v * c, (2.0 * v**2 - s) * c], axis=-1)
    row1 = np.stack([(s - 2.0 * u**2) * c, -2.0 * u * v * c], axis=-1)
    return np.stack([row0, row1], axis=-2)


def zero_kernel(r):
    return np.zeros_like(r)


def zero_kernel_jac(r):
    return np.zeros(r.shape + (r.shape[-1],))


register_field(
    "maier-stein", maier_stein, maier_stein_jac, params=("beta",), defaults={"beta": 10.0},
    dim=2, fixed_points=((-1.0, 0.0), (0.0, 0.0), (1.0, 0.0)),
    doc="V(u, v) = (u - u^3 - beta u v^2, -(1 + u^2) v)",
)
register_field(
    "double-well", double_well, double_well_jac, dim=1,
    fixed_points=((-1.0,), (0.0,), (1.0,)), doc="V(x) = x - x^3, gradient of -(x^4/4 - x^2/2)",
)
register_interaction("linear", linear_kernel, linear_kernel_jac, dim=2, doc="F(u, v) = (u, -v)")
register_interaction(
    "biot-savart-regularized", biot_savart, biot_savart_jac, params=("delta",),
    defaults={"delta": 0.01}, dim=2,
    doc="F(u, v) = (-v, u) / (2 pi (u^2 + v^2 + delta))",
)
register_interaction("zero", zero_kernel, zero_kernel_jac, doc="F = 0")


def build_model(field_kind, field_params=None, interaction_kind="zero", interaction_params=None,
                x1=None, x2=None, fd_step=None):
    """Build a validated :class:`ModelSpec` from identifiers and parameters.

    Missing parameters fall back to the builtin defaults. ``dim`` is taken
    from the vector field when it fixes one, otherwise from ``x1``.
    """
    comp = FIELDS.get(field_kind)
    if x1 is None:
        raise ConfigurationError("missing endpoint 'x1'")
    x1 = np.atleast_1d(np.asarray(x1, dtype=float))
    dim = comp.dim if comp is not None and comp.dim is not None else x1.shape[0]
    if x2 is None:
        x2 = x1
    kwargs = {} if fd_step is None else {"fd_step": fd_step}
    return ModelSpec(
        dim=dim,
        field_kind=field_kind,
        field_params=tuple((field_params or {}).items()),
        interaction_kind=interaction_kind,
        interaction_params=tuple((interaction_params or {}).items()),
        anchor_x1=tuple(x1.tolist()),
        target_x2=tuple(np.atleast_1d(np.asarray(x2, dtype=float)).tolist()),
        **kwargs,
    )


def figure1_model(beta=10.0):
    """Maier-Stein with the linear kernel, from (-1, 0) to (1, 0)."""
    return build_model("maier-stein", {"beta": beta}, "linear", None, (-1.0, 0.0), (1.0, 0.0))


def figure2_model(beta=10.0, delta=0.01):
    """Maier-Stein with the regularized Biot-Savart kernel, from (-1, 0) to (1, 0)."""
    return build_model(
        "maier-stein", {"beta": beta}, "biot-savart-regularized", {"delta": delta},
        (-1.0, 0.0), (1.0, 0.0),
    )


def double_well_model(x1=-1.0, x2=0.0):
    return build_model("double-well", None, "zero", None, (x1,), (x2,))


def known_identifiers():
    return {"fields": sorted(FIELDS), "interactions": sorted(INTERACTIONS)}
