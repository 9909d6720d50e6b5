"""Problem definitions and the effective drift ``b(x, y) = V(x) - F(x - y)``.

Vector fields ``V`` and interaction kernels ``F`` live in two registries keyed
by string identifiers. Every registered callable takes an array of shape
``(..., d)`` plus keyword parameters and returns an array of the same shape;
optional Jacobian callables return ``(..., d, d)`` with row ``i`` holding the
gradient of component ``i``. Entries without a Jacobian are differentiated by
central finite differences.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from ._validation import check_state
from .exceptions import ConfigurationError, InvalidArgumentError

DEFAULT_FD_STEP = 1e-6


@dataclass(frozen=True)
class Component:
    """A registered vector field or interaction kernel."""

    name: str
    func: Callable
    jac: Callable | None = None
    params: tuple = ()
    defaults: Mapping = field(default_factory=dict)
    dim: int | None = None
    fixed_points: tuple = ()
    doc: str = ""


FIELDS: dict[str, Component] = {}
INTERACTIONS: dict[str, Component] = {}


def _register(registry, name, func, jac, params, defaults, dim, fixed_points, doc):
    params = tuple(params)
    defaults = dict(defaults or {})
    unknown = set(defaults) - set(params)
    if unknown:
        raise ConfigurationError(f"defaults name unknown parameters: {sorted(unknown)}")
    registry[name] = Component(
        name, func, jac, params, defaults, dim, tuple(tuple(p) for p in fixed_points), doc
    )
    return registry[name]


def register_field(name, func, jac=None, params=(), defaults=None, dim=None,
                   fixed_points=(), doc=""):
    """Register a vector field ``V`` under ``name`` (overwrites an existing entry)."""
    return _register(FIELDS, name, func, jac, params, defaults, dim, fixed_points, doc)


def register_interaction(name, func, jac=None, params=(), defaults=None, dim=None, doc=""):
    """Register an interaction kernel ``F`` under ``name`` (overwrites an existing entry)."""
    return _register(INTERACTIONS, name, func, jac, params, defaults, dim, (), doc)


def _lookup(registry, kind, what):
    try:
        return registry[kind]
    except KeyError:
        known = ", ".join(sorted(registry))
        raise ConfigurationError(f"unknown {what} {kind!r}; known identifiers: {known}") from None


def _resolve_params(comp, given, what):
    given = dict(given or {})
    extra = set(given) - set(comp.params)
    if extra:
        raise ConfigurationError(
            f"{what} {comp.name!r} does not take parameter(s) {sorted(extra)}; "
            f"accepted: {list(comp.params)}"
        )
    out = {}
    for p in comp.params:
        if p in given:
            out[p] = float(given[p])
        elif p in comp.defaults:
            out[p] = float(comp.defaults[p])
        else:
            raise ConfigurationError(f"{what} {comp.name!r} is missing parameter {p!r}")
    return out


def fd_jacobian(func, x, h=DEFAULT_FD_STEP):
    """Central finite-difference Jacobian of ``func`` at points ``x`` of shape ``(..., d)``."""
    x = np.asarray(x, dtype=float)
    d = x.shape[-1]
    cols = []
    for k in range(d):
        e = np.zeros(d)
        e[k] = h
        cols.append((np.asarray(func(x + e)) - np.asarray(func(x - e))) / (2.0 * h))
    return np.stack(cols, axis=-1)


@dataclass(frozen=True)
class ModelSpec:
    """A complete problem: dimension, ``V``, ``F``, their parameters and endpoints.

    Instances are immutable; build them with :func:`mvmam.models.build_model`
    or directly (parameters are validated and defaulted either way).
    """

    dim: int
    field_kind: str
    field_params: tuple
    interaction_kind: str
    interaction_params: tuple
    anchor_x1: tuple
    target_x2: tuple
    fd_step: float = DEFAULT_FD_STEP

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise ConfigurationError(f"dim must be a positive integer, got {self.dim!r}")
        fcomp = _lookup(FIELDS, self.field_kind, "vector field")
        icomp = _lookup(INTERACTIONS, self.interaction_kind, "interaction")
        for comp, what in ((fcomp, "vector field"), (icomp, "interaction")):
            if comp.dim is not None and comp.dim != self.dim:
                raise ConfigurationError(f"{what} {comp.name!r} requires dim = {comp.dim}, got {self.dim}")
        fp = _resolve_params(fcomp, dict(self.field_params), "vector field")
        ip = _resolve_params(icomp, dict(self.interaction_params), "interaction")
        object.__setattr__(self, "field_params", tuple(sorted(fp.items())))
        object.__setattr__(self, "interaction_params", tuple(sorted(ip.items())))
        try:
            x1 = check_state(self.anchor_x1, self.dim, "anchor_x1")
            x2 = check_state(self.target_x2, self.dim, "target_x2")
        except InvalidArgumentError as exc:
            raise ConfigurationError(str(exc)) from None
        object.__setattr__(self, "anchor_x1", tuple(x1.tolist()))
        object.__setattr__(self, "target_x2", tuple(x2.tolist()))
        if not self.fd_step > 0:
            raise ConfigurationError("fd_step must be positive")
        if self.interaction_kind == "biot-savart-regularized" and not ip["delta"] > 0:
            raise ConfigurationError("biot-savart-regularized requires delta > 0")
        if self.interaction_kind in _ZERO_AT_ORIGIN:
            f0 = self.F(np.zeros(self.dim))
            if np.any(f0 != 0):
                raise ConfigurationError(f"builtin {self.interaction_kind!r} must satisfy F(0) = 0")

    # -- parameters -------------------------------------------------------
    @property
    def x1(self):
        return np.array(self.anchor_x1)

    @property
    def x2(self):
        return np.array(self.target_x2)

    def field_fixed_points(self):
        """Fixed points of ``V`` listed at registration (may be empty)."""
        return [np.array(p, dtype=float) for p in self.field_component.fixed_points if len(p) == self.dim]

    @property
    def field_component(self):
        return FIELDS[self.field_kind]

    @property
    def interaction_component(self):
        return INTERACTIONS[self.interaction_kind]

    # -- vectorized evaluations on (..., d) arrays ------------------------
    def V(self, x):
        return np.asarray(self.field_component.func(np.asarray(x, dtype=float), **dict(self.field_params)), dtype=float)

    def F(self, r):
        return np.asarray(
            self.interaction_component.func(np.asarray(r, dtype=float), **dict(self.interaction_params)),
            dtype=float,
        )

    def drift(self, x, y):
        x = np.asarray(x, dtype=float)
        return self.V(x) - self.F(x - np.asarray(y, dtype=float))

    def effective_drift(self, x, anchor=None):
        """``x -> V(x) - F(x - anchor)``, the drift when the skeleton rests at ``anchor``."""
        return self.drift(x, self.x1 if anchor is None else anchor)

    def jac_V(self, x):
        comp = self.field_component
        if comp.jac is not None:
            return np.asarray(comp.jac(np.asarray(x, dtype=float), **dict(self.field_params)), dtype=float)
        return fd_jacobian(self.V, x, self.fd_step)

    def jac_F(self, r):
        comp = self.interaction_component
        if comp.jac is not None:
            return np.asarray(comp.jac(np.asarray(r, dtype=float), **dict(self.interaction_params)), dtype=float)
        return fd_jacobian(self.F, r, self.fd_step)

    def jac_x(self, x, y):
        x = np.asarray(x, dtype=float)
        return self.jac_V(x) - self.jac_F(x - np.asarray(y, dtype=float))

    def jac_y(self, x, y):
        return self.jac_F(np.asarray(x, dtype=float) - np.asarray(y, dtype=float))

    def describe(self):
        return {
            "dim": self.dim,
            "field": self.field_kind,
            "field_params": dict(self.field_params),
            "interaction": self.interaction_kind,
            "interaction_params": dict(self.interaction_params),
            "x1": list(self.anchor_x1),
            "x2": list(self.target_x2),
        }


_ZERO_AT_ORIGIN = ("linear", "biot-savart-regularized", "zero")


def _check_model(model):
    if not isinstance(model, ModelSpec):
        raise InvalidArgumentError(f"expected a ModelSpec, got {type(model).__name__}")


def eval_V(model: ModelSpec, x) -> np.ndarray:
    """Evaluate the vector field ``V`` at a single state."""
    _check_model(model)
    return model.V(check_state(x, model.dim))


def eval_F(model: ModelSpec, r) -> np.ndarray:
    """Evaluate the interaction kernel ``F`` at a single separation ``r``."""
    _check_model(model)
    return model.F(check_state(r, model.dim, "r"))


def eval_b(model: ModelSpec, x, y) -> np.ndarray:
    """Evaluate ``b(x, y) = V(x) - F(x - y)``."""
    _check_model(model)
    return model.drift(check_state(x, model.dim), check_state(y, model.dim, "y"))


def jac_b_x(model: ModelSpec, x, y) -> np.ndarray:
    """Jacobian of ``b`` in its first argument, ``grad V(x) - grad F(x - y)``."""
    _check_model(model)
    return model.jac_x(check_state(x, model.dim), check_state(y, model.dim, "y"))


def jac_b_y(model: ModelSpec, x, y) -> np.ndarray:
    """Jacobian of ``b`` in its second argument, ``+grad F(x - y)``."""
    _check_model(model)
    return model.jac_y(check_state(x, model.dim), check_state(y, model.dim, "y"))
