import numpy as np
import pytest

from mvmam import build_model, figure1_model, figure2_model


@pytest.fixture
def fig1():
    return figure1_model()


@pytest.fixture
def fig2():
    return figure2_model()


@pytest.fixture
def ms_zero():
    return build_model("maier-stein", {"beta": 10.0}, "zero", None, (-1.0, 0.0), (1.0, 0.0))


def smooth_random_path(rng, x1, x2, n_nodes, n_modes=3, amp=0.3):
    """Straight segment plus a few random sine modes that vanish at both ends."""
    s = np.linspace(0.0, 1.0, n_nodes)
    base = x1[None, :] + s[:, None] * (x2 - x1)[None, :]
    pert = np.zeros_like(base)
    for k in range(1, n_modes + 1):
        pert += amp / k * rng.standard_normal(base.shape[1])[None, :] * np.sin(k * np.pi * s)[:, None]
    return base + pert
