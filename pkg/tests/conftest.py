import numpy as np
import pytest

from qchybrid import HybridState, ModelParams, integrate, named_state

FIG1 = dict(omega=0.03, omega0=0.15 * 0.03, beta=0.2)
FIG2 = dict(omega=0.03, omega0=0.15 * 0.03, beta=0.16)
FIG5 = dict(omega=0.1, omega0=0.15 * 0.1, beta=0.2)


@pytest.fixture(scope="session")
def fig1_params():
    return ModelParams(**FIG1)


@pytest.fixture(scope="session")
def fig2_params():
    return ModelParams(**FIG2)


def standard_init(name="bell_plus", x0=0.0, p0=1.0):
    return HybridState(0.0, x0, p0, named_state(name))


@pytest.fixture(scope="session")
def fig1_trajectory(fig1_params):
    """The canonical long run shared by several invariant tests."""
    return integrate(standard_init(), fig1_params, t_max=20000.0, dt=0.01, stride=100)


def random_amplitudes(rng):
    c = rng.normal(size=4) + 1j * rng.normal(size=4)
    return c / np.linalg.norm(c)
