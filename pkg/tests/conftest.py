import pytest

from shearwave import SteadyCoeffs, WaveParams

G = 9.81


@pytest.fixture(scope="session")
def fig1_params():
    """Irrotational reference case."""
    return WaveParams.solve(G, 1.0, 1.0, 0.0, a=0.01, branch="plus")


@pytest.fixture(scope="session")
def fig2_params():
    """Strong counter-current: c + h*omega < 0, three critical points."""
    return WaveParams.solve(G, 1.0, 1.0, -6.0, a=0.01, branch="minus")


@pytest.fixture(scope="session")
def fig4_left_params():
    """Large positive vorticity, tiny amplitude, long wave."""
    return WaveParams.solve(G, 1.0, 0.12, 35.0, a=3e-4, branch="plus")


@pytest.fixture(scope="session")
def fig1_coeffs(fig1_params):
    co, shifted = SteadyCoeffs.from_params(fig1_params).normalized()
    assert not shifted
    return co


@pytest.fixture(scope="session")
def fig2_coeffs(fig2_params):
    co, shifted = SteadyCoeffs.from_params(fig2_params).normalized()
    assert shifted
    return co


@pytest.fixture(scope="session")
def fig4_left_coeffs(fig4_left_params):
    co, shifted = SteadyCoeffs.from_params(fig4_left_params).normalized()
    assert not shifted
    return co
