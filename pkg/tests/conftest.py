import numpy as np
import pytest

from ruinlab import ModelParams, solve

# the common claim parameters of all bundled scenarios
LAM = 0.09
M = 1.0


def params(a, b, c):
    return ModelParams(a=a, b=b, c=c, lam=LAM, m=M)


PARAMS = {
    "fig1-I": params(0.0, 0.0, 0.1),
    "fig1-II": params(0.02, 0.1, 0.1),
    "fig2-I": params(0.02, 0.1, 0.02),
    "fig2-II": params(0.1, 0.1, 0.02),
    "fig3-I": params(0.02, 0.0, 0.02),
    "fig3-II": params(0.1, 0.0, 0.02),
    "fig4-I": params(0.02, 0.0, 0.0),
    "fig4-II": params(0.1, 0.0, 0.0),
    "fig5-I": params(0.02, 0.1, 0.0),
    "fig5-II": params(0.1, 0.1, 0.0),
}


@pytest.fixture(scope="session")
def solved():
    """Session cache of solved scenarios (u_max = 50, default tolerances)."""
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = solve(PARAMS[name], u_max=50.0, points=201)
        return cache[name]

    return get


@pytest.fixture(scope="session")
def fine_grid():
    return np.linspace(0.0, 50.0, 501)
