"""Main-regime pipeline and the uniform solve() dispatcher.

The main regime (b > 0, c > 0, 2a/b^2 > 1) is solved in four moves:

1. expand the solution at the singular point u = 0 with placeholder C0 = 1
   and transfer the initial data to a regular point u0;
2. integrate the third-order equation out to a large U;
3. read off the finite limit A of the unnormalized solution from the
   power-law tail: A = phi(U) + phi'(U) * U / (2a/b^2 - 1);
4. rescale by C0 = 1/A, which is exact because the whole Cauchy family is
   proportional to C0 (no shooting iteration is needed).

Degenerate regimes dispatch to their closed forms or to the capital-stock
quadrature; parameter sets with certain ruin yield the explicit zero
solution, and nonviable ones raise.
"""

from __future__ import annotations

import logging
import math

import numpy as np

from . import capitalstock
from .closedform import classical_exact, lundberg_coefficient, riskfree_exact
from .errors import NoSolutionError, SolverError
from .model import (
    REASON_LOADING,
    REASON_NOT_ROBUST,
    ModelParams,
    Regime,
    RegimeInfo,
    classify_regime,
)
from .odes import integrate, main_ode_field
from .series import eval_series, series_coeffs_main
from .solution import SolutionGrid, TailFit

__all__ = ["solve", "solve_main", "phi_second_derivative_at_zero", "make_grid"]

logger = logging.getLogger(__name__)

# beyond this, phi'(U) * U^(2a/b^2) amplifies integrator noise, not signal
_TAIL_RESOLUTION_FACTOR = 100.0


def phi_second_derivative_at_zero(params: ModelParams, C0: float) -> float:
    """Limit of phi'' at u -> 0+: (lam - a - c/m) * lam * C0 / c^2.

    Its sign (that of -(m(a - lam) + c)) separates the everywhere-concave
    solutions from those with an inflection point.
    """
    if params.c == 0.0:
        raise ValueError("phi''(0) formula requires c > 0")
    return (params.lam - params.a - params.c / params.m) * params.lam * C0 / params.c**2


def make_grid(u_max: float, points: int, spacing: str = "uniform") -> np.ndarray:
    """Output grid from 0 to u_max, uniform or logarithmic."""
    if points < 2 or u_max <= 0.0:
        raise ValueError("need points >= 2 and u_max > 0")
    if spacing == "uniform":
        return np.linspace(0.0, u_max, points)
    if spacing == "log":
        return np.concatenate(([0.0], np.geomspace(u_max * 1e-3, u_max, points - 1)))
    raise ValueError(f"unknown spacing {spacing!r}")


def solve_main(
    params: ModelParams,
    u_max: float | None = None,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    series_order: int = 20,
    series_tol: float = 1e-12,
    points: int = 201,
    spacing: str = "uniform",
    u_grid=None,
) -> SolutionGrid:
    """Solve the main regime; see the module docstring for the pipeline."""
    info = classify_regime(params)
    if info.regime is not Regime.MAIN:
        raise ValueError(f"solve_main expects the main regime, got {info}")
    r = params.robustness()

    exp = series_coeffs_main(params, order=series_order, tol=series_tol)
    u0 = exp.u0
    state0 = np.array(eval_series(exp, 1.0, u0))

    if u_grid is not None:
        u_grid = np.asarray(u_grid, dtype=float)
        u_max = max(u_max or 0.0, float(u_grid.max()))
    if u_max is None:
        u_max = 50.0 * params.m

    field = main_ode_field(params)
    U = max(200.0 * params.m, u_max)
    A_prev = None
    stability = np.inf
    for _ in range(9):
        traj = integrate(field, u0, state0, U, rtol=rtol, atol=atol)
        phi_U, dphi_U, _ = traj.states[-1]
        A = phi_U + dphi_U * U / (r - 1.0)
        if A_prev is not None:
            stability = abs(A - A_prev) / abs(A)
            if stability <= 1e-4:
                break
        A_prev = A
        U *= 2.0
    else:
        raise SolverError(f"limit at infinity did not stabilize (last U={U:g})")
    if A <= 0.0:
        raise SolverError(f"nonpositive limit at infinity: A={A:g}")
    C0 = 1.0 / A
    logger.info("main solve: u0=%.4g U=%g C0=%.8g stability=%.2e", u0, U, C0, stability)

    # The tail coefficient is meaningful only while phi'(U) still stands
    # above the integrator's error floor.
    tail_term = dphi_U * U / (r - 1.0)
    tail = None
    if tail_term > _TAIL_RESOLUTION_FACTOR * (atol + rtol * abs(A)):
        K_hat = dphi_U * U**r / (r - 1.0)
        tail = TailFit(A=A, K=K_hat / A, exponent=1.0 - r, U=U, stability=stability)

    def eval3(uq: np.ndarray):
        phi = np.empty_like(uq)
        dphi = np.empty_like(uq)
        ddphi = np.empty_like(uq)
        inner = uq <= u0
        if np.any(inner):
            phi[inner], dphi[inner], ddphi[inner] = eval_series(exp, C0, uq[inner])
        if np.any(~inner):
            st = traj(uq[~inner])
            phi[~inner] = C0 * st[:, 0]
            dphi[~inner] = C0 * st[:, 1]
            ddphi[~inner] = C0 * st[:, 2]
        return phi, dphi, ddphi

    if u_grid is None:
        u_grid = make_grid(u_max, points, spacing)
    phi, dphi, ddphi = eval3(u_grid)

    diagnostics = {
        "u0": u0,
        "series_order": series_order,
        "series_tol": series_tol,
        "U": U,
        "rtol": rtol,
        "atol": atol,
        "A": A,
        "A_stability": stability,
    }
    if tail is None:
        diagnostics["tail_note"] = "power-law tail below integrator resolution at U"
    return SolutionGrid(
        u=u_grid,
        phi=phi,
        dphi=dphi,
        ddphi=ddphi,
        C0=C0,
        regime=info,
        tail=tail,
        diagnostics=diagnostics,
        _eval3=eval3,
    )


def _closedform_grid(cf, params: ModelParams, u_grid: np.ndarray, info: RegimeInfo) -> SolutionGrid:
    """Sample a closed-form solution, with phi'' from the degenerate equation."""
    a, c, lam, m = params.a, params.c, params.lam, params.m

    def _ddphi_origin_limit() -> float:
        # only reached for c = 0 (risk-free without premiums), where
        # phi' ~ u^(p-1) exp(-u/m) / norm with p = lam/a
        p = lam / a
        norm = cf.norm_const
        if p > 2.0:
            return 0.0
        if p == 2.0:
            return 1.0 / norm
        if p > 1.0:
            return math.inf
        if p == 1.0:
            return -1.0 / (m * norm)
        return -math.inf

    def eval3(uq: np.ndarray):
        phi, dphi = cf.evaluate(uq)
        phi = np.atleast_1d(phi)
        dphi = np.atleast_1d(dphi)
        # (a u + c) phi'' + (a - lam + c/m + a u/m) phi' = 0
        denom = a * uq + c
        with np.errstate(invalid="ignore", divide="ignore"):
            ddphi = np.where(
                denom > 0.0,
                -(a - lam + c / m + a * uq / m) * dphi / np.where(denom > 0, denom, 1.0),
                _ddphi_origin_limit() if c == 0.0 else np.nan,
            )
        return phi, dphi, ddphi

    phi, dphi, ddphi = eval3(u_grid)
    diagnostics = {"C0": cf.C0, "dphi_at_zero": cf.dphi_at_zero, "U": np.inf}
    if info.regime is Regime.CLASSICAL_CL:
        diagnostics["lundberg_coefficient"] = lundberg_coefficient(params)
    if cf.ic0 is not None:
        diagnostics["ic0"] = cf.ic0
        diagnostics["norm_const"] = cf.norm_const
    return SolutionGrid(
        u=u_grid,
        phi=phi,
        dphi=dphi,
        ddphi=ddphi,
        C0=cf.C0,
        regime=info,
        tail=None,
        diagnostics=diagnostics,
        _eval3=eval3,
    )


def _zero_grid(params: ModelParams, u_grid: np.ndarray, info: RegimeInfo) -> SolutionGrid:
    def eval3(uq: np.ndarray):
        z = np.zeros_like(uq)
        return z, z.copy(), z.copy()

    z = np.zeros_like(u_grid)
    return SolutionGrid(
        u=u_grid,
        phi=z,
        dphi=z.copy(),
        ddphi=z.copy(),
        C0=0.0,
        regime=info,
        tail=None,
        diagnostics={"reason": f"ruin certain: {info.reason}", "U": np.inf},
        _eval3=eval3,
    )


def solve(
    params: ModelParams,
    u_max: float | None = None,
    points: int = 201,
    spacing: str = "uniform",
    rtol: float = 1e-10,
    atol: float = 1e-12,
    series_order: int = 20,
    series_tol: float = 1e-12,
    u_grid=None,
) -> SolutionGrid:
    """Solve any regime and return a uniformly shaped SolutionGrid.

    Raises :class:`NoSolutionError` when the problem is nonviable (classical
    regime with nonpositive safety loading) or refused (2a/b^2 exactly 1);
    returns the explicit zero solution, flagged in the diagnostics, when
    ruin is certain under non-robust shares.
    """
    info = classify_regime(params)
    if u_grid is not None:
        u_grid = np.asarray(u_grid, dtype=float)
        u_max = max(u_max or 0.0, float(u_grid.max()))
    if u_max is None:
        u_max = 50.0 * params.m
    if u_grid is None and info.regime is not Regime.MAIN and info.regime is not Regime.CAPITAL_STOCK:
        u_grid = make_grid(u_max, points, spacing)

    if info.regime is Regime.MAIN:
        return solve_main(
            params,
            u_max=u_max,
            rtol=rtol,
            atol=atol,
            series_order=series_order,
            series_tol=series_tol,
            points=points,
            spacing=spacing,
            u_grid=u_grid,
        )
    if info.regime is Regime.CLASSICAL_CL:
        return _closedform_grid(classical_exact(params), params, u_grid, info)
    if info.regime is Regime.RISK_FREE:
        return _closedform_grid(riskfree_exact(params), params, u_grid, info)
    if info.regime is Regime.CAPITAL_STOCK:
        grid = capitalstock.phi_capital_stock(
            params,
            u_grid=u_grid,
            u_max=u_max,
            rtol=rtol,
            atol=atol,
            points=points,
        )
        return grid
    # NO_SOLUTION
    if info.reason == REASON_NOT_ROBUST:
        return _zero_grid(params, u_grid, info)
    if info.reason == REASON_LOADING:
        raise NoSolutionError(
            f"no solution: c <= lambda*m ({params.c:g} <= {params.lam * params.m:g})"
        )
    raise NoSolutionError(
        f"refusing the boundary case 2a/b^2 = 1 exactly ({info.reason})"
    )
