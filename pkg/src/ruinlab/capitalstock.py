"""Survival probability without premiums (c = 0, b > 0): quadrature route.

In the capital-stock regime the survival probability factors through an
auxiliary function eta:

    phi(u) = P1 * int_0^u s^(mu1 - 1) eta(s) ds,
    P1 = 1 / int_0^inf s^(mu1 - 1) eta(s) ds,

where mu1 = 1/2 - a/b^2 + sqrt((1/2 - a/b^2)^2 + 2 lam/b^2) and eta solves a
second-order equation with eta(0) = 1 and a convergent power series at 0.
The normalizing integral is assembled from three panels: the series panel
over [0, u0] (done termwise, which absorbs the integrable s^(mu1-1) endpoint
singularity when mu1 < 1), Gauss-Legendre quadrature over the integrator
steps on [u0, U], and a power-law tail correction beyond U calibrated from
eta(U) ~ C * U^(-d2).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import NoSolutionError, SolverError
from .model import ModelParams, Regime, RegimeInfo
from .solution import SolutionGrid, TailFit

__all__ = [
    "CapitalStockExpansion",
    "exponents",
    "eta_series",
    "solve_eta",
    "phi_capital_stock",
]

logger = logging.getLogger(__name__)

DEFAULT_ORDER = 20
DEFAULT_TOL = 1e-12
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(10)


@dataclass(frozen=True)
class CapitalStockExpansion:
    """Exponents and eta-series data for one parameter set.

    ``eta_coeffs[i]`` is P_{i+2}, the coefficient of u^(i+1) in eta's series;
    ``P1`` is the normalization constant (reciprocal of the full integral).
    """

    mu1: float
    d1: float
    d2: float
    eta_coeffs: np.ndarray
    u0: float
    P1: float


def exponents(params: ModelParams) -> tuple[float, float, float]:
    """Return (mu1, d1, d2) for b > 0.

    mu1 is computed in rationalized form when 1/2 - a/b^2 is negative, so
    large a/b^2 does not lose digits to cancellation.
    """
    if params.b == 0.0:
        raise ValueError("capital-stock exponents require b > 0")
    q = params.a / params.b**2
    s = 0.5 - q
    rad = np.sqrt(s * s + 2.0 * params.lam / params.b**2)
    mu1 = s + rad if s >= 0.0 else (2.0 * params.lam / params.b**2) / (rad - s)
    return float(mu1), float(mu1 + q), float(mu1 + 2.0 * q - 1.0)


def eta_series(params: ModelParams, order: int = DEFAULT_ORDER) -> np.ndarray:
    """Coefficients P_2..P_order of eta's convergent series at u = 0."""
    _, d1, d2 = exponents(params)
    m = params.m
    P = np.zeros(order + 1)  # P[k] valid for k = 2..order
    P[2] = -d2 / (2.0 * m * d1)
    for k in range(2, order):
        P[k + 1] = -P[k] * (k - 1 + d2) / (m * k * (k - 1 + 2.0 * d1))
    return P[2:]


def _eta_u0(coeffs: np.ndarray, params: ModelParams, tol: float) -> float:
    """Largest candidate abscissa where the series tail is below ``tol``."""
    N = len(coeffs) + 1
    ks = np.arange(1, N)  # P_{k+1} multiplies u^k
    candidates = params.m * np.logspace(-2.0, np.log10(0.6), 33)
    best = candidates[0]
    for u in candidates:
        terms = np.abs(coeffs) * u**ks
        if terms[-1] <= tol and np.all(np.diff(terms[-max(2, N // 3):]) <= 0.0):
            best = float(u)
    return best


def _eta_series_eval(coeffs: np.ndarray, u: np.ndarray):
    """(eta, eta') of the truncated series; valid for |u| below the chosen u0."""
    ks = np.arange(1, len(coeffs) + 1, dtype=float)
    up = np.atleast_1d(u)[:, None] ** ks[None, :]
    eta = 1.0 + np.sum(coeffs[None, :] * up, axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        ud = np.where(np.atleast_1d(u) > 0, np.atleast_1d(u), 1.0)[:, None]
        deta = np.sum(coeffs[None, :] * ks[None, :] * up / ud, axis=1)
    at0 = np.atleast_1d(u) == 0.0
    deta[at0] = coeffs[0]
    return eta, deta


def _series_panel(coeffs: np.ndarray, mu1: float, v) -> np.ndarray:
    """int_0^v s^(mu1-1) eta(s) ds from the series, v <= u0.

    Termwise integration gives sum_k c_k v^(mu1+k)/(mu1+k) with c_0 = 1 and
    c_k = P_{k+1}; the endpoint singularity is exact in each term.
    """
    vq = np.atleast_1d(np.asarray(v, dtype=float))
    ks = np.arange(0, len(coeffs) + 1, dtype=float)
    ck = np.concatenate(([1.0], coeffs))
    return np.sum(ck[None, :] * vq[:, None] ** (mu1 + ks[None, :]) / (mu1 + ks[None, :]), axis=1)


def solve_eta(
    params: ModelParams,
    u_max: float,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    order: int = DEFAULT_ORDER,
    tol: float = DEFAULT_TOL,
):
    """Integrate eta from its series transfer point out to ``u_max``.

    Returns the trajectory; its start node is the transfer point u0.  eta
    must stay positive on the whole span (the quadrature integrand would
    otherwise change sign), which is monitored at the step nodes.
    """
    from .odes import eta_ode_field, integrate

    coeffs = eta_series(params, order)
    u0 = _eta_u0(coeffs, params, tol)
    eta0, deta0 = _eta_series_eval(coeffs, np.array([u0]))
    traj = integrate(
        eta_ode_field(params), u0, [eta0[0], deta0[0]], u_max, rtol=rtol, atol=atol
    )
    if np.any(traj.states[:, 0] <= 0.0):
        bad = traj.us[np.argmax(traj.states[:, 0] <= 0.0)]
        raise SolverError(f"eta crossed zero near u={bad:.6g}")
    return traj


def _steps_quadrature(traj, mu1: float) -> np.ndarray:
    """Per-step Gauss-Legendre integrals of s^(mu1-1) eta(s), cumulative."""
    lo = traj.us[:-1]
    hi = traj.us[1:]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    nodes = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    vals = traj(nodes.ravel())[:, 0].reshape(nodes.shape)
    f = nodes ** (mu1 - 1.0) * vals
    per_step = half * (f @ _GL_WEIGHTS)
    return np.concatenate(([0.0], np.cumsum(per_step)))


def _partial_step(traj, mu1: float, lo: float, hi: float) -> float:
    if hi <= lo:
        return 0.0
    half = 0.5 * (hi - lo)
    s = 0.5 * (hi + lo) + half * _GL_NODES
    f = s ** (mu1 - 1.0) * traj(s)[:, 0]
    return float(half * (f @ _GL_WEIGHTS))


def phi_capital_stock(
    params: ModelParams,
    u_grid=None,
    u_max: float | None = None,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    order: int = DEFAULT_ORDER,
    tol: float = DEFAULT_TOL,
    points: int = 201,
) -> SolutionGrid:
    """Solve the capital-stock regime and sample it on a grid.

    The integration horizon starts at max(200*m, u_max) and doubles until the
    normalization changes by less than 1e-4 relative.  Requires 2a/b^2 > 1;
    otherwise the normalizing integral diverges and ruin is certain.
    """
    if params.c != 0.0 or params.b == 0.0:
        raise ValueError(f"capital-stock regime requires c = 0 and b > 0, got {params}")
    r = params.robustness()
    if r <= 1.0:
        raise NoSolutionError(
            f"tail integral diverges: 2a/b^2 = {r:g} <= 1 (shares not robust)"
        )
    mu1, d1, d2 = exponents(params)
    coeffs = eta_series(params, order)

    if u_grid is not None:
        u_grid = np.asarray(u_grid, dtype=float)
        u_max = max(u_max or 0.0, float(u_grid.max()))
    if u_max is None:
        u_max = 50.0 * params.m

    U = max(200.0 * params.m, u_max)
    Z_prev = None
    stability = np.inf
    for doubling in range(9):
        traj = solve_eta(params, U, rtol=rtol, atol=atol, order=order, tol=tol)
        u0 = traj.u_start
        s0 = float(_series_panel(coeffs, mu1, u0)[0])
        cum = _steps_quadrature(traj, mu1)
        eta_U = float(traj.states[-1, 0])
        tail = eta_U * U**mu1 / (r - 1.0)
        Z = s0 + cum[-1] + tail
        if Z_prev is not None:
            stability = abs(Z - Z_prev) / abs(Z)
            if stability <= 1e-4:
                break
        Z_prev = Z
        U *= 2.0
    else:
        raise SolverError(f"normalization did not stabilize (last U={U:g})")
    if Z <= 0.0:
        raise SolverError(f"nonpositive normalizing integral Z={Z:g}")
    P1 = 1.0 / Z

    # two-point tail calibration check, folded into the diagnostics
    eta_half = float(traj(U / 2.0)[0])
    c_U = eta_U * U**d2
    c_half = eta_half * (U / 2.0) ** d2
    calib_drift = abs(c_U - c_half) / abs(c_U)
    logger.info(
        "capital stock: mu1=%.6g u0=%.4g U=%g P1=%.8g tail-calib drift=%.2e",
        mu1, u0, U, P1, calib_drift,
    )

    expansion = CapitalStockExpansion(
        mu1=mu1, d1=d1, d2=d2, eta_coeffs=coeffs, u0=u0, P1=P1
    )

    def eta_pair(uq: np.ndarray):
        eta = np.empty_like(uq)
        deta = np.empty_like(uq)
        inner = uq <= u0
        if np.any(inner):
            eta[inner], deta[inner] = _eta_series_eval(coeffs, uq[inner])
        if np.any(~inner):
            st = traj(uq[~inner])
            eta[~inner], deta[~inner] = st[:, 0], st[:, 1]
        return eta, deta

    def lim_dphi0() -> float:
        if mu1 > 1.0:
            return 0.0
        if mu1 == 1.0:
            return P1
        return np.inf

    def lim_ddphi0() -> float:
        if mu1 > 2.0:
            return 0.0
        if mu1 == 2.0:
            return P1
        if mu1 > 1.0:
            return np.inf
        if mu1 == 1.0:
            return P1 * coeffs[0]
        return -np.inf

    def eval3(uq: np.ndarray):
        phi = np.empty_like(uq)
        inner = uq <= u0
        phi[inner] = P1 * _series_panel(coeffs, mu1, uq[inner])
        outer_idx = np.flatnonzero(~inner)
        if outer_idx.size:
            uo = uq[outer_idx]
            step = np.clip(np.searchsorted(traj.us, uo, side="right") - 1, 0, len(traj.us) - 2)
            base = s0 + cum[step]
            part = np.array(
                [_partial_step(traj, mu1, traj.us[s], x) for s, x in zip(step, uo)]
            )
            phi[outer_idx] = P1 * (base + part)
        eta, deta = eta_pair(uq)
        pos = uq > 0.0
        dphi = np.empty_like(uq)
        ddphi = np.empty_like(uq)
        dphi[pos] = P1 * uq[pos] ** (mu1 - 1.0) * eta[pos]
        ddphi[pos] = P1 * uq[pos] ** (mu1 - 2.0) * ((mu1 - 1.0) * eta[pos] + uq[pos] * deta[pos])
        if np.any(~pos):
            dphi[~pos] = lim_dphi0()
            ddphi[~pos] = lim_ddphi0()
        return phi, dphi, ddphi

    if u_grid is None:
        u_grid = np.linspace(0.0, u_max, points)
    phi, dphi, ddphi = eval3(u_grid)

    tail_fit = TailFit(A=Z, K=P1 * c_U / (r - 1.0), exponent=1.0 - r, U=U, stability=stability)
    diagnostics = {
        "P1": P1,
        "mu1": mu1,
        "d1": d1,
        "d2": d2,
        "u0": u0,
        "order": order,
        "U": U,
        "rtol": rtol,
        "atol": atol,
        "tail_calibration_drift": calib_drift,
        "expansion": expansion,
    }
    return SolutionGrid(
        u=u_grid,
        phi=phi,
        dphi=dphi,
        ddphi=ddphi,
        C0=0.0,
        regime=RegimeInfo(Regime.CAPITAL_STOCK),
        tail=tail_fit,
        diagnostics=diagnostics,
        _eval3=eval3,
    )
