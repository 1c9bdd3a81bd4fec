"""Power-series expansion of the survival probability at u = 0 (main regime).

The limit initial conditions at the singular point u = 0 cannot be handed to
a numerical integrator directly.  Instead the solution is represented for
small u by

    phi(u) = C0 * [1 + (lam/c) * (u + sum_{k>=2} D_k u^k / k)],

whose coefficients D_k follow from a two-term recurrence and do not depend
on C0.  Evaluating the truncated series (and its termwise derivatives) at a
transfer abscissa u0 > 0 yields regular initial data.

The series is treated as asymptotic, not convergent: u0 is accepted only
where the last retained term is below tolerance *and* the terms still
decrease in magnitude.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass

import numpy as np

from .model import ModelParams

__all__ = ["SeriesExpansion", "series_coeffs_main", "choose_u0", "eval_series"]

logger = logging.getLogger(__name__)

DEFAULT_ORDER = 20
DEFAULT_TOL = 1e-12


@dataclass(frozen=True)
class SeriesExpansion:
    """Truncated expansion at u = 0: coefficients D_2..D_N plus transfer point.

    ``coeffs[i]`` holds D_{i+2}; ``order`` is N; ``u0`` is the abscissa to
    which initial conditions are transferred.
    """

    coeffs: np.ndarray
    order: int
    u0: float
    params: ModelParams

    def dk(self, k: int) -> float:
        """Return D_k, 2 <= k <= order."""
        if not 2 <= k <= self.order:
            raise IndexError(f"k must lie in [2, {self.order}], got {k}")
        return float(self.coeffs[k - 2])


def _recurrence(params: ModelParams, order: int) -> np.ndarray:
    a, b, c, lam, m = params.a, params.b, params.c, params.lam, params.m
    b2 = b * b
    D = np.zeros(order + 1)  # D[k] valid for k in 2..order
    D[2] = -((a - lam) / c + 1.0 / m)
    if order >= 3:
        D[3] = -(D[2] * (b2 + 2.0 * a - lam + c / m) + a / m) / (2.0 * c)
    for k in range(4, order + 1):
        t1 = D[k - 1] * ((k - 1) * (k - 2) * b2 / 2.0 + (k - 1) * a - lam + c / m)
        t2 = D[k - 2] * ((k - 3) * b2 / 2.0 + a) / m
        D[k] = -(t1 + t2) / (c * (k - 1))
    return D[2:]


def series_coeffs_main(
    params: ModelParams,
    order: int = DEFAULT_ORDER,
    tol: float = DEFAULT_TOL,
) -> SeriesExpansion:
    """Build the expansion for the main regime (requires c > 0, order >= 2)."""
    if params.c == 0.0:
        raise ValueError("series recurrence divides by c; c must be positive")
    if order < 2:
        raise ValueError(f"order must be >= 2, got {order}")
    coeffs = _recurrence(params, order)
    u0 = choose_u0(coeffs, params, tol)
    logger.info("series order %d, transfer point u0=%.6g", order, u0)
    return SeriesExpansion(coeffs=coeffs, order=order, u0=u0, params=params)


def choose_u0(coeffs: np.ndarray, params: ModelParams, tol: float) -> float:
    """Pick the largest trustworthy transfer abscissa from a candidate grid.

    A candidate u qualifies when the last retained term bound
    |D_N u^N / N| * (lam/c) is at most ``tol`` and the term magnitudes
    |D_k u^k / k| are nonincreasing over the final third of the series.
    Falls back to min(1e-3, m/100) with a warning when nothing qualifies.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    N = len(coeffs) + 1
    ks = np.arange(2, N + 1)
    candidates = params.m * np.logspace(-3.0, -1.0, 41)
    guard_len = max(2, (N - 1) // 3)
    best = None
    for u in candidates:
        terms = np.abs(coeffs) * u**ks / ks
        if terms[-1] * (params.lam / params.c) > tol:
            continue
        tail = terms[-guard_len:]
        if np.all(np.diff(tail) <= 0.0):
            best = float(u)
    if best is None:
        best = min(1e-3, params.m / 100.0)
        warnings.warn(
            f"no transfer point satisfied the truncation rule (tol={tol:g}); "
            f"falling back to u0={best:g}",
            stacklevel=2,
        )
    return best


def eval_series(exp: SeriesExpansion, C0: float, u):
    """Evaluate (phi, phi', phi'') of the truncated series at 0 <= u <= u0.

    Everything is linear in C0.  Values beyond u0 are refused: the series is
    asymptotic and not trusted past its transfer point.
    """
    scalar = np.isscalar(u) or np.asarray(u).ndim == 0
    uq = np.atleast_1d(np.asarray(u, dtype=float))
    if np.any(uq < 0.0) or np.any(uq > exp.u0 * (1.0 + 1e-12)):
        raise ValueError(f"series evaluation restricted to [0, u0={exp.u0:g}]")
    lam_c = exp.params.lam / exp.params.c
    ks = np.arange(2, exp.order + 1, dtype=float)
    powers = uq[:, None] ** ks[None, :]  # u^k
    d = exp.coeffs[None, :]
    s_phi = uq + np.sum(d * powers / ks[None, :], axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        s_dphi = 1.0 + np.sum(d * powers / np.where(uq[:, None] > 0, uq[:, None], 1.0), axis=1)
    # u = 0 needs the k = 2 limit handled exactly
    at0 = uq == 0.0
    if np.any(at0):
        s_dphi[at0] = 1.0
    s_ddphi = np.empty_like(uq)
    pos = ~at0
    if np.any(pos):
        s_ddphi[pos] = np.sum(
            d * (ks[None, :] - 1.0) * powers[pos] / uq[pos, None] ** 2, axis=1
        )
    s_ddphi[at0] = exp.coeffs[0]  # (k-1) D_k u^{k-2} at u=0 leaves D_2
    # C0 stays the outermost factor so scaling C0 rescales the results exactly
    phi = C0 * (1.0 + lam_c * s_phi)
    dphi = C0 * (lam_c * s_dphi)
    ddphi = C0 * (lam_c * s_ddphi)
    if scalar:
        return float(phi[0]), float(dphi[0]), float(ddphi[0])
    return phi, dphi, ddphi
