"""Result containers shared by the regime solvers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .model import RegimeInfo

__all__ = ["TailFit", "SolutionGrid"]


@dataclass(frozen=True)
class TailFit:
    """Large-u behaviour 1 - phi(u) ~ K * u**exponent.

    ``A`` is the finite limit of the unnormalized solution (the reciprocal of
    phi(0) in the main regime, the full normalizing integral in the
    capital-stock regime), ``U`` the abscissa the estimate was read off at,
    and ``stability`` the relative change of ``A`` over the last doubling
    of ``U``.
    """

    A: float
    K: float
    exponent: float
    U: float
    stability: float


@dataclass
class SolutionGrid:
    """A solved survival probability sampled on a grid.

    ``u`` is strictly increasing from 0; ``phi``, ``dphi``, ``ddphi`` are the
    sampled value and first two derivatives.  The grid is a view of the
    solution, not its full content: ``evaluate`` queries the underlying
    representation (closed form, series + trajectory, or quadrature) anywhere
    in ``span``.  Treat instances as immutable.
    """

    u: np.ndarray
    phi: np.ndarray
    dphi: np.ndarray
    ddphi: np.ndarray
    C0: float
    regime: RegimeInfo
    tail: TailFit | None = None
    diagnostics: dict = field(default_factory=dict)
    _eval3: Callable | None = field(default=None, repr=False)

    @property
    def span(self) -> tuple[float, float]:
        return (0.0, float(self.diagnostics.get("U", np.inf)))

    def evaluate(self, u):
        """Return (phi, phi', phi'') at scalar or array u within ``span``."""
        if self._eval3 is None:
            raise ValueError("this solution carries no dense evaluator")
        scalar = np.isscalar(u) or np.asarray(u).ndim == 0
        uq = np.atleast_1d(np.asarray(u, dtype=float))
        lo, hi = self.span
        if np.any(uq < lo) or np.any(uq > hi):
            raise ValueError(f"evaluation outside solution span [{lo:g}, {hi:g}]")
        phi, dphi, ddphi = self._eval3(uq)
        if scalar:
            return float(phi[0]), float(dphi[0]), float(ddphi[0])
        return phi, dphi, ddphi
