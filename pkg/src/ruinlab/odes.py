"""Adaptive Dormand-Prince 5(4) integration with dense output.

The solver pipeline needs tight tolerances (the normalization at infinity
reads off a first derivative that decays like a power of u) and continuous
access to the computed solution (the Volterra residual check integrates
against it), so the integrator keeps the standard quartic interpolant of the
Dormand-Prince pair for every accepted step.

Also defined here are the three vector fields used by the package: the
third-order equation satisfied by the survival probability in the main
regime, the second-order equation for the capital-stock auxiliary function,
and the one-dimensional companion equation that reproduces the exponential
Volterra convolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import IntegrationError
from .model import ModelParams

__all__ = [
    "OdeSystem",
    "Trajectory",
    "integrate",
    "main_ode_field",
    "companion_volterra_field",
    "eta_ode_field",
]

# Dormand-Prince 5(4) tableau.
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = (
    np.array([], dtype=float),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
)
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
# fifth-order minus embedded fourth-order weights
_E = np.array(
    [71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40]
)
# dense-output weights of the quartic interpolant
_D = np.array(
    [
        -12715105075 / 11282082432,
        0.0,
        87487479700 / 32700410799,
        -10690763975 / 1880347072,
        701980252875 / 199316789632,
        -1453857185 / 822651844,
        69997945 / 29380423,
    ]
)

_SAFETY = 0.9
_BETA = 0.04
_EXPO = 0.2 - _BETA * 0.75
_FAC_MIN = 0.2
_FAC_MAX = 10.0


@dataclass(frozen=True)
class OdeSystem:
    """A first-order system u -> d(state)/du."""

    dimension: int
    rhs: Callable[[float, np.ndarray], np.ndarray]
    name: str = ""


@dataclass
class Trajectory:
    """Accepted steps of one integration plus per-step dense output.

    ``us`` are the strictly monotone step endpoints, ``states`` the accepted
    state vectors, and ``cont[i]`` the five interpolation vectors of step i.
    Off-node queries evaluate the quartic interpolant, which matches the step
    endpoints exactly and carries the accuracy of the local error control.
    """

    us: np.ndarray
    states: np.ndarray
    cont: np.ndarray
    name: str = ""
    _dirn: float = field(init=False, repr=False, default=1.0)

    def __post_init__(self):
        self._dirn = 1.0 if self.us[-1] >= self.us[0] else -1.0

    @property
    def u_start(self) -> float:
        return float(self.us[0])

    @property
    def u_end(self) -> float:
        return float(self.us[-1])

    def _locate(self, u: np.ndarray) -> np.ndarray:
        us = self.us if self._dirn > 0 else self.us[::-1]
        idx = np.searchsorted(us, u, side="right") - 1
        idx = np.clip(idx, 0, len(self.us) - 2)
        if self._dirn < 0:
            idx = len(self.us) - 2 - idx
        return idx

    def __call__(self, u):
        """Evaluate the dense interpolant at scalar or array ``u``."""
        scalar = np.isscalar(u) or np.asarray(u).ndim == 0
        uq = np.atleast_1d(np.asarray(u, dtype=float))
        lo = min(self.u_start, self.u_end)
        hi = max(self.u_start, self.u_end)
        slack = 1e-9 * max(hi - lo, abs(hi), 1.0)
        if np.any(uq < lo - slack) or np.any(uq > hi + slack):
            raise ValueError(
                f"query outside trajectory span [{self.u_start:g}, {self.u_end:g}]"
            )
        idx = self._locate(uq)
        h = self.us[idx + 1] - self.us[idx]
        theta = np.clip((uq - self.us[idx]) / h, 0.0, 1.0)[:, None]
        r1, r2, r3, r4, r5 = (self.cont[idx, j, :] for j in range(5))
        out = r1 + theta * (r2 + (1.0 - theta) * (r3 + theta * (r4 + (1.0 - theta) * r5)))
        # step endpoints must reproduce the accepted states bit for bit
        at_end = uq == self.us[-1]
        if np.any(at_end):
            out[at_end] = self.states[-1]
        return out[0] if scalar else out


def _rms(v: np.ndarray) -> float:
    return float(np.sqrt(np.mean(v * v)))


def _initial_step(rhs, u0, y0, f0, dirn, rtol, atol, span):
    scale = atol + rtol * np.abs(y0)
    d0 = _rms(y0 / scale)
    d1 = _rms(f0 / scale)
    h0 = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
    h0 = min(h0, span)
    y1 = y0 + h0 * dirn * f0
    f1 = np.asarray(rhs(u0 + h0 * dirn, y1), dtype=float)
    d2 = _rms((f1 - f0) / scale) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100.0 * h0, h1, span)


def integrate(
    sys: OdeSystem,
    u_start: float,
    state0,
    u_end: float,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    max_step: float = math.inf,
    max_steps: int = 2_000_000,
) -> Trajectory:
    """Integrate ``sys`` from ``u_start`` to ``u_end`` adaptively.

    Embedded 5(4) pair with PI step control; a step is accepted when the
    RMS of the local error against ``atol + rtol * |state|`` is at most one.
    Raises :class:`IntegrationError` on step-size underflow or non-finite
    state, reporting the abscissa of the failure.
    """
    if rtol <= 0.0 or atol <= 0.0:
        raise ValueError("rtol and atol must be positive")
    y = np.asarray(state0, dtype=float).copy()
    if y.shape != (sys.dimension,):
        raise ValueError(f"state0 must have shape ({sys.dimension},), got {y.shape}")
    u = float(u_start)
    u_final = float(u_end)
    if u_final == u:
        raise ValueError("empty integration span")
    dirn = 1.0 if u_final > u else -1.0
    span = abs(u_final - u)

    f = np.asarray(sys.rhs(u, y), dtype=float)
    h = min(_initial_step(sys.rhs, u, y, f, dirn, rtol, atol, span), max_step)

    us = [u]
    states = [y.copy()]
    conts = []
    k = np.empty((7, sys.dimension))
    facold = 1e-4
    was_rejected = False

    eps = np.finfo(float).eps
    for _ in range(max_steps):
        remaining = abs(u_final - u)
        if remaining <= 16.0 * eps * max(abs(u), abs(u_final), 1e-30):
            break
        h = min(h, max_step)
        if h <= 16.0 * eps * max(abs(u), 1e-30):
            raise IntegrationError(f"step size underflow at u={u:.6g}", u=u)
        last = h >= remaining
        if last:
            h = remaining

        k[0] = f
        for i in range(1, 7):
            yi = y + dirn * h * (k[:i].T @ _A[i])
            k[i] = sys.rhs(u + _C[i] * dirn * h, yi)
        y_new = y + dirn * h * (k.T @ _B5)
        if not np.all(np.isfinite(y_new)):
            raise IntegrationError(f"non-finite state at u={u + dirn * h:.6g}", u=u)

        err_vec = h * (k.T @ _E)
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err = _rms(err_vec / scale)

        if err <= 1.0:
            u_new = u_final if last else u + dirn * h
            dy = y_new - y
            conts.append(
                np.stack(
                    [
                        y,
                        dy,
                        dirn * h * k[0] - dy,
                        dy - dirn * h * k[6] - (dirn * h * k[0] - dy),
                        dirn * h * (k.T @ _D),
                    ]
                )
            )
            us.append(u_new)
            states.append(y_new.copy())
            f = k[6].copy()  # FSAL
            u, y = u_new, y_new

            fac11 = err**_EXPO if err > 0.0 else 0.0
            fac = fac11 / facold**_BETA if err > 0.0 else 1.0 / _FAC_MAX
            fac = max(1.0 / _FAC_MAX, min(1.0 / _FAC_MIN, fac / _SAFETY))
            h_new = h / fac
            if was_rejected:
                h_new = min(h_new, h)
            was_rejected = False
            facold = max(err, 1e-4)
            h = h_new
        else:
            h = h / min(1.0 / _FAC_MIN, err**_EXPO / _SAFETY)
            was_rejected = True
    else:
        raise IntegrationError(f"step budget exhausted at u={u:.6g}", u=u)

    return Trajectory(
        us=np.array(us), states=np.array(states), cont=np.array(conts), name=sys.name
    )


def main_ode_field(params: ModelParams) -> OdeSystem:
    """Third-order field for the main regime, state (phi, phi', phi'').

    (b^2/2) u^2 phi''' + [c + (b^2+a) u + b^2 u^2/(2m)] phi''
                       + [a - lam + c/m + a u/m] phi' = 0,  u > 0.

    The leading coefficient vanishes at u = 0, so evaluation there is
    rejected; initial data must be transferred to some u0 > 0 first.
    """
    a, b, c, lam, m = params.a, params.b, params.c, params.lam, params.m
    b2 = b * b

    def rhs(u: float, y: np.ndarray) -> np.ndarray:
        if u <= 0.0:
            raise ValueError(f"main ODE field is singular at u={u:g}; need u > 0")
        coeff2 = c + (b2 + a) * u + b2 * u * u / (2.0 * m)
        coeff1 = a - lam + c / m + a * u / m
        dddphi = -(coeff2 * y[2] + coeff1 * y[1]) / (0.5 * b2 * u * u)
        return np.array([y[1], y[2], dddphi])

    return OdeSystem(dimension=3, rhs=rhs, name="main-phi")


def companion_volterra_field(params: ModelParams, phi_interp) -> OdeSystem:
    """y' = (phi(u) - y) / m, which reproduces the exponential convolution.

    With y(0) = 0 the solution equals (1/m) * int_0^u phi(s) exp(-(u-s)/m) ds,
    so this field turns the integral term of the survival equation into one
    extra ODE component.  ``phi_interp`` maps u to phi(u); queries outside its
    span propagate that interpolant's error.
    """
    m = params.m

    def rhs(u: float, y: np.ndarray) -> np.ndarray:
        return np.array([(float(phi_interp(u)) - y[0]) / m])

    return OdeSystem(dimension=1, rhs=rhs, name="volterra-companion")


def eta_ode_field(params: ModelParams) -> OdeSystem:
    """Second-order field for the capital-stock auxiliary function eta.

    u^2 eta'' + (2 d1 + u/m) u eta' + (d2 u / m) eta = 0, u > 0, with the
    exponents d1, d2 derived from ``params``.  State is (eta, eta').
    """
    from .capitalstock import exponents  # local import, avoids module cycle

    _, d1, d2 = exponents(params)
    m = params.m

    def rhs(u: float, y: np.ndarray) -> np.ndarray:
        if u <= 0.0:
            raise ValueError(f"eta field is singular at u={u:g}; need u > 0")
        ddeta = -((2.0 * d1 + u / m) * u * y[1] + (d2 * u / m) * y[0]) / (u * u)
        return np.array([y[1], ddeta])

    return OdeSystem(dimension=2, rhs=rhs, name="capital-stock-eta")
