"""Model parameters, solution regimes, and portfolio reduction.

The surplus process is

    dX_t = a X_t dt + b X_t dw_t + c dt - (compound Poisson claims),

with claim intensity ``lam``, exponentially distributed claim sizes of mean
``m``, premium rate ``c``, and a share investment with expected return ``a``
and volatility ``b``.  Degenerate parameter choices (a = b = 0, b = 0, or
c = 0) reduce the survival problem to classical special cases; the regime
classification below selects the applicable solution method.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

__all__ = [
    "ModelParams",
    "PortfolioSpec",
    "Regime",
    "RegimeInfo",
    "classify_regime",
    "effective_params",
    "safety_loading_sign",
]


def _check_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class ModelParams:
    """The five parameters of the surplus model.

    a : expected risky return (1/time)
    b : volatility (1/sqrt(time))
    c : premium rate (currency/time)
    lam : claim intensity (1/time)
    m : mean claim size (currency)

    ``lam`` and ``m`` must be strictly positive; ``a``, ``b``, ``c`` must be
    nonnegative.  Degenerate regimes are selected by passing literal zeros:
    the limits b -> 0 and c -> 0 are singular, so no epsilon snapping is done.
    """

    a: float
    b: float
    c: float
    lam: float
    m: float

    def __post_init__(self):
        for name in ("a", "b", "c", "lam", "m"):
            object.__setattr__(self, name, _check_finite(name, getattr(self, name)))
        if self.lam <= 0:
            raise ValueError(f"lam must be > 0, got {self.lam}")
        if self.m <= 0:
            raise ValueError(f"m must be > 0, got {self.m}")
        for name in ("a", "b", "c"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")

    def robustness(self) -> float:
        """Return 2a/b**2 (infinite when b = 0)."""
        if self.b == 0.0:
            return math.inf
        return 2.0 * self.a / self.b**2


@dataclass(frozen=True)
class PortfolioSpec:
    """A fixed-mix portfolio: fraction ``alpha`` in shares, rest risk-free.

    mu : share expected return, sigma : share volatility, r : risk-free rate.
    """

    mu: float
    sigma: float
    r: float
    alpha: float

    def __post_init__(self):
        for name in ("mu", "sigma", "r", "alpha"):
            object.__setattr__(self, name, _check_finite(name, getattr(self, name)))
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")
        if self.sigma < 0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")
        if self.r < 0:
            raise ValueError(f"r must be >= 0, got {self.r}")


class Regime(Enum):
    """Which solution method applies to a parameter set."""

    MAIN = "main"                    # b > 0, c > 0, robust shares
    CLASSICAL_CL = "classical"       # a = b = 0, positive safety loading
    RISK_FREE = "risk-free"          # b = 0, a > 0
    CAPITAL_STOCK = "capital-stock"  # b > 0, c = 0, robust shares
    NO_SOLUTION = "no-solution"


@dataclass(frozen=True)
class RegimeInfo:
    """Classification result; ``reason`` is set only for NO_SOLUTION."""

    regime: Regime
    reason: str | None = None


REASON_LOADING = "safety loading nonpositive"
REASON_NOT_ROBUST = "shares not robust"
REASON_BORDERLINE = "borderline robustness"


def classify_regime(params: ModelParams) -> RegimeInfo:
    """Classify ``params`` into the unique applicable regime.

    Risky investment (b > 0) admits a nontrivial survival probability only
    when 2a/b**2 > 1; below that threshold ruin is certain and the zero
    solution applies.  Exactly 2a/b**2 = 1 is refused rather than guessed
    (measure-zero boundary with no supporting theory).
    """
    if params.b > 0.0:
        rob = params.robustness()
        if rob < 1.0:
            return RegimeInfo(Regime.NO_SOLUTION, REASON_NOT_ROBUST)
        if rob == 1.0:
            return RegimeInfo(Regime.NO_SOLUTION, REASON_BORDERLINE)
        if params.c == 0.0:
            return RegimeInfo(Regime.CAPITAL_STOCK)
        return RegimeInfo(Regime.MAIN)
    # b == 0
    if params.a > 0.0:
        return RegimeInfo(Regime.RISK_FREE)
    # a == b == 0: classical model, viable only with positive safety loading
    if params.c > params.lam * params.m:
        return RegimeInfo(Regime.CLASSICAL_CL)
    return RegimeInfo(Regime.NO_SOLUTION, REASON_LOADING)


def effective_params(p: PortfolioSpec, c: float, lam: float, m: float) -> ModelParams:
    """Reduce a fixed-mix portfolio to effective share parameters.

    a = alpha*mu + (1 - alpha)*r and b = alpha*sigma; the premium rate and
    claim parameters carry over unchanged.
    """
    a = p.alpha * p.mu + (1.0 - p.alpha) * p.r
    b = p.alpha * p.sigma
    return ModelParams(a=a, b=b, c=c, lam=lam, m=m)


def _sign(x: float) -> int:
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0


def safety_loading_sign(params: ModelParams) -> tuple[int, int]:
    """Return (sign(c - lam*m), sign(m*(a - lam) + c)).

    The first sign is the classical safety loading.  The second controls the
    shape of the survival curve: nonnegative means concave everywhere,
    negative means convex near zero with a single inflection point.
    """
    return (
        _sign(params.c - params.lam * params.m),
        _sign(params.m * (params.a - params.lam) + params.c),
    )
