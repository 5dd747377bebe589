"""Bracket-then-bisect stepsize search with exact subsolver-call accounting.

Trial stepsizes are stored as exponents t with eta = sigma * beta**t. Backtracking
visits t = 2^i - 1, advancing visits t = -(2^i - 1) and bisection averages two
exponents, so every trial is a dyadic rational and the bracket ratio
eta_up / eta_lo = beta**-(t_lo - t_up) is known exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np

from .geometry import MirrorMap
from .problems import Predictor, SaddleProblem, residual
from .subsolvers import SubsolverError, SubsolverRequest, SubsolverResult

BETA_OPTIMAL = "BetaOptimal"
ACCEPTED_INITIAL = "AcceptedInitial"
EARLY_EXIT = "EarlyExitEpsilon"
FIXED = "Fixed"

STEP_CAP = 60


class LineSearchError(RuntimeError):
    def __init__(self, msg, bracket=None):
        super().__init__(msg)
        self.bracket = bracket


@dataclass(frozen=True)
class LineSearchConfig:
    alpha: float
    beta: float
    sigma: float
    epsilon: float = 1e-10
    with_advancing: bool = False

    def __post_init__(self):
        if not 0 < self.alpha <= 1:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")
        if not 0 < self.beta < 1:
            raise ValueError(f"beta must lie in (0, 1), got {self.beta}")
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")


@dataclass(eq=False)
class Trial:
    eta: float
    t: float
    admissible: bool
    z: Optional[np.ndarray] = None
    Fz: Optional[np.ndarray] = None
    Pz: Optional[np.ndarray] = None
    result: Optional[SubsolverResult] = None
    error: Optional[str] = None
    lhs: float = math.nan
    rhs: float = math.nan


@dataclass(eq=False)
class LineSearchOutcome:
    eta: float
    z_next: np.ndarray
    calls: int
    status: str
    bracket: Optional[Tuple[float, float]]
    accepted: Trial
    witness: Optional[Trial] = None
    trials: List[Trial] = field(default_factory=list)
    sigma: float = math.nan

    @property
    def inner_iterations(self) -> int:
        return sum(tr.result.inner_iterations for tr in self.trials if tr.result is not None)


class SearchContext:
    """Everything one iteration's admissibility tests need; counts subsolver calls."""

    def __init__(self, prob: SaddleProblem, mm: MirrorMap, predictor: Predictor, z_minus, v_minus,
                 subsolver: Callable[[SubsolverRequest], SubsolverResult], alpha: float,
                 failure_is_inadmissible: bool = False):
        self.prob = prob
        self.mm = mm
        self.predictor = predictor
        self.z_minus = np.asarray(z_minus, dtype=float)
        self.v_minus = np.asarray(v_minus, dtype=float)
        self.subsolver = subsolver
        self.alpha = alpha
        self.failure_is_inadmissible = failure_is_inadmissible
        self.calls = 0
        self.trials: List[Trial] = []
        self._res = {}

    def test(self, eta: float, t: float = math.nan) -> Trial:
        if not (eta > 0 and math.isfinite(eta)):
            raise LineSearchError(f"trial stepsize {eta} left the floating-point range")
        req = SubsolverRequest(eta, self.predictor, self.v_minus, self.z_minus, self.mm, self.prob)
        self.calls += 1
        try:
            res = self.subsolver(req)
        except SubsolverError as exc:
            if not self.failure_is_inadmissible:
                raise
            tr = Trial(eta, t, False, error=str(exc))
            self.trials.append(tr)
            return tr
        z = res.z
        Fz = self.prob.F(z)
        Pz = self.predictor(z)
        lhs = eta * self.mm.dual_norm(Fz - Pz)
        rhs = 0.5 * self.alpha * self.mm.norm(z - self.z_minus)
        tr = Trial(eta, t, bool(lhs <= rhs), z, Fz, Pz, res, None, lhs, rhs)
        self.trials.append(tr)
        return tr

    def residual(self, tr: Trial) -> float:
        key = id(tr)
        if key not in self._res:
            self._res[key] = residual(self.prob, tr.z, tr.Fz)
        return self._res[key]


def _eta(sigma: float, beta: float, t: float) -> float:
    e = math.log(sigma) + t * math.log(beta)
    if e > 700.0 or e < -740.0:
        raise LineSearchError(f"trial stepsize exp({e:.1f}) leaves the floating-point range")
    try:
        return sigma * beta ** t  # exact for dyadic beta and integer t
    except OverflowError:
        return math.exp(e)


def is_admissible(eta: float, ctx: SearchContext) -> Tuple[bool, Optional[np.ndarray]]:
    tr = ctx.test(eta)
    return tr.admissible, tr.z


def _backtrack(ctx, sigma, beta, top: Trial):
    up = top
    for i in range(1, STEP_CAP + 1):
        t = float(2 ** i - 1)
        tr = ctx.test(_eta(sigma, beta, t), t)
        if tr.admissible:
            return tr, up
        up = tr
    raise LineSearchError(f"backtracking found no admissible stepsize in {STEP_CAP} steps", (None, up.eta))


def _advance(ctx, sigma, beta, epsilon, bottom: Trial):
    lo = bottom
    for i in range(1, STEP_CAP + 1):
        if ctx.residual(lo) <= epsilon:
            return lo, None
        t = -float(2 ** i - 1)
        tr = ctx.test(_eta(sigma, beta, t), t)
        if not tr.admissible:
            return lo, tr
        lo = tr
    if ctx.residual(lo) <= epsilon:
        return lo, None
    raise LineSearchError(f"advancing stayed admissible for {STEP_CAP} steps with residual above epsilon",
                          (lo.eta, None))


def _bisect(ctx, sigma, beta, lo: Trial, up: Trial):
    while lo.t - up.t > 1.0:
        t = 0.5 * (lo.t + up.t)
        tr = ctx.test(_eta(sigma, beta, t), t)
        if tr.admissible:
            lo = tr
        else:
            up = tr
    return lo, up


def _placeholder(eta, t, admissible):
    return Trial(eta, t, admissible)


def backtrack(ctx: SearchContext, sigma: float, beta: float) -> Tuple[float, float]:
    """Shrink from an inadmissible sigma; returns (eta_lo admissible, eta_up inadmissible)."""
    lo, up = _backtrack(ctx, sigma, beta, _placeholder(sigma, 0.0, False))
    return lo.eta, up.eta


def advance(ctx: SearchContext, sigma: float, beta: float, epsilon: float, sigma_trial: Optional[Trial] = None):
    """Grow from an admissible sigma.

    Returns ("bracket", eta_lo, eta_up), or (EARLY_EXIT, eta_lo, None) once the
    residual at eta_lo is at most epsilon. Without ``sigma_trial`` the point
    z(sigma) is recomputed, which costs one extra call.
    """
    if sigma_trial is None:
        sigma_trial = ctx.test(sigma, 0.0)
    if not sigma_trial.admissible:
        raise ValueError("advancing needs an admissible starting stepsize")
    lo, up = _advance(ctx, sigma, beta, epsilon, sigma_trial)
    if up is None:
        return EARLY_EXIT, lo.eta, None
    return "bracket", lo.eta, up.eta


def _snap(t):
    r = round(t)
    return float(r) if abs(t - r) <= 1e-9 * max(1.0, abs(t)) else t


def bisection(ctx: SearchContext, eta_lo: float, eta_up: float, beta: float) -> Tuple[float, float]:
    """Geometric bisection of [eta_lo, eta_up] until eta_up / eta_lo <= 1/beta."""
    if not 0 < eta_lo < eta_up:
        raise ValueError("bisection needs 0 < eta_lo < eta_up")
    t_lo = _snap(math.log(eta_lo / eta_up) / math.log(beta))
    lo, up = _bisect(ctx, eta_up, beta, _placeholder(eta_lo, t_lo, True), _placeholder(eta_up, 0.0, False))
    return lo.eta, up.eta


def line_search(ctx: SearchContext, config: LineSearchConfig) -> LineSearchOutcome:
    sigma, beta = config.sigma, config.beta
    if ctx.alpha != config.alpha:
        ctx.alpha = config.alpha
    start = ctx.calls
    first = len(ctx.trials)
    top = ctx.test(sigma, 0.0)
    if not top.admissible:
        lo, up = _backtrack(ctx, sigma, beta, top)
        lo, up = _bisect(ctx, sigma, beta, lo, up)
        status = BETA_OPTIMAL
    elif not config.with_advancing:
        lo, up, status = top, None, ACCEPTED_INITIAL
    else:
        lo, up = _advance(ctx, sigma, beta, config.epsilon, top)
        if up is None:
            status = EARLY_EXIT
        else:
            lo, up = _bisect(ctx, sigma, beta, lo, up)
            status = BETA_OPTIMAL
    bracket = (lo.eta, up.eta) if up is not None else None
    return LineSearchOutcome(lo.eta, lo.z, ctx.calls - start, status, bracket, lo, up,
                             ctx.trials[first:], sigma)


def fixed_step(ctx: SearchContext, eta: float) -> LineSearchOutcome:
    """Single subsolver call at a prescribed stepsize; the admissibility verdict is recorded only."""
    start = ctx.calls
    tr = ctx.test(eta, 0.0)
    if tr.z is None:
        raise LineSearchError(f"subsolver failed at the fixed stepsize: {tr.error}")
    return LineSearchOutcome(eta, tr.z, ctx.calls - start, FIXED, None, tr, None, [tr], eta)


def calls_bound_without_advancing(sigma: float, eta: float, beta: float) -> float:
    """2 log2 log_{1/beta}(sigma^2 / (beta^2 eta^2))."""
    x = math.log(sigma ** 2 / (beta ** 2 * eta ** 2)) / math.log(1 / beta)
    return 2 * math.log2(x)


def calls_bound_with_advancing(sigma: float, eta: float, beta: float) -> float:
    """2 log2 log_{1/beta}(max(sigma^2/eta^2, eta^2/sigma^2) / beta^2)."""
    r = abs(math.log(sigma / eta))
    x = (2 * r + 2 * math.log(1 / beta)) / math.log(1 / beta)
    return 2 * math.log2(x)
