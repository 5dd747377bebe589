"""Outer optimistic loops, a mirror-prox baseline, theory bounds and diagnostics."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable, List, Optional

import numpy as np

from .geometry import MirrorMap, bregman_distance, euclidean_map
from .linesearch import (EARLY_EXIT, LineSearchConfig, LineSearchOutcome, SearchContext, fixed_step,
                         line_search)
from .problems import Predictor, SaddleProblem, make_predictor, residual
from .subsolvers import (SubsolverRequest, default_inner_tol, solve_affine_inclusion, solve_first_order,
                         solve_regularized_taylor_inclusion)

log = logging.getLogger(__name__)

METHODS = ("first-fixed", "first-ls", "second-ls", "pth-ls", "mirror-prox")
TINY = np.finfo(float).tiny


@dataclass(frozen=True)
class SolverConfig:
    """Run parameters. ``M`` is the fixed-step constant (default 2 L1), ``eta`` the
    mirror-prox stepsize (default 1/(2 L1)) and ``lam`` the regularization of the
    p-th order model (default L_p)."""

    method: str = "first-ls"
    mu: float = 0.0
    max_iters: int = 1000
    target_residual: float = 1e-9  # 0 runs the whole budget
    alpha: float = 1.0
    beta: float = 0.5
    sigma0: float = 1.0
    M: Optional[float] = None
    eta: Optional[float] = None
    p: int = 3
    lam: Optional[float] = None
    record_diagnostics: bool = False
    inner_method: str = "auto"
    inner_cap: int = 500
    inner_tol: Optional[float] = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; expected one of {METHODS}")
        if self.mu < 0:
            raise ValueError("mu must be nonnegative")
        if self.max_iters < 0 or int(self.max_iters) != self.max_iters:
            raise ValueError("max_iters must be a nonnegative integer")
        if self.target_residual < 0:
            raise ValueError("target residual must be nonnegative")
        if self.p < 2:
            raise ValueError("p must be at least 2")
        self.ls  # validates alpha, beta, sigma0

    @property
    def ls(self) -> LineSearchConfig:
        return LineSearchConfig(self.alpha, self.beta, self.sigma0, max(self.target_residual, TINY),
                                self.method in ("second-ls", "pth-ls"))


def eta_hat_rule(eta_prev: float, mu: float) -> float:
    return eta_prev / (1.0 + mu * eta_prev)


@dataclass(eq=False)
class IterationRecord:
    """Iteration k: stepsize eta_k, correction v_k at z_k, and the new point z_{k+1}."""

    k: int
    eta: float
    eta_hat: float
    calls: int
    status: str
    z: np.ndarray
    z_prev: np.ndarray
    v: np.ndarray
    residual: float
    zeta: float
    step_norm: float
    model_error: float
    avg: np.ndarray
    outcome: Optional[LineSearchOutcome] = None
    predictor: Optional[Predictor] = None
    gap: Optional[float] = None
    dist2: Optional[float] = None
    lyapunov: Optional[float] = None
    inner_iterations: int = 0

    @property
    def bracket(self):
        return None if self.outcome is None else self.outcome.bracket


@dataclass(eq=False)
class Trajectory:
    z0: np.ndarray
    method: str
    mu: float
    alpha: float
    beta: float
    sigma0: float
    epsilon: float
    records: List[IterationRecord] = field(default_factory=list)
    status: str = "running"
    residual0: float = math.nan
    z_ref: Optional[np.ndarray] = None
    lyapunov0: Optional[float] = None
    gap0: Optional[float] = None
    inner_tol: Optional[float] = None

    @property
    def iterations(self) -> int:
        return len(self.records)

    @property
    def z_last(self) -> np.ndarray:
        return self.records[-1].z if self.records else self.z0

    @property
    def averaged(self) -> np.ndarray:
        return self.records[-1].avg if self.records else self.z0

    @property
    def total_calls(self) -> int:
        return sum(r.calls for r in self.records)

    @property
    def calls_per_iteration(self) -> float:
        return self.total_calls / max(self.iterations, 1)

    @property
    def etas(self) -> np.ndarray:
        return np.array([r.eta for r in self.records])

    @property
    def final_residual(self) -> float:
        return self.records[-1].residual if self.records else self.residual0

    def alpha_eff(self) -> float:
        """Smallest alpha for which every recorded step satisfies the stepsize condition."""
        vals = [2 * r.eta * r.model_error / r.step_norm for r in self.records if r.step_norm > 0]
        return max(vals, default=0.0)


# ---------------------------------------------------------------- diagnostics

def lyapunov_value(mm: MirrorMap, z_k, z_km1, eta_km1: float, mu: float, alpha: float,
                   model_gap, z_ref) -> float:
    """V(z_k, z_{k-1}; z_ref) with model_gap = F(z_k) - P(z_k; I_{k-1})."""
    z_k = np.asarray(z_k, dtype=float)
    s = 1.0 + eta_km1 * mu
    d = z_k - np.asarray(z_km1, dtype=float)
    return (-(eta_km1 / s) * float(np.dot(model_gap, z_k - z_ref)) + bregman_distance(mm, z_ref, z_k)
            + alpha * float(np.dot(d, d)) / (4 * s * s))


def zeta_sequence(traj: Trajectory, mu: Optional[float] = None) -> np.ndarray:
    """zeta_0 = 1 and zeta_k = prod_{l<k} 1/(1 + eta_l mu)."""
    mu = traj.mu if mu is None else mu
    out = [1.0]
    for r in traj.records:
        out.append(out[-1] / (1.0 + r.eta * mu))
    return np.array(out)


def simulated_zeta(C: float, N: int) -> np.ndarray:
    """1/zeta_k = 1 + (sum_{l<k} 1/zeta_l)^(3/2) / C with zeta_0 = 1."""
    if C <= 0:
        raise ValueError("C must be positive")
    inv = [1.0]
    total = 1.0
    for _ in range(1, N + 1):
        nxt = 1.0 + total ** 1.5 / C
        inv.append(nxt)
        total += nxt
    return 1.0 / np.array(inv)


# ---------------------------------------------------------------- generic loop

def run_gom(prob: SaddleProblem, mm: Optional[MirrorMap], predictor_factory: Callable[[np.ndarray, np.ndarray], Predictor],
            config: SolverConfig, subsolver: Callable[[SubsolverRequest], object], *,
            fixed_eta: Optional[float] = None, fixed_eta_hat: Optional[float] = None,
            alpha: Optional[float] = None, failure_is_inadmissible: bool = False, z0=None, z_ref=None,
            gap_fn: Optional[Callable] = None) -> Trajectory:
    """Optimistic iteration with either a fixed stepsize or the bracket-then-bisect search.

    Each step computes v_k = eta_hat_k (F(z_k) - P(z_k; I_{k-1})) once and hands it
    to the subsolver; the first step uses P(z_0; I_{-1}) = F(z_0), so v_0 = 0.
    """
    mm = mm if mm is not None else euclidean_map(prob.dim)
    mu = config.mu
    if prob.mu > 0 and mu == 0:
        log.warning("problem is strongly monotone (mu=%g) but the mu=0 correction rule is in use", prob.mu)
    alpha = config.alpha if alpha is None else alpha
    eps = config.target_residual
    z = prob.check_point(prob.zeros() if z0 is None else z0).copy()
    Fz = prob.F(z)
    P_prev = Fz
    traj = Trajectory(z.copy(), config.method, mu, alpha, config.beta, config.sigma0, eps, z_ref=z_ref)
    traj.residual0 = residual(prob, z, Fz)
    if z_ref is not None:
        traj.lyapunov0 = bregman_distance(mm, z_ref, z)
    if gap_fn is not None:
        traj.gap0 = gap_fn(z)
    if eps > 0 and traj.residual0 <= eps:
        traj.status = "converged"
        return traj
    ls_cfg = config.ls
    sigma = config.sigma0
    eta_prev = None
    zeta = 1.0
    wsum = 0.0
    acc = np.zeros_like(z)
    for k in range(config.max_iters):
        if k == 0:
            eta_hat = fixed_eta_hat if fixed_eta_hat is not None else math.nan
            v = np.zeros_like(z)
        else:
            eta_hat = fixed_eta_hat if fixed_eta_hat is not None else eta_hat_rule(eta_prev, mu)
            v = eta_hat * (Fz - P_prev)
        pred = predictor_factory(z, Fz)
        ctx = SearchContext(prob, mm, pred, z, v, subsolver, alpha, failure_is_inadmissible)
        if fixed_eta is not None:
            out = fixed_step(ctx, fixed_eta)
        else:
            out = line_search(ctx, LineSearchConfig(ls_cfg.alpha, ls_cfg.beta, sigma, ls_cfg.epsilon,
                                                    ls_cfg.with_advancing))
        acc_tr = out.accepted
        z_next, F_next, P_next = acc_tr.z, acc_tr.Fz, acc_tr.Pz
        eta = out.eta
        wsum += eta
        acc += eta * z_next
        avg = acc / wsum
        res = residual(prob, z_next, F_next)
        zeta /= (1.0 + eta * mu)
        step = z_next - z
        rec = IterationRecord(k, eta, eta_hat, out.calls, out.status, z_next, z, v, res, zeta,
                              mm.norm(step), mm.dual_norm(F_next - P_next), avg, out, pred,
                              inner_iterations=out.inner_iterations)
        if gap_fn is not None:
            rec.gap = gap_fn(avg)
        if z_ref is not None:
            d = z_next - z_ref
            rec.dist2 = float(np.dot(d, d))
            rec.lyapunov = lyapunov_value(mm, z_next, z, eta, mu, alpha, F_next - P_next, z_ref)
        traj.records.append(rec)
        eta_prev = eta
        sigma = eta / config.beta
        z, Fz, P_prev = z_next, F_next, P_next
        if (eps > 0 and res <= eps) or out.status == EARLY_EXIT:
            traj.status = "converged"
            return traj
    traj.status = "max_iters"
    return traj


def _constant_factory(prob):
    return lambda z, Fz: make_predictor("constant", prob, z, Fz)


def run_first_order_fixed(prob: SaddleProblem, mm: Optional[MirrorMap], M: Optional[float] = None,
                          config: Optional[SolverConfig] = None, **kw) -> Trajectory:
    """Constant stepsize 1/M; eta_hat = 1/(M + mu). One prox call per iteration."""
    config = config or SolverConfig(method="first-fixed")
    L1 = prob.lipschitz.get(1)
    M = M if M is not None else config.M
    if M is None:
        if L1 is None:
            raise ValueError("fixed stepsize needs M or a known L1")
        M = 2 * L1
    if L1 is None:
        log.warning("L1 unknown; cannot confirm M >= 2 L1")
    elif M < 2 * L1 * (1 - 1e-12):
        raise ValueError(f"M = {M} is below 2 L1 = {2 * L1}")
    alpha = 2 * L1 / M if L1 is not None else 1.0
    return run_gom(prob, mm, _constant_factory(prob), config, solve_first_order, fixed_eta=1.0 / M,
                   fixed_eta_hat=1.0 / (M + config.mu), alpha=alpha, **kw)


def run_first_order_ls(prob: SaddleProblem, mm: Optional[MirrorMap], config: SolverConfig, **kw) -> Trajectory:
    """Line search without advancing, warm started at eta_{k-1}/beta."""
    return run_gom(prob, mm, _constant_factory(prob), config, solve_first_order, **kw)


def run_second_order(prob: SaddleProblem, mm: Optional[MirrorMap], config: SolverConfig, **kw) -> Trajectory:
    """Affine-model steps with advancing line search; ill-conditioned trials count as inadmissible."""
    if not prob.smooth_unconstrained:
        raise ValueError("second-order steps are implemented for unconstrained smooth problems")
    if prob.jac is None:
        raise ValueError("second-order steps need a Jacobian oracle")
    if not config.ls.with_advancing:
        config = replace(config, method="second-ls")
    factory = lambda z, Fz: make_predictor("affine", prob, z, Fz)
    return run_gom(prob, mm, factory, config, solve_affine_inclusion, failure_is_inadmissible=True, **kw)


def run_pth_order(prob: SaddleProblem, mm: Optional[MirrorMap], p: Optional[int] = None, lam: Optional[float] = None,
                  config: Optional[SolverConfig] = None, **kw) -> Trajectory:
    """Regularized (p-1)-th order Taylor steps solved by an inner optimistic run."""
    config = config or SolverConfig(method="pth-ls")
    mm = mm if mm is not None else euclidean_map(prob.dim)
    p = p if p is not None else config.p
    lam = lam if lam is not None else config.lam
    Lp = prob.lipschitz.get(p)
    if lam is None:
        if Lp is None and p >= 3:
            raise ValueError(f"lam not given and L_{p} unknown")
        lam = Lp if Lp is not None else 0.0
    if p >= 3 and Lp is not None and lam < Lp:
        raise ValueError(f"lam = {lam} must be at least L_{p} = {Lp}")
    inner_tol = config.inner_tol if config.inner_tol is not None else default_inner_tol(max(config.target_residual, TINY))
    factory = lambda z, Fz: make_predictor("regularized", prob, z, Fz, mm, p, lam)

    def sub(req):
        return solve_regularized_taylor_inclusion(req, inner_tol, config.inner_cap, config.inner_method)

    if not config.ls.with_advancing:
        config = replace(config, method="pth-ls")
    traj = run_gom(prob, mm, factory, config, sub, failure_is_inadmissible=False, **kw)
    traj.inner_tol = inner_tol
    return traj


def run_mirror_prox(prob: SaddleProblem, mm: Optional[MirrorMap], eta: Optional[float] = None,
                    config: Optional[SolverConfig] = None, z0=None, z_ref=None, gap_fn=None) -> Trajectory:
    """Two prox steps per iteration, both centered at z_k; averages the midpoints."""
    config = config or SolverConfig(method="mirror-prox")
    mm = mm if mm is not None else euclidean_map(prob.dim)
    eta = eta if eta is not None else config.eta
    if eta is None:
        L1 = prob.lipschitz.get(1)
        if L1 is None:
            raise ValueError("mirror-prox needs eta or a known L1")
        eta = 1.0 / (2 * L1)
    z = prob.check_point(prob.zeros() if z0 is None else z0).copy()
    Fz = prob.F(z)
    traj = Trajectory(z.copy(), "mirror-prox", config.mu, 1.0, math.nan, eta, config.target_residual, z_ref=z_ref)
    traj.residual0 = residual(prob, z, Fz)
    if gap_fn is not None:
        traj.gap0 = gap_fn(z)
    if 0 < config.target_residual and traj.residual0 <= config.target_residual:
        traj.status = "converged"
        return traj
    zero = np.zeros_like(z)
    acc = np.zeros_like(z)
    wsum = 0.0
    for k in range(config.max_iters):
        half = solve_first_order(SubsolverRequest(eta, make_predictor("constant", prob, z, Fz), zero, z, mm, prob)).z
        F_half = prob.F(half)
        nxt = solve_first_order(SubsolverRequest(eta, make_predictor("constant", prob, half, F_half), zero, z, mm, prob)).z
        F_next = prob.F(nxt)
        wsum += eta
        acc += eta * half
        avg = acc / wsum
        res = residual(prob, nxt, F_next)
        rec = IterationRecord(k, eta, math.nan, 2, "Fixed", nxt, z, zero, res, 1.0,
                              mm.norm(nxt - z), mm.dual_norm(F_next - F_half), avg)
        if gap_fn is not None:
            rec.gap = gap_fn(avg)
        if z_ref is not None:
            d = nxt - z_ref
            rec.dist2 = float(np.dot(d, d))
        traj.records.append(rec)
        z, Fz = nxt, F_next
        if 0 < config.target_residual and res <= config.target_residual:
            traj.status = "converged"
            return traj
    traj.status = "max_iters"
    return traj


def run(prob: SaddleProblem, config: SolverConfig, mm: Optional[MirrorMap] = None, **kw) -> Trajectory:
    """Dispatch on config.method."""
    if config.method == "first-fixed":
        return run_first_order_fixed(prob, mm, config.M, config, **kw)
    if config.method == "first-ls":
        return run_first_order_ls(prob, mm, config, **kw)
    if config.method == "second-ls":
        return run_second_order(prob, mm, config, **kw)
    if config.method == "pth-ls":
        return run_pth_order(prob, mm, config.p, config.lam, config, **kw)
    return run_mirror_prox(prob, mm, config.eta, config, **kw)


# ---------------------------------------------------------------- theory

def _log_inv_beta(x: float, beta: float) -> float:
    return math.log(x) / math.log(1.0 / beta)


@dataclass(frozen=True)
class TheoryBundle:
    """Constants and bound curves for one choice of (alpha, beta, L_Phi, p)."""

    alpha: float
    beta: float
    L_phi: float
    p: int
    gamma2: float
    gamma_p: float
    L_p_phi: Optional[float] = None
    kappa_p: Optional[float] = None
    kappa_tilde_p: Optional[float] = None
    L_p: Optional[float] = None
    lam: Optional[float] = None
    mu: Optional[float] = None
    D0: Optional[float] = None

    # first order
    @staticmethod
    def fixed_gap_bound(M: float, m: int, n: int, R: float, N) -> np.ndarray:
        return M * (m + n) * R ** 2 / (2.0 * np.asarray(N, dtype=float))

    @staticmethod
    def fixed_linear_rate_bound(M: float, mu: float, dist0_sq: float, N) -> np.ndarray:
        return dist0_sq * (M / (2.0 * mu + M)) ** np.asarray(N, dtype=float)

    def first_ls_calls_bound(self, N: int, sigma0: float, L1: float) -> float:
        inner = 4.0 + (2.0 / N) * _log_inv_beta(2.0 * sigma0 * L1 / self.alpha, self.beta)
        return max(2.0 * N, 2.0 * N * math.log2(inner)) if inner > 0 else 2.0 * N

    # second order
    def second_gap_bound(self, L2: float, Dz: float, D0: float, N) -> np.ndarray:
        return self.gamma2 * L2 * Dz * math.sqrt(D0) * np.asarray(N, dtype=float) ** -1.5

    def second_calls_bound(self, N: int, sigma0: float, L2: float, D0: float, eps: float) -> float:
        a, b = self.alpha, self.beta
        t1 = _log_inv_beta(1.0 + sigma0 ** 2 * self.gamma2 ** 2 * L2 ** 2 * D0 / N, b)
        t2 = _log_inv_beta(1.0 + 2.0 * (a + 1.0) ** 2 * D0 / (sigma0 ** 2 * (1.0 - a) * N * eps ** 2), b)
        return 2.0 * N * math.log2(4.0 + 2.0 * t1 + 2.0 * t2)

    def second_step_lower_bound(self, L2: float, step_norm: float, v_norm: float) -> float:
        """Smallest stepsize a beta-optimal second-order step may take."""
        Lf = self.L_phi
        return (self.alpha * self.beta ** 2 / L2) / (Lf ** 1.5 * step_norm + (self.beta + Lf ** 0.5) * v_norm)

    def second_iteration_bound(self, eps: float) -> float:
        """Iterations to reach D(z*, z) <= eps in the strongly monotone case."""
        a, g, k2 = self.alpha, self.gamma2, self.kappa_p
        if self.mu is None or self.L_p is None or self.D0 is None or k2 is None:
            raise ValueError("iteration bound needs mu, L2 and D0")
        c = 1.0 / (1.0 - 2.0 ** (-1.0 / 3.0))
        thresh = self.mu ** 2 / ((2 - a) * g ** 2 * self.L_p ** 2)
        if eps >= thresh:
            return max(c * (g * k2) ** (2 / 3) + math.log2(2 * self.D0 / ((2 - a) * eps)) + 1, 1.0)
        return (max(c * (g * k2) ** (2 / 3) + 2 * math.log2(g * k2) + 2, 1.0)
                + math.log(math.log2(2 * self.mu ** 2 / ((2 - a) * g ** 2 * self.L_p ** 2 * eps)), 1.5) + 1)

    # p-th order
    def pth_gap_bound(self, Dz: float, D0: float, N) -> np.ndarray:
        p = self.p
        return (self.gamma_p ** (p - 1) * self.L_p_phi * Dz * D0 ** ((p - 1) / 2)
                * np.asarray(N, dtype=float) ** (-(p + 1) / 2))

    def pth_calls_bound(self, N: int, sigma0: float, D0: float, eps: float) -> float:
        a, b, p = self.alpha, self.beta, self.p
        q = 2.0 / (p - 1)
        t1 = _log_inv_beta(1.0 + sigma0 ** q * self.gamma_p ** 2 * self.L_p_phi ** q * D0 / N, b)
        t2 = _log_inv_beta(1.0 + 2.0 * (a + self.L_phi) ** 2 * D0 / (sigma0 ** 2 * (1.0 - a) * N * eps ** 2), b)
        return 2.0 * N * math.log2(4.0 + 2.0 * (p - 1) * t1 + 2.0 * t2)

    def pth_step_lower_bound(self, step_norm: float, v_norm: float) -> float:
        p, Lf = self.p, self.L_phi
        denom = 2.0 * self.L_p_phi * (Lf ** 1.5 * step_norm + (self.beta + Lf ** 0.5) * v_norm) ** (p - 1)
        return math.factorial(p) * self.alpha * self.beta ** p / denom

    def pth_iteration_bound(self, eps: float) -> float:
        a, p, g, kt = self.alpha, self.p, self.gamma_p, self.kappa_tilde_p
        if self.mu is None or self.L_p_phi is None or self.D0 is None or kt is None:
            raise ValueError("iteration bound needs mu, L_p and D0")
        c = 1.0 / (1.0 - 2.0 ** (-(p - 1) / (p + 1)))
        ratio = (self.mu / self.L_p_phi) ** (2.0 / (p - 1))
        if eps >= ratio / ((2 - a) * g ** 2):
            return max(c * kt ** (2 / (p + 1)) + math.log2(2 * self.D0 / ((2 - a) * eps)) + 1, 1.0)
        return (max(c * kt ** (2 / (p + 1)) + 2 * math.log2(kt) / (p - 1) + 2, 1.0)
                + math.log(math.log2(2 * ratio / ((2 - a) * g ** 2 * eps)), (p + 1) / 2) + 1)

    # strongly monotone distance envelope
    def zeta_distance_bound(self, dist0_sq: float, zeta) -> np.ndarray:
        return 2.0 * dist0_sq / (2.0 - self.alpha) * np.asarray(zeta, dtype=float)


def gamma2_constant(alpha: float, beta: float, L_phi: float = 1.0) -> float:
    if not 0 < alpha < 1:
        raise ValueError("gamma_2 needs alpha in (0, 1)")
    return math.sqrt(2.0 / (1.0 - alpha)) * (L_phi ** 1.5 / (alpha * beta ** 2) + (beta + L_phi ** 0.5) / (2 * beta ** 2))


def gamma_p_constant(alpha: float, beta: float, p: int, L_phi: float = 1.0) -> float:
    if not 0 < alpha < 1:
        raise ValueError("gamma_p needs alpha in (0, 1)")
    c = (2.0 / (math.factorial(p) * alpha * beta ** p)) ** (1.0 / (p - 1))
    return (math.sqrt(2.0 / (1.0 - alpha)) * L_phi ** 1.5 * c
            + c * alpha * (beta + L_phi ** 0.5) / math.sqrt(2.0 * (1.0 - alpha)))


def regularized_lipschitz(L_p: float, p: int, lam: float, L_phi: float = 1.0) -> float:
    """L_p(Phi, lam) = L_p + p L_Phi^((p+1)/2) lam."""
    return L_p + p * L_phi ** ((p + 1) / 2) * lam


def theory_constants(alpha: float, beta: float, L_phi: float = 1.0, p: int = 2, lam: Optional[float] = None,
                     L_p: Optional[float] = None, mu: Optional[float] = None, D0: Optional[float] = None,
                     need_kappa: bool = False) -> TheoryBundle:
    if p < 2:
        raise ValueError("p must be at least 2")
    g2 = gamma2_constant(alpha, beta, L_phi)
    gp = gamma_p_constant(alpha, beta, p, L_phi)
    Lpp = None
    if L_p is not None:
        Lpp = regularized_lipschitz(L_p, p, lam or 0.0, L_phi)
    kappa = kappa_t = None
    if need_kappa and not mu:
        raise ValueError("condition numbers are undefined for mu = 0")
    if mu and L_p is not None and D0 is not None:
        kappa = L_p * D0 ** ((p - 1) / 2) / mu
        kappa_t = gp ** (p - 1) * Lpp * D0 ** ((p - 1) / 2) / mu
    return TheoryBundle(alpha, beta, L_phi, p, g2, gp, Lpp, kappa, kappa_t, L_p, lam, mu, D0)


# prob2 overlays: the inner minimizer of the restricted gap has squared norm
# (2/L2)||A^T y||, the outer maximizer has norm R, so D(z, 0) is half their sum.

def prob2_bound_bracket(prob: SaddleProblem, z_avg, R_dual: float, literal: bool = False) -> float:
    x, y = prob.split(z_avg)
    A, b, L2 = prob.data["A"], prob.data["b"], prob.data["L2"]
    s = 2.0 / L2 * np.linalg.norm(A.T @ y)
    if literal:
        return s + R_dual ** 2 * np.linalg.norm(A @ x - b) ** 2
    return s + R_dual ** 2


def prob2_stepsize_gap_bound(prob, z_avg, R_dual, eta_sum, literal=False) -> float:
    return 0.5 * prob2_bound_bracket(prob, z_avg, R_dual, literal) / eta_sum


def prob2_apriori_gap_bound(prob, z_avg, R_dual, z_star, N, gamma2, literal=False) -> float:
    L2 = prob.data["L2"]
    return (gamma2 * L2 / (2 * math.sqrt(2)) * prob2_bound_bracket(prob, z_avg, R_dual, literal)
            * np.linalg.norm(z_star) * N ** -1.5)
