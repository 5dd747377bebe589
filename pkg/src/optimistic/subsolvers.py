"""Solvers for the optimistic step  0 in eta P(z) + v + eta H(z) + grad Phi(z) - grad Phi(z_minus)."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
import scipy.linalg

from .geometry import MirrorMap, euclidean_map
from .problems import Predictor, SaddleProblem, composite_min_norm

COND_LIMIT = 1e14


class SubsolverError(RuntimeError):
    pass


class IllConditionedError(SubsolverError):
    pass


class InnerCapError(SubsolverError):
    pass


@dataclass(frozen=True, eq=False)
class SubsolverRequest:
    eta: float
    predictor: Predictor
    v_minus: np.ndarray
    z_minus: np.ndarray
    mm: MirrorMap
    prob: SaddleProblem

    def __post_init__(self):
        if not (self.eta > 0 and math.isfinite(self.eta)):
            raise ValueError(f"stepsize must be positive and finite, got {self.eta}")
        if not np.all(np.isfinite(self.v_minus)):
            raise ValueError("correction vector has non-finite entries")


@dataclass(frozen=True, eq=False)
class SubsolverResult:
    z: np.ndarray
    inner_iterations: int = 0
    inclusion_residual: float = 0.0
    inner_calls: int = 0
    tolerance: Optional[float] = None


def prox_l1_box(z, t, R):
    """Soft-threshold by t, then clip to [-R, R]; applied elementwise."""
    z = np.asarray(z, dtype=float)
    a = np.abs(z)
    out = np.sign(z) * np.minimum(np.maximum(a - t, 0.0), R)
    return float(out) if out.ndim == 0 else out


def inclusion_residual(req: SubsolverRequest, z) -> float:
    """Distance from 0 to eta P(z) + v + eta H(z) + grad Phi(z) - grad Phi(z_minus)."""
    z = np.asarray(z, dtype=float)
    g = req.eta * req.predictor(z) + req.v_minus + req.mm.grad_phi(z) - req.mm.grad_phi(req.z_minus)
    prob = req.prob
    if prob.smooth_unconstrained:
        return float(np.linalg.norm(g))
    return composite_min_norm(g, z, req.eta * prob.lam_reg, prob.radius)


def solve_first_order(req: SubsolverRequest) -> SubsolverResult:
    """Closed-form step for a constant prediction in the Euclidean setup."""
    if req.predictor.kind != "constant":
        raise SubsolverError("closed-form step needs a constant predictor")
    if not req.mm.euclidean:
        raise SubsolverError("closed-form step needs the Euclidean map")
    prob = req.prob
    g = req.eta * req.predictor.F_base + req.v_minus
    if prob.smooth_unconstrained:
        z = req.z_minus - g
    else:
        z = prox_l1_box(req.z_minus - g, req.eta * prob.lam_reg, prob.radius)
    return SubsolverResult(z, 0, inclusion_residual(req, z))


def solve_affine_inclusion(req: SubsolverRequest, cond_limit: float = COND_LIMIT) -> SubsolverResult:
    """Solve (I + eta J)(z - z_minus) = -(eta P(z_minus) + v) by dense LU."""
    pred = req.predictor
    if pred.kind != "affine" and not (pred.kind == "regularized" and pred.p == 2 and pred.lam == 0):
        raise SubsolverError("affine solve needs a first-order Taylor predictor")
    if not req.mm.euclidean:
        raise SubsolverError("affine solve needs the Euclidean map")
    if not req.prob.smooth_unconstrained:
        raise SubsolverError("affine solve handles unconstrained smooth problems only")
    J = pred.jac_base
    d = J.shape[0]
    M = np.eye(d) + req.eta * J
    rhs = -(req.eta * pred(req.z_minus) + req.v_minus)
    if not np.all(np.isfinite(M)):
        raise IllConditionedError("system matrix has non-finite entries")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)  # singularity is reported below
        lu, piv = scipy.linalg.lu_factor(M, check_finite=False)
    if np.any(np.diag(lu) == 0):
        raise IllConditionedError(f"singular system at eta={req.eta:.3e}")
    anorm = np.max(np.sum(np.abs(M), axis=0))
    rcond, info = scipy.linalg.lapack.dgecon(lu, anorm, norm="1")
    if info != 0 or rcond * cond_limit < 1.0:
        raise IllConditionedError(f"condition estimate {1.0 / max(rcond, 1e-300):.3e} exceeds {cond_limit:.1e} "
                                  f"at eta={req.eta:.3e}")
    step = scipy.linalg.lu_solve((lu, piv), rhs, check_finite=False)
    z = req.z_minus + step
    return SubsolverResult(z, 0, float(np.linalg.norm(M @ step - rhs)))


def affine_system_scale(req: SubsolverRequest, z) -> float:
    """Magnitude against which the affine back-substitution residual is judged."""
    J = req.predictor.jac_base
    step = np.asarray(z) - req.z_minus
    M = np.eye(J.shape[0]) + req.eta * J
    rhs = req.eta * req.predictor(req.z_minus) + req.v_minus
    return float(np.linalg.norm(M, 2) * np.linalg.norm(step) + np.linalg.norm(rhs))


def default_inner_tol(eps_outer: float) -> float:
    return min(1e-10, 1e-3 * eps_outer)


def reduced_problem(req: SubsolverRequest) -> SaddleProblem:
    """The 1-strongly monotone operator A(w) = eta P(w) + v + grad Phi(w) - grad Phi(z_minus)."""
    prob, pred, mm = req.prob, req.predictor, req.mm
    eta, v = req.eta, req.v_minus
    shift = mm.grad_phi(req.z_minus)

    def A(w):
        return eta * pred(w) + v + mm.grad_phi(w) - shift

    jac = None
    if mm.euclidean:
        eye = np.eye(prob.dim)

        def jac(w):
            return eye + eta * pred.jacobian(w)

    return SaddleProblem(prob.m, prob.n, A, jac=jac, max_order=1 if jac is not None else 0,
                         lam_reg=eta * prob.lam_reg, radius=prob.radius, mu=1.0, kind="reduced")


def rounding_floor(req: SubsolverRequest) -> float:
    """Smallest inclusion residual that float64 can certify for this step.

    Representing w costs about u ||w|| per entry, which the reduced operator
    magnifies by ||I + eta J||.
    """
    J = req.predictor.jac_base
    gain = 1.0 + req.eta * (np.linalg.norm(J, 2) if J is not None else 0.0)
    scale = max(1.0, float(np.linalg.norm(req.z_minus)))
    return 10.0 * np.finfo(float).eps * math.sqrt(req.z_minus.size) * gain * scale


def solve_regularized_taylor_inclusion(req: SubsolverRequest, inner_tol: float = 1e-10, inner_cap: int = 500,
                                       inner_method: str = "auto") -> SubsolverResult:
    """Iterative solve of the regularized-Taylor step by an inner optimistic method.

    The inner run starts at z_minus and stops once the inclusion residual is at
    most inner_tol. inner_method "first-order" uses the prox step with line
    search; "second-order" uses the affine-model step (smooth unconstrained
    problems only); "auto" picks second-order whenever it applies.
    """
    from . import solvers  # the inner loop is the same driver as the outer one

    pred, prob = req.predictor, req.prob
    if pred.kind not in ("regularized", "affine"):
        raise SubsolverError("iterative solve needs a Taylor-type predictor")
    Lp = prob.lipschitz.get(pred.p)
    if pred.kind == "regularized" and pred.p >= 3 and Lp is not None and pred.lam < Lp:
        raise SubsolverError(f"regularization {pred.lam} below L_{pred.p} = {Lp}; model may not be monotone")
    inner = reduced_problem(req)
    w0 = np.asarray(req.z_minus, dtype=float).copy()
    tol = max(inner_tol, rounding_floor(req))
    r0 = inclusion_residual(req, w0)
    if r0 <= tol:
        return SubsolverResult(w0, 0, r0, 0, tol)
    if inner_method == "auto":
        inner_method = "second-order" if (prob.smooth_unconstrained and inner.jac is not None) else "first-order"
    ident = euclidean_map(prob.dim)
    if inner_method == "second-order":
        cfg = solvers.SolverConfig(method="second-ls", mu=1.0, max_iters=inner_cap, target_residual=tol,
                                   alpha=0.5, beta=0.5, sigma0=1.0)
        traj = solvers.run_second_order(inner, ident, cfg, z0=w0)
    elif inner_method == "first-order":
        cfg = solvers.SolverConfig(method="first-ls", mu=1.0, max_iters=inner_cap, target_residual=tol,
                                   alpha=1.0, beta=0.5, sigma0=1.0 / req.eta)
        traj = solvers.run_first_order_ls(inner, ident, cfg, z0=w0)
    else:
        raise ValueError(f"unknown inner method {inner_method!r}")
    z = traj.z_last
    r = inclusion_residual(req, z)
    if r > tol:
        raise InnerCapError(f"inner solve stopped at residual {r:.3e} > {tol:.3e} after "
                            f"{traj.iterations} iterations (eta={req.eta:.3e})")
    return SubsolverResult(z, traj.iterations, r, traj.total_calls, tol)
