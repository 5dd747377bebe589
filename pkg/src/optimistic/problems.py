"""Saddle problems, derivative oracles, Taylor models and optimality metrics.

Points are flat vectors z = (x, y) with x in R^m and y in R^n. The operator is
F(z) = (grad_x f, -grad_y f); the set-valued part H collects the l1 subgradient
and the normal cone of an optional box ||.||_inf <= R on both blocks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace
from types import MappingProxyType
from typing import Callable, Mapping, Optional

import numpy as np

from .geometry import MirrorMap, bregman_distance

RNG_NAME = "PCG64"

KINDS = ("prob1", "prob2", "prob2_sc", "prob_p3")

# desk-scale defaults; paper_scale() swaps in the large sizes
_DEFAULTS = {
    "prob1": dict(m=60, n=30, lam=0.1, mu=0.0, R=0.05),
    "prob2": dict(n=50, L2=10.0, mu=0.0),
    "prob2_sc": dict(m=40, n=20, L2=1.0e4, c=100.0, mu=1.0),
    "prob_p3": dict(m=20, n=10, c3=10.0, mu=0.0),
}
_PAPER_SIZES = {
    "prob1": dict(m=600, n=300),
    "prob2": dict(n=200),
    "prob2_sc": dict(m=400, n=200),
    "prob_p3": dict(m=60, n=30),
}


@dataclass(frozen=True)
class ProblemSpec:
    """Which generator to use and its parameters; None means the kind's default."""

    kind: str
    m: Optional[int] = None
    n: Optional[int] = None
    lam: Optional[float] = None
    mu: Optional[float] = None
    R: Optional[float] = None
    L2: Optional[float] = None
    c: Optional[float] = None
    c3: Optional[float] = None

    def resolved(self) -> "ProblemSpec":
        if self.kind not in _DEFAULTS:
            raise ValueError(f"unknown problem kind {self.kind!r}; expected one of {KINDS}")
        vals = dict(_DEFAULTS[self.kind])
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name != "kind" and v is not None:
                vals[f.name] = v
        if self.kind == "prob2":
            vals["m"] = vals["n"]
        return replace(self, **vals)

    def paper_scale(self) -> "ProblemSpec":
        return replace(self, **_PAPER_SIZES[self.kind])

    def items(self) -> dict:
        r = self.resolved()
        return {f.name: getattr(r, f.name) for f in fields(r) if getattr(r, f.name) is not None}


@dataclass(frozen=True, eq=False)
class SaddleProblem:
    m: int
    n: int
    F: Callable[[np.ndarray], np.ndarray]
    jac: Optional[Callable[[np.ndarray], np.ndarray]] = None
    # directional(i, z, h) returns D^i F(z)[h]^i without forming tensors
    directional: Optional[Callable[[int, np.ndarray, np.ndarray], np.ndarray]] = None
    max_order: float = 0
    # second_jac(z, h) returns the matrix u -> D^2 F(z)[h, u]
    second_jac: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None
    lam_reg: float = 0.0
    radius: float = math.inf
    mu: float = 0.0
    lipschitz: Mapping[int, float] = field(default_factory=dict)
    kind: str = "custom"
    data: Mapping[str, object] = field(default_factory=dict)
    spec: Optional[ProblemSpec] = None
    seed: Optional[int] = None

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError("block dimensions must be positive")
        if self.mu < 0:
            raise ValueError("mu must be nonnegative")
        if self.radius <= 0:
            raise ValueError("box radius must be positive")
        if self.lam_reg < 0:
            raise ValueError("l1 weight must be nonnegative")

    @property
    def dim(self) -> int:
        return self.m + self.n

    @property
    def composite(self) -> str:
        return "l1" if self.lam_reg > 0 else "none"

    @property
    def feasible(self) -> str:
        return "box" if math.isfinite(self.radius) else "all"

    @property
    def smooth_unconstrained(self) -> bool:
        return self.composite == "none" and self.feasible == "all"

    def split(self, z):
        z = np.asarray(z)
        return z[: self.m], z[self.m :]

    def join(self, x, y) -> np.ndarray:
        return np.concatenate([np.asarray(x, dtype=float), np.asarray(y, dtype=float)])

    def zeros(self) -> np.ndarray:
        return np.zeros(self.dim)

    def check_point(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        if z.shape != (self.dim,):
            raise ValueError(f"expected a point of shape ({self.dim},), got {z.shape}")
        if not np.all(np.isfinite(z)):
            raise ValueError("point has non-finite entries")
        return z


class DerivativeUnavailable(ValueError):
    pass


# ---------------------------------------------------------------- oracles

def eval_F(prob: SaddleProblem, z) -> np.ndarray:
    z = prob.check_point(z)
    if prob.feasible == "box" and np.max(np.abs(z)) > prob.radius * (1 + 1e-12):
        raise ValueError("point lies outside the box")
    return prob.F(z)


def eval_jac(prob: SaddleProblem, z) -> np.ndarray:
    if prob.jac is None:
        raise DerivativeUnavailable("problem has no Jacobian oracle")
    return prob.jac(prob.check_point(z))


def _directional(prob: SaddleProblem, i: int, z, h) -> np.ndarray:
    if i > prob.max_order:
        raise DerivativeUnavailable(f"no derivative oracle of order {i}")
    if prob.directional is not None:
        return prob.directional(i, z, h)
    if i == 1 and prob.jac is not None:
        return prob.jac(z) @ h
    raise DerivativeUnavailable(f"no derivative oracle of order {i}")


def eval_taylor(prob: SaddleProblem, order: int, z_eval, z_base) -> np.ndarray:
    """F(z_base) + sum_{i<=order} D^i F(z_base)[h]^i / i!  with h = z_eval - z_base."""
    if order < 0:
        raise ValueError("Taylor order must be nonnegative")
    z_eval = prob.check_point(z_eval)
    z_base = prob.check_point(z_base)
    h = z_eval - z_base
    out = prob.F(z_base).copy()
    fact = 1.0
    for i in range(1, order + 1):
        fact *= i
        out += _directional(prob, i, z_base, h) / fact
    return out


def regularizer(mm: MirrorMap, p: int, lam: float, z_eval, z_base) -> np.ndarray:
    """(lam/(p-1)!) (2 D(z_eval, z_base))^((p-1)/2) (grad Phi(z_eval) - grad Phi(z_base))."""
    if lam == 0.0:
        return np.zeros_like(np.asarray(z_eval, dtype=float))
    d = bregman_distance(mm, z_eval, z_base)
    scale = lam / math.factorial(p - 1) * (2.0 * d) ** ((p - 1) / 2.0)
    return scale * (mm.grad_phi(z_eval) - mm.grad_phi(z_base))


def eval_regularized_taylor(prob: SaddleProblem, mm: MirrorMap, p: int, lam: float, z_eval, z_base) -> np.ndarray:
    if p < 2:
        raise ValueError("regularized Taylor model needs p >= 2")
    if lam < 0:
        raise ValueError("regularization weight must be nonnegative")
    return eval_taylor(prob, p - 1, z_eval, z_base) + regularizer(mm, p, lam, z_eval, z_base)


def finite_difference_jacobian(F: Callable, z, step: float = 1e-6) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    d = z.size
    J = np.empty((d, d))
    for j in range(d):
        e = np.zeros(d)
        e[j] = step * max(1.0, abs(z[j]))
        J[:, j] = (F(z + e) - F(z - e)) / (2 * e[j])
    return J


def with_fd_jacobian(prob: SaddleProblem, step: float = 1e-6) -> SaddleProblem:
    """Copy of ``prob`` whose Jacobian comes from central differences (tests only)."""
    F = prob.F
    return replace(prob, jac=lambda z: finite_difference_jacobian(F, z, step), directional=None,
                   max_order=max(prob.max_order, 1), second_jac=None)


# ---------------------------------------------------------------- residuals

def composite_min_norm(g, z, weight: float, radius: float) -> float:
    """min ||g + w|| over w in weight * d||.||_1(z) + N_box(z), coordinate by coordinate."""
    g = np.asarray(g, dtype=float)
    z = np.asarray(z, dtype=float)
    t = float(weight)
    R = float(radius)
    out = np.empty_like(g)
    zero = z == 0.0
    pos = z > 0.0
    neg = z < 0.0
    upper = z >= R
    lower = z <= -R
    out[zero] = np.maximum(np.abs(g[zero]) - t, 0.0)
    inner_pos = pos & ~upper
    inner_neg = neg & ~lower
    out[inner_pos] = np.abs(g[inner_pos] + t)
    out[inner_neg] = np.abs(g[inner_neg] - t)
    out[upper] = np.maximum(g[upper] + t, 0.0)
    out[lower] = np.maximum(t - g[lower], 0.0)
    return float(np.linalg.norm(out))


def residual(prob: SaddleProblem, z, Fz=None) -> float:
    """min over w in H(z) of ||F(z) + w||."""
    z = prob.check_point(z)
    if Fz is None:
        Fz = prob.F(z)
    if prob.smooth_unconstrained:
        return float(np.linalg.norm(Fz))
    return composite_min_norm(Fz, z, prob.lam_reg, prob.radius)


# ---------------------------------------------------------------- gaps

def _require(prob: SaddleProblem, kind: str, mu_zero: bool = False):
    if prob.kind != kind:
        raise ValueError(f"gap formula applies to {kind} instances, not {prob.kind}")
    if mu_zero and prob.mu != 0:
        raise ValueError(f"closed-form gap for {kind} needs mu = 0")


def primal_dual_gap_prob1(prob: SaddleProblem, z) -> float:
    _require(prob, "prob1", mu_zero=True)
    A, b = prob.data["A"], prob.data["b"]
    lam, R = prob.lam_reg, prob.radius
    x, y = prob.split(prob.check_point(z))
    primal = R * np.sum(np.maximum(np.abs(A @ x - b) - lam, 0.0)) + lam * np.sum(np.abs(x))
    dual = -R * np.sum(np.maximum(np.abs(A.T @ y) - lam, 0.0)) - b @ y - lam * np.sum(np.abs(y))
    return float(primal - dual)


def restricted_gap_prob2(prob: SaddleProblem, z, R_dual: float) -> float:
    """Gap restricted to R^m x {||y|| <= R_dual}."""
    _require(prob, "prob2")
    A, b, L2 = prob.data["A"], prob.data["b"], prob.data["L2"]
    x, y = prob.split(prob.check_point(z))
    s = np.linalg.norm(A.T @ y)
    return float(L2 / 6 * np.linalg.norm(x) ** 3 + R_dual * np.linalg.norm(A @ x - b)
                 + 2.0 / 3.0 * math.sqrt(2.0 / L2) * s ** 1.5 + b @ y)


def restricted_gap_p3(prob: SaddleProblem, z, R_dual: float) -> float:
    """Gap of the quartic demo (mu = 0) restricted to R^m x {||y|| <= R_dual}."""
    _require(prob, "prob_p3", mu_zero=True)
    A, b, c3 = prob.data["A"], prob.data["b"], prob.data["c3"]
    x, y = prob.split(prob.check_point(z))
    s = np.linalg.norm(A.T @ y)
    # min_t c3/24 t^4 - s t is attained at t^3 = 6 s / c3 with value -(c3/8) t^4
    t = (6.0 * s / c3) ** (1.0 / 3.0)
    return float(c3 / 24 * np.linalg.norm(x) ** 4 + R_dual * np.linalg.norm(A @ x - b)
                 + c3 / 8 * t ** 4 + b @ y)


def gap_minimizer_norm(prob: SaddleProblem, z) -> float:
    """Norm of the x attaining the inner minimum of the restricted gap (prob2, prob_p3)."""
    x, y = prob.split(z)
    s = np.linalg.norm(prob.data["A"].T @ y)
    if prob.kind == "prob2":
        return math.sqrt(2.0 * s / prob.data["L2"])
    if prob.kind == "prob_p3":
        return (6.0 * s / prob.data["c3"]) ** (1.0 / 3.0)
    raise ValueError(f"no restricted gap for {prob.kind}")


def gap_function(prob: SaddleProblem, R_dual: Optional[float] = None) -> Optional[Callable]:
    """Closed-form gap for the instance, or None when the kind has none."""
    if prob.kind == "prob1" and prob.mu == 0:
        return lambda z: primal_dual_gap_prob1(prob, z)
    if prob.kind == "prob2" and R_dual is not None:
        return lambda z: restricted_gap_prob2(prob, z, R_dual)
    if prob.kind == "prob_p3" and prob.mu == 0 and R_dual is not None:
        return lambda z: restricted_gap_p3(prob, z, R_dual)
    return None


# ---------------------------------------------------------------- generators

def _prob1(sp: ProblemSpec, rng) -> SaddleProblem:
    m, n, mu = sp.m, sp.n, sp.mu
    A = rng.uniform(-1.0, 1.0, size=(n, m))
    b = rng.uniform(-1.0, 1.0, size=n)
    J = np.block([[mu * np.eye(m), A.T], [-A, mu * np.eye(n)]])
    L1 = float(np.linalg.norm(J, 2))

    def F(z):
        x, y = z[:m], z[m:]
        return np.concatenate([A.T @ y + mu * x, b - A @ x + mu * y])

    def directional(i, z, h):
        return J @ h if i == 1 else np.zeros_like(h)

    return SaddleProblem(m, n, F, jac=lambda z: J.copy(), directional=directional, max_order=math.inf,
                         second_jac=lambda z, h: np.zeros((m + n, m + n)),
                         lam_reg=sp.lam, radius=sp.R, mu=mu, lipschitz={1: L1},
                         kind="prob1", data=MappingProxyType({"A": A, "b": b, "J": J}))


def bidiagonal(n: int) -> np.ndarray:
    return np.eye(n) - np.eye(n, k=1)


def _prob2(sp: ProblemSpec, rng) -> SaddleProblem:
    n, L2 = sp.n, sp.L2
    if sp.mu:
        raise ValueError("prob2 is convex-concave; mu must be 0")
    A = bidiagonal(n)
    b = rng.uniform(-1.0, 1.0, size=n)

    def F(z):
        x, y = z[:n], z[n:]
        return np.concatenate([0.5 * L2 * np.linalg.norm(x) * x + A.T @ y, b - A @ x])

    def jac(z):
        x = z[:n]
        r = np.linalg.norm(x)
        H = 0.5 * L2 * r * np.eye(n)
        if r > 0:
            H += 0.5 * L2 * np.outer(x, x) / r
        return np.block([[H, A.T], [-A, np.zeros((n, n))]])

    return SaddleProblem(n, n, F, jac=jac, max_order=1, mu=0.0, lipschitz={2: L2},
                         kind="prob2", data=MappingProxyType({"A": A, "b": b, "L2": L2}))


def _prob2_sc(sp: ProblemSpec, rng) -> SaddleProblem:
    m, n, L2, c, mu = sp.m, sp.n, sp.L2, sp.c, sp.mu
    A = rng.uniform(-1.0, 1.0, size=(n, m))
    D = bidiagonal(m)[:-1]  # rows give x_k - x_{k+1}
    e1 = np.zeros(m)
    e1[0] = 1.0

    def F(z):
        x, y = z[:m], z[m:]
        d = D @ x
        gx = L2 / 12 * (D.T @ (np.abs(d) * d)) - L2 * c / 12 * e1 + mu * x + A.T @ y
        return np.concatenate([gx, mu * y - A @ x])

    def jac(z):
        d = D @ z[:m]
        H = L2 / 6 * (D.T * np.abs(d)) @ D + mu * np.eye(m)
        return np.block([[H, A.T], [-A, mu * np.eye(n)]])

    return SaddleProblem(m, n, F, jac=jac, max_order=1, mu=mu, lipschitz={2: L2},
                         kind="prob2_sc", data=MappingProxyType({"A": A, "L2": L2, "c": c}))


def _prob_p3(sp: ProblemSpec, rng) -> SaddleProblem:
    m, n, c3, mu = sp.m, sp.n, sp.c3, sp.mu
    A = rng.uniform(-1.0, 1.0, size=(n, m))
    b = rng.uniform(-1.0, 1.0, size=n)
    k = c3 / 6.0

    def F(z):
        x, y = z[:m], z[m:]
        return np.concatenate([k * (x @ x) * x + mu * x + A.T @ y, b - A @ x + mu * y])

    def jac(z):
        x = z[:m]
        H = k * ((x @ x) * np.eye(m) + 2 * np.outer(x, x)) + mu * np.eye(m)
        return np.block([[H, A.T], [-A, mu * np.eye(n)]])

    def directional(i, z, h):
        x, hx = z[:m], h[:m]
        out = np.zeros_like(h)
        if i == 1:
            return jac(z) @ h
        if i == 2:
            out[:m] = k * (2 * (hx @ hx) * x + 4 * (x @ hx) * hx)
        elif i == 3:
            out[:m] = k * 6 * (hx @ hx) * hx
        return out

    def second_jac(z, h):
        x, hx = z[:m], h[:m]
        M = np.zeros((m + n, m + n))
        M[:m, :m] = 2 * k * ((x @ hx) * np.eye(m) + np.outer(x, hx) + np.outer(hx, x))
        return M

    return SaddleProblem(m, n, F, jac=jac, directional=directional, max_order=math.inf,
                         second_jac=second_jac, mu=mu, lipschitz={3: c3},
                         kind="prob_p3", data=MappingProxyType({"A": A, "b": b, "c3": c3}))


_BUILDERS = {"prob1": _prob1, "prob2": _prob2, "prob2_sc": _prob2_sc, "prob_p3": _prob_p3}


def make_test_problem(spec: ProblemSpec, seed: int) -> SaddleProblem:
    sp = spec.resolved()
    for name in ("m", "n"):
        v = getattr(sp, name)
        if v is None or int(v) != v or v < 1:
            raise ValueError(f"invalid dimension {name}={v}")
    if sp.mu is not None and sp.mu < 0:
        raise ValueError("mu must be nonnegative")
    rng = np.random.Generator(np.random.PCG64(seed))
    prob = _BUILDERS[sp.kind](sp, rng)
    return replace(prob, spec=sp, seed=seed)


# ---------------------------------------------------------------- references

class ReferenceError(RuntimeError):
    pass


def closed_form_saddle_point(prob: SaddleProblem) -> Optional[np.ndarray]:
    if prob.kind == "prob2":
        A, b, L2 = prob.data["A"], prob.data["b"], prob.data["L2"]
        x = np.linalg.solve(A, b)
        y = -0.5 * L2 * np.linalg.norm(x) * np.linalg.solve(A.T, x)
        return prob.join(x, y)
    if prob.kind == "prob_p3" and prob.mu == 0:
        A, b, c3 = prob.data["A"], prob.data["b"], prob.data["c3"]
        AAt = A @ A.T
        w = np.linalg.solve(AAt, b)
        x = A.T @ w
        y = -(c3 / 6.0) * (x @ x) * w
        return prob.join(x, y)
    return None


def _newton_polish(prob: SaddleProblem, z, steps: int = 5):
    best, best_r = z, residual(prob, z)
    for _ in range(steps):
        Fz = prob.F(z)
        z = z - np.linalg.solve(prob.jac(z), Fz)
        r = residual(prob, z)
        if r < best_r:
            best, best_r = z, r
    return best, best_r


def reference_saddle_point(prob: SaddleProblem, tol: float = 1e-10, max_iters: int = 200000) -> np.ndarray:
    """A point with residual <= tol: closed form when known, else a long solver run."""
    from . import solvers  # solvers build on this module

    z = closed_form_saddle_point(prob)
    if z is not None:
        r = residual(prob, z)
        if r > tol and prob.jac is not None:
            z, r = _newton_polish(prob, z)
        if r > tol:
            raise ReferenceError(f"closed-form point has residual {r:.3e} > {tol:.3e}")
        return z
    if prob.smooth_unconstrained and prob.jac is not None:
        traj = solvers.run_second_order(prob, None, solvers.SolverConfig(
            method="second-ls", mu=prob.mu, max_iters=min(max_iters, 2000), target_residual=tol,
            alpha=0.5, beta=0.5, sigma0=1.0))
        z, r = _newton_polish(prob, traj.z_last)
    else:
        traj = solvers.run_first_order_ls(prob, None, solvers.SolverConfig(
            method="first-ls", mu=prob.mu, max_iters=max_iters, target_residual=tol,
            alpha=1.0, beta=0.8, sigma0=1.0))
        z = traj.z_last
        r = residual(prob, z)
    if r > tol:
        raise ReferenceError(f"reference run stopped at residual {r:.3e} > {tol:.3e}")
    return z


# ---------------------------------------------------------------- predictors

PREDICTOR_KINDS = ("constant", "affine", "regularized")


@dataclass(eq=False)
class Predictor:
    """Approximation P(z; I_k) built at base point z_k.

    constant: P = F(z_k); affine: first-order Taylor model; regularized: the
    (p-1)-th order Taylor model plus the Bregman-power term with weight lam.
    All kinds agree with F at the base point.
    """

    kind: str
    prob: SaddleProblem
    base: np.ndarray
    F_base: np.ndarray
    mm: Optional[MirrorMap] = None
    p: int = 1
    lam: float = 0.0
    jac_base: Optional[np.ndarray] = None

    def __call__(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        if self.kind == "constant":
            return self.F_base.copy()
        h = z - self.base
        if self.kind == "affine":
            return self.F_base + self.jac_base @ h
        out = self.F_base + self.jac_base @ h
        fact = 1.0
        for i in range(2, self.p):
            fact *= i
            out = out + _directional(self.prob, i, self.base, h) / fact
        return out + regularizer(self.mm, self.p, self.lam, z, self.base)

    def jacobian(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        d = z.size
        if self.kind == "constant":
            return np.zeros((d, d))
        if self.kind == "affine":
            return self.jac_base
        h = z - self.base
        if self.p > 3 or (self.p == 3 and self.prob.second_jac is None) or not self.mm.euclidean:
            return finite_difference_jacobian(self, z, 1e-7)
        J = self.jac_base.copy()
        if self.p == 3:
            J = J + self.prob.second_jac(self.base, h)
        r = float(np.linalg.norm(h))
        if self.lam > 0 and r > 0:
            q = self.p - 1
            c = self.lam / math.factorial(q)
            J = J + c * (r ** q * np.eye(d) + q * r ** (q - 2) * np.outer(h, h))
        return J


def make_predictor(kind: str, prob: SaddleProblem, z_base, F_base=None, mm: Optional[MirrorMap] = None,
                   p: int = 1, lam: float = 0.0) -> Predictor:
    if kind not in PREDICTOR_KINDS:
        raise ValueError(f"unknown predictor kind {kind!r}")
    z_base = prob.check_point(z_base)
    if F_base is None:
        F_base = prob.F(z_base)
    if kind == "constant":
        return Predictor(kind, prob, z_base, F_base)
    J = eval_jac(prob, z_base)
    if kind == "affine":
        return Predictor(kind, prob, z_base, F_base, mm, 2, 0.0, J)
    if p < 2:
        raise ValueError("regularized predictor needs p >= 2")
    if p - 1 > prob.max_order:
        raise DerivativeUnavailable(f"order {p} model needs derivatives up to order {p - 1}")
    if mm is None:
        raise ValueError("regularized predictor needs a mirror map")
    return Predictor(kind, prob, z_base, F_base, mm, p, lam, J)
