"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Tolerances are pinned as module constants. Runs are cached so criteria that
re-examine earlier runs (4, 10, 11) see exactly the same trajectories.
"""

import functools
import math
import time

import numpy as np
import pytest

from optimistic import subsolvers
from optimistic.geometry import euclidean_map
from optimistic.linesearch import ACCEPTED_INITIAL, BETA_OPTIMAL, EARLY_EXIT
from optimistic.problems import (ProblemSpec, eval_F, eval_regularized_taylor, gap_function, make_test_problem,
                                 reference_saddle_point, residual)
from optimistic.solvers import (SolverConfig, TheoryBundle, gamma2_constant, gamma_p_constant,
                                prob2_apriori_gap_bound, prob2_stepsize_gap_bound, run_first_order_fixed,
                                run_first_order_ls, run_pth_order, run_second_order, theory_constants)
from optimistic.subsolvers import SubsolverError, SubsolverRequest

# pinned tolerances and budgets
C1_SEEDS, C1_ITERS, C1_RUNTIME = range(5), 2000, 30.0
C2_SEEDS, C2_ITERS, C2_MU, C2_REF_TOL = range(5), 2000, 0.1, 1e-12
C3_SEEDS, C3_ITERS, C3_EPS, C3_CALLS = range(10), 1000, 1e-9, 4.0
C3_GRID = [(s, b) for s in (1.0, 100.0) for b in (0.5, 0.9)]
C3_MUS = (0.0, 0.1)
C5_SEED, C5_EPS, C5_RUNTIME = 0, 1e-10, 60.0
C6_SEEDS, C6_ITERS, C6_EPS = range(5), 60, 1e-10
C7_SEEDS, C7_ITERS, C7_EPS = range(10), 500, 1e-10
C7_LIMIT = {0.5: 4.5, 0.9: 9.0}
C8_PAIRS, C8_MONO_TOL = 1000, -1e-12
C9_SEEDS, C9_ITERS, C9_EPS = range(5), 80, 1e-9
C10_GRID_TOL, C10_FIRST_INSTANCES, C10_AFFINE_SYSTEMS, C10_AFFINE_TOL = 2e-4, 50, 100, 1e-10
C11_RATIO_SLACK = 1e-12
C12_G2, C12_G3 = (7.0, 7.6), (2.6, 3.0)
REL_SLACK = 1e-12
SECOND_ALPHA, SECOND_BETA = 0.5, 0.5


def _euclid(prob):
    return euclidean_map(prob.dim)


@functools.lru_cache(maxsize=None)
def prob1(seed, mu=0.0):
    return make_test_problem(ProblemSpec("prob1", mu=mu), seed)


@functools.lru_cache(maxsize=None)
def reference(kind, seed, mu=None, tol=1e-10):
    spec = ProblemSpec(kind, mu=mu)
    return reference_saddle_point(make_test_problem(spec, seed), tol=tol)


@functools.lru_cache(maxsize=None)
def c1_run(seed):
    p = prob1(seed)
    t0 = time.perf_counter()
    traj = run_first_order_fixed(p, None, config=SolverConfig(method="first-fixed", max_iters=C1_ITERS,
                                                               target_residual=0.0),
                                 gap_fn=gap_function(p))
    return traj, time.perf_counter() - t0


@functools.lru_cache(maxsize=None)
def c2_run(seed):
    p = prob1(seed, C2_MU)
    z_ref = reference("prob1", seed, C2_MU, C2_REF_TOL)
    cfg = SolverConfig(method="first-fixed", mu=C2_MU, max_iters=C2_ITERS, target_residual=0.0)
    return run_first_order_fixed(p, None, config=cfg, z_ref=z_ref)


@functools.lru_cache(maxsize=None)
def c3_run(seed, sigma0, beta, mu):
    p = prob1(seed, mu)
    cfg = SolverConfig(method="first-ls", mu=mu, max_iters=C3_ITERS, target_residual=C3_EPS, alpha=1.0,
                       beta=beta, sigma0=sigma0)
    return run_first_order_ls(p, None, cfg)


@functools.lru_cache(maxsize=None)
def c5_run():
    p = make_test_problem(ProblemSpec("prob2"), C5_SEED)
    z_ref = reference("prob2", C5_SEED)
    R_dual = 2.0 * np.linalg.norm(p.split(z_ref)[1])
    cfg = SolverConfig(method="second-ls", max_iters=10000, target_residual=C5_EPS, alpha=SECOND_ALPHA,
                       beta=SECOND_BETA, sigma0=1.0)
    t0 = time.perf_counter()
    traj = run_second_order(p, None, cfg, z_ref=z_ref, gap_fn=gap_function(p, R_dual))
    return p, traj, z_ref, R_dual, time.perf_counter() - t0


def sc_reference(seed):
    return reference("prob2_sc", seed, None, 1e-8)


@functools.lru_cache(maxsize=None)
def c6_run(seed):
    p = make_test_problem(ProblemSpec("prob2_sc"), seed)
    cfg = SolverConfig(method="second-ls", mu=p.mu, max_iters=C6_ITERS, target_residual=C6_EPS,
                       alpha=SECOND_ALPHA, beta=SECOND_BETA, sigma0=1.0)
    return p, run_second_order(p, None, cfg, z_ref=sc_reference(seed))


@functools.lru_cache(maxsize=None)
def c7_run(kind, seed, beta):
    p = make_test_problem(ProblemSpec(kind), seed)
    cfg = SolverConfig(method="second-ls", mu=p.mu, max_iters=C7_ITERS, target_residual=C7_EPS,
                       alpha=SECOND_ALPHA, beta=beta, sigma0=1.0)
    return p, run_second_order(p, None, cfg)


@functools.lru_cache(maxsize=None)
def c9_run(seed):
    p = make_test_problem(ProblemSpec("prob_p3", mu=1.0), seed)
    cfg = SolverConfig(method="pth-ls", mu=1.0, max_iters=C9_ITERS, target_residual=C9_EPS,
                       alpha=SECOND_ALPHA, beta=SECOND_BETA, sigma0=1.0, p=3)
    return p, run_pth_order(p, None, 3, None, cfg)


def all_runs():
    """(label, prob, traj, subsolver factory) for every line-search run above."""
    out = []
    for seed in C3_SEEDS:
        for (s, b) in C3_GRID:
            for mu in C3_MUS:
                out.append((f"c3 seed={seed} s={s} b={b} mu={mu}", prob1(seed, mu), c3_run(seed, s, b, mu),
                            subsolvers.solve_first_order))
    p, traj, *_ = c5_run()
    out.append(("c5", p, traj, subsolvers.solve_affine_inclusion))
    for seed in C6_SEEDS:
        p, traj = c6_run(seed)
        out.append((f"c6 seed={seed}", p, traj, subsolvers.solve_affine_inclusion))
    for kind in ("prob2", "prob2_sc"):
        for seed in C7_SEEDS:
            for beta in C7_LIMIT:
                p, traj = c7_run(kind, seed, beta)
                out.append((f"c7 {kind} seed={seed} b={beta}", p, traj, subsolvers.solve_affine_inclusion))
    for seed in C9_SEEDS:
        p, traj = c9_run(seed)
        tol = traj.inner_tol
        sub = lambda req, tol=tol: subsolvers.solve_regularized_taylor_inclusion(req, tol)
        out.append((f"c9 seed={seed}", p, traj, sub))
    return out


def _le(a, b, slack=REL_SLACK):
    return a <= b + slack * max(abs(b), 1e-300)


# ---------------------------------------------------------------- criteria

def test_c01_fixed_step_gap_bound(report):
    viol, worst, total_time = 0, -np.inf, 0.0
    for seed in C1_SEEDS:
        traj, dt = c1_run(seed)
        total_time += dt
        p = prob1(seed)
        M = 2 * p.lipschitz[1]
        assert traj.iterations == C1_ITERS
        N = np.arange(1, C1_ITERS + 1)
        bound = M * (p.m + p.n) * p.radius ** 2 / (2.0 * N)
        gaps = np.array([r.gap for r in traj.records])
        viol += int(np.sum(gaps > bound))
        worst = max(worst, float(np.max(gaps / bound)))
    ok = viol == 0 and total_time < C1_RUNTIME
    report(1, ok, f"violations={viol} max gap/bound={worst:.3f} runtime={total_time:.1f}s (<{C1_RUNTIME}s)")
    assert viol == 0
    assert total_time < C1_RUNTIME


def test_c02_fixed_step_linear_rate(report):
    viol, worst = 0, -np.inf
    for seed in C2_SEEDS:
        p = prob1(seed, C2_MU)
        traj = c2_run(seed)
        z_ref = traj.z_ref
        M = 2 * p.lipschitz[1]
        d0 = float(np.sum((traj.z0 - z_ref) ** 2))
        N = np.arange(1, traj.iterations + 1)
        bound = d0 * (M / (2 * C2_MU + M)) ** N
        d = np.array([r.dist2 for r in traj.records])
        viol += int(np.sum(d > bound))
        worst = max(worst, float(np.max(d / bound)))
    report(2, viol == 0, f"violations={viol} max dist2/bound={worst:.3g}")
    assert viol == 0


def test_c03_first_order_line_search_calls(report):
    worst_avg, viol_avg, viol_total = 0.0, 0, 0
    for seed in C3_SEEDS:
        for (s, b) in C3_GRID:
            for mu in C3_MUS:
                traj = c3_run(seed, s, b, mu)
                L1 = prob1(seed, mu).lipschitz[1]
                worst_avg = max(worst_avg, traj.calls_per_iteration)
                viol_avg += traj.calls_per_iteration > C3_CALLS
                tb = TheoryBundle(1.0, b, 1.0, 1, math.nan, math.nan)
                cum = np.cumsum([r.calls for r in traj.records])
                for N, c in enumerate(cum, 1):
                    viol_total += c > tb.first_ls_calls_bound(N, s, L1)
    ok = viol_avg == 0 and viol_total == 0
    report(3, ok, f"max calls/iter={worst_avg:.3f} (<= {C3_CALLS}) cumulative-bound violations={viol_total}")
    assert viol_avg == 0
    assert viol_total == 0


def _bounded_iterates(traj, z_ref, alpha_used):
    """Violations of the distance and sum-of-squares envelopes; alpha_used=1 makes the second vacuous."""
    d0 = 0.5 * float(np.sum((traj.z0 - z_ref) ** 2))
    dist = [0.5 * float(np.sum((r.z - z_ref) ** 2)) for r in traj.records]
    v_dist = sum(not _le(d, 2.0 / (2.0 - alpha_used) * d0) for d in dist)
    sq = np.cumsum([r.step_norm ** 2 for r in traj.records])
    v_sq = 0
    if alpha_used < 1:
        v_sq = int(np.sum([not _le(s, 2.0 / (1.0 - alpha_used) * d0) for s in sq]))
    return v_dist, v_sq


def test_c04_bounded_iterates(report):
    runs = []
    for seed in C1_SEEDS:
        traj, _ = c1_run(seed)
        runs.append((traj, reference("prob1", seed, 0.0)))
    for seed in C3_SEEDS:
        for (s, b) in C3_GRID:
            runs.append((c3_run(seed, s, b, 0.0), reference("prob1", seed, 0.0)))
    v_dist = v_sq = v_eff = 0
    eff_checked = 0
    worst_eff = 0.0
    for traj, z_ref in runs:
        a, b = _bounded_iterates(traj, z_ref, traj.alpha)
        v_dist += a
        v_sq += b
        a_eff = traj.alpha_eff()
        worst_eff = max(worst_eff, a_eff)
        if a_eff < 1:
            eff_checked += 1
            v_eff += _bounded_iterates(traj, z_ref, a_eff)[1]
    ok = v_dist == 0 and v_sq == 0 and v_eff == 0
    report(4, ok, f"runs={len(runs)} distance violations={v_dist} sum-of-squares violations={v_sq} "
                  f"(alpha=1 vacuous); with alpha_eff: checked {eff_checked} runs, violations={v_eff}, "
                  f"max alpha_eff={worst_eff:.6f}")
    assert v_dist == 0 and v_sq == 0 and v_eff == 0


def test_c05_second_order_gap_bounds(report):
    p, traj, z_ref, R_dual, dt = c5_run()
    g2 = theory_constants(SECOND_ALPHA, SECOND_BETA).gamma2
    eta_sum = np.cumsum(traj.etas)
    v84 = v85 = 0
    for N, (r, s) in enumerate(zip(traj.records, eta_sum), 1):
        v84 += not _le(r.gap, prob2_stepsize_gap_bound(p, r.avg, R_dual, s))
        v85 += not _le(r.gap, prob2_apriori_gap_bound(p, r.avg, R_dual, z_ref, N, g2))
    last = traj.records[-1]
    ok = v84 == 0 and v85 == 0 and dt < C5_RUNTIME
    report(5, ok, f"N={traj.iterations} final status={last.status} final gap={last.gap:.3g} "
                  f"stepsum-bound violations={v84} a-priori violations={v85} runtime={dt:.1f}s (<{C5_RUNTIME}s)")
    assert v84 == 0 and v85 == 0
    assert dt < C5_RUNTIME


def test_c06_second_order_superlinear(report):
    v_zeta = v_dist = slow = 0
    pairs = 0
    iters = []
    for seed in C6_SEEDS:
        p, traj = c6_run(seed)
        z_ref = traj.z_ref
        D0 = 0.5 * float(np.sum((traj.z0 - z_ref) ** 2))
        tb = theory_constants(SECOND_ALPHA, SECOND_BETA, L_p=p.lipschitz[2], mu=p.mu, D0=D0, need_kappa=True)
        C = tb.gamma2 * tb.kappa_p
        zeta = np.concatenate([[1.0], [r.zeta for r in traj.records]])
        for k, r in enumerate(traj.records):
            if r.status == BETA_OPTIMAL:
                pairs += 1
                v_zeta += not _le(zeta[k + 1], C * zeta[k] ** 1.5)
        dist0 = float(np.sum((traj.z0 - z_ref) ** 2))
        for k, r in enumerate(traj.records, 1):
            v_dist += not _le(r.dist2, 2 * dist0 / (2 - SECOND_ALPHA) * zeta[k])
        reached = [k for k, r in enumerate(traj.records, 1) if r.residual <= C6_EPS]
        iters.append(reached[0] if reached else None)
        slow += not reached
    ok = v_zeta == 0 and v_dist == 0 and slow == 0
    report(6, ok, f"beta-optimal pairs={pairs} zeta violations={v_zeta} distance violations={v_dist} "
                  f"runs reaching {C6_EPS:g} within {C6_ITERS} iterations: {len(iters) - slow}/{len(iters)} "
                  f"(iterations {iters})")
    assert v_zeta == 0 and v_dist == 0
    assert slow == 0


def test_c07_second_order_calls(report):
    worst = {0.5: 0.0, 0.9: 0.0}
    viol_avg = viol_total = 0
    for kind in ("prob2", "prob2_sc"):
        for seed in C7_SEEDS:
            z_ref = reference(kind, seed) if kind == "prob2" else sc_reference(seed)
            for beta, limit in C7_LIMIT.items():
                p, traj = c7_run(kind, seed, beta)
                D0 = 0.5 * float(np.sum((traj.z0 - z_ref) ** 2))
                worst[beta] = max(worst[beta], traj.calls_per_iteration)
                viol_avg += traj.calls_per_iteration > limit
                tb = theory_constants(SECOND_ALPHA, beta)
                cum = np.cumsum([r.calls for r in traj.records])
                for N, c in enumerate(cum, 1):
                    viol_total += c > tb.second_calls_bound(N, 1.0, p.lipschitz[2], D0, C7_EPS)
    ok = viol_avg == 0 and viol_total == 0
    report(7, ok, f"max calls/iter beta=0.5: {worst[0.5]:.3f} (<= 4.5), beta=0.9: {worst[0.9]:.3f} (<= 9); "
                  f"cumulative-bound violations={viol_total}")
    assert viol_avg == 0 and viol_total == 0


def test_c08_regularized_taylor_properties(report):
    p = make_test_problem(ProblemSpec("prob_p3"), 0)
    mm = _euclid(p)
    L3 = p.lipschitz[3]
    lam = L3
    Lpp = L3 + 3 * lam
    rng = np.random.default_rng(12345)
    va = vb = 0
    worst_a, worst_b = 0.0, np.inf
    for _ in range(C8_PAIRS):
        scale = 10 ** rng.uniform(-2, 1)
        z = rng.standard_normal(p.dim) * rng.uniform(0.1, 2.0)
        z1 = z + scale * rng.standard_normal(p.dim)
        z2 = z + scale * rng.standard_normal(p.dim)
        h = z1 - z
        err = np.linalg.norm(eval_F(p, z1) - eval_regularized_taylor(p, mm, 3, lam, z1, z))
        bound = Lpp / 6 * np.linalg.norm(h) ** 3
        va += not _le(err, bound)
        worst_a = max(worst_a, err / bound)
        T1 = eval_regularized_taylor(p, mm, 3, lam, z1, z)
        T2 = eval_regularized_taylor(p, mm, 3, lam, z2, z)
        inner = float(np.dot(T2 - T1, z2 - z1))
        vb += inner < C8_MONO_TOL
        worst_b = min(worst_b, inner)
    ok = va == 0 and vb == 0
    report(8, ok, f"pairs={C8_PAIRS} approximation violations={va} (max ratio {worst_a:.3f}) "
                  f"monotonicity violations={vb} (min inner product {worst_b:.3g})")
    assert va == 0 and vb == 0


def test_c09_pth_order_superlinear(report):
    v_zeta = slow = pairs = 0
    iters = []
    for seed in C9_SEEDS:
        p, traj = c9_run(seed)
        z_ref = reference("prob_p3", seed, 1.0)
        D0 = 0.5 * float(np.sum((traj.z0 - z_ref) ** 2))
        tb = theory_constants(SECOND_ALPHA, SECOND_BETA, p=3, lam=p.lipschitz[3], L_p=p.lipschitz[3], mu=1.0,
                              D0=D0, need_kappa=True)
        zeta = np.concatenate([[1.0], [r.zeta for r in traj.records]])
        for k, r in enumerate(traj.records):
            if r.status == BETA_OPTIMAL:
                pairs += 1
                v_zeta += not _le(zeta[k + 1], tb.kappa_tilde_p * zeta[k] ** 2)
        reached = [k for k, r in enumerate(traj.records, 1) if r.residual <= C9_EPS]
        iters.append(reached[0] if reached else None)
        slow += not reached
    ok = v_zeta == 0 and slow == 0
    report(9, ok, f"beta-optimal steps={pairs} zeta violations={v_zeta} "
                  f"iterations to {C9_EPS:g}: {iters} (<= {C9_ITERS})")
    assert v_zeta == 0 and slow == 0


def _grid_min_first_order(eta, g, v, z_minus, lam, R, n=2001):
    """Minimize eta<g,u> + <v,u> + eta lam |u| + 0.5 (u - z_minus)^2 per coordinate over a grid of [-R, R]."""
    u = np.linspace(-R, R, n)
    out = np.empty_like(z_minus)
    for i in range(z_minus.size):
        obj = eta * g[i] * u + v[i] * u + eta * lam * np.abs(u) + 0.5 * (u - z_minus[i]) ** 2
        out[i] = u[np.argmin(obj)]
    return out


def test_c10_subsolver_oracles(report):
    from optimistic.problems import make_predictor

    rng = np.random.default_rng(2024)
    worst_first = 0.0
    for i in range(C10_FIRST_INSTANCES):
        p = make_test_problem(ProblemSpec("prob1", m=4, n=2), i)
        z_minus = rng.uniform(-p.radius, p.radius, p.dim)
        z_base = rng.uniform(-p.radius, p.radius, p.dim)
        v = 0.05 * rng.standard_normal(p.dim)
        eta = 10 ** rng.uniform(-2, 0)
        pred = make_predictor("constant", p, z_base)
        res = subsolvers.solve_first_order(SubsolverRequest(eta, pred, v, z_minus, _euclid(p), p))
        grid = _grid_min_first_order(eta, pred.F_base, v, z_minus, p.lam_reg, p.radius)
        worst_first = max(worst_first, float(np.max(np.abs(res.z - grid))))
    worst_aff = 0.0
    for i in range(C10_AFFINE_SYSTEMS):
        p = make_test_problem(ProblemSpec("prob2_sc", m=6, n=3), 100 + i)
        z_base = rng.standard_normal(p.dim)
        z_minus = rng.standard_normal(p.dim)
        v = rng.standard_normal(p.dim)
        eta = 10 ** rng.uniform(-4, 0)
        pred = make_predictor("affine", p, z_base)
        req = SubsolverRequest(eta, pred, v, z_minus, _euclid(p), p)
        res = subsolvers.solve_affine_inclusion(req)
        # back-substitute into eta (F(z_b) + J (z - z_b)) + v + z - z_minus = 0 independently
        J = p.jac(z_base)
        r = eta * (p.F(z_base) + J @ (res.z - z_base)) + v + res.z - z_minus
        scale = eta * (np.linalg.norm(p.F(z_base)) + np.linalg.norm(J, 2) * (np.linalg.norm(res.z)
                       + np.linalg.norm(z_base))) + np.linalg.norm(v) + np.linalg.norm(res.z) + np.linalg.norm(z_minus)
        worst_aff = max(worst_aff, float(np.linalg.norm(r) / scale))
    inner_bad = inner_total = 0
    worst_inner = 0.0
    for seed in C9_SEEDS:
        _, traj = c9_run(seed)
        for rec in traj.records:
            for tr in rec.outcome.trials:
                if tr.result is None:
                    continue
                inner_total += 1
                worst_inner = max(worst_inner, tr.result.inclusion_residual)
                inner_bad += tr.result.inclusion_residual > traj.inner_tol
    ok = worst_first <= C10_GRID_TOL and worst_aff <= C10_AFFINE_TOL and inner_bad == 0
    report(10, ok, f"first-order vs grid max diff={worst_first:.2e} (<= {C10_GRID_TOL:g}); "
                   f"affine residual/scale max={worst_aff:.2e} (<= {C10_AFFINE_TOL:g}); "
                   f"taylor inner solves over tol={inner_bad}/{inner_total} (max {worst_inner:.2e})")
    assert worst_first <= C10_GRID_TOL
    assert worst_aff <= C10_AFFINE_TOL
    assert inner_bad == 0


def _admissible(prob, rec, eta, sub, alpha):
    """Independent re-check of the stepsize condition; a failing subsolver counts as inadmissible."""
    req = SubsolverRequest(eta, rec.predictor, rec.v, rec.z_prev, euclidean_map(prob.dim), prob)
    try:
        z = sub(req).z
    except SubsolverError:
        return False
    lhs = eta * np.linalg.norm(prob.F(z) - rec.predictor(z))
    return lhs <= 0.5 * alpha * np.linalg.norm(z - rec.z_prev)


def _search_calls_bound(sigma, eta, beta, advancing):
    lb = math.log(1 / beta)
    if advancing:
        x = (2 * abs(math.log(sigma / eta)) + 2 * lb) / lb
    else:
        x = (2 * math.log(sigma / eta) + 2 * lb) / lb
    return 2 * math.log2(x)


def test_c11_line_search_certificates(report):
    bad_cert = bad_count = bad_exact = certs = searches = 0
    for label, prob, traj, sub in all_runs():
        advancing = traj.method in ("second-ls", "pth-ls")
        for rec in traj.records:
            out = rec.outcome
            searches += 1
            if out.status == ACCEPTED_INITIAL:
                bad_exact += out.calls != 1
                continue
            ts = [tr.t for tr in out.trials]
            if out.status == BETA_OPTIMAL:
                certs += 1
                lo, up = out.bracket
                ok = (_admissible(prob, rec, lo, sub, traj.alpha) and not _admissible(prob, rec, up, sub, traj.alpha)
                      and up / lo <= (1 / traj.beta) * (1 + C11_RATIO_SLACK) and up > lo)
                bad_cert += not ok
                k = int(round(math.log2(max(abs(t) for t in ts) + 1)))
                bad_exact += out.calls != 2 * k
            elif out.status == EARLY_EXIT:
                bad_exact += out.calls != len(ts)
            bad_count += not (out.calls <= _search_calls_bound(out.sigma, out.eta, traj.beta, advancing) + 1e-9)
    ok = bad_cert == 0 and bad_count == 0 and bad_exact == 0
    report(11, ok, f"searches={searches} certificates={certs} failed certificates={bad_cert} "
                   f"count-bound violations={bad_count} exact-count mismatches={bad_exact}")
    assert bad_cert == 0 and bad_count == 0 and bad_exact == 0


def test_c12_theory_constants(report):
    g2 = gamma2_constant(0.5, 0.9, 1.0)
    g3 = gamma_p_constant(0.5, 0.9, 3, 1.0)
    ok = C12_G2[0] <= g2 <= C12_G2[1] and C12_G3[0] <= g3 <= C12_G3[1]
    report(12, ok, f"gamma2={g2:.4f} in {C12_G2}, gamma3={g3:.4f} in {C12_G3}")
    assert C12_G2[0] <= g2 <= C12_G2[1]
    assert C12_G3[0] <= g3 <= C12_G3[1]


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v", "-s"]))
