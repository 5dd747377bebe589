"""Command-line experiment runner: solve, bench-calls and compare.

Configs are flat ``key = value`` files with ``#`` comments. Flags override the
file, and OPTIMISTIC_OUT overrides the output directory unless --out is given.
Exit codes are 0 (ok), 2 (bad config) and 3 (solver failure).
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from .linesearch import EARLY_EXIT, LineSearchError
from .problems import (KINDS, RNG_NAME, ProblemSpec, ReferenceError, SaddleProblem, closed_form_saddle_point,
                       gap_function, make_test_problem, reference_saddle_point, residual)
from .solvers import (METHODS, SolverConfig, TheoryBundle, Trajectory, prob2_apriori_gap_bound,
                      prob2_stepsize_gap_bound, run, simulated_zeta, theory_constants)
from .subsolvers import SubsolverError

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER = 0, 2, 3
OUT_ENV = "OPTIMISTIC_OUT"
CSV_HEADER = ["k", "eta", "eta_hat", "calls", "residual", "gap", "dist2", "zeta"]
RESIDUAL_METRIC = "residual"

_PROBLEM_KEYS = {"m": int, "n": int, "lam": float, "mu": float, "R": float, "L2": float, "c": float, "c3": float}
_SOLVER_KEYS = {"alpha": float, "beta": float, "sigma0": float, "M": float, "eta": float, "p": int,
                "lam_p": float, "inner_tol": float, "inner_cap": int, "solver_mu": float}
_RUN_KEYS = {"problem": str, "method": str, "seed": int, "iters": int, "eps": float, "out": str,
             "paper_scale": bool, "repeats": int, "workers": int, "R_dual": float, "methods": list,
             "sigma0_grid": list, "beta_grid": list, "mu_grid": list, "sizes": list, "overlays": list}
KNOWN_KEYS = {**_PROBLEM_KEYS, **_SOLVER_KEYS, **_RUN_KEYS}


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------- config

def _to_bool(s: str) -> bool:
    low = s.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {s!r}")


def _convert(key: str, raw: str):
    typ = KNOWN_KEYS.get(key)
    if typ is None:
        raise ConfigError(f"unknown config key {key!r}")
    try:
        if typ is bool:
            return _to_bool(raw)
        if typ is list:
            return [p.strip() for p in raw.split(",") if p.strip()]
        if typ is int:
            f = float(raw)
            if f != int(f):
                raise ValueError
            return int(f)
        return typ(raw.strip())
    except ValueError:
        raise ConfigError(f"bad value for {key}: {raw!r}") from None


def parse_config_text(text: str) -> Dict[str, object]:
    """Parse ``key = value`` lines; ``#`` starts a comment, blank lines are skipped."""
    out: Dict[str, object] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, val = (s.strip() for s in line.split("=", 1))
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = _convert(key, val)
    return out


def format_config(values: Dict[str, object]) -> str:
    lines = []
    for k, v in values.items():
        if isinstance(v, (list, tuple)):
            v = ", ".join(str(x) for x in v)
        elif isinstance(v, float):
            v = fmt(v)
        lines.append(f"{k} = {v}")
    return "\n".join(lines) + "\n"


def fmt(x) -> str:
    """17 significant digits; None and NaN become empty fields."""
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return ""
    return format(x, ".17g")


@dataclass
class ExperimentConfig:
    problem: ProblemSpec
    seed: int
    solver: SolverConfig
    repeats: int = 1
    outputs: str = "results"
    overlays: List[str] = field(default_factory=list)
    R_dual: Optional[float] = None
    raw: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        if self.repeats < 1:
            raise ConfigError("repeats must be at least 1")


def _default_eps(method: str) -> float:
    if method in ("first-fixed", "mirror-prox"):
        return 0.0
    if method == "first-ls":
        return 1e-9
    return 1e-10


def _default_iters(method: str) -> int:
    return 500 if method in ("second-ls", "pth-ls") else 1000


def _default_alpha(method: str) -> float:
    return 1.0 if method in ("first-ls", "first-fixed", "mirror-prox") else 0.5


def build_experiment(values: Dict[str, object], method: Optional[str] = None) -> ExperimentConfig:
    """Turn parsed key/values into problem and solver configs; raises ConfigError."""
    kind = values.get("problem")
    if kind is None:
        raise ConfigError("no problem given")
    if kind not in KINDS:
        raise ConfigError(f"unknown problem {kind!r}; expected one of {KINDS}")
    method = method or values.get("method", "first-ls")
    if method not in METHODS:
        raise ConfigError(f"unknown method {method!r}; expected one of {METHODS}")
    pkw = {k: values[k] for k in _PROBLEM_KEYS if k in values}
    spec = ProblemSpec(kind, **pkw)
    if values.get("paper_scale"):
        explicit = {k: pkw[k] for k in ("m", "n") if k in pkw}
        spec = ProblemSpec(**{**spec.paper_scale().__dict__, **explicit})
    try:
        spec = spec.resolved()
    except ValueError as e:
        raise ConfigError(str(e)) from None
    mu = values.get("solver_mu", spec.mu or 0.0)
    try:
        solver = SolverConfig(
            method=method, mu=mu, max_iters=values.get("iters", _default_iters(method)),
            target_residual=values.get("eps", _default_eps(method)),
            alpha=values.get("alpha", _default_alpha(method)), beta=values.get("beta", 0.5),
            sigma0=values.get("sigma0", 1.0), M=values.get("M"), eta=values.get("eta"), p=values.get("p", 3),
            lam=values.get("lam_p"), inner_tol=values.get("inner_tol"), inner_cap=values.get("inner_cap", 500))
    except ValueError as e:
        raise ConfigError(str(e)) from None
    return ExperimentConfig(spec, values.get("seed", 0), solver, values.get("repeats", 1),
                            str(values.get("out", "results")), list(values.get("overlays", [])),
                            values.get("R_dual"), dict(values))


def gather_values(args: argparse.Namespace) -> Dict[str, object]:
    values: Dict[str, object] = {}
    if getattr(args, "config", None):
        try:
            with open(args.config, encoding="utf-8") as fh:
                values.update(parse_config_text(fh.read()))
        except OSError as e:
            raise ConfigError(f"cannot read config: {e}") from None
    for key in ("problem", "method", "seed", "iters", "eps", "repeats", "workers"):
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    if getattr(args, "methods", None):
        values["methods"] = [m.strip() for m in args.methods.split(",") if m.strip()]
    if getattr(args, "paper_scale", False):
        values["paper_scale"] = True
    for item in getattr(args, "set", None) or []:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        k, v = (s.strip() for s in item.split("=", 1))
        values[k] = _convert(k, v)
    if getattr(args, "out", None):
        values["out"] = args.out
    elif os.environ.get(OUT_ENV):
        values["out"] = os.environ[OUT_ENV]
    return values


# ---------------------------------------------------------------- single runs

def _needs_reference(prob: SaddleProblem, mu: float) -> bool:
    if closed_form_saddle_point(prob) is not None:
        return True
    return mu > 0


def default_R_dual(prob: SaddleProblem, z_ref: Optional[np.ndarray]) -> Optional[float]:
    """Twice the dual norm of the saddle point, so the ball contains it."""
    if z_ref is None:
        return None
    _, y = prob.split(z_ref)
    return 2.0 * max(float(np.linalg.norm(y)), 1e-12)


@dataclass
class RunResult:
    exp: ExperimentConfig
    prob: SaddleProblem
    traj: Trajectory
    z_ref: Optional[np.ndarray]
    R_dual: Optional[float]
    overlays: Dict[str, np.ndarray]


def execute(exp: ExperimentConfig, seed: Optional[int] = None, with_reference: Optional[bool] = None) -> RunResult:
    seed = exp.seed if seed is None else seed
    prob = make_test_problem(exp.problem, seed)
    cfg = exp.solver
    want_ref = _needs_reference(prob, cfg.mu) if with_reference is None else with_reference
    z_ref = None
    if want_ref:
        tol = 1e-8 if prob.kind == "prob2_sc" else 1e-10
        z_ref = reference_saddle_point(prob, tol=tol)
    R_dual = exp.R_dual if exp.R_dual is not None else default_R_dual(prob, z_ref)
    gap_fn = gap_function(prob, R_dual)
    traj = run(prob, cfg, None, z_ref=z_ref, gap_fn=gap_fn)
    return RunResult(exp, prob, traj, z_ref, R_dual, overlay_columns(prob, traj, cfg, z_ref, R_dual))


def overlay_columns(prob: SaddleProblem, traj: Trajectory, cfg: SolverConfig, z_ref, R_dual) -> Dict[str, np.ndarray]:
    """Theory curves indexed like the trajectory rows (row k is iterate k + 1)."""
    N = np.arange(1, traj.iterations + 1, dtype=float)
    cols: Dict[str, np.ndarray] = {}
    if traj.iterations == 0:
        return cols
    dist0 = None if z_ref is None else float(np.sum((traj.z0 - z_ref) ** 2))
    if cfg.method == "first-fixed":
        L1 = prob.lipschitz[1]
        M = cfg.M if cfg.M is not None else 2 * L1
        if prob.kind == "prob1" and prob.mu == 0:
            cols["bound_gap_fixed"] = TheoryBundle.fixed_gap_bound(M, prob.m, prob.n, prob.radius, N)
        if cfg.mu > 0 and dist0 is not None:
            cols["bound_dist_linear"] = TheoryBundle.fixed_linear_rate_bound(M, cfg.mu, dist0, N)
    if cfg.method == "second-ls" and prob.kind == "prob2" and R_dual is not None and 0 < cfg.alpha < 1:
        g2 = theory_constants(cfg.alpha, cfg.beta).gamma2
        etas = np.cumsum(traj.etas)
        cols["bound_gap_stepsum"] = np.array([prob2_stepsize_gap_bound(prob, r.avg, R_dual, s)
                                              for r, s in zip(traj.records, etas)])
        cols["bound_gap_apriori"] = np.array([prob2_apriori_gap_bound(prob, r.avg, R_dual, z_ref, n, g2)
                                              for r, n in zip(traj.records, N)])
    if cfg.method in ("second-ls", "pth-ls") and cfg.mu > 0 and dist0 is not None and 0 < cfg.alpha < 1:
        zeta = np.array([r.zeta for r in traj.records])
        cols["bound_dist_zeta"] = 2.0 * dist0 / (2.0 - cfg.alpha) * zeta
        p = 2 if cfg.method == "second-ls" else cfg.p
        Lp = prob.lipschitz.get(p)
        if p == 2 and Lp is not None:
            tb = theory_constants(cfg.alpha, cfg.beta, L_p=Lp, mu=cfg.mu, D0=0.5 * dist0)
            cols["zeta_sim"] = simulated_zeta(tb.gamma2 * tb.kappa_p, traj.iterations)[1:]
    return cols


def trajectory_rows(traj: Trajectory) -> List[List[str]]:
    return [[fmt(r.k), fmt(r.eta), fmt(r.eta_hat), fmt(r.calls), fmt(r.residual), fmt(r.gap), fmt(r.dist2),
             fmt(r.zeta)] for r in traj.records]


def write_csv(path: str, header: Sequence[str], rows: Sequence[Sequence[str]]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def final_status(traj: Trajectory) -> str:
    if traj.records and traj.records[-1].status == EARLY_EXIT:
        return EARLY_EXIT
    return traj.status


def summary_values(res: RunResult) -> Dict[str, object]:
    traj, prob = res.traj, res.prob
    z = traj.z_last
    out: Dict[str, object] = {"problem": prob.kind, "seed": prob.seed, "rng": RNG_NAME}
    out.update({k: v for k, v in res.exp.problem.items().items() if k != "kind"})
    cfg = res.exp.solver
    out.update(method=cfg.method, solver_mu=cfg.mu, alpha=traj.alpha, beta=cfg.beta, sigma0=cfg.sigma0,
               eps=cfg.target_residual, iters_budget=cfg.max_iters)
    out.update(status=final_status(traj), iterations=traj.iterations, total_calls=traj.total_calls,
               calls_per_iteration=traj.calls_per_iteration, stop_metric=RESIDUAL_METRIC,
               final_residual=residual(prob, z))
    last = traj.records[-1] if traj.records else None
    if last is not None and last.gap is not None:
        out["final_gap"] = last.gap
    if last is not None and last.dist2 is not None:
        out["final_dist2"] = last.dist2
    if res.R_dual is not None:
        out["R_dual"] = res.R_dual
    return out


def _ensure_dir(path: str) -> None:
    os.makedirs(path, exist_ok=True)


# ---------------------------------------------------------------- subcommands

def cli_solve(values: Dict[str, object]) -> int:
    exp = build_experiment(values)
    res = execute(exp)
    _ensure_dir(exp.outputs)
    write_csv(os.path.join(exp.outputs, "trajectory.csv"), CSV_HEADER, trajectory_rows(res.traj))
    if res.overlays:
        names = sorted(res.overlays)
        rows = [[fmt(k)] + [fmt(res.overlays[n][k]) for n in names] for k in range(res.traj.iterations)]
        write_csv(os.path.join(exp.outputs, "overlays.csv"), ["k"] + names, rows)
    summary = summary_values(res)
    with open(os.path.join(exp.outputs, "summary.txt"), "w", encoding="utf-8") as fh:
        fh.write(format_config(summary))
    print(format_config(summary), end="")
    return EXIT_OK


def _cell_values(values, sigma0, beta, mu, m, n) -> Dict[str, object]:
    vals = dict(values, sigma0=sigma0, beta=beta, solver_mu=mu, mu=mu)
    if m is not None:
        vals["m"] = m
    if n is not None:
        vals["n"] = n
    return vals


def _bench_cell(args):
    values, sigma0, beta, mu, m, n, seed = args
    exp = build_experiment(_cell_values(values, sigma0, beta, mu, m, n))
    res = execute(exp, seed=seed, with_reference=False)
    return res.traj.calls_per_iteration, res.traj.iterations, final_status(res.traj)


def _parse_size(s: str):
    parts = s.lower().split("x")
    try:
        if len(parts) == 1:
            return None, int(parts[0])
        if len(parts) == 2:
            return int(parts[0]), int(parts[1])
    except ValueError:
        pass
    raise ConfigError(f"bad size {s!r}; use MxN or N")


def _floats(values, key, default) -> List[float]:
    try:
        return [float(v) for v in values.get(key, default)]
    except ValueError:
        raise ConfigError(f"bad number in {key}") from None


def cli_bench_calls(values: Dict[str, object]) -> int:
    values = dict(values)
    values.setdefault("method", "first-ls")
    values.setdefault("repeats", 50)
    exp = build_experiment(values)  # validates the base config
    sigmas = _floats(values, "sigma0_grid", [exp.solver.sigma0])
    betas = _floats(values, "beta_grid", [exp.solver.beta])
    mus = _floats(values, "mu_grid", [exp.solver.mu])
    sizes = [_parse_size(s) for s in values.get("sizes", [])] or [(None, None)]
    for s in sigmas:
        if s <= 0:
            raise ConfigError("sigma0 values must be positive")
    for b in betas:
        if not 0 < b < 1:
            raise ConfigError("beta values must lie in (0, 1)")
    seeds = [exp.seed + i for i in range(exp.repeats)]
    cells = [(s, b, mu, m, n) for s in sigmas for b in betas for (m, n) in sizes for mu in mus]
    jobs = [(values, s, b, mu, m, n, sd) for (s, b, mu, m, n) in cells for sd in seeds]
    workers = int(values.get("workers", 1))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_bench_cell, jobs))
    else:
        results = [_bench_cell(j) for j in jobs]
    rows = []
    for i, (s, b, mu, m, n) in enumerate(cells):
        chunk = results[i * len(seeds):(i + 1) * len(seeds)]
        cpi = [c for c, _, _ in chunk]
        spec = build_experiment(_cell_values(values, s, b, mu, m, n)).problem
        rows.append([fmt(s), fmt(b), fmt(spec.m), fmt(spec.n), fmt(mu), fmt(max(cpi)), fmt(float(np.mean(cpi))),
                     fmt(max(it for _, it, _ in chunk)), fmt(len(chunk))])
    _ensure_dir(exp.outputs)
    header = ["sigma0", "beta", "m", "n", "mu", "max_calls_per_iter", "mean_calls_per_iter", "max_iterations",
              "repeats"]
    write_csv(os.path.join(exp.outputs, "calls_table.csv"), header, rows)
    meta = {"problem": exp.problem.kind, "method": exp.solver.method, "iters_budget": exp.solver.max_iters,
            "eps": exp.solver.target_residual, "stop_metric": RESIDUAL_METRIC, "alpha": exp.solver.alpha,
            "repeats": exp.repeats, "first_seed": exp.seed, "rng": RNG_NAME}
    with open(os.path.join(exp.outputs, "calls_meta.txt"), "w", encoding="utf-8") as fh:
        fh.write(format_config(meta))
    print(",".join(header))
    for r in rows:
        print(",".join(r))
    return EXIT_OK


def cli_compare(values: Dict[str, object]) -> int:
    methods = values.get("methods") or []
    if not methods:
        raise ConfigError("compare needs a non-empty method list")
    for m in methods:
        if m not in METHODS:
            raise ConfigError(f"unknown method {m!r}; expected one of {METHODS}")
    results = []
    for m in methods:
        vals = {k: v for k, v in values.items() if k not in ("method", "methods")}
        results.append(execute(build_experiment(vals, method=m)))
    out = results[0].exp.outputs
    header = ["k"]
    columns: List[List[Optional[float]]] = []
    for m, res in zip(methods, results):
        for name in ("residual", "gap", "dist2"):
            header.append(f"{m}:{name}")
            columns.append([getattr(r, name) for r in res.traj.records])
        for name in sorted(res.overlays):
            header.append(f"{m}:{name}")
            columns.append(list(res.overlays[name]))
    length = max((res.traj.iterations for res in results), default=0)
    rows = []
    for k in range(length):
        rows.append([fmt(k)] + [fmt(col[k]) if k < len(col) else "" for col in columns])
    _ensure_dir(out)
    write_csv(os.path.join(out, "compare.csv"), header, rows)
    with open(os.path.join(out, "compare_summary.txt"), "w", encoding="utf-8") as fh:
        for m, res in zip(methods, results):
            s = summary_values(res)
            fh.write(f"# {m}\n")
            fh.write(format_config({f"{m}.{k}": v for k, v in s.items()}))
    print(f"wrote {os.path.join(out, 'compare.csv')} ({length} rows, {len(methods)} methods)")
    return EXIT_OK


# ---------------------------------------------------------------- entry point

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="optimistic-bench", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value config file")
    common.add_argument("--problem", choices=KINDS)
    common.add_argument("--seed", type=int)
    common.add_argument("--iters", type=int, help="outer iteration budget")
    common.add_argument("--eps", type=float, help="target residual")
    common.add_argument("--out", help=f"output directory (default: ${OUT_ENV} or ./results)")
    common.add_argument("--paper-scale", action="store_true", help="use the large instance sizes")
    common.add_argument("--set", action="append", metavar="KEY=VALUE", help="override any config key")
    p_solve = sub.add_parser("solve", parents=[common], help="run one experiment")
    p_solve.add_argument("--method", choices=METHODS)
    p_bench = sub.add_parser("bench-calls", parents=[common], help="tabulate subsolver calls per iteration")
    p_bench.add_argument("--method", choices=("first-ls", "second-ls", "pth-ls"))
    p_bench.add_argument("--repeats", type=int)
    p_bench.add_argument("--workers", type=int)
    p_cmp = sub.add_parser("compare", parents=[common], help="run several methods on one problem")
    p_cmp.add_argument("--methods", help="comma-separated method names")
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_CONFIG if e.code else EXIT_OK
    handlers = {"solve": cli_solve, "bench-calls": cli_bench_calls, "compare": cli_compare}
    try:
        values = gather_values(args)
        return handlers[args.command](values)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (LineSearchError, SubsolverError, ReferenceError, FloatingPointError, np.linalg.LinAlgError) as e:
        print(f"solver failure: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_SOLVER
    except ValueError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
