"""Scenario execution: build from config, run, write result files.

Every run writes its result files plus a ``manifest.json`` with the config
hash, package and library versions, seed, and wall time.  Result files are
deterministic for a fixed (config, seed); the manifest carries the only
run-varying data (timing).
"""

from __future__ import annotations

import hashlib
import json
import sys
import time
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .bvp import BoundaryConditions, TGrid, bvp_discrete_residual, solve_bvp_linear, solve_bvp_semilinear
from .config import (
    build_field,
    build_nonlinearity,
    build_sector,
    build_problem,
    validate_config,
)
from .errors import ConfigError
from .evolution import (
    DEFAULT_BLOWUP_THRESHOLD,
    DEFAULT_STEP_TOL,
    solve_cauchy_linear,
    solve_cauchy_semilinear,
)
from .grids import Field
from .norms import (
    besov_norm,
    lp_norm,
    mixed_norm,
    sobolev_norm,
    trace_space_norms,
)
from .rademacher import scaled_resolvent_rbound
from .solver import apply_operator, lambda_sweep, solve_linear
from .symbols import MultiplierFamily, make_xi_grid, mikhlin_bound
from .output import write_json


def _config_hash(config) -> str:
    text = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


def _cnum(v):
    # validated already; accept number or [re, im]
    return complex(v) if isinstance(v, (int, float)) else complex(v[0], v[1])


def _time_profile(spec, path):
    kind = spec.get("kind", "constant")
    if kind == "constant":
        return lambda t, t_final=None: 1.0
    if kind == "exp-decay":
        rate = float(spec.get("rate", 1.0))
        return lambda t, t_final=None: float(np.exp(-rate * t))
    if kind == "sin-pi":
        return lambda t, t_final: float(np.sin(np.pi * t / t_final))
    raise ConfigError(f"unknown time profile {kind!r}", path)


class RunResult:
    def __init__(self, scenario, summary, files, exit_code=0):
        self.scenario = scenario
        self.summary = summary
        self.files = files
        self.exit_code = exit_code


def run_scenario(config: dict, out_dir=None, seed=None, preset_name=None) -> RunResult:
    """Validate, execute and (optionally) persist one scenario run."""
    validate_config(config)
    scenario = config["scenario"]
    run_seed = int(config.get("seed", 0) if seed is None else seed)
    rng = np.random.default_rng(run_seed)
    started = time.monotonic()

    problem = build_problem(config["problem"], "problem")
    section = config.get(scenario, {}) or {}

    files = {}
    summary = {"scenario": scenario, "seed": run_seed}
    exit_code = 0
    out = Path(out_dir) if out_dir is not None else None
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)

    def emit_json(name, payload):
        if out is not None:
            write_json(out / name, payload)
            files[name] = str(out / name)

    if scenario == "check-condition":
        sector = build_sector(
            section.get("sector_angle", np.pi / 2), "check-condition.sector_angle"
        )
        per_side = int(section.get("xi_points_per_side", 1200))
        report = problem.check_condition(
            xi_grid=make_xi_grid(per_side=per_side), lambda_sector=sector
        )
        summary.update(report.to_dict())
        emit_json("condition_report.json", report.to_dict())
        if not report.all_pass:
            exit_code = 4
    else:
        problem.check_condition()  # solves below are gated on this
        if scenario == "solve-linear":
            lam = _cnum(section.get("lambda", 0.0))
            f = build_field(section["forcing"], "solve-linear.forcing",
                            problem.grid, problem.operator, rng)
            u = solve_linear(problem, f, lam)
            residual = apply_operator(problem, u, lam).values - f.values
            summary.update(
                {
                    "lambda": lam,
                    "u_lp": lp_norm(u, problem.p),
                    "f_lp": lp_norm(f, problem.p),
                    "residual_sup": float(np.max(np.abs(residual))),
                }
            )
            if out is not None:
                u.to_csv(out / "solution.csv")
                files["solution.csv"] = str(out / "solution.csv")
            emit_json("summary.json", summary)
        elif scenario == "lambda-sweep":
            lambdas = [_cnum(v) for v in section["lambdas"]]
            f = build_field(section["forcing"], "lambda-sweep.forcing",
                            problem.grid, problem.operator, rng)
            table = lambda_sweep(problem, f, lambdas)
            summary.update(
                {
                    "max_resolvent_value": table.max_resolvent_value,
                    "ratio_spread": table.ratio_spread,
                    "rows": len(table.rows),
                }
            )
            if out is not None:
                table.to_csv(out / "sweep.csv")
                files["sweep.csv"] = str(out / "sweep.csv")
            emit_json("summary.json", summary)
        elif scenario == "mikhlin":
            lambdas = [_cnum(v) for v in section["lambdas"]]
            families = section.get("families", [0, 1, 2, 3, 4, "sigma"])
            grid = make_xi_grid()
            bounds = {}
            for index in families:
                fams = {
                    lam: MultiplierFamily(problem.symbols, index, lam) for lam in lambdas
                }
                bound = mikhlin_bound(
                    lambda lam, xi: fams[lam].scalar_symbol(xi), lambdas, grid
                )
                bounds[str(index)] = bound
            summary["bounds"] = bounds
            emit_json("mikhlin.json", summary)
        elif scenario == "rbound":
            xi_samples = [float(v) for v in section["xi_samples"]]
            lambdas = [_cnum(v) for v in section["lambdas"]]
            trials = int(section.get("trials", 200))
            estimate, uniform = scaled_resolvent_rbound(
                problem, xi_samples, lambdas, p=problem.p, trials=trials, seed=run_seed
            )
            summary.update(estimate.to_dict())
            summary["uniform_bound"] = uniform
            emit_json("rbound.json", summary)
        elif scenario == "solve-parabolic":
            t_final = float(section["t_final"])
            dt = float(section["dt"])
            u0 = build_field(section["initial"], "solve-parabolic.initial",
                             problem.grid, problem.operator, rng)
            store_every = int(section.get("store_every", 0))
            nl_spec = section.get("nonlinearity")
            if nl_spec is not None and nl_spec.get("kind") != "none":
                if section.get("forcing") is not None:
                    raise ConfigError(
                        "semilinear runs take no forcing",
                        "solve-parabolic.forcing",
                    )
                nl = build_nonlinearity(nl_spec, "solve-parabolic.nonlinearity")
                state, report = solve_cauchy_semilinear(
                    problem,
                    u0,
                    nl,
                    t_final=t_final,
                    dt=dt,
                    blowup_threshold=float(
                        section.get("blowup_threshold", DEFAULT_BLOWUP_THRESHOLD)
                    ),
                    step_tol=float(section.get("step_tol", DEFAULT_STEP_TOL)),
                    store_every=store_every,
                )
                summary.update(report.to_dict())
                emit_json("report.json", report.to_dict())
            else:
                forcing = None
                fs = section.get("forcing")
                if fs is not None:
                    space = build_field(fs.get("space", {"type": "zero"}),
                                        "solve-parabolic.forcing.space",
                                        problem.grid, problem.operator, rng)
                    prof = _time_profile(fs.get("time", {}), "solve-parabolic.forcing.time")
                    forcing = lambda t: space.values * prof(t, t_final)
                state = solve_cauchy_linear(
                    problem, u0, forcing=forcing, t_final=t_final, dt=dt,
                    store_every=store_every,
                )
                final = state.final
                summary.update(
                    {
                        "completed": True,
                        "t_max": state.t,
                        "final_norms": {
                            "u_lp": lp_norm(final, problem.p),
                            "u_sup": float(np.max(np.abs(final.values))),
                        },
                    }
                )
                emit_json("report.json", {k: summary[k] for k in
                                          ("completed", "t_max", "final_norms")})
            if out is not None:
                state.to_csv(out / "trajectory.csv")
                files["trajectory.csv"] = str(out / "trajectory.csv")
        elif scenario == "solve-elliptic":
            t_final = float(section["t_final"])
            tgrid = TGrid(t_final=t_final, m=int(section["m"]))
            bc_spec = section["bc"]
            from .config import _check_keys  # reuse strict walker

            _check_keys(
                bc_spec,
                "solve-elliptic.bc",
                required=("alpha1", "beta1", "alpha2", "beta2", "f1", "f2"),
            )
            bc = BoundaryConditions(
                alpha1=_cnum(bc_spec["alpha1"]),
                beta1=_cnum(bc_spec["beta1"]),
                alpha2=_cnum(bc_spec["alpha2"]),
                beta2=_cnum(bc_spec["beta2"]),
                f1=build_field(bc_spec["f1"], "solve-elliptic.bc.f1",
                               problem.grid, problem.operator, rng),
                f2=build_field(bc_spec["f2"], "solve-elliptic.bc.f2",
                               problem.grid, problem.operator, rng),
            )
            nl_spec = section.get("nonlinearity")
            if nl_spec is not None and nl_spec.get("kind") != "none":
                nl = build_nonlinearity(nl_spec, "solve-elliptic.nonlinearity")
                u, report = solve_bvp_semilinear(
                    problem,
                    bc,
                    tgrid,
                    nl,
                    max_iter=int(section.get("max_iter", 30)),
                    tol=float(section.get("tol", 1e-8)),
                    max_t_halvings=int(section.get("max_t_halvings", 0)),
                )
                summary.update(report.to_dict())
                emit_json("iterations.json", report.to_dict())
            else:
                forcing = None
                fs = section.get("forcing")
                if fs is not None:
                    space = build_field(fs.get("space", {"type": "zero"}),
                                        "solve-elliptic.forcing.space",
                                        problem.grid, problem.operator, rng)
                    prof = _time_profile(fs.get("time", {}), "solve-elliptic.forcing.time")
                    forcing = np.stack(
                        [space.values * prof(float(t), t_final) for t in tgrid.t]
                    )
                u = solve_bvp_linear(problem, bc, tgrid, forcing=forcing)
                summary["residual"] = bvp_discrete_residual(
                    problem, bc, tgrid, u, forcing=forcing
                )
                emit_json("iterations.json", {"converged": True, "iterations": 0,
                                              "residual": summary["residual"]})
            summary["u_sup"] = float(np.max(np.abs(u.values)))
            if out is not None:
                u.to_csv(out / "solution.csv")
                files["solution.csv"] = str(out / "solution.csv")
        elif scenario == "norms-report":
            field = build_field(section["field"], "norms-report.field",
                                problem.grid, problem.operator, rng)
            values = {}
            for i, entry in enumerate(section["norms"]):
                path = f"norms-report.norms[{i}]"
                kind = entry.get("kind")
                p = float(entry.get("p", 2.0))
                q = float(entry.get("q", 2.0))
                if kind == "lp":
                    values[f"lp_p{p:g}"] = lp_norm(field, p)
                elif kind == "sobolev":
                    l = int(entry.get("l", problem.symbols.l))
                    values[f"sobolev_l{l}_p{p:g}"] = sobolev_norm(
                        field, l, p, problem.operator
                    )
                elif kind == "besov":
                    s = float(entry.get("s", 1.0))
                    values[f"besov_s{s:g}_q{q:g}_p{p:g}"] = besov_norm(field, s, q, p)
                elif kind == "trace":
                    l = int(entry.get("l", max(problem.symbols.l, 1)))
                    x0, x1 = trace_space_norms(field, field, l, p, q, problem.operator)
                    values[f"trace_x0_l{l}_p{p:g}_q{q:g}"] = x0
                    values[f"trace_x1_l{l}_p{p:g}_q{q:g}"] = x1
                elif kind == "mixed":
                    points = int(entry.get("time_points", 64))
                    t = (np.arange(points) + 0.5) / points
                    strip = t[:, None, None] * field.values[None, :, :]
                    values[f"mixed_p{p:g}_q{q:g}"] = mixed_norm(
                        strip, p, q, 1.0 / points, field.grid.h
                    )
                else:
                    raise ConfigError(f"unknown norm kind {kind!r}", f"{path}.kind")
            summary["norms"] = values
            emit_json("norms.json", summary)

    elapsed = time.monotonic() - started
    if out is not None:
        manifest = {
            "scenario": scenario,
            "preset": preset_name,
            "config_sha256": _config_hash(config),
            "seed": run_seed,
            "versions": {
                "python": sys.version.split()[0],
                "numpy": np.__version__,
                "scipy": scipy.__version__,
                "coesolve": __version__,
            },
            "elapsed_seconds": elapsed,
            "outputs": sorted(files),
        }
        write_json(out / "manifest.json", manifest)
        files["manifest.json"] = str(out / "manifest.json")
    return RunResult(scenario, summary, files, exit_code)
