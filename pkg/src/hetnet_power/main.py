#!/usr/bin/env python3
"""
HetNet power planner - command line interface

Usage:
    hetnet-power [OPTIONS] COMMAND [ARGS]

Commands:
    gen       Generate a synthetic scenario
    fit       Fit and certify a piecewise rate approximation
    solve     Solve the deterministic or robust power program
    validate  Monte Carlo validation of one or more solutions
    sweep     Objective versus sigma / probability grids
    bnb       Branch & bound association search with statistics
    config    Show the active configuration

Exit codes: 0 solved, 2 infeasible, 1 error.
"""

import sys
from dataclasses import asdict
from pathlib import Path
from typing import List, Optional

import click
import pandas as pd
from loguru import logger

from .approx.piecewise import fit_piecewise, verify_lower_bound
from .approx.registry import resolve_approx
from .exceptions import HetNetError, InfeasibleError, ScenarioError, SolverError
from .models.result import SolveResult, SolveStatus
from .models.scenario import Association
from .models.uncertainty import GainDistribution, RobustConfig, UncertaintyBox
from .montecarlo.validation import demand_stress, validate as run_validation
from .network.audit import check_shapes
from .network.generator import gen_synthetic
from .planner import ASSOC_MODES, PowerPlanner
from .sweep import run_sweep
from .utils import Settings, set_config, setup_logging
from .utils.io import (
    dumps,
    load_model,
    load_scenario,
    read_json,
    save_scenario,
    write_csv,
    write_json,
    write_manifest,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2


def _float_list(ctx, param, value):
    if value is None:
        return []
    try:
        values = [float(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated numbers, got '{value}'")
    return values


def _parse_assoc(value: str):
    if value.startswith("fixed:"):
        data = read_json(value[len("fixed:"):])
        if isinstance(data, dict) and "assoc" in data:
            data = data["assoc"]
        if isinstance(data, list):
            data = {"serving": data}
        try:
            return Association.model_validate(data)
        except Exception as e:
            raise ScenarioError(f"Invalid association file: {e}", field="--assoc") from e
    if value not in ASSOC_MODES:
        raise ScenarioError(
            f"--assoc must be fixed:<file> or one of {', '.join(ASSOC_MODES)}", field="--assoc"
        )
    return value


def _planner(config: Settings, approx: Optional[str]) -> PowerPlanner:
    try:
        pw = resolve_approx(approx or config.approx)
    except (ValueError, HetNetError) as e:
        raise ScenarioError(f"--approx: {e}", field="--approx") from e
    return PowerPlanner(config, pw)


def _fail(message: str, code: int = EXIT_ERROR) -> None:
    click.echo(message, err=True)
    logger.error(message)
    sys.exit(code)


def _flags(ctx) -> dict:
    return {k: v for k, v in sorted(ctx.params.items())}


def _write_failure(out: Path, error: SolverError) -> None:
    write_json(out, {"status": error.status, "message": str(error), "details": error.details})


@click.group()
@click.option("--config-file", type=click.Path(), help="Path to an env-style configuration file")
@click.option(
    "--log-level",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]),
    help="Override log level",
)
@click.pass_context
def cli(ctx, config_file, log_level):
    """Robust power minimization for OFDMA heterogeneous networks"""

    try:
        if config_file and Path(config_file).exists():
            config = Settings(_env_file=config_file)
        else:
            config = Settings()
    except Exception as e:
        click.echo(f"Error loading configuration: {e}", err=True)
        sys.exit(EXIT_ERROR)

    if log_level:
        config.log_level = log_level

    setup_logging(config.log_level, config.log_dir)
    set_config(config)

    ctx.ensure_object(dict)
    ctx.obj["config"] = config


@cli.command()
@click.option("--n", "n_users", type=click.IntRange(min=1), required=True, help="Users")
@click.option("--bs", "n_bs", type=click.IntRange(min=1), required=True, help="Base stations")
@click.option("--area", type=float, default=500.0, show_default=True, help="Square side (m)")
@click.option("--exponent", type=float, default=3.5, show_default=True, help="Path-loss exponent")
@click.option("--ref-loss", type=float, default=40.0, show_default=True, help="Loss at 1 m (dB)")
@click.option("--sigma", type=float, default=3.0, show_default=True, help="Shadowing std (dB)")
@click.option("--demand", callback=_float_list, default="5e5,2e6", show_default=True,
              help="Demand range min,max (bits/s)")
@click.option("--bandwidth", type=float, default=20e6, show_default=True, help="Per-BS bandwidth (Hz)")
@click.option("--p-max", type=float, default=1.0, show_default=True, help="Per-BS power cap (W)")
@click.option("--noise", type=float, default=1e-13, show_default=True, help="Noise power (W)")
@click.option("--placement", type=click.Choice(["uniform", "clustered"]), default="uniform",
              show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.pass_context
def gen(ctx, n_users, n_bs, area, exponent, ref_loss, sigma, demand, bandwidth, p_max, noise,
        placement, seed, out):
    """Generate a synthetic log-distance scenario"""
    if len(demand) != 2:
        raise click.BadParameter("expected two values min,max", param_hint="--demand")
    try:
        scenario = gen_synthetic(
            n_users,
            n_bs,
            area_size=area,
            pathloss_exponent=exponent,
            ref_loss_db=ref_loss,
            sigma_db=sigma,
            demand_range=(demand[0], demand[1]),
            seed=seed,
            bandwidth_hz=bandwidth,
            p_max_w=p_max,
            noise_w=noise,
            placement=placement,
        )
    except (HetNetError, ValueError) as e:
        _fail(f"Invalid generator parameters: {e}")
    save_scenario(scenario, out)
    write_manifest(out, "gen", _flags(ctx), seed)
    click.echo(f"Scenario written to {out} (n={n_users}, N={n_bs}, seed={seed})")


@cli.command()
@click.option("--m", "m", type=click.IntRange(min=1), default=5, show_default=True)
@click.option("--s-min", type=float, default=0.01, show_default=True)
@click.option("--s-max", type=float, default=100.0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.pass_context
def fit(ctx, m, s_min, s_max, out):
    """Fit a certified piecewise monomial lower bound of log2(1+s)"""
    try:
        pw = fit_piecewise(m, s_min, s_max)
    except (HetNetError, ValueError) as e:
        _fail(f"Fit failed: {e}")
    report = verify_lower_bound(pw)
    write_json(out, pw)
    out_path = Path(out)
    write_json(out_path.with_name(f"{out_path.stem}.certification.json"), report)
    write_manifest(out, "fit", _flags(ctx))
    click.echo(
        f"Fitted m={m} on [{s_min:g}, {s_max:g}]: max excess {report.max_excess:.3e} "
        f"({'certified' if report.passed else 'NOT certified'})"
    )


def _robust_options(func):
    func = click.option("--alpha", type=float, default=0.0993, show_default=True,
                        help="Per-user violation budget")(func)
    func = click.option("--sigma-scale", type=float, default=1.0, show_default=True,
                        help="Multiplier on the scenario sigmas")(func)
    func = click.option("--box-policy", type=click.Choice(["one-sided", "two-sided"]),
                        default=None, help="Uncertainty box policy")(func)
    func = click.option("--approx", default=None,
                        help="paper-m5 | fit:<m>,<smin>,<smax> | file:<path>")(func)
    return func


@cli.command()
@click.option("--scenario", "scenario_path", type=click.Path(exists=True, dir_okay=False),
              required=True)
@click.option("--mode", type=click.Choice(["deterministic", "robust"]), default="robust",
              show_default=True)
@_robust_options
@click.option("--assoc", default="greedy", show_default=True,
              help="fixed:<file> | greedy | enumerate | bnb")
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.pass_context
def solve(ctx, scenario_path, mode, alpha, sigma_scale, box_policy, approx, assoc, out):
    """Solve the power minimization program"""
    config = ctx.obj["config"]
    try:
        scenario = load_scenario(scenario_path)
        planner = _planner(config, approx)
        robust = RobustConfig(
            alpha=alpha, sigma_scale=sigma_scale, policy=box_policy or config.box_policy
        )
        result = planner.solve(scenario, mode, robust, _parse_assoc(assoc))
    except InfeasibleError as e:
        _write_failure(Path(out), e)
        write_manifest(out, "solve", _flags(ctx), config.seed)
        _fail(f"Infeasible: {e}", EXIT_INFEASIBLE)
    except SolverError as e:
        _write_failure(Path(out), e)
        write_manifest(out, "solve", _flags(ctx), config.seed)
        _fail(f"Solver failed ({e.status}): {e}")
    except (HetNetError, ValueError) as e:
        _fail(f"Error: {e}")

    write_json(out, result)
    write_manifest(out, "solve", _flags(ctx), config.seed)
    click.echo(f"status: {result.status.value}")
    click.echo(f"objective: {result.objective:.9g} W")


def _load_result(path: str) -> SolveResult:
    data = read_json(path)
    if isinstance(data, dict) and "P" not in data:
        raise ScenarioError(
            f"{path} holds no solution (status {data.get('status')})", field="--result"
        )
    return load_model(SolveResult, path)


@cli.command()
@click.option("--scenario", "scenario_path", type=click.Path(exists=True, dir_okay=False),
              required=True)
@click.option("--result", "result_paths", type=click.Path(exists=True, dir_okay=False),
              multiple=True, required=True, help="Result JSON; repeatable")
@click.option("--dist", "dists", multiple=True, default=("lognormal",), show_default=True,
              help="lognormal | uniform:<k> | student:<dof>; repeatable")
@click.option("--samples", type=click.IntRange(min=1), default=None)
@click.option("--seed", type=int, default=None)
@click.option("--sigma-scale", type=float, default=1.0, show_default=True,
              help="Multiplier on the scenario sigmas used for sampling")
@click.option("--box", "box_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Box JSON for outside-box statistics (defaults to the result's box)")
@click.option("--stress", callback=_float_list, default=None,
              help="Demand factors, e.g. 1.0,1.1,1.2")
@click.option("--workers", type=click.IntRange(min=1), default=None)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.pass_context
def validate(ctx, scenario_path, result_paths, dists, samples, seed, sigma_scale, box_path,
             stress, workers, out):
    """Monte Carlo throughput-violation statistics"""
    config = ctx.obj["config"]
    samples = samples or config.mc_samples
    seed = config.seed if seed is None else seed
    workers = workers or config.workers
    try:
        scenario = load_scenario(scenario_path)
        distributions = [GainDistribution.parse(d) for d in dists]
        box = load_model(UncertaintyBox, box_path) if box_path else None
        results = {Path(p).stem: _load_result(p) for p in result_paths}
        for result in results.values():
            check_shapes(result, scenario)
    except (HetNetError, ValueError) as e:
        _fail(f"Error: {e}")

    frames: List[pd.DataFrame] = []
    stress_frames: List[pd.DataFrame] = []
    summary = {"seed": seed, "samples": samples, "sigma_scale": sigma_scale, "reports": []}
    for label, result in results.items():
        for dist in distributions:
            report = run_validation(
                result,
                scenario,
                dist,
                samples,
                seed,
                box=box or result.box,
                sigma_scale=sigma_scale,
                workers=workers,
            )
            frames.append(report.to_frame(label))
            summary["reports"].append(
                {
                    "result": label,
                    "dist": dist.label,
                    "overall_violation": report.overall_violation,
                    "overall_outside": report.overall_outside,
                }
            )
            click.echo(f"{label} [{dist.label}]: {100 * report.overall_violation:.4f}% violations")
            if stress:
                table = demand_stress(
                    result, scenario, dist, stress, samples, seed, sigma_scale, workers
                )
                table.insert(0, "result", label)
                stress_frames.append(table)

    out_path = Path(out)
    write_csv(pd.concat(frames, ignore_index=True), out_path)
    write_json(out_path.with_name(f"{out_path.stem}.summary.json"), summary)
    if stress_frames:
        write_csv(
            pd.concat(stress_frames, ignore_index=True),
            out_path.with_name(f"{out_path.stem}.stress.csv"),
        )
    write_manifest(out, "validate", _flags(ctx), seed)


@cli.command()
@click.option("--scenario", "scenario_path", type=click.Path(exists=True, dir_okay=False),
              required=True)
@click.option("--sigma", "sigma_values", callback=_float_list, default=None,
              help="Sigma grid (dB), e.g. 2,3,4")
@click.option("--prob", "probabilities", callback=_float_list, default=None,
              help="Probability grid, e.g. 0.8,0.85,0.9")
@click.option("--fixed-prob", type=float, default=0.9, show_default=True)
@click.option("--fixed-sigma", type=float, default=None,
              help="Sigma for the probability grid (defaults to the scenario's)")
@click.option("--box-policy", type=click.Choice(["one-sided", "two-sided"]), default=None)
@click.option("--approx", default=None)
@click.option("--assoc", default="greedy", show_default=True)
@click.option("--workers", type=click.IntRange(min=1), default=None)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.pass_context
def sweep(ctx, scenario_path, sigma_values, probabilities, fixed_prob, fixed_sigma, box_policy,
          approx, assoc, workers, out):
    """Solve the robust program over sigma and probability grids"""
    config = ctx.obj["config"]
    if not sigma_values and not probabilities:
        raise click.UsageError("give --sigma and/or --prob")
    try:
        scenario = load_scenario(scenario_path)
        planner = _planner(config, approx)
        table = run_sweep(
            planner,
            scenario,
            sigma_values,
            probabilities,
            fixed_probability=fixed_prob,
            fixed_sigma=fixed_sigma,
            policy=box_policy or config.box_policy,
            assoc=_parse_assoc(assoc),
            workers=workers or config.workers,
        )
    except (HetNetError, ValueError) as e:
        _fail(f"Error: {e}")

    write_csv(table, out)
    write_manifest(out, "sweep", _flags(ctx), config.seed)
    for row in table.itertuples():
        click.echo(f"{row.sweep}[{row.index}] sigma={row.sigma_db:g} p={row.probability:g}: "
                   f"{row.status} {row.objective:.6g}")
    solved = table["status"].isin([SolveStatus.OPTIMAL.value, SolveStatus.GAP_NOT_CERTIFIED.value])
    if solved.any():
        sys.exit(EXIT_OK)
    sys.exit(EXIT_INFEASIBLE if (table["status"] == "infeasible").all() else EXIT_ERROR)


@cli.command()
@click.option("--scenario", "scenario_path", type=click.Path(exists=True, dir_okay=False),
              required=True)
@click.option("--mode", type=click.Choice(["deterministic", "robust"]), default="robust",
              show_default=True)
@_robust_options
@click.option("--node-limit", type=click.IntRange(min=1), default=None)
@click.option("--gap", type=float, default=None, help="Relative gap target")
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.pass_context
def bnb(ctx, scenario_path, mode, alpha, sigma_scale, box_policy, approx, node_limit, gap, out):
    """Branch & bound association search"""
    config = ctx.obj["config"]
    updates = {}
    if node_limit is not None:
        updates["node_limit"] = node_limit
    if gap is not None:
        updates["gap_target"] = gap
    config = config.model_copy(update=updates)
    try:
        scenario = load_scenario(scenario_path)
        planner = _planner(config, approx)
        robust = RobustConfig(
            alpha=alpha, sigma_scale=sigma_scale, policy=box_policy or config.box_policy
        )
        result = planner.solve(scenario, mode, robust, "bnb")
    except InfeasibleError as e:
        _write_failure(Path(out), e)
        _fail(f"Infeasible: {e}", EXIT_INFEASIBLE)
    except (HetNetError, ValueError) as e:
        _fail(f"Error: {e}")

    outcome = planner.last_bnb
    out_path = Path(out)
    write_json(out, result)
    stats = {
        "certified": outcome.certified,
        "gap": outcome.gap,
        "status": outcome.status.value,
        "stats": asdict(outcome.stats),
    }
    write_json(out_path.with_name(f"{out_path.stem}.bnb.json"), stats)
    write_manifest(out, "bnb", _flags(ctx), config.seed)
    click.echo(f"objective: {result.objective:.9g} W")
    click.echo(
        f"nodes: {outcome.stats.nodes_explored} explored, {outcome.stats.nodes_pruned} pruned; "
        f"gap {outcome.gap:.3e} ({'certified' if outcome.certified else 'gap not certified'})"
    )


@cli.command()
@click.pass_context
def config(ctx):
    """Show current configuration"""
    click.echo(dumps(ctx.obj["config"].model_dump()), nl=False)


def main():
    """Main entry point"""
    try:
        cli()
    except Exception as e:
        click.echo(f"Application error: {e}", err=True)
        sys.exit(EXIT_ERROR)


if __name__ == "__main__":
    main()
