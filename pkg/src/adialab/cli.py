"""
Command-line surface: `adialab <geometry> [options]`, `adialab suite` and `adialab golden`.

Exit codes: 0 all checks pass, 1 some check failed numerically, 2 config
error, 3 convergence failure.
"""

import logging
import os
from typing import Optional, Sequence

import click

from adialab.config import get_output_dir
from adialab.errors import ConfigError
from adialab.experiment import COMPATIBLE_MODES, GEOMETRIES, parse_config
from adialab.golden import DEFAULT_DPS, write_golden
from adialab.graph import run_experiment
from adialab.report import emit_report, render_csv, render_json, verdict_line, write_text
from adialab.state import CheckResult, ExperimentConfig, FitRecord

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG_ERROR = 2
EXIT_CONVERGENCE = 3


def _configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(asctime)s %(name)s %(levelname)s: %(message)s",
        force=True,
    )


def _float_list(ctx, param, value: Optional[str]) -> Optional[list[float]]:
    if value is None:
        return None
    try:
        return [float(item) for item in value.split(",") if item.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated numbers, got {value!r}")


def _int_list(ctx, param, value: Optional[str]) -> Optional[list[int]]:
    if value is None:
        return None
    try:
        return [int(item) for item in value.split(",")]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got {value!r}")


def _exit_code(checks: Sequence[CheckResult], failures: Sequence[str]) -> int:
    if failures:
        return EXIT_CONVERGENCE
    if any(not c["passed"] for c in checks):
        return EXIT_CHECK_FAILED
    return EXIT_OK


def _run_configs(configs: Sequence[ExperimentConfig]) -> tuple[list[CheckResult], list[FitRecord], list[str]]:
    checks: list[CheckResult] = []
    fits: list[FitRecord] = []
    failures: list[str] = []
    for config in configs:
        state = run_experiment(config)
        checks += state["results"]
        fits += state.get("fits", [])
        failures += state["failures"]
    return checks, fits, failures


def _emit(ctx: click.Context, checks, fits, failures, config_echo, csv_path, json_path, report_path, criteria=None) -> None:
    verdict = verdict_line(checks)
    report = emit_report(checks, fits, verdict, criteria)
    if csv_path:
        write_text(csv_path, render_csv(checks))
    if json_path:
        write_text(json_path, render_json(config_echo, checks, fits, verdict))
    if report_path:
        write_text(report_path, report)
    click.echo(report)
    for failure in failures:
        click.echo(f"convergence failure: {failure}", err=True)
    ctx.exit(_exit_code(checks, failures))


@click.group()
def main():
    """Numerical laboratory for adiabatic limits of foliations."""


def _geometry_command(geometry: str):
    modes = COMPATIBLE_MODES[geometry]

    @click.option("--mode", type=click.Choice(modes), default=None, help=f"Experiment mode, one of {', '.join(modes)}.")
    @click.option("--alpha", type=float, default=None, help="Slope alpha (treated as irrational unless --rational is given).")
    @click.option("--alpha-sqrt2", is_flag=True, help="Slope alpha = sqrt(2), declared irrational.")
    @click.option("--alpha-golden", is_flag=True, help="Slope alpha = (1 + sqrt(5)) / 2, declared irrational.")
    @click.option("--rational", type=str, default=None, help="Rational slope p/q in lowest terms.")
    @click.option("--eps", type=str, callback=_float_list, default=None, help="Comma-separated adiabatic parameters.")
    @click.option("--t", "t_values", type=str, callback=_float_list, default=None, help="Comma-separated heat times.")
    @click.option("--lambda", "lambdas", type=str, callback=_float_list, default=None, help="Comma-separated spectral cutoffs.")
    @click.option("--omega", type=str, callback=_float_list, default=None, help="Comma-separated oscillator frequencies.")
    @click.option("--a", type=float, default=None, help="Mathieu potential amplitude (default 1).")
    @click.option("--mu", type=float, default=None, help="Mathieu potential rate (default 1).")
    @click.option("--matrix", type=str, callback=_int_list, default=None, help="Sol gluing matrix a11,a12,a21,a22 (default 2,1,1,1).")
    @click.option("--potential", type=click.Choice(["flat", "cosine", "constant"]), default=None, help="Reference potential (default flat).")
    @click.option("--amplitude", type=float, default=None, help="Reference potential amplitude (default 1).")
    @click.option("--n-points", type=int, default=None, help="Grid size of circle eigensolves (default 1000).")
    @click.option("--tol", type=float, default=None, help="Override the tolerance of every ratio check.")
    @click.option("--out-csv", type=click.Path(dir_okay=False), default=None, help="Write the data table here.")
    @click.option("--out-json", type=click.Path(dir_okay=False), default=None, help="Write the JSON summary here.")
    @click.option("--report", type=click.Path(dir_okay=False), default=None, help="Write the markdown report here.")
    @click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None, help="JSON config file; flags override it.")
    @click.option("--verbose", is_flag=True, help="Log numerical progress to stderr.")
    @click.pass_context
    def command(ctx, mode, alpha, alpha_sqrt2, alpha_golden, rational, eps, t_values, lambdas, omega, a, mu, matrix,
                potential, amplitude, n_points, tol, out_csv, out_json, report, config_path, verbose):
        _configure_logging(verbose)
        if alpha_sqrt2 and alpha_golden:
            raise click.UsageError("alpha: choose at most one of --alpha-sqrt2 and --alpha-golden")
        named = "sqrt2" if alpha_sqrt2 else "golden" if alpha_golden else None
        if named and (alpha is not None or rational is not None):
            raise click.UsageError("alpha: a named irrational slope excludes --alpha and --rational")
        overrides = {
            "mode": mode,
            "alpha": alpha,
            "alpha_name": named,
            "rational": rational,
            "eps": eps,
            "t": t_values,
            "lambda": lambdas,
            "omega": omega,
            "a": a,
            "mu": mu,
            "matrix": matrix,
            "potential": potential,
            "amplitude": amplitude,
            "n_points": n_points,
            "tolerance": tol,
            "out_csv": out_csv,
            "out_json": out_json,
            "report": report,
        }
        try:
            config = parse_config(geometry, overrides, config_path)
        except ConfigError as e:
            raise click.UsageError(str(e))
        checks, fits, failures = _run_configs([config])
        _emit(ctx, checks, fits, failures, config, config.get("out_csv"), config.get("out_json"), config.get("report"))

    command.__doc__ = f"Run {geometry} experiments (modes: {', '.join(modes)})."
    return main.command(name=geometry)(command)


for _geometry in GEOMETRIES:
    _geometry_command(_geometry)


@main.command()
@click.option("--out-dir", type=click.Path(file_okay=False), default=None, help="Output directory (default ADIALAB_OUTPUT_DIR or .).")
@click.option("--verbose", is_flag=True, help="Log numerical progress to stderr.")
@click.pass_context
def suite(ctx, out_dir, verbose):
    """Run the default acceptance suite and write suite.csv, suite.json and suite.md."""
    from experiments import ACCEPTANCE_SUITE

    _configure_logging(verbose)
    out_dir = out_dir or get_output_dir()
    checks: list[CheckResult] = []
    fits: list[FitRecord] = []
    failures: list[str] = []
    configs: list[ExperimentConfig] = []
    criteria: list[tuple[str, bool]] = []
    for label, entries in ACCEPTANCE_SUITE:
        group = [parse_config(entry["geometry"], entry) for entry in entries]
        group_checks, group_fits, group_failures = _run_configs(group)
        criteria.append((label, not group_failures and all(c["passed"] for c in group_checks)))
        checks += group_checks
        fits += group_fits
        failures += group_failures
        configs += group
    _emit(
        ctx,
        checks,
        fits,
        failures,
        configs,
        os.path.join(out_dir, "suite.csv"),
        os.path.join(out_dir, "suite.json"),
        os.path.join(out_dir, "suite.md"),
        criteria,
    )


@main.command()
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Output file (default <output dir>/golden.json).")
@click.option("--dps", type=int, default=DEFAULT_DPS, show_default=True, help="mpmath working precision.")
@click.option("--verbose", is_flag=True, help="Log oracle progress to stderr.")
def golden(out, dps, verbose):
    """Recompute the high-precision oracle constants and write them as JSON."""
    _configure_logging(verbose)
    path = out or os.path.join(get_output_dir(), "golden.json")
    values = write_golden(path, dps)
    for name, entry in values.items():
        click.echo(f"{name} = {entry['value']!r}")
    click.echo(f"wrote {path}")


if __name__ == "__main__":
    main()
