"""Command-line interface: fit, decide, criterion, simulate.

Exit codes: 0 success, 2 usage error, 3 I/O or parse/validation error,
4 numerical failure (including solver non-convergence).
"""

from __future__ import annotations

import sys
from pathlib import Path

import click
import numpy as np

from . import report as rpt
from .config import parse_simulation_config
from .criterion import (
    FAMILY_PARAMETERS,
    FamilySpec,
    efficiency_ratio,
    family_criterion,
    parameter_sweep,
)
from .data import RegressionData
from .decision import decision_from_residuals
from .errors import DataValidationError, NumericalError, TableParseError
from .estimator import fit as fit_model
from .estimator import fit_l2k, fit_ols
from .figures import render_risk_figure, render_sweep_figure
from .ingest import load_regression, read_table
from .moments import sample_central_moments
from .quality import fit_quality
from .simulate import run_risk_study

EXIT_USAGE = 2
EXIT_IO = 3
EXIT_NUMERIC = 4


def _write_or_echo(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    click.echo(text, nl=False)


@click.group()
@click.version_option(package_name="l2kreg")
def cli():
    """Regression with even-power losses: fitting, efficiency criteria,
    decision rule, and simulation studies."""


@cli.command("fit")
@click.option("--input", "input_path", required=True, help="Delimited data table.")
@click.option("--response-col", default=None,
              help="Response column name (default: first column).")
@click.option("--loss-order", default=2, show_default=True,
              help="Even loss order: 2, 4 or 6.")
@click.option("--delimiter", default=None, help="Field delimiter (auto: , tab ;).")
@click.option("--no-intercept", is_flag=True,
              help="Do not prepend an intercept column.")
@click.option("--out", default=None, help="Also write the report to this file.")
@click.option("--format", "fmt", type=click.Choice(["json", "text"]),
              default="text", show_default=True)
def cmd_fit(input_path, response_col, loss_order, delimiter, no_intercept, out, fmt):
    """Fit a linear model under the chosen loss order."""
    if loss_order not in (2, 4, 6):
        raise click.UsageError("loss order must be even: one of 2, 4, 6")
    data, names = load_regression(input_path, response_col=response_col,
                                  delimiter=delimiter,
                                  add_intercept=not no_intercept)
    result = fit_model(data, loss_order)
    quality = fit_quality(data, result.beta_hat, loss_order)
    if fmt == "json":
        text = rpt.to_json(rpt.estimate_to_dict(result, names, quality))
    else:
        text = rpt.estimate_to_text(result, names, quality)
    _write_or_echo(text, out)
    if not result.converged:
        sys.exit(EXIT_NUMERIC)


@cli.command("decide")
@click.option("--input", "input_path", required=True, help="Delimited data table.")
@click.option("--response-col", default=None,
              help="Response column name (default: first column).")
@click.option("--mode", type=click.Choice(["plugin", "test"]), default="plugin",
              show_default=True)
@click.option("--alpha", default=0.05, show_default=True,
              help="Level for the one-sided test and the interval.")
@click.option("--delimiter", default=None, help="Field delimiter (auto: , tab ;).")
@click.option("--out", default=None, help="Also write the report to this file.")
@click.option("--format", "fmt", type=click.Choice(["json", "text"]),
              default="text", show_default=True)
def cmd_decide(input_path, response_col, mode, alpha, delimiter, out, fmt):
    """Decide between least squares and the order-4 loss for a dataset."""
    if not 0.0 < alpha < 1.0:
        raise click.UsageError("--alpha must lie in (0, 1)")
    data, _names = load_regression(input_path, response_col=response_col,
                                   delimiter=delimiter)
    ols = fit_ols(data)
    residuals = data.response - data.design @ ols.beta_hat
    stats = decision_from_residuals(residuals, mode=mode, alpha_level=alpha)
    l4 = fit_l2k(data, 2)
    pair = {
        "l2": fit_quality(data, ols.beta_hat, 2).r2_rg,
        "l4": fit_quality(data, l4.beta_hat, 4).r2_rg,
    }
    if fmt == "json":
        text = rpt.to_json(rpt.decision_to_dict(stats, pair))
    else:
        text = rpt.decision_to_text(stats, pair)
    _write_or_echo(text, out)


def _parse_params(params) -> dict:
    out = {}
    for item in params:
        if "=" not in item:
            raise click.UsageError(f"--param expects NAME=VALUE, got {item!r}")
        name, value = item.split("=", 1)
        try:
            out[name.strip()] = float(value)
        except ValueError:
            raise click.UsageError(f"--param {name}: {value!r} is not a number")
    return out


def _parse_sweep(sweep: str) -> tuple[float, float, int]:
    parts = sweep.split(":")
    if len(parts) not in (2, 3):
        raise click.UsageError("--sweep expects START:STOP[:COUNT]")
    try:
        start, stop = float(parts[0]), float(parts[1])
        count = int(parts[2]) if len(parts) == 3 else 101
    except ValueError:
        raise click.UsageError(f"bad --sweep value {sweep!r}")
    if count < 2 or stop <= start:
        raise click.UsageError("--sweep needs STOP > START and COUNT >= 2")
    return start, stop, count


@cli.command("criterion")
@click.option("--family", default=None,
              type=click.Choice(sorted(FAMILY_PARAMETERS)),
              help="Distribution family to evaluate.")
@click.option("--param", "params", multiple=True,
              help="Family parameter as NAME=VALUE (repeatable).")
@click.option("--from-data", "from_data", default=None,
              help="Evaluate from data instead: residual moments of a table "
                   "(single-column tables are used directly as the sample).")
@click.option("--response-col", default=None,
              help="Response column for --from-data tables.")
@click.option("--delimiter", default=None, help="Field delimiter (auto: , tab ;).")
@click.option("--sweep", default=None,
              help="Sweep the family parameter: START:STOP[:COUNT].")
@click.option("--out", default=None, help="Write report/sweep table to this file.")
@click.option("--no-figure", is_flag=True,
              help="Skip rendering the sweep figure next to --out.")
@click.option("--format", "fmt", type=click.Choice(["json", "text"]),
              default="text", show_default=True)
def cmd_criterion(family, params, from_data, response_col, delimiter, sweep,
                  out, no_figure, fmt):
    """Evaluate the efficiency criterion for a family or a dataset."""
    if (family is None) == (from_data is None):
        raise click.UsageError("pass exactly one of --family or --from-data")
    if from_data is not None:
        cols, values = read_table(from_data, delimiter=delimiter)
        if len(cols) == 1:
            sample = values[:, 0]
        else:
            data, _n = load_regression(from_data, response_col=response_col,
                                       delimiter=delimiter)
            sample = data.response - data.design @ fit_ols(data).beta_hat
        result = efficiency_ratio(sample_central_moments(sample, max_order=6))
        if fmt == "json":
            text = rpt.to_json(rpt.criterion_to_dict(result, family="from-data"))
        else:
            text = rpt.criterion_to_text(result, family="sample moments")
        _write_or_echo(text, out)
        return

    kw = _parse_params(params)
    if sweep is not None:
        pname = FAMILY_PARAMETERS.get(family)
        if pname is None or isinstance(pname, tuple):
            raise click.UsageError(f"family {family!r} has no single sweep parameter")
        start, stop, count = _parse_sweep(sweep)
        rows = parameter_sweep(family, start, stop, count)
        text = rpt.sweep_to_delimited(rows, pname)
        _write_or_echo(text, out)
        if out and not no_figure:
            render_sweep_figure(rows, pname, family,
                                Path(out).with_suffix(".png"))
        return

    try:
        spec = FamilySpec(family=family, **kw)
    except TypeError:
        raise click.UsageError(f"unknown parameter for family {family!r}")
    result = family_criterion(spec)
    if fmt == "json":
        text = rpt.to_json(rpt.criterion_to_dict(result, family=family,
                                                 parameters=kw))
    else:
        text = rpt.criterion_to_text(result, family=family)
    _write_or_echo(text, out)


@cli.command("simulate")
@click.argument("config_path")
@click.option("--seed", default=None, type=int,
              help="Master seed (overrides the config; drawn if absent).")
@click.option("--out", default=None,
              help="Risk table output path (overrides the config).")
@click.option("--no-figure", is_flag=True,
              help="Skip rendering the figure next to the output table.")
@click.option("--format", "fmt", type=click.Choice(["json", "text"]),
              default="text", show_default=True,
              help="Stdout format; the output file is always delimited.")
def cmd_simulate(config_path, seed, out, no_figure, fmt):
    """Run the decision-rule study described by a config file."""
    cfg = parse_simulation_config(config_path)
    if cfg["replications"] < 1:
        raise click.UsageError("replications must be >= 1")
    if cfg["mode"] not in ("plugin", "test"):
        raise click.UsageError("mode must be 'plugin' or 'test'")
    if seed is None:
        seed = cfg["seed"]
    if seed is None:
        seed = int(np.random.SeedSequence().entropy % (2 ** 32))
    click.echo(f"seed: {seed}")
    grid = [(spec, n) for spec in cfg["specs"] for n in cfg["n"]]
    table = run_risk_study(grid, replications=cfg["replications"], seed=seed,
                           mode=cfg["mode"], alpha_level=cfg["alpha"])
    out = out or cfg["out"]
    delim = rpt.risk_table_to_delimited(table)
    if out:
        Path(out).write_text(delim)
        if not no_figure:
            render_risk_figure(table, Path(out).with_suffix(".png"))
    if fmt == "json":
        click.echo(rpt.to_json({
            "seed": table.seed, "mode": table.mode, "alpha": table.alpha_level,
            "cells": [{
                "noise": c.noise.label(), "n": c.n,
                "replications": c.replications, "l4_count": c.l4_count,
                "favorable_count": c.favorable_count,
                "population_ratio": c.population_ratio, "truth": c.truth,
                "moments_exist": c.moments_exist,
            } for c in table.cells]}), nl=False)
    else:
        click.echo(rpt.risk_table_to_text(table), nl=False)


def main(argv=None):
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.UsageError as exc:
        exc.show()
        sys.exit(EXIT_USAGE)
    except click.ClickException as exc:
        exc.show()
        sys.exit(exc.exit_code)
    except click.Abort:
        sys.exit(130)
    except (TableParseError, DataValidationError, FileNotFoundError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_IO)
    except NumericalError as exc:
        click.echo(f"numerical error: {exc}", err=True)
        sys.exit(EXIT_NUMERIC)
    return 0


if __name__ == "__main__":
    main()
