"""Serialization of results: JSON for machines, aligned text for humans,
delimited tables for downstream plotting."""

from __future__ import annotations

import json

import numpy as np

from .data import EstimateReport, FitQuality
from .decision import DecisionStatistics
from .criterion import CriterionResult
from .simulate import RiskTable


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, tuple):
        return list(obj)
    return obj


def estimate_to_dict(report: EstimateReport, names=None,
                     quality: FitQuality | None = None) -> dict:
    d = {
        "loss_order": report.loss_order,
        "coefficients": report.beta_hat.tolist(),
        "std_errors": report.std_errors.tolist(),
        "covariance": report.covariance.tolist(),
        "objective_value": report.objective_value,
        "gradient_norm": report.gradient_norm,
        "gradient_tolerance": report.gradient_tolerance,
        "iterations": report.iterations,
        "converged": report.converged,
        "ill_conditioned": report.ill_conditioned,
    }
    if names is not None:
        d["names"] = list(names)
    if quality is not None:
        d["pseudo_r2"] = {
            "q_fit": quality.q_fit, "q_zero": quality.q_zero,
            "q_max": quality.q_max, "r2_rg": quality.r2_rg,
        }
    return d


def estimate_to_text(report: EstimateReport, names=None,
                     quality: FitQuality | None = None) -> str:
    p = len(report.beta_hat)
    names = list(names) if names is not None else [f"x{j}" for j in range(p)]
    width = max(len(s) for s in names) + 2
    lines = [f"loss order {report.loss_order} fit"
             f"  ({'converged' if report.converged else 'NOT converged'},"
             f" {report.iterations} iterations,"
             f" gradient norm {report.gradient_norm:.3e})"]
    lines.append(f"{'':{width}s}{'estimate':>14s}{'std error':>14s}")
    for name, b, se in zip(names, report.beta_hat, report.std_errors):
        lines.append(f"{name:{width}s}{b:>14.6f}{se:>14.6f}")
    lines.append(f"objective value {report.objective_value:.6g}")
    if report.ill_conditioned:
        lines.append("warning: near-singular curvature; minimizer may be non-unique")
    if quality is not None:
        lines.append(f"pseudo R2 (relative gain) {quality.r2_rg:.6f}")
    return "\n".join(lines) + "\n"


def decision_to_dict(stats: DecisionStatistics,
                     pseudo_r2_pair: dict | None = None) -> dict:
    d = {
        "moment_ratio": stats.moment_ratio,
        "threshold": 9.0,
        "statistic": stats.statistic,
        "variance_estimate": stats.variance_estimate,
        "confidence_interval": list(stats.confidence_interval),
        "verdict": stats.verdict,
        "mode": stats.mode,
        "alpha_level": stats.alpha_level,
        "n": stats.n,
        "variance_clamped": stats.variance_clamped,
        "influence_weights": stats.influence_weights.tolist(),
        "influence_covariance": stats.influence_covariance.tolist(),
    }
    if pseudo_r2_pair is not None:
        d["pseudo_r2"] = pseudo_r2_pair
    return d


def decision_to_text(stats: DecisionStatistics,
                     pseudo_r2_pair: dict | None = None) -> str:
    lo, hi = stats.confidence_interval
    lines = [
        f"n = {stats.n}",
        f"moment ratio v-hat = {stats.moment_ratio:.8f}  (threshold 9)",
        f"test statistic T = {stats.statistic:.8f}",
        f"{100 * (1 - stats.alpha_level):g}% confidence interval"
        f" ({lo:.8f}, {hi:.8f})",
        f"mode = {stats.mode}, verdict: {stats.verdict}",
    ]
    if stats.variance_clamped:
        lines.append("warning: variance estimate clamped (indefinite plug-in matrix)")
    if pseudo_r2_pair is not None:
        lines.append(f"pseudo R2: L2 {pseudo_r2_pair['l2']:.8f}"
                     f"  L4 {pseudo_r2_pair['l4']:.8f}")
    return "\n".join(lines) + "\n"


def criterion_to_dict(result: CriterionResult, family: str | None = None,
                      parameters: dict | None = None) -> dict:
    d = {
        "ratio": result.ratio,
        "prefers_l4": result.prefers_l4,
        "method": result.method,
    }
    if family is not None:
        d["family"] = family
    if parameters:
        d["parameters"] = parameters
    return d


def criterion_to_text(result: CriterionResult, family: str | None = None) -> str:
    head = f"family {family}: " if family else ""
    pref = "order-4 loss preferred" if result.prefers_l4 else "least squares preferred"
    return (f"{head}efficiency ratio = {result.ratio:.10f}"
            f" ({result.method}); {pref}\n")


def sweep_to_delimited(rows, parameter_name: str) -> str:
    out = [f"{parameter_name},ratio"]
    for value, ratio in rows:
        out.append(f"{value:.10g},{ratio:.10g}")
    return "\n".join(out) + "\n"


def risk_table_to_delimited(table: RiskTable) -> str:
    lines = [f"# seed={table.seed} mode={table.mode} alpha={table.alpha_level:g}"]
    lines.append("noise,n,replications,l4_count,l4_proportion,"
                 "favorable_count,population_ratio,truth,moments_exist")
    for c in table.cells:
        pop = "" if c.population_ratio is None else f"{c.population_ratio:.8g}"
        truth = "" if c.truth is None else c.truth
        lines.append(
            f"{c.noise.label()},{c.n},{c.replications},{c.l4_count},"
            f"{c.l4_count / c.replications:.6f},{c.favorable_count},"
            f"{pop},{truth},{c.moments_exist}")
    return "\n".join(lines) + "\n"


def risk_table_to_text(table: RiskTable) -> str:
    """Pivot: one row per sample size, one column per noise setting."""
    labels = []
    for c in table.cells:
        if c.noise.label() not in labels:
            labels.append(c.noise.label())
    ns = sorted({c.n for c in table.cells})
    cell = {(c.noise.label(), c.n): c for c in table.cells}
    width = max(12, max(len(s) for s in labels) + 2)
    lines = [f"decisions favoring the order-4 loss, out of"
             f" {table.cells[0].replications} replications"
             f" (mode={table.mode}, alpha={table.alpha_level:g}, seed={table.seed})"]
    lines.append(f"{'n':>6s}" + "".join(f"{s:>{width}s}" for s in labels))
    for n in ns:
        row = [f"{n:>6d}"]
        for s in labels:
            c = cell.get((s, n))
            row.append(f"{'-' if c is None else c.l4_count:>{width}}")
        lines.append("".join(str(x) for x in row))
    flagged = [c.noise.label() for c in table.cells if not c.moments_exist]
    if flagged:
        lines.append("note: population moments do not exist for: "
                     + ", ".join(sorted(set(flagged))))
    return "\n".join(lines) + "\n"


def to_json(d: dict) -> str:
    return json.dumps(d, indent=2, default=_jsonable) + "\n"
