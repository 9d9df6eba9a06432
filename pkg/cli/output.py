"""Console rendering with rich and CSV/JSON writers."""
import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

import pandas as pd
from rich.console import Console
from rich.table import Table

from core.analytic_mse import MseBreakdown
from experiments.monte_carlo import MseEstimate
from experiments.sweep import SweepRecord, records_to_frame
from solvers.base_solver import OptimizerSolution

logger = logging.getLogger(__name__)

console = Console()
err_console = Console(stderr=True)


def _fmt(value: Optional[float]) -> str:
    if value is None:
        return "-"
    return f"{value:.6g}"


def render_solution(solution: OptimizerSolution, title: str):
    table = Table(title=title)
    table.add_column("field")
    table.add_column("value", justify="right")
    table.add_row("d1", _fmt(solution.d1))
    table.add_row("d2", _fmt(solution.d2))
    table.add_row("t*", _fmt(solution.t_star))
    table.add_row("region", solution.region)
    table.add_row("kkt residual", f"{solution.kkt_residual:.3e}")
    table.add_row("power residual", f"{solution.power_residual:.3e}")
    table.add_row("validity", "; ".join(solution.warnings) if solution.warnings else "ok")
    console.print(table)


def render_roots(rows: Sequence[Dict[str, Any]], thresholds: Optional[Dict[str, float]] = None):
    table = Table(title="Positive roots")
    table.add_column("polynomial")
    table.add_column("N", justify="right")
    table.add_column("roots")
    for row in rows:
        roots = row["roots"]
        text = ", ".join(f"{r:.6g}" for r in roots) if roots else "no positive roots"
        table.add_row(row["polynomial"], str(row["N"]), text)
    console.print(table)
    if thresholds:
        summary = Table(title="SNR threshold")
        summary.add_column("quantity")
        summary.add_column("value", justify="right")
        summary.add_column("dB", justify="right")
        for name, value in thresholds.items():
            db = 10.0 * math.log10(value) if value > 0 and math.isfinite(value) else math.nan
            summary.add_row(name, _fmt(value), f"{db:.3f}")
        console.print(summary)


def render_breakdown(breakdown: MseBreakdown, estimate: Optional[MseEstimate] = None):
    table = Table(title="MSE")
    table.add_column("term")
    table.add_column("value", justify="right")
    table.add_row("real axis", _fmt(breakdown.real_term))
    table.add_row("imaginary axis", _fmt(breakdown.imag_term))
    table.add_row("total", _fmt(breakdown.total))
    if breakdown.error_bound is not None:
        table.add_row("error bound", _fmt(breakdown.error_bound))
    if estimate is not None:
        table.add_row("monte carlo", _fmt(estimate.mean))
        table.add_row("monte carlo stderr", _fmt(estimate.stderr))
        table.add_row("trials", str(estimate.trials))
    console.print(table)


def render_gain(summary: pd.DataFrame):
    table = Table(title="Matched-MSE gain of the optimal design")
    table.add_column("xi [dB]", justify="right")
    table.add_column("gain [dB]", justify="right")
    for xi_db, gain in zip(summary["xi_db"], summary["gain_db"]):
        table.add_row(f"{xi_db:g}", "-" if math.isnan(gain) else f"{gain:.3f}")
    err_console.print(table)


def sweep_text(records: Sequence[SweepRecord], fmt: str = "csv") -> str:
    if fmt == "csv":
        return records_to_frame(records).to_csv(index=False, lineterminator="\n")
    return json.dumps([r.as_row() for r in records], indent=2) + "\n"


def write_sweep(records: Sequence[SweepRecord], path: str, fmt: str = "csv"):
    Path(path).write_text(sweep_text(records, fmt))
    logger.info(f"Wrote {len(records)} sweep records to {path}")


def write_json(payload: Dict[str, Any], path: str):
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")
    logger.info(f"Wrote {path}")
