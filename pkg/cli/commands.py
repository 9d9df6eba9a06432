"""
Command-line front end: optimize, sweep, roots and evaluate.

Exit codes: 0 on success, 1 on solver or runtime failure, 2 on usage errors.
"""
import argparse
import logging
import sys
from typing import Any, Dict, List, Optional

from cli.config import FORMATS, METHODS, NOISE_KINDS, RunConfig, UsageError
from cli.output import (
    console, err_console, render_breakdown, render_gain, render_roots, render_solution, sweep_text, write_json,
    write_sweep,
)
from core.analytic_mse import mse_cauchy, mse_map, mse_ml
from core.encoder import GridSpacing
from core.errors import InvalidConfigError, OacError
from core.model import CauchyNoise, GaussianNoise, SystemConfig, derive_grid
from core.settings import DEFAULT_SEED, DEFAULT_TRIALS
from experiments.monte_carlo import DECODER_MAP, DECODER_ML, DECODERS, estimate_mse
from experiments.sweep import DESIGNS, gain_summary, snr_range, sweep
from solvers import solve_cauchy, solve_lambert, solve_map, solve_ml
from solvers.roots import p1_roots, p2_roots
from solvers.threshold import (
    threshold_applies, threshold_approx, threshold_lower_bound, threshold_point,
)

logger = logging.getLogger(__name__)

SOLVERS = {"ml": solve_ml, "map": solve_map, "lambert": solve_lambert, "cauchy": solve_cauchy}


def _system_flags() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--q", type=int, help="in-phase levels per node")
    parent.add_argument("--n", type=int, help="quadrature levels per node")
    parent.add_argument("--K", type=int, help="number of nodes")
    parent.add_argument("--snr-db", type=float, help="SNR in dB")
    parent.add_argument("--power", type=float, help="per-symbol power budget (default 1)")
    parent.add_argument("--sigma2", type=float, help="Gaussian noise power (instead of --snr-db)")
    parent.add_argument("--gamma", type=float, help="Cauchy noise scale (instead of --snr-db)")
    parent.add_argument("--noise", choices=NOISE_KINDS, help="noise model (default gaussian)")
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oac", description="Over-the-air computation constellation design")
    parser.add_argument("--config", help="JSON run config; flags override its values")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--quiet", action="store_true", help="log warnings and errors only")
    verbosity.add_argument("--verbose", action="store_true", help="log debug detail")
    commands = parser.add_subparsers(dest="command")
    system = _system_flags()

    optimize = commands.add_parser("optimize", parents=[system], help="optimal spacings for one configuration")
    optimize.add_argument("--method", choices=METHODS)
    optimize.add_argument("--out", help="write the solution as JSON")

    run_sweep = commands.add_parser("sweep", parents=[system], help="Monte Carlo sweep over SNR")
    run_sweep.add_argument("--snr-db-from", type=float)
    run_sweep.add_argument("--snr-db-to", type=float)
    run_sweep.add_argument("--snr-db-step", type=float)
    run_sweep.add_argument("--designs", nargs="+", choices=DESIGNS)
    run_sweep.add_argument("--decoders", nargs="+", type=str.upper, choices=DECODERS)
    run_sweep.add_argument("--trials", type=int)
    run_sweep.add_argument("--seed", type=int)
    run_sweep.add_argument("--shard-size", type=int)
    run_sweep.add_argument("--workers", type=int)
    run_sweep.add_argument("--out", help="output file (stdout when omitted)")
    run_sweep.add_argument("--format", choices=FORMATS)

    roots = commands.add_parser("roots", parents=[system], help="P1 roots and the SNR threshold")
    roots.add_argument("--N", type=int, help="grid size; or give --q --n --K")

    evaluate = commands.add_parser("evaluate", parents=[system], help="closed-form MSE of given spacings")
    evaluate.add_argument("--d1", type=float)
    evaluate.add_argument("--d2", type=float)
    evaluate.add_argument("--decoder", type=str.upper, choices=DECODERS)
    evaluate.add_argument("--mc-trials", type=int, help="pair the closed form with a Monte Carlo estimate")
    evaluate.add_argument("--seed", type=int)
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    base = RunConfig.load(args.config) if args.config else RunConfig()
    overrides: Dict[str, Any] = {k: v for k, v in vars(args).items()
                                 if k not in ("config", "quiet", "verbose")}
    return base.merged(overrides).validate()


def system_config(run: RunConfig) -> SystemConfig:
    run.require("q", "n", "K")
    power = 1.0 if run.power is None else run.power
    noise = run.noise or "gaussian"
    if noise == "gaussian" and run.sigma2 is not None:
        return SystemConfig(run.q, run.n, run.K, power, GaussianNoise(run.sigma2))
    if noise == "cauchy" and run.gamma is not None:
        return SystemConfig(run.q, run.n, run.K, power, CauchyNoise(run.gamma))
    if run.snr_db is None:
        raise UsageError("give --snr-db, or --sigma2 (gaussian) / --gamma (cauchy)")
    return SystemConfig.from_snr_db(run.q, run.n, run.K, run.snr_db, power, noise)


def cmd_optimize(run: RunConfig) -> int:
    cfg = system_config(run)
    method = run.method or ("ml" if cfg.is_gaussian else "cauchy")
    if method not in SOLVERS:
        raise UsageError(f"unknown method {method!r}, expected one of {METHODS}")
    solution = SOLVERS[method](cfg)
    render_solution(solution, f"{method} spacing (q={cfg.q}, n={cfg.n}, K={cfg.K}, xi={cfg.snr:.6g})")
    if run.out:
        payload = dict(solution.as_record(), q=cfg.q, n=cfg.n, K=cfg.K, snr=cfg.snr)
        write_json(payload, run.out)
    return 0


def cmd_sweep(run: RunConfig) -> int:
    run.require("snr_db_from", "snr_db_to")
    step = 1.0 if run.snr_db_step is None else run.snr_db_step
    xi_db_values = snr_range(run.snr_db_from, run.snr_db_to, step)
    template = system_config(run.merged({"snr_db": xi_db_values[0]}))
    records = sweep(template, xi_db_values,
                    designs=run.designs or DESIGNS,
                    decoders=run.decoders or (DECODER_ML,),
                    trials=run.trials if run.trials is not None else DEFAULT_TRIALS,
                    seed=run.seed if run.seed is not None else DEFAULT_SEED,
                    shard_size=run.shard_size, workers=run.workers)
    fmt = run.format or "csv"
    if run.out:
        write_sweep(records, run.out, fmt)
    else:
        sys.stdout.write(sweep_text(records, fmt))
    summary = gain_summary(records)
    if len(summary):
        render_gain(summary)
    return 0 if any(r.ok for r in records) else 1


def _root_rows(sizes) -> List[Dict[str, Any]]:
    rows = []
    for name, finder in (("P1", p1_roots), ("P2", p2_roots)):
        for N in sizes:
            rows.append({"polynomial": name, "N": N, "roots": finder(N).roots})
    return rows


def cmd_roots(run: RunConfig) -> int:
    if run.N is not None:
        render_roots(_root_rows((run.N,)))
        return 0
    run.require("q", "n", "K")
    cfg = SystemConfig.from_snr(run.q, run.n, run.K, 1.0)
    grid = derive_grid(cfg)
    rows = _root_rows(sorted({grid.N1K, grid.N2K}))
    thresholds = {"xi1 approx 1.5n/K^2": threshold_approx(grid),
                  "xi1 lower bound": threshold_lower_bound(grid)}
    if threshold_applies(grid):
        thresholds = {"xi1 exact": threshold_point(grid).xi1, **thresholds}
    else:
        console.print("no SNR threshold: the interior stationary point is used at every SNR")
    render_roots(rows, thresholds)
    return 0


def cmd_evaluate(run: RunConfig) -> int:
    run.require("d1", "d2")
    cfg = system_config(run)
    sp = GridSpacing(run.d1, run.d2)
    decoder = run.decoder or DECODER_ML
    if not cfg.is_gaussian:
        breakdown = mse_cauchy(sp, cfg)
    elif decoder == DECODER_MAP:
        breakdown = mse_map(sp, cfg)
    else:
        breakdown = mse_ml(sp, cfg)
    estimate = None
    if run.mc_trials:
        estimate = estimate_mse(cfg, sp, decoder, run.mc_trials,
                                run.seed if run.seed is not None else DEFAULT_SEED)
    render_breakdown(breakdown, estimate)
    return 0


COMMANDS = {"optimize": cmd_optimize, "sweep": cmd_sweep, "roots": cmd_roots, "evaluate": cmd_evaluate}


def _log_level(args: argparse.Namespace) -> Optional[int]:
    if args.quiet:
        return logging.WARNING
    if args.verbose:
        return logging.DEBUG
    return None


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    level = _log_level(args)
    if level is not None:
        logging.getLogger().setLevel(level)

    try:
        run = resolve_config(args)
        command = run.command
        if command not in COMMANDS:
            raise UsageError("choose a command: " + ", ".join(COMMANDS))
        return COMMANDS[command](run)
    except InvalidConfigError as e:
        # covers UsageError and range checks on flag values
        parser.print_usage(sys.stderr)
        err_console.print(f"[red]usage error:[/red] {e}")
        return 2
    except OacError as e:
        logger.error(f"{type(e).__name__}: {e}")
        err_console.print(f"[red]error:[/red] {e}")
        return 1
    except OSError as e:
        logger.error(f"I/O error: {e}", exc_info=True)
        err_console.print(f"[red]I/O error:[/red] {e}")
        return 1
