"""
Command-line front-end

Subcommands: blockage-prob, simulate, sweep, tradeoff. Every run writes CSV
files into --out; exit codes are 0 on success, 2 on configuration errors and
3 on numerical failures.
"""
import argparse
import logging
import os
import sys
from dataclasses import replace
from typing import Any, Dict, List, Optional

import pandas as pd

from ..models.config_schema import (
    ConfigError, apply_overrides, build_config, dump_document,
    load_document, normalize_document, probe_distances, sweep_axes,
)
from ..simulation.blockage import BlockageMode, p_blocked, p_random_one, p_self
from ..simulation.engine import UePlacement, sweep, validate_blockage
from ..simulation.quadrature import QuadratureError
from ..simulation.reporting import (
    MetricsTable, feasible_deployments, tradeoff_summary, write_csv,
)
from ..utils.settings import RuntimeSettings, configure_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

BLOCKAGE_COLUMNS = ['d_a_m', 'p_self', 'p_random_one', 'p_blocked']


# ---------- PARSER ----------
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', metavar='PATH', help='JSON configuration file (defaults when omitted)')
    common.add_argument('--out', metavar='DIR', default='.', help='output directory (default: .)')
    common.add_argument('--seed', type=int, metavar='N', help='override simulation.seed')
    common.add_argument('--set', action='append', default=[], metavar='KEY=VALUE', dest='overrides',
                        help='override a configuration value, e.g. --set antenna.ap_beamwidth_deg=30')
    common.add_argument('--dump-config', action='store_true',
                        help='print the effective configuration and exit')

    parser = argparse.ArgumentParser(
        prog='run_sim.py',
        description='Indoor mmWave network simulator: body blockage, SINR coverage and ASE'
    )
    subparsers = parser.add_subparsers(dest='command', required=True)

    blockage = subparsers.add_parser('blockage-prob', parents=[common],
                                     help='analytic blockage probabilities over a distance grid')
    blockage.add_argument('--validate', action='store_true',
                          help='add explicit-body Monte Carlo columns p_empirical, stderr')

    subparsers.add_parser('simulate', parents=[common], help='coverage and ASE per configured point')
    subparsers.add_parser('sweep', parents=[common],
                          help='full beamwidth/density/scenario grid plus the optimal frontier')

    tradeoff = subparsers.add_parser('tradeoff', parents=[common],
                                     help='ASE-coverage trade-off of a finished sweep')
    tradeoff.add_argument('--sweep-csv', metavar='PATH', help='sweep.csv to analyse (default: OUT/sweep.csv)')
    tradeoff.add_argument('--min-coverage', type=float, default=0.8, help='coverage requirement (default: 0.8)')
    tradeoff.add_argument('--min-ase', type=float, default=1e-3, help='ASE requirement (default: 1e-3)')
    return parser


def resolve_document(args: argparse.Namespace) -> Dict[str, Dict[str, Any]]:
    """Configuration file (or defaults), then --set overrides, then --seed"""
    if args.config:
        document = load_document(args.config)
    else:
        document = normalize_document({})
    overrides = list(args.overrides)
    if args.seed is not None:
        overrides.append(f"simulation.seed={args.seed}")
    return apply_overrides(document, overrides)


def _output_path(args: argparse.Namespace, name: str) -> str:
    os.makedirs(args.out, exist_ok=True)
    return os.path.join(args.out, name)


# ---------- SUBCOMMANDS ----------
def cmd_blockage_prob(args: argparse.Namespace, document: Dict[str, Dict[str, Any]],
                      settings: RuntimeSettings) -> int:
    config = build_config(document)
    distances = probe_distances(document)
    blockage, geometry = config.blockage, config.blockage.geometry
    h_A, side = config.h_A, config.venue.side

    frame = pd.DataFrame({
        'd_a_m': distances,
        'p_self': [p_self(d, geometry, h_A) for d in distances],
        'p_random_one': [p_random_one(d, geometry, h_A, side, blockage.quadrature_tolerance)
                         for d in distances],
        'p_blocked': [p_blocked(d, blockage, h_A, side) for d in distances],
    }, columns=BLOCKAGE_COLUMNS)

    if args.validate:
        explicit = replace(config, blockage=replace(blockage, mode=BlockageMode.EXPLICIT_BODIES))
        if not explicit.ue_placement.is_fixed:
            explicit = replace(explicit, ue_placement=UePlacement(config.venue.centre))
        validation = validate_blockage(explicit, distances,
                                       scenes=document['blockage_prob']['validation_scenes'],
                                       settings=settings)
        frame['p_empirical'] = validation['p_empirical'].to_numpy()
        frame['stderr'] = validation['stderr'].to_numpy()

    path = _output_path(args, 'blockage_prob.csv')
    write_csv(frame, path)
    print(f"✓ Wrote {len(frame)} rows to {path}")
    return EXIT_OK


def _run_grid(document: Dict[str, Dict[str, Any]], settings: RuntimeSettings) -> MetricsTable:
    # Presets are applied per grid point by sweep
    config = build_config(document, apply_preset=False)
    deltas, ap_beamwidths, ue_beamwidths, scenarios = sweep_axes(document)
    return sweep(config, deltas, ap_beamwidths, ue_beamwidths, scenarios, settings)


def cmd_simulate(args: argparse.Namespace, document: Dict[str, Dict[str, Any]],
                 settings: RuntimeSettings) -> int:
    table = _run_grid(document, settings)
    path = _output_path(args, 'metrics.csv')
    table.to_csv(path)
    print(f"✓ Wrote {len(table)} rows to {path}")
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace, document: Dict[str, Dict[str, Any]],
              settings: RuntimeSettings) -> int:
    table = _run_grid(document, settings)
    sweep_path = _output_path(args, 'sweep.csv')
    table.to_csv(sweep_path)
    optimal_path = _output_path(args, 'optimal.csv')
    optimal = table.optimal()
    write_csv(optimal, optimal_path)
    print(f"✓ Wrote {len(table)} grid points to {sweep_path}")
    print(f"✓ Wrote {len(optimal)} optimal configurations to {optimal_path}")
    return EXIT_OK


def cmd_tradeoff(args: argparse.Namespace, document: Dict[str, Dict[str, Any]],
                 settings: RuntimeSettings) -> int:
    sweep_csv = args.sweep_csv or os.path.join(args.out, 'sweep.csv')
    try:
        table = MetricsTable.from_csv(sweep_csv)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise ConfigError(f"{sweep_csv}: cannot read sweep results: {e}") from None
    optimal = table.optimal()
    frontier = feasible_deployments(optimal, args.min_coverage, args.min_ase)
    path = _output_path(args, 'tradeoff.csv')
    write_csv(frontier, path)

    for summary in tradeoff_summary(optimal).itertuples(index=False):
        print(f"  {summary.scenario}: max ASE {summary.max_ase:.4g} at delta={summary.delta_at_max_ase:g} m, "
              f"max coverage {summary.max_coverage:.4f} at delta={summary.delta_at_max_coverage:g} m")
    print(f"✓ {int(frontier['feasible'].sum())} of {len(frontier)} frontier points meet "
          f"coverage > {args.min_coverage} and ASE > {args.min_ase}")
    print(f"✓ Wrote {path}")
    return EXIT_OK


COMMANDS = {
    'blockage-prob': cmd_blockage_prob,
    'simulate': cmd_simulate,
    'sweep': cmd_sweep,
    'tradeoff': cmd_tradeoff,
}


# ---------- ENTRY ----------
def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        settings = RuntimeSettings()
    except ValueError as e:
        print(f"✗ {e}", file=sys.stderr)
        return EXIT_CONFIG
    configure_logging(settings)

    try:
        document = resolve_document(args)
        if args.dump_config:
            sys.stdout.write(dump_document(document))
            return EXIT_OK
        return COMMANDS[args.command](args, document, settings)
    except QuadratureError as e:
        logger.error("Numerical failure: %s", e)
        print(f"✗ Numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as e:
        print(f"✗ Configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG

