"""Command-line entry point.

Subcommands:
  generate  write networks (and optionally a parameter set) to files
  simulate  run one model on one factorial cell, write trajectory CSVs
  spectral  threshold/equilibrium report as JSON
  sweep     the full factorial study
  compare   deviation statistics between two aggregate trajectory CSVs

Exit status: 0 success, 1 validation error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import ctmc, dynamics, graph, harness, spectral
from .errors import NumericalError, ParameterError
from .output import read_aggregate_csv


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParameterError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="rumortruth")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", type=Path, help="experiment config JSON")
        p.add_argument("--seed", type=int, help="override the config seed")
        p.add_argument("--out", type=Path, default=Path("."),
                       help="output directory")

    p = sub.add_parser("generate", help="write networks/params to files")
    common(p)
    p.add_argument("--combo", type=int,
                   help="also write params.json for this factorial cell")

    p = sub.add_parser("simulate", help="single model run to CSV")
    common(p)
    p.add_argument("--model",
                   choices=["linear", "generic", "surqt", "ensemble"],
                   help="override the config model")

    p = sub.add_parser("spectral", help="threshold report JSON")
    common(p)

    p = sub.add_parser("sweep", help="full factorial study")
    common(p)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("compare", help="deviation between two aggregate CSVs")
    p.add_argument("csv_a", type=Path)
    p.add_argument("csv_b", type=Path)
    return parser


def _load_config(args) -> harness.ExperimentConfig:
    if args.config is not None:
        config = harness.ExperimentConfig.from_file(args.config)
    else:
        config = harness.ExperimentConfig()
    if getattr(args, "seed", None) is not None:
        config.seed = args.seed
    if getattr(args, "model", None):
        config.model = args.model
    return config


def _cmd_generate(args) -> int:
    config = _load_config(args)
    gR, gT = harness.build_networks(config)
    args.out.mkdir(parents=True, exist_ok=True)
    graph.write_edge_list(gR, args.out / "gR.txt")
    graph.write_edge_list(gT, args.out / "gT.txt")
    if args.combo is not None:
        params = harness.combo_params(config, gR, gT, args.combo)
        (args.out / "params.json").write_text(graph.params_to_json(params))
    return 0


def _cmd_simulate(args) -> int:
    config = _load_config(args)
    gR, gT = harness.build_networks(config)
    combo = config.combo_index
    params = harness.combo_params(config, gR, gT, combo)
    tgrid = config.tgrid()
    args.out.mkdir(parents=True, exist_ok=True)
    family = dynamics.RateFamily.from_params(params, config.rate_family,
                                             config.saturation_c)
    if config.model == "ensemble":
        traj = ctmc.ensemble_average(
            params, harness.chain_init(config, combo), tgrid, config.M,
            seed=harness.splitmix64(config.seed, harness._CTR_ENSEMBLE + combo))
    elif config.model == "surqt":
        # no uncertain compartment: everyone not spreading starts truth-believing
        _U0, R0, _T0 = harness.mean_field_init(config, combo)
        traj = dynamics.integrate_surqt(params, family, (R0, 1.0 - R0), tgrid)
    elif config.model == "generic":
        traj = dynamics.integrate_generic(
            params, family, harness.mean_field_init(config, combo), tgrid)
    else:
        traj = dynamics.integrate_linear(
            params, harness.mean_field_init(config, combo), tgrid)
    traj.write_csv(args.out / "trajectory.csv")
    traj.write_aggregate_csv(args.out / "aggregate.csv")
    return 0


def _cmd_spectral(args) -> int:
    config = _load_config(args)
    gR, gT = harness.build_networks(config)
    params = harness.combo_params(config, gR, gT, config.combo_index)
    family = dynamics.RateFamily.from_params(params, config.rate_family,
                                             config.saturation_c)
    report = spectral.spectral_report(params, family)
    text = report.to_json()
    if args.out != Path("."):
        args.out.mkdir(parents=True, exist_ok=True)
        (args.out / "spectral.json").write_text(text)
    print(text)
    return 0


def _cmd_sweep(args) -> int:
    config = _load_config(args)
    harness.run_sweep(config, args.out, workers=args.workers)
    return 0


def _cmd_compare(args) -> int:
    t_a, r_a, _ = read_aggregate_csv(args.csv_a)
    t_b, r_b, _ = read_aggregate_csv(args.csv_b)
    if len(t_a) != len(t_b):
        raise ParameterError("trajectories are not on the same time grid")
    dev = abs(r_a - r_b)
    print(f"sup_deviation {format(dev.max(), '.9g')}")
    print(f"mean_deviation {format(dev.mean(), '.9g')}")
    return 0


_COMMANDS = {
    "generate": _cmd_generate,
    "simulate": _cmd_simulate,
    "spectral": _cmd_spectral,
    "sweep": _cmd_sweep,
    "compare": _cmd_compare,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
