#!/usr/bin/env python3
"""
Hessian operator laboratory - command-line entry point.

Commands: op, cone, flow, sweep, props, intersect. Every command prints one
JSON object on stdout. Exit codes: 0 ok, 1 property violation, 2 bad input,
3 t_max reached, 4 diverged, 5 infeasible sweep schedule.
"""

import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from cli.commands import cmd_cone, cmd_flow, cmd_intersect, cmd_op, cmd_props, cmd_sweep
from cli.output import EXIT_BAD_INPUT, EXIT_SCHEDULE, emit
from core.errors import LabError, ScheduleError
from core.settings import init_observability, load_settings
from evaluation import SUITES

logger = logging.getLogger("hesslab")


def _add_spectrum_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--lambda", dest="lam", help="comma-separated eigenvalues, e.g. 2,2")
    parser.add_argument("--chi", help="JSON matrix; entries are reals or [re, im] pairs")
    parser.add_argument("--omega", help="JSON reference form (default: identity)")
    parser.add_argument("--exact", action="store_true", help="parse numbers as exact rationals")
    parser.add_argument("--c", help="comma-separated c_1..c_{n-1}")
    parser.add_argument("--c0", type=float, help="c_0 (gMA) or the Q constant (dHYM)")
    parser.add_argument("--theta", type=float, help="dHYM angle theta")
    parser.add_argument("--Theta", type=float, help="dHYM outer angle (default: theta)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hesslab",
        description="Generalized Monge-Ampere and dHYM operators, cones, energies and flows on flat tori.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    op = commands.add_parser("op", help="evaluate every operator at one spectrum")
    _add_spectrum_arguments(op)
    op.add_argument("--gma", action="store_true", help="gMA operators only")
    op.add_argument("--dhym", action="store_true", help="dHYM operators only")
    op.add_argument("--sym", action="store_true", help="symmetric functions only")
    op.set_defaults(handler=cmd_op)

    cone = commands.add_parser("cone", help="cone membership report")
    _add_spectrum_arguments(cone)
    kind = cone.add_mutually_exclusive_group()
    kind.add_argument("--gma", action="store_true", help="closed gMA cone (default)")
    kind.add_argument("--dhym", action="store_true", help="closed phase cone")
    cone.add_argument("--open", action="store_true", help="test the open phase cone")
    cone.set_defaults(handler=cmd_cone)

    intersect = commands.add_parser("intersect", help="intersection margins of constant classes")
    intersect.add_argument("--config", help="take chi, omega and c from a run config")
    intersect.add_argument("--chi", help="JSON matrix")
    intersect.add_argument("--omega", help="JSON reference form (default: identity)")
    intersect.add_argument("--c", help="comma-separated c_1..c_{n-1}")
    intersect.add_argument("--exact", action="store_true", help="parse c as exact rationals")
    intersect.add_argument("--reduce-pencil", action="store_true",
                           help="use the pencil eigenbasis for non-commuting classes")
    intersect.set_defaults(handler=cmd_intersect)

    flow = commands.add_parser("flow", help="run one flow from a JSON config")
    flow.add_argument("config", help="path to the run config")
    flow.add_argument("--output-dir", help="override output.directory")
    flow.set_defaults(handler=cmd_flow)

    sweep = commands.add_parser("sweep", help="boundary sweep from a JSON config with a schedule")
    sweep.add_argument("config", help="path to the run config")
    sweep.add_argument("--output-dir", help="override output.directory")
    sweep.set_defaults(handler=cmd_sweep)

    props = commands.add_parser("props", help="seeded property suite")
    props.add_argument("--suite", required=True, help=f"one of: {', '.join(SUITES)}")
    props.add_argument("--seed", type=int, default=0)
    props.add_argument("--samples", type=int, help="samples per probe (default: the suite's)")
    props.add_argument("--output", help="also write the full report here")
    props.add_argument("--verbose", action="store_true", help="print every probe report")
    props.set_defaults(handler=cmd_props)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    init_observability(load_settings(), run_config={"command": args.command})
    try:
        return args.handler(args)
    except ScheduleError as exc:
        logger.error("%s", exc)
        emit({"error": "schedule", "message": str(exc), "index": exc.index, "p": exc.p,
              "subset": list(exc.subset), "margin": exc.margin})
        return EXIT_SCHEDULE
    except ValidationError as exc:
        logger.error("invalid config: %s", exc)
        emit({"error": "config", "message": str(exc)})
        return EXIT_BAD_INPUT
    except (LabError, ValueError, OSError) as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        emit({"error": type(exc).__name__, "message": str(exc)})
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
