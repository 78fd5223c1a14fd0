# This file is part of ts_magic_cones
#
# Developed for the LSST Data Management System.
# This product includes software developed by the LSST Project
# (https://www.lsst.org).
# See the COPYRIGHT file at the top-level directory of this distribution
# for details of code ownership.
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <https://www.gnu.org/licenses/>.


__all__ = ["parse_args", "run", "main"]

import argparse
import logging
import sys
from typing import Sequence, TextIO

from .cones import Family
from .config import Config
from .dispatcher import Dispatcher


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Root logger level.",
    )
    common.add_argument(
        "--budget",
        type=float,
        default=Config.budget_seconds,
        help="Wall-clock budget (seconds) for the command.",
    )
    common.add_argument(
        "--threads",
        type=int,
        default=Config.threads,
        help="Worker processes for exhaustive counting.",
    )
    common.add_argument(
        "--output",
        type=str,
        default=None,
        help="Write the JSON artifact here instead of standard output.",
    )
    return common


def _system_options() -> argparse.ArgumentParser:
    source = argparse.ArgumentParser(add_help=False)
    source.add_argument(
        "--system", type=str, default=None, help="Cone system JSON file written by build."
    )
    source.add_argument(
        "--family",
        type=str,
        default=None,
        choices=[f.value for f in Family],
        help="Family tag of a cone to build in place.",
    )
    source.add_argument("--n", type=int, default=None, help="Side length.")
    source.add_argument("--d", type=int, default=None, help="Hypercube dimension.")
    source.add_argument(
        "--graph",
        type=str,
        default=None,
        help="Graph JSON file or name (e.g. petersen, complete:4, pi:3) "
        "for labeling cones.",
    )
    return source


def parse_args(argv: Sequence[str] | None = None) -> argparse.Namespace:
    """Parses command line arguments.

    Parameters
    ----------
    argv : sequence of `str`, optional
        Arguments without the program name; defaults to ``sys.argv[1:]``.

    Returns
    -------
    `argparse.Namespace`:
        The parsed command line arguments.
    """
    parser = argparse.ArgumentParser(
        prog="run_magiccones",
        description="Hilbert bases, Hilbert series and counting formulas "
        "of magic squares, cubes and labelings.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    common = _common_options()
    source = _system_options()
    with_system = [common, source]

    subparsers.add_parser("build", parents=with_system, help="Write a cone system.")

    verify = subparsers.add_parser("verify", parents=with_system, help="Check a member.")
    verify.add_argument("--member", required=True, help="JSON list, grid or file.")

    hilbert = subparsers.add_parser(
        "hilbert", parents=with_system, help="Minimal Hilbert basis."
    )
    hilbert.add_argument(
        "--method",
        default="primal",
        choices=["primal", "generation", "elimination"],
        help="Basis algorithm.",
    )
    hilbert.add_argument(
        "--dmax", type=int, default=None, help="Only elements up to this degree."
    )

    subparsers.add_parser("rays", parents=with_system, help="Extreme rays.")

    decompose = subparsers.add_parser(
        "decompose", parents=[common], help="Decompose a member over a Hilbert basis."
    )
    decompose.add_argument("--basis", required=True, help="Hilbert basis JSON file.")
    decompose.add_argument("--member", required=True, help="JSON list, grid or file.")
    decompose.add_argument(
        "--all", action="store_true", help="List every decomposition."
    )

    count = subparsers.add_parser(
        "count", parents=with_system, help="Count members by exhaustive search."
    )
    count.add_argument(
        "--sum", type=int, nargs="+", required=True, help="Magic sums to count."
    )

    series = subparsers.add_parser(
        "series", parents=with_system, help="Rational Hilbert series."
    )
    series.add_argument(
        "--method",
        default="auto",
        choices=["auto", "toric", "triangulation"],
        help="Series algorithm.",
    )

    expand = subparsers.add_parser(
        "expand", parents=[common], help="Power series coefficients."
    )
    expand.add_argument("--series", required=True, help="Series JSON file.")
    expand.add_argument(
        "--degree",
        type=int,
        default=None,
        help=f"Last coefficient (default {Config.series_degree}).",
    )

    subparsers.add_parser(
        "period", parents=with_system, help="Quasi-period of the counting function."
    )

    formula = subparsers.add_parser(
        "formula", parents=[common], help="Counting quasi-polynomial."
    )
    formula.add_argument("--series", default=None, help="Series JSON file.")
    formula.add_argument(
        "--samples", default=None, help="Counts JSON file written by count."
    )
    formula.add_argument("--period", type=int, default=None, help="Quasi-period.")
    formula.add_argument("--degree", type=int, default=None, help="Constituent degree.")

    evaluate = subparsers.add_parser(
        "eval", parents=[common], help="Evaluate a quasi-polynomial."
    )
    evaluate.add_argument("--formula", required=True, help="Formula JSON file.")
    evaluate.add_argument(
        "--at", type=int, nargs="+", required=True, help="Arguments to evaluate at."
    )

    symmetry = subparsers.add_parser(
        "symmetry", parents=[common], help="Group actions on members."
    )
    symmetry.add_argument("action", choices=["apply", "orbit", "order", "iso"])
    symmetry.add_argument(
        "--group", default="G8", help="Preset group name (e.g. G8, dihedral:4)."
    )
    symmetry.add_argument(
        "--group-file", default=None, help="Group JSON file; overrides --group."
    )
    symmetry.add_argument("--member", default=None, help="JSON list, grid or file.")
    symmetry.add_argument("--other", default=None, help="Second member for iso.")
    symmetry.add_argument(
        "--generator", type=int, default=0, help="Generator index for apply."
    )
    symmetry.add_argument(
        "--cap",
        type=int,
        default=None,
        help=f"Orbit size cap (default {Config.orbit_cap}).",
    )

    graph = subparsers.add_parser(
        "graph", parents=[common], help="Magic labelings of graphs."
    )
    graph.add_argument(
        "action",
        choices=["build", "cone", "matchings", "faces", "dimension", "cayley"],
    )
    graph.add_argument("--graph", default=None, help="Graph JSON file or name.")
    graph.add_argument("--dim", type=int, default=None, help="Only faces of this dimension.")
    graph.add_argument(
        "--strict", action="store_true", help="Reject graphs that are not positive."
    )
    graph.add_argument(
        "--n", type=int, default=3, help="Symmetric group degree for cayley."
    )

    natural = subparsers.add_parser(
        "natural", parents=[common], help="Natural magic square in closed form."
    )
    natural.add_argument("kind", choices=["odd", "even"])
    natural.add_argument("--n", type=int, required=True, help="Order of the square.")

    lift = subparsers.add_parser(
        "lift", parents=[common], help="Franklin block lift or labeling lift."
    )
    lift.add_argument("kind", choices=["franklin-block", "graph"])
    lift.add_argument("--member", default=None, help="8×8 Franklin square.")
    lift.add_argument("--labeling", default=None, help="Labeling JSON file.")

    return parser.parse_args(argv)


def run(
    argv: Sequence[str] | None = None,
    stdout: TextIO | None = None,
    stderr: TextIO | None = None,
) -> int:
    """Parse ``argv``, run the subcommand and return the exit status.

    0 on success, 2 for usage and input errors, 3 when a budget is
    exceeded, 4 for non-members and infeasible requests.
    """
    try:
        args = parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    log = logging.getLogger()
    log.setLevel(args.log_level)

    # Set up configuration
    cfg = Config()
    cfg.budget_seconds = args.budget
    cfg.threads = args.threads

    dispatcher = Dispatcher(cfg, stdout=stdout, stderr=stderr)
    return dispatcher.dispatch(args)


def main() -> None:
    sys.exit(run())
