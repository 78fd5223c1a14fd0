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


__all__ = ["Dispatcher", "exit_code", "parse_member"]

import argparse
import json
import logging
import math
import os
import sys
import traceback
from typing import Any, Callable, Final, TextIO

from .budget import Budget
from .config import Config
from .cones import (
    ConeSystem,
    build_system,
    flatten,
    franklin_block_lift,
    natural_square_even,
    natural_square_odd,
    render_grid,
    verify_member,
)
from .ehrhart import (
    QuasiPolynomial,
    count_points,
    expand_series,
    interpolate,
    quasi_period,
    quasi_polynomial_from_series,
)
from .errors import BudgetExceededError, NotAMemberError, NotPositiveError, SchemaError
from .genfn import RationalGenFn
from .graphs import (
    Graph,
    Labeling,
    cayley_labeling,
    dimension,
    faces,
    labeling_cone,
    lift_labeling,
    named_graph,
    perfect_matchings,
    symmetric_group_table,
)
from .hilbert import (
    HilbertBasis,
    decompose,
    extreme_rays,
    hilbert_basis,
    truncated_hilbert_basis,
)
from .symmetry import GroupSpec, act, group, group_order, isomorphic, orbit

EXIT_CODES: Final[tuple[tuple[type[BaseException], int], ...]] = (
    (BudgetExceededError, 3),
    (NotAMemberError, 4),
    (NotPositiveError, 4),
    (ValueError, 2),
    (OSError, 2),
)
"""Exit status per exception class; the first match wins."""


def exit_code(e: BaseException) -> int:
    """Process exit status for an exception raised by a command."""
    for cls, code in EXIT_CODES:
        if isinstance(e, cls):
            return code
    return 1


def _read_json(path: str) -> Any:
    with open(path) as f:
        return json.load(f)


def _integral(data: Any) -> bool:
    if isinstance(data, (list, tuple)):
        return all(_integral(x) for x in data)
    return isinstance(data, int) and not isinstance(data, bool)


def parse_member(value: str) -> tuple[int, ...]:
    """Convert a command-line member to a flat vector.

    Parameters
    ----------
    value : `str`
        A JSON list, a JSON grid (nested lists), an object with a
        ``vector``, ``square`` or ``image`` entry (the artifacts of
        ``hilbert``, ``lift``, ``natural`` and ``symmetry apply``), or the
        path of a file holding any of these.

    Returns
    -------
    `tuple` [`int`]
        Entries in row-major order.

    Raises
    ------
    SchemaError
        If the value is not a list of integers in any of these forms.
    """
    text = value.strip()
    if not text.startswith(("[", "{")) and os.path.exists(text):
        with open(text) as f:
            text = f.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"Member {value!r} is not valid JSON: {e}") from e
    if isinstance(data, dict):
        key = next((k for k in ("vector", "square", "image") if k in data), None)
        if key is None:
            raise SchemaError(f"Member {value!r} has no vector, square or image.")
        data = data[key]
    if not isinstance(data, (list, tuple)) or not _integral(data):
        raise SchemaError(f"Member {value!r} is not a list of integers.")
    return flatten(data)


def _side(vector: tuple[int, ...]) -> int | None:
    n = math.isqrt(len(vector))
    return n if n > 0 and n * n == len(vector) else None


class Dispatcher:
    """Runs parsed subcommands and reports their outcome.

    Every subcommand is a method taking the parsed arguments. Artifacts
    are written as JSON to ``--output`` when it is given, with a short
    human-readable summary on standard output; without ``--output`` the
    JSON goes to standard output. A failing command writes a JSON record
    to standard error of the form

    .. code-block::

        {"command": ..., "error": 1, "exception_name": ...,
         "message": ..., "traceback": ...}

    Parameters
    ----------
    config : `Config`
        Budgets and defaults for this run.
    stdout, stderr : `typing.TextIO`, optional
        Output streams; default to the process streams.
    """

    def __init__(
        self,
        config: Config,
        stdout: TextIO | None = None,
        stderr: TextIO | None = None,
    ):
        self.config = config
        self.stdout = stdout if stdout is not None else sys.stdout
        self.stderr = stderr if stderr is not None else sys.stderr
        self.log = logging.getLogger(type(self).__name__)
        self.dispatch_dict: Final[dict[str, Callable[[argparse.Namespace], None]]] = {
            "build": self.build,
            "verify": self.verify,
            "hilbert": self.hilbert,
            "rays": self.rays,
            "decompose": self.decompose,
            "count": self.count,
            "series": self.series,
            "expand": self.expand,
            "period": self.period,
            "formula": self.formula,
            "eval": self.eval,
            "symmetry": self.symmetry,
            "graph": self.graph,
            "natural": self.natural,
            "lift": self.lift,
        }

    def dispatch(self, args: argparse.Namespace) -> int:
        """Run ``args.command`` and return the process exit status."""
        command = args.command
        self.log.debug(f"Received command: {command!r}")
        if command not in self.dispatch_dict:
            self.respond_error(command, "NotImplementedError", "No such command", "")
            return 2
        try:
            self.dispatch_dict[command](args)
        except Exception as e:
            self.log.exception(f"Exception raised while handling command {command}")
            self.respond_error(command, type(e).__name__, str(e), traceback.format_exc())
            return exit_code(e)
        return 0

    def respond_error(
        self, command: str, exception_name: str, message: str, tb: str
    ) -> None:
        self.stderr.write(
            json.dumps(
                dict(
                    command=command,
                    error=1,
                    exception_name=exception_name,
                    message=message,
                    traceback=tb,
                )
            )
            + "\n"
        )

    def emit(self, args: argparse.Namespace, data: Any, summary: str) -> None:
        """Write an artifact and its summary."""
        text = json.dumps(data, indent=2)
        if args.output:
            with open(args.output, "w") as f:
                f.write(text + "\n")
            self.stdout.write(summary + "\n")
        else:
            self.stdout.write(text + "\n")

    def budget(self) -> Budget:
        return Budget(
            self.config.budget_seconds,
            nodes=self.config.max_search_nodes,
            candidates=self.config.max_basis_candidates,
            pairs=self.config.max_groebner_pairs,
            subsets=self.config.max_search_nodes,
        )

    def load_system(self, args: argparse.Namespace) -> ConeSystem:
        """The system named by ``--system`` or by the family options."""
        if args.system:
            return ConeSystem.from_dict(_read_json(args.system))
        if not args.family:
            raise ValueError("Give either --system or --family.")
        graph = self.load_graph(args.graph) if args.graph else None
        return build_system(args.family, n=args.n, d=args.d, graph=graph)

    def load_graph(self, value: str) -> Graph:
        """A graph from a JSON file or a short name (see `named_graph`)."""
        if os.path.exists(value):
            data = _read_json(value)
            return Labeling.from_dict(data).graph if "labels" in data else Graph.from_dict(data)
        return named_graph(value)

    def load_group(self, args: argparse.Namespace) -> GroupSpec:
        if args.group_file:
            return GroupSpec.from_dict(_read_json(args.group_file))
        return group(args.group)

    def build(self, args: argparse.Namespace) -> None:
        cone = self.load_system(args)
        summary = (
            f"{cone.family.value}: {cone.cols} variables, {cone.matrix.rows} equations, "
            f"rank {cone.rank}, polytope dimension {cone.polytope_dimension}"
        )
        self.emit(args, cone.to_dict(), summary)

    def verify(self, args: argparse.Namespace) -> None:
        cone = self.load_system(args)
        s = verify_member(cone, parse_member(args.member))
        self.emit(args, {"member": True, "degree": s}, f"member of magic sum {s}")

    def hilbert(self, args: argparse.Namespace) -> None:
        cone = self.load_system(args)
        if args.dmax is not None:
            hb = truncated_hilbert_basis(cone, args.dmax, self.budget())
        else:
            hb = hilbert_basis(cone, args.method, self.budget())
        rows = [f"{len(hb)} elements"]
        rows += [f"degree {d}: {len(hs)}" for d, hs in hb.by_degree().items()]
        self.emit(args, hb.to_dict(), "\n".join(rows))

    def rays(self, args: argparse.Namespace) -> None:
        rays = extreme_rays(self.load_system(args))
        self.emit(args, {"rays": [list(r) for r in rays]}, f"{len(rays)} extreme rays")

    def decompose(self, args: argparse.Namespace) -> None:
        hb = HilbertBasis.from_dict(_read_json(args.basis))
        vector = parse_member(args.member)
        result = decompose(vector, hb, all_solutions=args.all)
        if not result:
            raise NotAMemberError(f"{list(vector)} is not a member of the cone.")
        if args.all:
            data = {"decompositions": [d.to_dict() for d in result]}
            summary = f"{len(result)} decompositions"
        else:
            data = result.to_dict()
            summary = " + ".join(
                f"{c}*h{i + 1}" if c > 1 else f"h{i + 1}"
                for i, c in result.coefficients.items()
            )
        self.emit(args, data, summary)

    def count(self, args: argparse.Namespace) -> None:
        cone = self.load_system(args)
        budget = self.budget()
        counts = {
            s: count_points(cone, s, workers=self.config.threads, budget=budget)
            for s in args.sum
        }
        if not args.output and len(counts) == 1:
            self.stdout.write(f"{counts[args.sum[0]]}\n")
            return
        summary = "\n".join(f"{s} {c}" for s, c in counts.items())
        self.emit(args, {"counts": {str(s): c for s, c in counts.items()}}, summary)

    def series(self, args: argparse.Namespace) -> None:
        from .binomial import hilbert_series

        g = hilbert_series(self.load_system(args), args.method, self.budget())
        self.emit(args, g.to_dict(), str(g.as_expr()))

    def expand(self, args: argparse.Namespace) -> None:
        g = RationalGenFn.from_dict(_read_json(args.series))
        degree = self.config.series_degree if args.degree is None else args.degree
        coefficients = expand_series(g, degree)
        summary = "\n".join(f"{s} {c}" for s, c in enumerate(coefficients))
        self.emit(args, {"coefficients": coefficients}, summary)

    def period(self, args: argparse.Namespace) -> None:
        n = quasi_period(self.load_system(args))
        self.emit(args, {"period": n}, f"quasi-period {n}")

    def formula(self, args: argparse.Namespace) -> None:
        if args.series:
            g = RationalGenFn.from_dict(_read_json(args.series))
            qp = quasi_polynomial_from_series(g, args.period, args.degree).minimize()
        elif args.samples:
            if args.period is None or args.degree is None:
                raise ValueError("Interpolating samples needs --period and --degree.")
            data = _read_json(args.samples)
            try:
                samples = {int(s): int(v) for s, v in data["counts"].items()}
            except (KeyError, TypeError, ValueError, AttributeError) as e:
                raise SchemaError(f"Malformed samples file: {e}") from e
            qp = interpolate(samples, args.period, args.degree).minimize()
        else:
            raise ValueError("Give either --series or --samples.")
        self.emit(args, qp.to_dict(), qp.format())

    def eval(self, args: argparse.Namespace) -> None:
        qp = QuasiPolynomial.from_dict(_read_json(args.formula))
        values = {s: qp(s) for s in args.at}
        if not args.output and len(values) == 1:
            self.stdout.write(f"{values[args.at[0]]}\n")
            return
        summary = "\n".join(f"{s} {v}" for s, v in values.items())
        self.emit(args, {"values": {str(s): v for s, v in values.items()}}, summary)

    def symmetry(self, args: argparse.Namespace) -> None:
        g = self.load_group(args)
        if args.action == "order":
            order = group_order(g)
            self.emit(args, {"group": g.name, "order": order}, f"|{g.name}| = {order}")
            return
        if not args.member:
            raise ValueError(f"symmetry {args.action} needs --member.")
        x = parse_member(args.member)
        cap = self.config.orbit_cap if args.cap is None else args.cap
        if args.action == "apply":
            if not 0 <= args.generator < len(g.generators):
                raise ValueError(
                    f"Generator index {args.generator} out of range for {len(g.generators)}."
                )
            if len(x) != g.degree:
                raise ValueError(f"Expected {g.degree} entries, got {len(x)}.")
            image = act(g.generators[args.generator], x)
            n = _side(image)
            summary = render_grid(image, n) if n else str(list(image))
            self.emit(args, {"image": list(image)}, summary)
        elif args.action == "orbit":
            points = sorted(orbit(x, g, cap))
            self.emit(
                args,
                {"size": len(points), "orbit": [list(p) for p in points]},
                f"orbit of size {len(points)}",
            )
        elif args.action == "iso":
            if not args.other:
                raise ValueError("symmetry iso needs --other.")
            same = isomorphic(x, parse_member(args.other), g, cap)
            self.emit(
                args,
                {"isomorphic": same},
                "isomorphic" if same else "not isomorphic",
            )

    def graph(self, args: argparse.Namespace) -> None:
        if args.action == "cayley":
            labeling = cayley_labeling(symmetric_group_table(args.n))
            m = labeling.to_matrix()
            summary = "\n".join(" ".join(f"{x:3d}" for x in row) for row in m)
            summary += f"\nmagic sum {labeling.magic_sum()}"
            self.emit(args, labeling.to_dict(), summary)
            return
        if not args.graph:
            raise ValueError(f"graph {args.action} needs --graph.")
        g = self.load_graph(args.graph)
        if args.action == "build":
            kind = "digraph" if g.directed else "graph"
            self.emit(args, g.to_dict(), f"{kind} with {g.n} vertices and {g.q} edges")
        elif args.action == "cone":
            cone = labeling_cone(g)
            self.emit(args, cone.to_dict(), f"{cone.cols} variables, rank {cone.rank}")
        elif args.action == "matchings":
            matchings = perfect_matchings(g)
            self.emit(
                args,
                {"count": len(matchings), "matchings": [list(m.labels) for m in matchings]},
                f"{len(matchings)} perfect matchings",
            )
        elif args.action == "faces":
            found = faces(g, args.dim, self.budget())
            by_dim: dict[int, int] = {}
            for f in found:
                by_dim[f.dim] = by_dim.get(f.dim, 0) + 1
            summary = "\n".join(f"dimension {d}: {c}" for d, c in sorted(by_dim.items()))
            self.emit(args, {"faces": [f.to_dict() for f in found]}, summary)
        elif args.action == "dimension":
            d = dimension(g, strict=args.strict)
            self.emit(args, {"dimension": d}, f"dimension {d}")

    def natural(self, args: argparse.Namespace) -> None:
        build = natural_square_odd if args.kind == "odd" else natural_square_even
        square = build(args.n)
        self.emit(args, {"square": square}, render_grid(flatten(square), args.n))

    def lift(self, args: argparse.Namespace) -> None:
        if args.kind == "franklin-block":
            if not args.member:
                raise ValueError("lift franklin-block needs --member.")
            lifted = franklin_block_lift(parse_member(args.member))
            self.emit(args, lifted.to_dict(), render_grid(lifted.vector, 16))
        else:
            if not args.labeling:
                raise ValueError("lift graph needs --labeling.")
            lifted = lift_labeling(Labeling.from_dict(_read_json(args.labeling)))
            self.emit(
                args,
                lifted.to_dict(),
                f"labeling of {lifted.graph.q} edges, magic sum {lifted.magic_sum()}",
            )
