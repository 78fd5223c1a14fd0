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

__all__ = [
    "QuasiPolynomial",
    "enumerate_points",
    "count_points",
    "expand_series",
    "quasi_period",
    "interpolate",
    "quasi_polynomial_from_series",
    "counting_function",
]

import concurrent.futures
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterator, Mapping

import sympy

from .budget import Budget
from .config import Config
from .cones import ConeSystem, LatticePoint
from .errors import (
    BudgetExceededError,
    InconsistentSamplesError,
    InsufficientSamplesError,
    SchemaError,
)
from .genfn import RationalGenFn
from .hilbert import extreme_rays
from .linalg import lcm_of_denominators
from .search import LatticePointSearch

log = logging.getLogger(__name__)

S = sympy.Symbol("s")


@dataclass(frozen=True)
class QuasiPolynomial:
    """A function of ``s`` that is polynomial on each residue class mod
    ``period``.

    Parameters
    ----------
    period : `int`
        The quasi-period ``N``.
    constituents : `tuple` [`tuple` [`Fraction`]]
        ``N`` coefficient tuples in ascending powers of ``s``; constituent
        ``i`` applies when ``s ≡ i (mod N)``.
    corrections : `dict` [`int`, `int`]
        Exact values at small ``s`` where the function is not yet
        polynomial.
    """

    period: int
    constituents: tuple[tuple[Fraction, ...], ...]
    corrections: dict[int, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.period < 1 or len(self.constituents) != self.period:
            raise ValueError(
                f"Need {self.period} constituents, got {len(self.constituents)}."
            )

    def __hash__(self) -> int:
        return hash((self.period, self.constituents, tuple(sorted(self.corrections.items()))))

    def evaluate(self, s: int) -> int:
        """Exact value at ``s``.

        Raises
        ------
        ValueError
            If ``s`` is negative or the value is not an integer.
        """
        if s < 0:
            raise ValueError(f"s must be nonnegative, got {s}.")
        if s in self.corrections:
            return self.corrections[s]
        value = self.polynomial_value(s)
        if value.denominator != 1:
            raise ValueError(f"Non-integer value {value} at s={s}; corrupted quasi-polynomial.")
        return int(value)

    def polynomial_value(self, s: int) -> Fraction:
        """Value of the constituent of ``s``, ignoring corrections."""
        return sum(
            (c * s**k for k, c in enumerate(self.constituents[s % self.period])),
            Fraction(0),
        )

    __call__ = evaluate

    @property
    def degree(self) -> int:
        return max(
            (k for c in self.constituents for k, x in enumerate(c) if x != 0),
            default=-1,
        )

    def leading_coefficient(self, residue: int = 0) -> Fraction:
        coefficients = self.constituents[residue % self.period]
        degree = self.degree
        return coefficients[degree] if degree < len(coefficients) else Fraction(0)

    def minimize(self) -> "QuasiPolynomial":
        """The same function with the smallest period dividing ``period``."""
        for p in range(1, self.period + 1):
            if self.period % p == 0 and all(
                _trim(self.constituents[i]) == _trim(self.constituents[i % p])
                for i in range(self.period)
            ):
                return QuasiPolynomial(p, self.constituents[:p], dict(self.corrections))
        return self

    def as_expr(self, residue: int) -> sympy.Expr:
        return sum(
            (sympy.Rational(c.numerator, c.denominator) * S**k
             for k, c in enumerate(self.constituents[residue % self.period])),
            sympy.Integer(0),
        )

    def format(self, variable: str = "s") -> str:
        symbol = sympy.Symbol(variable)
        lines = []
        for i in range(self.period):
            expr = sympy.factor(self.as_expr(i).subs(S, symbol))
            if self.period == 1:
                lines.append(str(expr))
            else:
                lines.append(f"{variable} ≡ {i} (mod {self.period}): {expr}")
        for s, value in sorted(self.corrections.items()):
            lines.append(f"{variable} = {s}: {value}")
        return "\n".join(lines)

    def to_dict(self) -> dict[str, Any]:
        return {
            "period": self.period,
            "constituents": [
                [[str(c.numerator), str(c.denominator)] for c in constituent]
                for constituent in self.constituents
            ],
            "corrections": {str(s): v for s, v in sorted(self.corrections.items())},
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "QuasiPolynomial":
        try:
            constituents = tuple(
                tuple(Fraction(int(num), int(den)) for num, den in constituent)
                for constituent in data["constituents"]
            )
            corrections = {int(s): int(v) for s, v in data.get("corrections", {}).items()}
            return cls(int(data["period"]), constituents, corrections)
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
            raise SchemaError(f"Malformed quasi-polynomial: {e}") from e


def _trim(coefficients: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    end = len(coefficients)
    while end and coefficients[end - 1] == 0:
        end -= 1
    return coefficients[:end]


def enumerate_points(
    sys: ConeSystem, s: int, budget: Budget | None = None
) -> Iterator[LatticePoint]:
    """Members of magic sum ``s`` in the search's deterministic order."""
    for vector in LatticePointSearch(sys, s, budget=budget):
        yield LatticePoint(vector, s)


def _count_subtree(
    args: tuple[ConeSystem, int, int, int, float, dict[str, int]]
) -> tuple[int, int]:
    """Count one subtree under what is left of the caller's budget;
    returns the count and the nodes spent."""
    sys, s, j, value, seconds, limits = args
    search = LatticePointSearch(sys, s, fixed={j: value}, budget=Budget(seconds, **limits))
    return search.count(), search.budget.counts.get("nodes", 0)


def count_points(
    sys: ConeSystem, s: int, workers: int | None = None, budget: Budget | None = None
) -> int:
    """Number of members of magic sum ``s``, by exhaustive search.

    Parameters
    ----------
    sys : `ConeSystem`
        The cone.
    s : `int`
        Magic sum, at least 0.
    workers : `int`, optional
        Worker processes; above 1 the subtrees below the root branching
        variable are counted in a process pool.
    budget : `Budget`, optional
        Node and time budget. In the pool every subtree runs under what
        is left of it, and the nodes spent are charged back to it.
    """
    if s < 0:
        raise ValueError(f"Magic sum must be nonnegative, got {s}.")
    workers = Config.threads if workers is None else workers
    search = LatticePointSearch(sys, s, budget=budget)
    split = search.root_split() if workers > 1 else None
    if split is None:
        return search.count()
    j, values = split
    budget = search.budget
    seconds = budget.seconds - budget.elapsed()
    limits = {name: limit - budget.counts.get(name, 0) for name, limit in budget.limits.items()}
    tasks = [(sys, s, j, v, seconds, limits) for v in values]
    with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
        try:
            results = list(pool.map(_count_subtree, tasks))
        except BudgetExceededError as e:
            limit = budget.seconds if e.budget == "seconds" else budget.limits.get(e.budget, e.limit)
            raise BudgetExceededError(e.budget, limit) from e
    budget.charge("nodes", sum(nodes for _, nodes in results))
    total = sum(count for count, _ in results)
    log.debug(f"Counted {total} members of sum {s} over {len(values)} subtrees")
    return total


def expand_series(g: RationalGenFn, dmax: int) -> list[int]:
    """Power series coefficients ``c_0 … c_dmax`` of ``g``."""
    return g.expand(dmax)


def quasi_period(sys: ConeSystem) -> int:
    """Lcm of the denominators of the vertices ``ray / deg(ray)`` of the
    magic-sum-1 polytope."""
    rays = extreme_rays(sys)
    if not rays:
        return 1
    return lcm_of_denominators(
        [[Fraction(x, sys.degree(ray)) for x in ray] for ray in rays]
    )


def _fit(points: list[tuple[int, int]], degree: int) -> tuple[Fraction, ...]:
    if len(points) == 1:
        coefficients = [Fraction(points[0][1])]
    else:
        poly = sympy.Poly(sympy.interpolate(points, S), S, domain=sympy.QQ)
        coefficients = [
            Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs())
        ]
    coefficients += [Fraction(0)] * (degree + 1 - len(coefficients))
    return tuple(coefficients[: degree + 1])


def interpolate(samples: Mapping[int, int], period: int, degree: int) -> QuasiPolynomial:
    """Exact per-residue-class interpolation.

    Parameters
    ----------
    samples : mapping of `int` to `int`
        Values ``f(s)``.
    period : `int`
        Quasi-period ``N``.
    degree : `int`
        Degree bound of every constituent.

    Raises
    ------
    InsufficientSamplesError
        If a residue class has a nonzero sample and at most ``degree``
        samples. Classes without nonzero samples are zero.
    InconsistentSamplesError
        If the extra samples of a class disagree with the fitted
        polynomial.
    """
    constituents = []
    for r in range(period):
        points = sorted((s, v) for s, v in samples.items() if s % period == r)
        if not any(v for _, v in points):
            constituents.append((Fraction(0),) * (degree + 1))
            continue
        if len(points) < degree + 1:
            raise InsufficientSamplesError(
                f"insufficient samples for residue class {r} mod {period}: "
                f"{len(points)} < {degree + 1}"
            )
        coefficients = _fit(points[: degree + 1], degree)
        for s, v in points[degree + 1 :]:
            fitted = sum(c * s**k for k, c in enumerate(coefficients))
            if fitted != v:
                raise InconsistentSamplesError(
                    f"Sample f({s})={v} disagrees with the degree {degree} fit "
                    f"({fitted}) on residue class {r} mod {period}."
                )
        constituents.append(coefficients)
    return QuasiPolynomial(period, tuple(constituents))


def quasi_polynomial_from_series(
    g: RationalGenFn, period: int | None = None, degree: int | None = None
) -> QuasiPolynomial:
    """Quasi-polynomial of the coefficients of a rational generating
    function.

    Coefficients from ``deg numerator − deg denominator + 1`` on are
    interpolated with two extra samples per residue class as a check;
    earlier coefficients that the formula misses are kept as corrections.
    """
    if period is None:
        period = math.lcm(1, *g.denominator)
    if degree is None:
        degree = max(len(g.denominator) - 1, 0)
    start = max(0, len(g.numerator) - 1 - sum(g.denominator) + 1)
    stop = start + period * (degree + 3)
    coefficients = g.expand(stop)
    qp = interpolate(
        {s: coefficients[s] for s in range(start, stop + 1)}, period, degree
    )
    corrections = {
        s: coefficients[s]
        for s in range(start)
        if qp.polynomial_value(s) != coefficients[s]
    }
    return QuasiPolynomial(qp.period, qp.constituents, corrections)


def counting_function(
    sys: ConeSystem, method: str = "auto", budget: Budget | None = None
) -> QuasiPolynomial:
    """Counting quasi-polynomial of ``sys`` from its Hilbert series."""
    from .binomial import hilbert_series

    qp = quasi_polynomial_from_series(
        hilbert_series(sys, method, budget), quasi_period(sys), sys.polytope_dimension
    )
    return qp.minimize()
