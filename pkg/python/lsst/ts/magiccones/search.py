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

"""Depth-first enumeration of the members of a cone with a given degree.

This is the counting oracle that every algebraic computation of the
package is checked against.
"""

__all__ = ["LatticePointSearch", "variable_bounds"]

import logging
from fractions import Fraction
from typing import Iterator, Sequence

from .budget import Budget
from .config import Config
from .cones import ConeSystem


def variable_bounds(sys: ConeSystem, s: int) -> list[int]:
    """Largest value every coordinate takes on a member of degree ``s``.

    The slice of the cone at degree ``s`` is the convex hull of the rays
    scaled to degree ``s``, so the maximum of a coordinate is attained at
    one of them.
    """
    from .hilbert import extreme_rays

    rays = extreme_rays(sys)
    bounds = []
    for j in range(sys.cols):
        best = max(
            (Fraction(ray[j], sys.degree(ray)) for ray in rays), default=Fraction(0)
        )
        bounds.append(int(best * s))
    return bounds


class LatticePointSearch:
    """Backtracking search with interval propagation over ``A·y = 0``
    and ``w·y = s``.

    Every variable carries an interval ``[lo, hi]``. Fixing a variable
    propagates bounds through all equations containing it until nothing
    changes; branches whose intervals become empty are pruned.

    Parameters
    ----------
    sys : `ConeSystem`
        The cone.
    degree : `int`
        Magic sum ``s`` of the members to enumerate.
    upper : `list` [`int`], optional
        Extra componentwise upper bounds.
    fixed : `dict` [`int`, `int`], optional
        Variables fixed before the search starts.
    budget : `Budget`, optional
        Node and time budget.
    """

    def __init__(
        self,
        sys: ConeSystem,
        degree: int,
        upper: Sequence[int] | None = None,
        fixed: dict[int, int] | None = None,
        budget: Budget | None = None,
    ):
        if degree < 0:
            raise ValueError(f"Degree must be nonnegative, got {degree}.")
        self.log = logging.getLogger(type(self).__name__)
        self.sys = sys
        self.degree = degree
        self.budget = (
            budget if budget is not None else Budget(nodes=Config.max_search_nodes)
        )
        self.nodes = 0

        self.equations: list[tuple[list[int], list[int], int]] = []
        for i in range(sys.matrix.rows):
            row = sys.matrix.row(i)
            support = [j for j, c in enumerate(row) if c]
            if support:
                self.equations.append((support, [row[j] for j in support], 0))
        support = [j for j, c in enumerate(sys.grading) if c]
        self.equations.append((support, [sys.grading[j] for j in support], degree))
        self.var_eqs: list[list[int]] = [[] for _ in range(sys.cols)]
        for e, (support, _, _) in enumerate(self.equations):
            for j in support:
                self.var_eqs[j].append(e)

        self.lo = [0] * sys.cols
        self.hi = variable_bounds(sys, degree)
        if upper is not None:
            self.hi = [min(a, b) for a, b in zip(self.hi, upper)]
        self.trail: list[tuple[int, int, int]] = []
        self.feasible = True
        for j, value in (fixed or {}).items():
            if not self.lo[j] <= value <= self.hi[j]:
                self.feasible = False
            self.lo[j] = self.hi[j] = value
        if self.feasible:
            self.feasible = self._propagate(range(len(self.equations)))

    def _tighten(self, j: int, lo: int, hi: int) -> bool:
        self.trail.append((j, self.lo[j], self.hi[j]))
        self.lo[j] = lo
        self.hi[j] = hi
        return lo <= hi

    def _undo(self, mark: int) -> None:
        trail = self.trail
        lo = self.lo
        hi = self.hi
        while len(trail) > mark:
            j, a, b = trail.pop()
            lo[j] = a
            hi[j] = b

    def _propagate(self, pending: Iterator[int] | range | list[int]) -> bool:
        """Propagate bounds to a fixpoint; False on a contradiction."""
        queue = list(pending)
        queued = set(queue)
        lo = self.lo
        hi = self.hi
        while queue:
            e = queue.pop()
            queued.discard(e)
            support, coefs, rhs = self.equations[e]
            smin = smax = 0
            for j, c in zip(support, coefs):
                if c > 0:
                    smin += c * lo[j]
                    smax += c * hi[j]
                else:
                    smin += c * hi[j]
                    smax += c * lo[j]
            if rhs < smin or rhs > smax:
                return False
            if smin == smax:
                continue
            slack_low = rhs - smin
            slack_high = smax - rhs
            for j, c in zip(support, coefs):
                a, b = lo[j], hi[j]
                if a == b:
                    continue
                if c > 0:
                    new_hi = a + slack_low // c
                    new_lo = b - slack_high // c
                else:
                    new_hi = a + slack_high // -c
                    new_lo = b - slack_low // -c
                if new_hi < b or new_lo > a:
                    if not self._tighten(j, max(a, new_lo), min(b, new_hi)):
                        return False
                    for f in self.var_eqs[j]:
                        if f not in queued:
                            queued.add(f)
                            queue.append(f)
        return True

    def _branch_variable(self) -> int | None:
        best = None
        best_size = None
        for j, (a, b) in enumerate(zip(self.lo, self.hi)):
            if a != b and (best_size is None or b - a < best_size):
                best = j
                best_size = b - a
                if best_size == 1:
                    break
        return best

    def _solutions(self) -> Iterator[tuple[int, ...]]:
        self.nodes += 1
        self.budget.charge("nodes")
        j = self._branch_variable()
        if j is None:
            yield tuple(self.lo)
            return
        for value in range(self.lo[j], self.hi[j] + 1):
            mark = len(self.trail)
            if self._tighten(j, value, value) and self._propagate(self.var_eqs[j]):
                yield from self._solutions()
            self._undo(mark)

    def _count(self) -> int:
        self.nodes += 1
        self.budget.charge("nodes")
        j = self._branch_variable()
        if j is None:
            return 1
        total = 0
        for value in range(self.lo[j], self.hi[j] + 1):
            mark = len(self.trail)
            if self._tighten(j, value, value) and self._propagate(self.var_eqs[j]):
                total += self._count()
            self._undo(mark)
        return total

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        if self.feasible:
            yield from self._solutions()
        self.log.debug(f"Enumerated degree {self.degree} in {self.nodes} nodes")

    def count(self) -> int:
        """Number of members of degree ``s``."""
        if not self.feasible:
            return 0
        total = self._count()
        self.log.debug(f"Counted {total} members of degree {self.degree} in {self.nodes} nodes")
        return total

    def root_split(self) -> tuple[int, list[int]] | None:
        """Branching variable at the root and its candidate values."""
        if not self.feasible:
            return None
        j = self._branch_variable()
        if j is None:
            return None
        return j, list(range(self.lo[j], self.hi[j] + 1))
