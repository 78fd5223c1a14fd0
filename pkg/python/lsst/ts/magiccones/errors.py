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
    "MagicConesError",
    "BudgetExceededError",
    "NotAMemberError",
    "NotPointedError",
    "NotPositiveError",
    "InsufficientSamplesError",
    "InconsistentSamplesError",
    "SchemaError",
]


class MagicConesError(Exception):
    """Base class for errors raised by this package."""


class BudgetExceededError(MagicConesError, RuntimeError):
    """A configured time, size or count budget was exceeded.

    Parameters
    ----------
    budget : `str`
        Name of the exceeded budget.
    limit : `float`
        The configured limit.
    """

    def __init__(self, budget: str, limit: float):
        super().__init__(f"Budget {budget!r} exceeded (limit {limit}).")
        self.budget = budget
        self.limit = limit

    def __reduce__(self) -> tuple:
        return type(self), (self.budget, self.limit)


class NotAMemberError(MagicConesError, ValueError):
    """A vector is not a lattice point of the cone, or a request has no
    feasible answer.

    Parameters
    ----------
    message : `str`
        Description of the failure.
    row : `int` or `None`
        Index of the first violated constraint row, if any.
    """

    def __init__(self, message: str, row: int | None = None):
        super().__init__(message)
        self.row = row

    def __reduce__(self) -> tuple:
        return type(self), (str(self), self.row)


class NotPointedError(MagicConesError, ValueError):
    """The grading is not strictly positive on the cone."""


class NotPositiveError(MagicConesError, ValueError):
    """A graph has edges that vanish in every magic labeling."""


class InsufficientSamplesError(MagicConesError, ValueError):
    """Too few samples to interpolate a residue class."""


class InconsistentSamplesError(MagicConesError, ValueError):
    """Samples of a residue class do not fit a polynomial of the
    declared degree."""


class SchemaError(MagicConesError, ValueError):
    """A JSON artifact does not match the expected schema."""
