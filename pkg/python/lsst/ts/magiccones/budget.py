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

import time

from .config import Config
from .errors import BudgetExceededError

__all__ = ["Budget"]


class Budget:
    """Wall-clock and counter limits shared by one computation.

    Parameters
    ----------
    seconds : `float`, optional
        Wall-clock limit; defaults to `Config.budget_seconds`.
    **limits : `int`
        Named counter limits, e.g. ``nodes=10_000``.
    """

    def __init__(self, seconds: float | None = None, **limits: int):
        self.seconds = Config.budget_seconds if seconds is None else seconds
        self.limits = dict(limits)
        self.counts = {name: 0 for name in limits}
        self.start = time.monotonic()

    def elapsed(self) -> float:
        return time.monotonic() - self.start

    def check_time(self) -> None:
        """Raise if the wall-clock limit has passed.

        Raises
        ------
        BudgetExceededError
            If more than ``seconds`` have elapsed.
        """
        if self.elapsed() > self.seconds:
            raise BudgetExceededError("seconds", self.seconds)

    def charge(self, name: str, amount: int = 1) -> None:
        """Add ``amount`` to counter ``name`` and enforce its limit.

        The clock is checked every 4096 units charged to a counter.

        Raises
        ------
        BudgetExceededError
            If the counter passes its limit or time is up.
        """
        before = self.counts.get(name, 0)
        after = before + amount
        self.counts[name] = after
        limit = self.limits.get(name)
        if limit is not None and after > limit:
            raise BudgetExceededError(name, limit)
        if (before >> 12) != (after >> 12):
            self.check_time()
