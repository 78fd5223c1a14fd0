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

"""Historical squares used as fixtures.

Squares are row-major tuples. Every entry was checked against the sums of
its family.
"""

__all__ = [
    "LOH_SHU",
    "DURER",
    "JAINA",
    "FRANKLIN_F1",
    "FRANKLIN_F2",
    "semi_magic_latin_squares",
]

import itertools

LOH_SHU = (
    4, 9, 2,
    3, 5, 7,
    8, 1, 6,
)  # fmt: skip
"""The Loh-Shu 3×3 magic square, magic sum 15."""

DURER = (
    16, 3, 2, 13,
    5, 10, 11, 8,
    9, 6, 7, 12,
    4, 15, 14, 1,
)  # fmt: skip
"""Dürer's 4×4 magic square from Melencolia I, magic sum 34."""

JAINA = (
    7, 12, 1, 14,
    2, 13, 8, 11,
    16, 3, 10, 5,
    9, 6, 15, 4,
)  # fmt: skip
"""The Jaina 4×4 pandiagonal magic square, magic sum 34."""

FRANKLIN_F1 = (
    52, 61, 4, 13, 20, 29, 36, 45,
    14, 3, 62, 51, 46, 35, 30, 19,
    53, 60, 5, 12, 21, 28, 37, 44,
    11, 6, 59, 54, 43, 38, 27, 22,
    55, 58, 7, 10, 23, 26, 39, 42,
    9, 8, 57, 56, 41, 40, 25, 24,
    50, 63, 2, 15, 18, 31, 34, 47,
    16, 1, 64, 49, 48, 33, 32, 17,
)  # fmt: skip
"""Benjamin Franklin's best known 8×8 square, magic sum 260."""

FRANKLIN_F2 = (
    17, 47, 30, 36, 21, 43, 26, 40,
    32, 34, 19, 45, 28, 38, 23, 41,
    33, 31, 46, 20, 37, 27, 42, 24,
    48, 18, 35, 29, 44, 22, 39, 25,
    49, 15, 62, 4, 53, 11, 58, 8,
    64, 2, 51, 13, 60, 6, 55, 9,
    1, 63, 14, 52, 5, 59, 10, 56,
    16, 50, 3, 61, 12, 54, 7, 57,
)  # fmt: skip
"""Franklin's second 8×8 square, magic sum 260."""


def semi_magic_latin_squares(n: int) -> list[tuple[tuple[int, ...], ...]]:
    """All latin squares on the symbols ``1 … n``, by brute force.

    Only practical for ``n ≤ 4``.
    """
    rows = list(itertools.permutations(range(1, n + 1)))
    squares = []

    def extend(square: list[tuple[int, ...]]) -> None:
        if len(square) == n:
            squares.append(tuple(square))
            return
        for row in rows:
            if all(row[j] != other[j] for other in square for j in range(n)):
                square.append(row)
                extend(square)
                square.pop()

    extend([])
    return squares
