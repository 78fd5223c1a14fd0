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

"""Defining linear systems of the magic-structure families.

Every family is a cone ``{y : A·y = 0, y ≥ 0}`` together with a grading
functional ``w`` (the sum of the first row, first line or first vertex).
Each mandated sum is equated to that reference sum.
"""

__all__ = [
    "Family",
    "LatticePoint",
    "ConeSystem",
    "build_system",
    "verify_member",
    "natural_square_odd",
    "natural_square_even",
    "franklin_block_lift",
    "latin_square_bijection",
    "latin_square_to_cube",
    "as_grid",
    "flatten",
    "render_grid",
]

import enum
import functools
import itertools
import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Sequence

from .errors import NotAMemberError, SchemaError
from .linalg import IntMatrix, dot, rational_rank

if TYPE_CHECKING:
    from .graphs import Graph

log = logging.getLogger(__name__)


class Family(str, enum.Enum):
    MAGIC = "magic"
    SEMI_MAGIC = "semi-magic"
    PANDIAGONAL = "pandiagonal"
    FRANKLIN8 = "franklin8"
    FRANKLIN16 = "franklin16"
    PANDIAGONAL_FRANKLIN8 = "pandiagonal-franklin8"
    MAGIC_CUBE = "magic-cube"
    SEMI_MAGIC_HYPERCUBE = "semi-magic-hypercube"
    GRAPH_LABELING = "graph-labeling"
    DIGRAPH_LABELING = "digraph-labeling"
    SYMMETRIC_MAGIC = "symmetric-magic"
    PANDIAGONAL_SYMMETRIC = "pandiagonal-symmetric"


SQUARE_FAMILIES = frozenset(
    {
        Family.MAGIC,
        Family.SEMI_MAGIC,
        Family.PANDIAGONAL,
        Family.FRANKLIN8,
        Family.FRANKLIN16,
        Family.PANDIAGONAL_FRANKLIN8,
        Family.SYMMETRIC_MAGIC,
        Family.PANDIAGONAL_SYMMETRIC,
    }
)
"""Families whose members are n×n squares."""


@dataclass(frozen=True)
class LatticePoint:
    """A nonnegative integer member of a cone together with its degree."""

    vector: tuple[int, ...]
    degree: int

    def __post_init__(self) -> None:
        if any(x < 0 for x in self.vector):
            raise NotAMemberError(f"Lattice point has a negative entry: {self.vector}.")

    def __len__(self) -> int:
        return len(self.vector)

    def __add__(self, other: "LatticePoint") -> "LatticePoint":
        return LatticePoint(
            tuple(a + b for a, b in zip(self.vector, other.vector)),
            self.degree + other.degree,
        )

    def to_dict(self) -> dict[str, Any]:
        return {"vector": list(self.vector), "degree": self.degree}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "LatticePoint":
        try:
            return cls(tuple(int(x) for x in data["vector"]), int(data["degree"]))
        except (KeyError, TypeError) as e:
            raise SchemaError(f"Malformed lattice point: {data!r}") from e


@dataclass(frozen=True)
class ConeSystem:
    """The linear system defining a cone of magic structures.

    Parameters
    ----------
    family : `Family`
        Family tag.
    matrix : `IntMatrix`
        Constraint matrix ``A``; the cone is ``{y : A·y = 0, y ≥ 0}``.
    grading : `tuple` [`int`]
        Grading functional ``w``; ``w·y`` is the magic sum of a member.
    cells : `tuple` [`tuple` [`int`]]
        Cell coordinates (or edge endpoints) of every column.
    n : `int`
        Side length, or vertex count for labeling cones.
    d : `int`
        Dimension of a hypercube (2 for squares).
    graph : `Graph` or `None`
        Underlying graph of a labeling cone.
    """

    family: Family
    matrix: IntMatrix
    grading: tuple[int, ...]
    cells: tuple[tuple[int, ...], ...]
    n: int
    d: int = 2
    graph: "Graph | None" = None

    def __post_init__(self) -> None:
        if len(self.grading) != self.matrix.cols or len(self.cells) != self.matrix.cols:
            raise ValueError(
                f"Grading ({len(self.grading)}) and cells ({len(self.cells)}) "
                f"must match {self.matrix.cols} columns."
            )

    @property
    def cols(self) -> int:
        return self.matrix.cols

    @property
    def params(self) -> dict[str, Any]:
        params: dict[str, Any] = {"n": self.n}
        if self.family in (Family.MAGIC_CUBE, Family.SEMI_MAGIC_HYPERCUBE):
            params["d"] = self.d
        if self.graph is not None:
            params["graph"] = self.graph.to_dict()
        return params

    @functools.cached_property
    def rank(self) -> int:
        return rational_rank(self.matrix)

    @property
    def dimension(self) -> int:
        """Dimension of the linear span ``ker A``."""
        return self.cols - self.rank

    @property
    def polytope_dimension(self) -> int:
        """Dimension of the slice of members with magic sum 1."""
        return self.dimension - 1

    def degree(self, vector: Sequence[int]) -> int:
        return dot(self.grading, vector)

    def point(self, vector: Sequence[int]) -> LatticePoint:
        """Verified `LatticePoint` for ``vector``."""
        return LatticePoint(tuple(vector), verify_member(self, vector))

    def to_dict(self) -> dict[str, Any]:
        return {
            "family": self.family.value,
            "params": self.params,
            "matrix": self.matrix.to_rows(),
            "grading": list(self.grading),
            "shape": {"cells": [list(c) for c in self.cells]},
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ConeSystem":
        try:
            family = Family(data["family"])
            params = data["params"]
            grading = tuple(int(x) for x in data["grading"])
            matrix = IntMatrix.from_rows(data["matrix"], cols=len(grading))
            cells = tuple(tuple(int(x) for x in c) for c in data["shape"]["cells"])
            graph = None
            if "graph" in params:
                from .graphs import Graph

                graph = Graph.from_dict(params["graph"])
            return cls(
                family,
                matrix,
                grading,
                cells,
                int(params["n"]),
                int(params.get("d", 2)),
                graph,
            )
        except (KeyError, TypeError, ValueError) as e:
            raise SchemaError(f"Malformed cone system: {e}") from e


class _Equations:
    """Accumulates rows ``factor·[S] − [reference]`` over a fixed set of
    columns."""

    def __init__(self, cols: int, reference: Sequence[int]):
        self.cols = cols
        self.reference = list(reference)
        self.rows: list[list[int]] = []

    def equate(self, cells: Sequence[int], factor: int = 1) -> None:
        row = [0] * self.cols
        for c in cells:
            row[c] += factor
        for c in self.reference:
            row[c] -= 1
        self.rows.append(row)

    def pair(self, a: int, b: int) -> None:
        row = [0] * self.cols
        row[a] += 1
        row[b] -= 1
        self.rows.append(row)

    def matrix(self) -> IntMatrix:
        return IntMatrix.from_rows(self.rows, cols=self.cols)


def _square_lines(n: int) -> tuple[list[list[int]], list[list[int]]]:
    rows = [[i * n + j for j in range(n)] for i in range(n)]
    columns = [[i * n + j for i in range(n)] for j in range(n)]
    return rows, columns


def _wrapped_diagonals(n: int) -> list[list[int]]:
    down = [[i * n + (i + k) % n for i in range(n)] for k in range(n)]
    up = [[i * n + (k - i) % n for i in range(n)] for k in range(n)]
    return down + up


def _bent_diagonals(n: int) -> list[list[int]]:
    half = n // 2

    def base(j: int) -> int:
        return j if j < half else n - 1 - j

    shapes = []
    for k in range(n):
        shapes.append([((base(j) + k) % n) * n + j for j in range(n)])
        shapes.append([((n - 1 - base(j) + k) % n) * n + j for j in range(n)])
        shapes.append([i * n + (base(i) + k) % n for i in range(n)])
        shapes.append([i * n + (n - 1 - base(i) + k) % n for i in range(n)])
    return shapes


def _square_system(family: Family, n: int) -> ConeSystem:
    rows, columns = _square_lines(n)
    eqs = _Equations(n * n, rows[0])
    for row in rows[1:]:
        eqs.equate(row)
    for column in columns:
        eqs.equate(column)

    if family == Family.MAGIC:
        eqs.equate([i * n + i for i in range(n)])
        eqs.equate([i * n + n - 1 - i for i in range(n)])
    if family in (Family.PANDIAGONAL, Family.PANDIAGONAL_SYMMETRIC):
        for diagonal in _wrapped_diagonals(n):
            eqs.equate(diagonal)
    if family in (Family.SYMMETRIC_MAGIC, Family.PANDIAGONAL_SYMMETRIC):
        for i in range(n):
            for j in range(i + 1, n):
                eqs.pair(i * n + j, j * n + i)
    if family in (Family.FRANKLIN8, Family.FRANKLIN16, Family.PANDIAGONAL_FRANKLIN8):
        half = n // 2
        for row in rows:
            eqs.equate(row[:half], factor=2)
        for column in columns:
            eqs.equate(column[:half], factor=2)
        for shape in _bent_diagonals(n):
            eqs.equate(shape)
        # 2x2 blocks sum to s/2 on 8x8 squares and to s/4 on 16x16 squares.
        block_eqs = _Equations(n * n, rows[0] if n == 8 else rows[0][:half])
        for i in range(n):
            for j in range(n):
                i1, j1 = (i + 1) % n, (j + 1) % n
                block_eqs.equate(
                    [i * n + j, i * n + j1, i1 * n + j, i1 * n + j1], factor=2
                )
        eqs.rows.extend(block_eqs.rows)
        if family == Family.PANDIAGONAL_FRANKLIN8:
            for diagonal in _wrapped_diagonals(n):
                eqs.equate(diagonal)

    grading = tuple(int(c in rows[0]) for c in range(n * n))
    cells = tuple((i, j) for i in range(n) for j in range(n))
    return ConeSystem(family, eqs.matrix(), grading, cells, n)


def _hypercube_lines(n: int, d: int) -> list[list[int]]:
    """All axis-parallel lines, the first running along the last axis
    through the origin."""
    strides = [n ** (d - 1 - a) for a in range(d)]
    lines = []
    for axis in reversed(range(d)):
        others = [a for a in range(d) if a != axis]
        for coords in itertools.product(range(n), repeat=d - 1):
            start = sum(c * strides[a] for c, a in zip(coords, others))
            lines.append([start + t * strides[axis] for t in range(n)])
    return lines


def _cube_system(family: Family, n: int, d: int) -> ConeSystem:
    lines = _hypercube_lines(n, d)
    eqs = _Equations(n**d, lines[0])
    for line in lines[1:]:
        eqs.equate(line)
    if family == Family.MAGIC_CUBE:
        m = n - 1
        for sign in ((1, 1, 1), (1, 1, -1), (1, -1, 1), (-1, 1, 1)):
            cells = []
            for t in range(n):
                i, j, k = (t if s > 0 else m - t for s in sign)
                cells.append(i * n * n + j * n + k)
            eqs.equate(cells)
    grading = tuple(int(c in lines[0]) for c in range(n**d))
    cells = tuple(itertools.product(range(n), repeat=d))
    return ConeSystem(family, eqs.matrix(), grading, cells, n, d)


@functools.lru_cache(maxsize=64)
def _build(family: Family, n: int, d: int) -> ConeSystem:
    log.debug(f"Building {family.value} system with {n=} {d=}")
    if family in SQUARE_FAMILIES:
        return _square_system(family, n)
    return _cube_system(family, n, d)


def build_system(
    family: Family | str,
    n: int | None = None,
    d: int | None = None,
    graph: "Graph | None" = None,
) -> ConeSystem:
    """Build the defining system of a family.

    Parameters
    ----------
    family : `Family` or `str`
        Family tag.
    n : `int`, optional
        Side length. Implied for ``franklin8``, ``franklin16`` and
        ``pandiagonal-franklin8``.
    d : `int`, optional
        Hypercube dimension (``semi-magic-hypercube`` only; the magic cube
        has d = 3).
    graph : `Graph`, optional
        The (di)graph of a labeling cone.

    Raises
    ------
    ValueError
        For an unsupported family/parameter combination.
    """
    try:
        family = Family(family)
    except ValueError:
        raise ValueError(f"Unsupported family {family!r}.") from None

    if family in (Family.GRAPH_LABELING, Family.DIGRAPH_LABELING):
        if graph is None:
            raise ValueError(f"Family {family.value} needs a graph.")
        if graph.directed != (family == Family.DIGRAPH_LABELING):
            raise ValueError(f"Graph directedness does not match {family.value}.")
        from .graphs import labeling_cone

        return labeling_cone(graph)

    implied = {
        Family.FRANKLIN8: 8,
        Family.PANDIAGONAL_FRANKLIN8: 8,
        Family.FRANKLIN16: 16,
    }
    if family in implied:
        if n is not None and n != implied[family]:
            raise ValueError(f"Family {family.value} requires n={implied[family]}, got {n=}.")
        n = implied[family]
    if n is None or n < 1:
        raise ValueError(f"Family {family.value} requires n >= 1, got {n=}.")

    if family == Family.MAGIC_CUBE:
        if d not in (None, 3):
            raise ValueError(f"Magic cubes are three dimensional, got {d=}.")
        d = 3
    elif family == Family.SEMI_MAGIC_HYPERCUBE:
        d = 3 if d is None else d
        if d < 1:
            raise ValueError(f"Hypercube dimension must be positive, got {d=}.")
    else:
        if d not in (None, 2):
            raise ValueError(f"Family {family.value} does not take {d=}.")
        d = 2
    return _build(family, n, d)


def verify_member(sys: ConeSystem, p: Sequence[int]) -> int:
    """Check membership of ``p`` and return its magic sum.

    Raises
    ------
    ValueError
        If the length of ``p`` does not match the system.
    NotAMemberError
        If ``p`` has a negative entry or violates a row; ``row`` holds the
        first violated row index.
    """
    if len(p) != sys.cols:
        raise ValueError(f"Vector of length {len(p)} does not match {sys.cols} columns.")
    for j, x in enumerate(p):
        if x < 0:
            raise NotAMemberError(f"Entry {j} is negative ({x}).")
    for i in range(sys.matrix.rows):
        if dot(sys.matrix.row(i), p) != 0:
            raise NotAMemberError(f"Constraint row {i} is violated.", row=i)
    return sys.degree(p)


def natural_square_odd(n: int) -> list[list[int]]:
    """Bachet's terrace construction of a natural magic square of odd
    order, in closed form."""
    if n < 1 or n % 2 == 0:
        raise ValueError(f"natural_square_odd requires odd n >= 1, got {n=}.")
    h = (n + 1) // 2
    g = (n - 1) // 2
    return [
        [n * ((h * (i + j)) % n) + (g * (1 + i - j)) % n + 1 for j in range(n)]
        for i in range(n)
    ]


def natural_square_even(n: int) -> list[list[int]]:
    """Natural magic square of doubly even order.

    1..n² are written row by row and every entry off the diagonals of the
    4×4 block pattern is replaced by its complement ``n² + 1 − e``.
    """
    if n < 4 or n % 4 != 0:
        raise ValueError(f"natural_square_even requires n divisible by 4, got {n=}.")
    square = []
    for i in range(n):
        row = []
        for j in range(n):
            e = i * n + j + 1
            on_diagonal = i % 4 == j % 4 or (i % 4) + (j % 4) == 3
            row.append(e if on_diagonal else n * n + 1 - e)
        square.append(row)
    return square


def flatten(grid: Sequence[Sequence[Any]]) -> tuple[int, ...]:
    """Flatten a square (or a cube given as nested lists) row-major."""
    out: list[int] = []

    def walk(x: Any) -> None:
        if isinstance(x, (list, tuple)):
            for y in x:
                walk(y)
        else:
            out.append(int(x))

    walk(grid)
    return tuple(out)


def as_grid(vector: Sequence[int], n: int) -> list[list[int]]:
    if len(vector) % n:
        raise ValueError(f"Vector of length {len(vector)} is not a grid of width {n}.")
    return [list(vector[i : i + n]) for i in range(0, len(vector), n)]


def render_grid(vector: Sequence[int], n: int) -> str:
    """Right-aligned text rendering of a row-major grid."""
    width = max((len(str(x)) for x in vector), default=1)
    return "\n".join(
        " ".join(str(x).rjust(width) for x in row) for row in as_grid(vector, n)
    )


def franklin_block_lift(m8: LatticePoint | Sequence[int]) -> LatticePoint:
    """Tile an 8×8 Franklin square into a 16×16 Franklin square.

    The four quadrants are copies of ``m8``; the magic sum doubles.

    Raises
    ------
    NotAMemberError
        If the input has odd magic sum or is not an 8×8 Franklin square.
    """
    vector = m8.vector if isinstance(m8, LatticePoint) else tuple(m8)
    sys8 = build_system(Family.FRANKLIN8)
    if len(vector) != 64:
        raise ValueError(f"Expected 64 entries, got {len(vector)}.")
    s = sys8.degree(vector)
    if s % 2:
        raise NotAMemberError(f"No 8x8 Franklin square has odd magic sum {s}.")
    verify_member(sys8, vector)
    lifted = tuple(vector[(i % 8) * 8 + j % 8] for i in range(16) for j in range(16))
    return LatticePoint(lifted, 2 * s)


def latin_square_bijection(c: Sequence[int], n: int) -> list[list[int]]:
    """Latin square of an integral stochastic semi-magic cube.

    Slice ``i`` of the cube is a permutation matrix ``j ↦ k``; row ``i`` of
    the latin square lists ``k + 1`` for each ``j``.

    Raises
    ------
    NotAMemberError
        If ``c`` is not a 0/1 semi-magic cube of magic sum 1.
    """
    if any(x not in (0, 1) for x in c):
        raise NotAMemberError("Cube entries must be 0 or 1.")
    sys = build_system(Family.SEMI_MAGIC_HYPERCUBE, n=n, d=3)
    if verify_member(sys, c) != 1:
        raise NotAMemberError("Cube must have magic sum 1.")
    square = []
    for i in range(n):
        row = []
        for j in range(n):
            ks = [k for k in range(n) if c[i * n * n + j * n + k]]
            if len(ks) != 1:
                raise NotAMemberError(f"Slice {i} is not a permutation matrix.")
            row.append(ks[0] + 1)
        square.append(row)
    return square


def latin_square_to_cube(square: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Inverse of `latin_square_bijection`."""
    n = len(square)
    if any(sorted(row) != list(range(1, n + 1)) for row in square) or any(
        sorted(square[i][j] for i in range(n)) != list(range(1, n + 1))
        for j in range(n)
    ):
        raise ValueError(f"Not a latin square: {square}.")
    cube = [0] * n**3
    for i in range(n):
        for j in range(n):
            cube[i * n * n + j * n + square[i][j] - 1] = 1
    return tuple(cube)
