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

"""Exact integer and rational linear algebra.

Everything here works on Python integers and `fractions.Fraction`; no
floating point is used anywhere in the package.
"""

__all__ = [
    "IntMatrix",
    "RationalVector",
    "rational_rank",
    "determinant",
    "integer_inverse",
    "column_hermite_form",
    "integer_kernel_basis",
    "independent_rows",
    "primitive_ray",
    "lcm_of_denominators",
    "dot",
    "solve_in_basis",
]

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

RationalVector = tuple[Fraction, ...]
"""Exact rational vector. `Fraction` keeps entries in lowest terms with
positive denominators."""


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix stored in row-major order.

    Parameters
    ----------
    rows : `int`
        Number of rows.
    cols : `int`
        Number of columns.
    entries : `tuple` [`int`]
        ``rows * cols`` integers, row-major.
    """

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError(f"Invalid matrix shape {self.rows}x{self.cols}.")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"Expected {self.rows * self.cols} entries, got {len(self.entries)}."
            )
        for value in self.entries:
            if isinstance(value, bool) or not isinstance(value, int):
                raise ValueError(f"Matrix entries must be integers, got {value!r}.")

    @classmethod
    def from_rows(
        cls, rows: Sequence[Sequence[int]], cols: int | None = None
    ) -> "IntMatrix":
        """Build a matrix from a list of rows.

        ``cols`` is only needed for a matrix with no rows.
        """
        if cols is None:
            if not rows:
                raise ValueError("Number of columns required for an empty matrix.")
            cols = len(rows[0])
        entries: list[int] = []
        for row in rows:
            if len(row) != cols:
                raise ValueError(f"Row {list(row)} does not have {cols} entries.")
            entries.extend(row)
        return cls(len(rows), cols, tuple(entries))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.from_rows(
            [[int(i == j) for j in range(n)] for i in range(n)], cols=n
        )

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def column(self, j: int) -> tuple[int, ...]:
        return self.entries[j :: self.cols] if self.cols else ()

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_rows(
            [list(self.column(j)) for j in range(self.cols)], cols=self.rows
        )

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if other.rows != self.rows:
            raise ValueError(f"Cannot join {self.rows} and {other.rows} rows.")
        return IntMatrix.from_rows(
            [self.row(i) + other.row(i) for i in range(self.rows)],
            cols=self.cols + other.cols,
        )

    def vstack(self, other: "IntMatrix") -> "IntMatrix":
        if other.cols != self.cols:
            raise ValueError(f"Cannot stack {self.cols} and {other.cols} columns.")
        return IntMatrix(
            self.rows + other.rows, self.cols, self.entries + other.entries
        )

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        """Matrix-vector product ``self · v``."""
        if len(v) != self.cols:
            raise ValueError(
                f"Vector of length {len(v)} does not match {self.cols} columns."
            )
        return tuple(dot(self.row(i), v) for i in range(self.rows))


def dot(u: Iterable, v: Iterable) -> int:
    return sum(a * b for a, b in zip(u, v))


def rational_rank(m: IntMatrix) -> int:
    """Rank over the rationals by fraction-free (Bareiss) elimination."""
    rows = m.to_rows()
    rank = 0
    previous = 1
    for col in range(m.cols):
        pivot = next(
            (i for i in range(rank, len(rows)) if rows[i][col] != 0), None
        )
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        p = rows[rank][col]
        top = rows[rank]
        for i in range(rank + 1, len(rows)):
            a = rows[i][col]
            row = rows[i]
            rows[i] = [(p * row[j] - a * top[j]) // previous for j in range(m.cols)]
        previous = p
        rank += 1
        if rank == len(rows):
            break
    return rank


def determinant(m: IntMatrix) -> int:
    """Determinant of a square matrix by Bareiss elimination."""
    if m.rows != m.cols:
        raise ValueError(f"Determinant of a non-square {m.rows}x{m.cols} matrix.")
    n = m.rows
    if n == 0:
        return 1
    rows = m.to_rows()
    sign = 1
    previous = 1
    for k in range(n - 1):
        pivot = next((i for i in range(k, n) if rows[i][k] != 0), None)
        if pivot is None:
            return 0
        if pivot != k:
            rows[k], rows[pivot] = rows[pivot], rows[k]
            sign = -sign
        p = rows[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                rows[i][j] = (p * rows[i][j] - rows[i][k] * rows[k][j]) // previous
            rows[i][k] = 0
        previous = p
    return sign * rows[n - 1][n - 1]


def integer_inverse(m: IntMatrix) -> tuple[IntMatrix, int]:
    """Adjugate and determinant of a nonsingular square matrix.

    Returns
    -------
    adjugate : `IntMatrix`
        Integer matrix with ``m · adjugate = det · I``.
    det : `int`
        The determinant of ``m``.

    Raises
    ------
    ValueError
        If ``m`` is singular or not square.
    """
    if m.rows != m.cols:
        raise ValueError(f"Inverse of a non-square {m.rows}x{m.cols} matrix.")
    n = m.rows
    work = [
        [Fraction(x) for x in m.row(i)] + [Fraction(int(i == j)) for j in range(n)]
        for i in range(n)
    ]
    for col in range(n):
        pivot = next((i for i in range(col, n) if work[i][col] != 0), None)
        if pivot is None:
            raise ValueError("Matrix is singular.")
        work[col], work[pivot] = work[pivot], work[col]
        p = work[col][col]
        work[col] = [x / p for x in work[col]]
        for i in range(n):
            if i != col and work[i][col] != 0:
                a = work[i][col]
                work[i] = [x - a * y for x, y in zip(work[i], work[col])]
    det = determinant(m)
    adjugate = [[int(x * det) for x in work[i][n:]] for i in range(n)]
    return IntMatrix.from_rows(adjugate, cols=n), det


def _column_ops(
    columns: list[list[int]], unimodular: list[list[int]], start_row: int = 0
) -> int:
    """Reduce ``columns`` in place to lower column echelon form.

    The same column operations are applied to ``unimodular``. Pivots are
    made positive and entries left of a pivot reduced modulo it. Returns
    the rank.
    """
    ncols = len(columns)
    nrows = len(columns[0]) if columns else 0
    c = 0

    def swap(i: int, j: int) -> None:
        columns[i], columns[j] = columns[j], columns[i]
        unimodular[i], unimodular[j] = unimodular[j], unimodular[i]

    def axpy(target: int, q: int, source: int) -> None:
        # column[target] -= q * column[source]
        columns[target] = [
            x - q * y for x, y in zip(columns[target], columns[source])
        ]
        unimodular[target] = [
            x - q * y for x, y in zip(unimodular[target], unimodular[source])
        ]

    for r in range(start_row, nrows):
        if c == ncols:
            break
        while True:
            nonzero = [j for j in range(c, ncols) if columns[j][r] != 0]
            if not nonzero:
                break
            best = min(nonzero, key=lambda j: abs(columns[j][r]))
            if best != c:
                swap(best, c)
            if len(nonzero) == 1:
                break
            p = columns[c][r]
            for j in range(c + 1, ncols):
                if columns[j][r] != 0:
                    axpy(j, columns[j][r] // p, c)
        if columns[c][r] == 0:
            continue
        if columns[c][r] < 0:
            columns[c] = [-x for x in columns[c]]
            unimodular[c] = [-x for x in unimodular[c]]
        p = columns[c][r]
        for j in range(c):
            q = columns[j][r] // p
            if q:
                axpy(j, q, c)
        c += 1
    return c


def column_hermite_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, int]:
    """Lower-triangular column Hermite form.

    Returns
    -------
    hermite : `IntMatrix`
        ``H = m · U`` in column echelon form; the first ``rank`` columns
        carry positive pivots, the remaining columns are zero.
    unimodular : `IntMatrix`
        The unimodular ``U``.
    rank : `int`
        Rank of ``m``.
    """
    columns = [list(m.column(j)) for j in range(m.cols)]
    unimodular = [[int(i == j) for i in range(m.cols)] for j in range(m.cols)]
    rank = _column_ops(columns, unimodular)
    hermite = IntMatrix.from_rows(
        [[columns[j][i] for j in range(m.cols)] for i in range(m.rows)], cols=m.cols
    )
    u = IntMatrix.from_rows(
        [[unimodular[j][i] for j in range(m.cols)] for i in range(m.cols)],
        cols=m.cols,
    )
    return hermite, u, rank


def _l1(v: Sequence[int]) -> int:
    return sum(abs(x) for x in v)


def _size_reduce(basis: list[list[int]]) -> list[list[int]]:
    """Greedy pairwise reduction of a lattice basis in the L1 norm.

    Only unimodular moves ``b_i ± b_j`` are used, so the lattice is
    unchanged.
    """
    changed = True
    while changed:
        changed = False
        for i in range(len(basis)):
            for j in range(len(basis)):
                if i == j:
                    continue
                for sign in (1, -1):
                    candidate = [x - sign * y for x, y in zip(basis[i], basis[j])]
                    if _l1(candidate) < _l1(basis[i]):
                        basis[i] = candidate
                        changed = True
    return basis


def _normalize_sign(v: list[int]) -> tuple[int, ...]:
    first = next((x for x in v if x != 0), 0)
    return tuple(-x for x in v) if first < 0 else tuple(v)


def integer_kernel_basis(m: IntMatrix) -> list[tuple[int, ...]]:
    """Basis of the lattice ``{x ∈ ℤ^cols : m · x = 0}``.

    Each vector is primitive with its first nonzero entry positive.
    """
    columns = [list(m.column(j)) for j in range(m.cols)]
    unimodular = [[int(i == j) for i in range(m.cols)] for j in range(m.cols)]
    rank = _column_ops(columns, unimodular)
    basis = _size_reduce([list(unimodular[j]) for j in range(rank, m.cols)])
    return [_normalize_sign(v) for v in basis]


def independent_rows(rows: Sequence[Sequence[int]]) -> list[int]:
    """Indices of a maximal linearly independent subset of ``rows``,
    chosen greedily in order."""
    echelon: list[tuple[int, list[Fraction]]] = []
    chosen = []
    for index, row in enumerate(rows):
        v = [Fraction(x) for x in row]
        for pivot, basis_row in echelon:
            if v[pivot] != 0:
                a = v[pivot] / basis_row[pivot]
                v = [x - a * y for x, y in zip(v, basis_row)]
        pivot = next((j for j, x in enumerate(v) if x != 0), None)
        if pivot is not None:
            echelon.append((pivot, v))
            chosen.append(index)
    return chosen


def primitive_ray(v: Sequence[Fraction | int]) -> tuple[int, ...]:
    """Smallest positive multiple of ``v`` with coprime integer entries.

    Raises
    ------
    ValueError
        If ``v`` is the zero vector.
    """
    values = [Fraction(x) for x in v]
    if all(x == 0 for x in values):
        raise ValueError("Cannot normalize the zero vector.")
    scale = math.lcm(*(x.denominator for x in values))
    integers = [int(x * scale) for x in values]
    g = math.gcd(*integers)
    return tuple(x // g for x in integers)


def lcm_of_denominators(vs: Sequence[Sequence[Fraction | int]]) -> int:
    """Least common multiple of all entry denominators.

    Raises
    ------
    ValueError
        If ``vs`` is empty.
    """
    if not vs:
        raise ValueError("lcm_of_denominators needs at least one vector.")
    return math.lcm(1, *(Fraction(x).denominator for v in vs for x in v))


def solve_in_basis(
    basis: Sequence[Sequence[int]], v: Sequence[int]
) -> tuple[int, ...]:
    """Integer coordinates of ``v`` in a lattice basis.

    Raises
    ------
    ValueError
        If ``v`` is not an integer combination of ``basis``.
    """
    if not basis:
        if any(v):
            raise ValueError(f"{tuple(v)} is not in the zero lattice.")
        return ()
    rows = [[b[j] for b in basis] for j in range(len(v))]
    pivots = independent_rows(rows)
    if len(pivots) != len(basis):
        raise ValueError("Basis vectors are linearly dependent.")
    adjugate, det = integer_inverse(IntMatrix.from_rows([rows[j] for j in pivots]))
    numerators = adjugate.apply([v[j] for j in pivots])
    if any(x % det for x in numerators):
        raise ValueError(f"{tuple(v)} is not in the lattice.")
    z = tuple(x // det for x in numerators)
    if any(dot(row, z) != x for row, x in zip(rows, v)):
        raise ValueError(f"{tuple(v)} is not in the span of the basis.")
    return z
