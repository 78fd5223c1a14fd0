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

"""Symmetry operations, permutation groups on coordinates and orbits."""

__all__ = [
    "SquareOp",
    "GroupSpec",
    "act",
    "group",
    "group_order",
    "orbit",
    "orbit_classes",
    "canonical_form",
    "isomorphic",
    "cube_rotation_group",
    "automorphism_group",
    "orbit_polynomial",
    "orbit_count_in_host",
    "partial_franklin16_basis",
]

import itertools
import logging
from collections import deque
from dataclasses import dataclass
from typing import Any, Iterable, Sequence

import sympy
from sympy.combinatorics import Permutation, PermutationGroup

from .config import Config
from .cones import LatticePoint, franklin_block_lift
from .errors import BudgetExceededError, SchemaError
from .graphs import Graph, Labeling, gamma, lift_labeling, pi

log = logging.getLogger(__name__)

Perm = tuple[int, ...]


def _compose(outer: Sequence[int], inner: Sequence[int]) -> Perm:
    """``outer ∘ inner`` as maps on indices."""
    return tuple(outer[i] for i in inner)


def _invert(p: Sequence[int]) -> Perm:
    inverse = [0] * len(p)
    for i, x in enumerate(p):
        inverse[x] = i
    return tuple(inverse)


@dataclass(frozen=True)
class SquareOp:
    """Row permutation, column permutation and optional transpose of an
    ``n×n`` square.

    Applied to ``A`` it gives ``B[i][j] = A'[rows[i]][cols[j]]`` where
    ``A'`` is ``A`` transposed when ``transpose`` is set.
    """

    rows: Perm
    cols: Perm
    transpose: bool = False

    def __post_init__(self) -> None:
        n = len(self.rows)
        if sorted(self.rows) != list(range(n)) or sorted(self.cols) != list(range(n)):
            raise ValueError(f"Invalid permutations {self.rows}, {self.cols}.")

    @property
    def n(self) -> int:
        return len(self.rows)

    @classmethod
    def identity(cls, n: int) -> "SquareOp":
        return cls(tuple(range(n)), tuple(range(n)))

    @classmethod
    def transposition(cls, n: int) -> "SquareOp":
        return cls(tuple(range(n)), tuple(range(n)), True)

    @classmethod
    def row_reversal(cls, n: int) -> "SquareOp":
        return cls(tuple(reversed(range(n))), tuple(range(n)))

    @classmethod
    def column_reversal(cls, n: int) -> "SquareOp":
        return cls(tuple(range(n)), tuple(reversed(range(n))))

    @classmethod
    def rotation(cls, n: int) -> "SquareOp":
        """Quarter turn: transpose after reversing rows."""
        return cls.transposition(n).compose(cls.row_reversal(n))

    @staticmethod
    def _swap(n: int, pairs: Iterable[tuple[int, int]]) -> Perm:
        p = list(range(n))
        for i, j in pairs:
            p[i], p[j] = p[j], p[i]
        return tuple(p)

    @classmethod
    def swap_rows(cls, n: int, i: int, j: int) -> "SquareOp":
        return cls(cls._swap(n, [(i, j)]), tuple(range(n)))

    @classmethod
    def swap_columns(cls, n: int, i: int, j: int) -> "SquareOp":
        return cls(tuple(range(n)), cls._swap(n, [(i, j)]))

    @classmethod
    def half_swap_rows(cls, n: int) -> "SquareOp":
        """Exchange the first and last ``n/2`` rows."""
        half = n // 2
        return cls(tuple((i + half) % n for i in range(n)), tuple(range(n)))

    @classmethod
    def half_swap_columns(cls, n: int) -> "SquareOp":
        half = n // 2
        return cls(tuple(range(n)), tuple((j + half) % n for j in range(n)))

    @classmethod
    def adjacent_swap_rows(cls, n: int) -> "SquareOp":
        """Exchange rows ``2k`` and ``2k+1`` simultaneously."""
        return cls(cls._swap(n, [(i, i + 1) for i in range(0, n - 1, 2)]), tuple(range(n)))

    @classmethod
    def adjacent_swap_columns(cls, n: int) -> "SquareOp":
        return cls(tuple(range(n)), cls._swap(n, [(i, i + 1) for i in range(0, n - 1, 2)]))

    def compose(self, other: "SquareOp") -> "SquareOp":
        """``self ∘ other``: ``other`` is applied first."""
        if self.transpose:
            return SquareOp(
                _compose(other.cols, self.rows),
                _compose(other.rows, self.cols),
                not other.transpose,
            )
        return SquareOp(
            _compose(other.rows, self.rows),
            _compose(other.cols, self.cols),
            other.transpose,
        )

    def inverse(self) -> "SquareOp":
        if self.transpose:
            return SquareOp(_invert(self.cols), _invert(self.rows), True)
        return SquareOp(_invert(self.rows), _invert(self.cols))

    def to_permutation(self) -> Perm:
        """Cell permutation ``p`` with ``B[k] = A[p[k]]`` in row-major
        order."""
        n = self.n
        if self.transpose:
            return tuple(self.cols[j] * n + self.rows[i] for i in range(n) for j in range(n))
        return tuple(self.rows[i] * n + self.cols[j] for i in range(n) for j in range(n))

    def apply(self, square: Sequence[int]) -> tuple[int, ...]:
        """Apply to a row-major square.

        Raises
        ------
        ValueError
            If the square does not have ``n²`` entries.
        """
        if len(square) != self.n * self.n:
            raise ValueError(f"Expected {self.n * self.n} entries, got {len(square)}.")
        return act(self.to_permutation(), square)


def act(p: Sequence[int], x: Sequence[Any]) -> tuple:
    """Permute coordinates: ``y[k] = x[p[k]]``."""
    return tuple(x[i] for i in p)


@dataclass(frozen=True)
class GroupSpec:
    """A permutation group on the coordinates of a cone.

    Parameters
    ----------
    name : `str`
        Preset name or a free label.
    degree : `int`
        Number of coordinates.
    generators : `tuple` [`tuple` [`int`]]
        Coordinate permutations; see `act`.
    """

    name: str
    degree: int
    generators: tuple[Perm, ...]

    def __post_init__(self) -> None:
        for p in self.generators:
            if sorted(p) != list(range(self.degree)):
                raise ValueError(f"Generator is not a permutation of {self.degree} points.")

    @classmethod
    def from_square_ops(cls, name: str, ops: Sequence[SquareOp]) -> "GroupSpec":
        n = ops[0].n
        return cls(name, n * n, tuple(op.to_permutation() for op in ops))

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "degree": self.degree,
            "generators": [list(p) for p in self.generators],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "GroupSpec":
        if "generators" not in data:
            try:
                return group(data["name"])
            except (KeyError, ValueError) as e:
                raise SchemaError(f"Malformed group: {e}") from e
        try:
            return cls(
                str(data.get("name", "custom")),
                int(data["degree"]),
                tuple(tuple(int(x) for x in p) for p in data["generators"]),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise SchemaError(f"Malformed group: {e}") from e


def _alternate_swaps(n: int) -> list[tuple[int, int]]:
    """Swaps ``(i, i+2)`` inside each half of ``0 … n−1``."""
    half = n // 2
    return [
        (start + i, start + i + 2) for start in (0, half) for i in range(half - 2)
    ]


def _franklin_g(n: int) -> list[SquareOp]:
    swaps = _alternate_swaps(n)
    return [SquareOp.swap_columns(n, i, j) for i, j in swaps] + [
        SquareOp.swap_rows(n, i, j) for i, j in swaps
    ]


def _vertex_action(g: Graph, sigmas: Iterable[Sequence[int]]) -> tuple[Perm, ...]:
    """Edge permutations induced by vertex permutations."""
    index = {e: k for k, e in enumerate(g.edges)}
    perms = []
    for sigma in sigmas:
        p = []
        for i, j in g.edges:
            a, b = sigma[i], sigma[j]
            if not g.directed and a > b:
                a, b = b, a
            p.append(index[(a, b)])
        perms.append(tuple(p))
    return tuple(perms)


def _symmetric_generators(n: int) -> list[tuple[int, ...]]:
    if n < 2:
        return [tuple(range(n))]
    return [(1, 0) + tuple(range(2, n)), tuple(range(1, n)) + (0,)]


def cube_rotation_group(n: int = 3) -> GroupSpec:
    """The 24 rotations of an ``n×n×n`` cube acting on its cells."""

    def index(x: int, y: int, z: int) -> int:
        return (x * n + y) * n + z

    cells = list(itertools.product(range(n), repeat=3))
    quarter_z = tuple(index(y, n - 1 - x, z) for x, y, z in cells)
    quarter_x = tuple(index(x, z, n - 1 - y) for x, y, z in cells)
    return GroupSpec(f"cube24:{n}", n**3, (quarter_z, quarter_x))


def group(name: str) -> GroupSpec:
    """Named preset group.

    ``G8``, ``H16`` and ``S16`` are the Franklin row and column swap
    groups; ``dihedral:n`` is generated by the quarter turn and a
    reflection; ``franklin:n`` adds the transpose, the half swaps and the
    adjacent swaps to ``G``; ``cube24`` and ``cube24:n`` are the cube
    rotations; ``symmetric:n`` and ``digraph-symmetric:n`` let ``S_n``
    act on the vertices of ``gamma(n)`` and ``pi(n)``.
    """
    base, _, arg = name.partition(":")
    if base == "G8" and not arg:
        return GroupSpec.from_square_ops(name, _franklin_g(8))
    if base == "H16" and not arg:
        return GroupSpec.from_square_ops(name, _franklin_g(16))
    if base == "S16" and not arg:
        swaps = [(start + i, start + i + 4) for start in (0, 8) for i in range(4)]
        ops = [SquareOp.swap_rows(16, i, j) for i, j in swaps]
        ops += [SquareOp.swap_columns(16, i, j) for i, j in swaps]
        return GroupSpec.from_square_ops(name, ops)
    if base == "cube24":
        return cube_rotation_group(int(arg) if arg else 3)
    try:
        n = int(arg)
    except ValueError:
        raise ValueError(f"Unknown group {name!r}.") from None
    if n < 1:
        raise ValueError(f"Group {name!r} needs a positive size.")
    if base == "dihedral":
        return GroupSpec.from_square_ops(
            name, [SquareOp.rotation(n), SquareOp.row_reversal(n)]
        )
    if base == "franklin":
        if n % 2:
            raise ValueError(f"Franklin squares have even order, got {n}.")
        ops = [
            SquareOp.rotation(n),
            SquareOp.row_reversal(n),
            SquareOp.transposition(n),
            SquareOp.half_swap_rows(n),
            SquareOp.half_swap_columns(n),
            SquareOp.adjacent_swap_rows(n),
            SquareOp.adjacent_swap_columns(n),
        ] + _franklin_g(n)
        return GroupSpec.from_square_ops(name, ops)
    if base == "symmetric":
        return GroupSpec(name, n * (n + 1) // 2, _vertex_action(gamma(n), _symmetric_generators(n)))
    if base == "digraph-symmetric":
        return GroupSpec(name, n * n, _vertex_action(pi(n), _symmetric_generators(n)))
    raise ValueError(f"Unknown group {name!r}.")


def _gf2_rank(vectors: Iterable[int]) -> int:
    pivots: dict[int, int] = {}
    for v in vectors:
        while v:
            top = v.bit_length() - 1
            if top not in pivots:
                pivots[top] = v
                break
            v ^= pivots[top]
    return len(pivots)


def _gf2_annihilator(relations: Sequence[int], m: int) -> list[int]:
    """Basis of ``{v ∈ GF(2)^m : v·r = 0 for all relations r}``."""
    reduced: dict[int, int] = {}
    for r in relations:
        for pivot, row in reduced.items():
            if r >> pivot & 1:
                r ^= row
        if not r:
            continue
        pivot = r.bit_length() - 1
        for other, row in list(reduced.items()):
            if row >> pivot & 1:
                reduced[other] = row ^ r
        reduced[pivot] = r
    basis = []
    for free in range(m):
        if free in reduced:
            continue
        v = 1 << free
        for pivot, row in reduced.items():
            if row >> free & 1:
                v |= 1 << pivot
        basis.append(v)
    return basis


def _is_commuting_involutions(gens: Sequence[Perm]) -> bool:
    for a in gens:
        if _compose(a, a) != tuple(range(len(a))):
            return False
    return all(_compose(a, b) == _compose(b, a) for a, b in itertools.combinations(gens, 2))


def _elementary_abelian_rank(gens: Sequence[Perm], degree: int) -> int:
    """Rank of the group generated by commuting involutions.

    The stabilizer of a point in an abelian group fixes its whole orbit;
    it is spanned by the cycle relations of a breadth-first search of the
    orbit. The group acts faithfully, so its rank is the dimension of the
    sum of the annihilators of these stabilizers.
    """
    m = len(gens)
    seen = [False] * degree
    annihilators: list[int] = []
    for base in range(degree):
        if seen[base]:
            continue
        coordinates = {base: 0}
        seen[base] = True
        queue = deque([base])
        relations = []
        while queue:
            x = queue.popleft()
            for i, g in enumerate(gens):
                y = g[x]
                step = coordinates[x] ^ (1 << i)
                if y in coordinates:
                    if coordinates[y] != step:
                        relations.append(coordinates[y] ^ step)
                else:
                    coordinates[y] = step
                    seen[y] = True
                    queue.append(y)
        annihilators.extend(_gf2_annihilator(relations, m))
    return _gf2_rank(annihilators)


def group_order(g: GroupSpec) -> int:
    """Order of the group.

    Groups generated by commuting involutions are elementary abelian and
    their order is computed over GF(2); other groups use Schreier–Sims.
    """
    gens = [p for p in g.generators if p != tuple(range(g.degree))]
    if not gens:
        return 1
    if _is_commuting_involutions(gens):
        return 2 ** _elementary_abelian_rank(gens, g.degree)
    return int(PermutationGroup([Permutation(list(p)) for p in gens]).order())


def orbit(x: Sequence[Any], g: GroupSpec, cap: int | None = None) -> set[tuple]:
    """Closure of ``{x}`` under the generators.

    Raises
    ------
    BudgetExceededError
        If the orbit has more than ``cap`` elements.
    """
    cap = Config.orbit_cap if cap is None else cap
    if cap < 1:
        raise ValueError(f"Orbit cap must be positive, got {cap}.")
    start = tuple(x)
    if len(start) != g.degree:
        raise ValueError(f"Expected {g.degree} coordinates, got {len(start)}.")
    seen = {start}
    queue = deque([start])
    while queue:
        y = queue.popleft()
        for p in g.generators:
            z = act(p, y)
            if z not in seen:
                seen.add(z)
                if len(seen) > cap:
                    raise BudgetExceededError("orbit", cap)
                queue.append(z)
    log.debug(f"Orbit of size {len(seen)} under {g.name}")
    return seen


def canonical_form(x: Sequence[Any], g: GroupSpec, cap: int | None = None) -> tuple:
    """Lexicographically smallest image of ``x``."""
    return min(orbit(x, g, cap))


def isomorphic(x: Sequence[Any], y: Sequence[Any], g: GroupSpec, cap: int | None = None) -> bool:
    """True iff ``y`` is an image of ``x`` under the group.

    Raises
    ------
    BudgetExceededError
        If the orbit of ``x`` exceeds ``cap``; the answer is then unknown.
    """
    if len(x) != len(y):
        raise ValueError(f"Shapes differ: {len(x)} and {len(y)} entries.")
    return tuple(y) in orbit(x, g, cap)


def orbit_classes(
    points: Iterable[Sequence[Any]], g: GroupSpec, cap: int | None = None
) -> list[list[tuple]]:
    """Partition of ``points`` into classes of equivalent points."""
    remaining = sorted({tuple(p) for p in points})
    classes = []
    assigned: set[tuple] = set()
    for p in remaining:
        if p in assigned:
            continue
        members = orbit(p, g, cap)
        cls = [q for q in remaining if q in members]
        assigned.update(cls)
        classes.append(cls)
    return classes


def automorphism_group(graph: Graph) -> GroupSpec:
    """Automorphisms of a small graph acting on its edges."""
    edges = set(graph.edges)

    def normalized(a: int, b: int) -> tuple[int, int]:
        return (a, b) if graph.directed or a <= b else (b, a)

    automorphisms = [
        sigma
        for sigma in itertools.permutations(range(graph.n))
        if all(normalized(sigma[i], sigma[j]) in edges for i, j in graph.edges)
    ]
    perms = sorted(set(_vertex_action(graph, automorphisms)))
    return GroupSpec("automorphisms", graph.q, tuple(perms))


def _as_gamma_vector(l: Labeling | Graph | Sequence[int], n: int | None) -> tuple[int, ...]:
    if isinstance(l, Graph):
        l = Labeling(l, (1,) * l.q)
    if isinstance(l, Labeling):
        if l.graph.directed:
            raise ValueError("Expected a labeling of an undirected graph.")
        return lift_labeling(l).labels
    vector = tuple(l)
    if n is None or len(vector) != n * (n + 1) // 2:
        raise ValueError(f"A vector of {len(vector)} entries is not a labeling of gamma({n}).")
    return vector


def orbit_polynomial(l: Labeling | Sequence[int], n: int | None = None) -> sympy.Expr:
    """Sum of the distinct monomials ``X^{σ·L}`` over vertex permutations
    ``σ``; ``x_ij`` is the variable of edge ``e_ij`` (1-based)."""
    vector = _as_gamma_vector(l, n)
    size = l.graph.n if isinstance(l, Labeling) else n
    edges = gamma(size).edges
    variables = [sympy.Symbol(f"x_{i + 1}{j + 1}") for i, j in edges]
    return sympy.Add(
        *(
            sympy.Mul(*(v**e for v, e in zip(variables, image)))
            for image in orbit(vector, group(f"symmetric:{size}"))
        )
    )


def orbit_count_in_host(
    l: Labeling | Sequence[int], host: Labeling | Graph | Sequence[int], n: int | None = None
) -> int:
    """Number of distinct vertex-permutation images of the 0/1 labeling
    ``l`` supported inside the support of ``host``.

    Raises
    ------
    ValueError
        If ``l`` or ``host`` is not a 0/1 labeling.
    """
    vector = _as_gamma_vector(l, n)
    host_vector = _as_gamma_vector(host, n)
    if len(vector) != len(host_vector):
        raise ValueError("Labeling and host live on different graphs.")
    if any(x not in (0, 1) for x in vector + host_vector):
        raise ValueError("Orbit counting needs 0/1 labelings.")
    size = next(k for k in range(len(vector) + 1) if k * (k + 1) // 2 == len(vector))
    return sum(
        all(h or not x for x, h in zip(image, host_vector))
        for image in orbit(vector, group(f"symmetric:{size}"))
    )


def partial_franklin16_basis(
    hb8: Iterable[LatticePoint], group_spec: GroupSpec | None = None, cap: int | None = None
) -> list[LatticePoint]:
    """Block lifts of 8×8 basis elements closed under a 16×16 group.

    Every element is a 16×16 Franklin square; the set is part of the
    minimal basis of the 16×16 cone only where irreducibility holds.
    """
    group_spec = group("S16") if group_spec is None else group_spec
    squares: set[tuple[int, ...]] = set()
    degrees: dict[tuple[int, ...], int] = {}
    for h in hb8:
        lifted = franklin_block_lift(h)
        for image in orbit(lifted.vector, group_spec, cap):
            squares.add(image)
            degrees[image] = lifted.degree
    return [LatticePoint(v, degrees[v]) for v in sorted(squares)]
