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

"""Extreme rays, triangulations and Hilbert bases of pointed cones.

Computations run in coordinates ``z`` of a lattice basis ``K`` of the
integer points of the cone's linear span, so that ``y = K·z`` and the
inequalities are the rows of ``K``.
"""

__all__ = [
    "HilbertBasis",
    "Decomposition",
    "extreme_rays",
    "triangulate",
    "hilbert_basis",
    "truncated_hilbert_basis",
    "is_irreducible",
    "decompose",
    "stanley_series",
]

import functools
import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Iterator, Sequence

import sympy

from .budget import Budget
from .config import Config
from .cones import ConeSystem, LatticePoint, verify_member
from .errors import NotAMemberError, NotPointedError, SchemaError
from .genfn import T, RationalGenFn
from .linalg import (
    IntMatrix,
    column_hermite_form,
    dot,
    independent_rows,
    integer_inverse,
    integer_kernel_basis,
    primitive_ray,
    rational_rank,
)
from .search import LatticePointSearch

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class HilbertBasis:
    """A minimal or degree-truncated Hilbert basis.

    Elements are sorted lexicographically by vector.
    """

    system: ConeSystem
    elements: tuple[LatticePoint, ...]
    kind: str = "minimal"
    dmax: int | None = None

    @classmethod
    def from_vectors(
        cls,
        system: ConeSystem,
        vectors: Sequence[Sequence[int]],
        kind: str = "minimal",
        dmax: int | None = None,
    ) -> "HilbertBasis":
        unique = sorted({tuple(v) for v in vectors})
        elements = tuple(LatticePoint(v, system.degree(v)) for v in unique)
        return cls(system, elements, kind, dmax)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[LatticePoint]:
        return iter(self.elements)

    @property
    def vectors(self) -> list[tuple[int, ...]]:
        return [h.vector for h in self.elements]

    @property
    def degrees(self) -> list[int]:
        return [h.degree for h in self.elements]

    def by_degree(self) -> dict[int, list[LatticePoint]]:
        groups: dict[int, list[LatticePoint]] = {}
        for h in self.elements:
            groups.setdefault(h.degree, []).append(h)
        return dict(sorted(groups.items()))

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "system": self.system.to_dict(),
            "kind": self.kind,
            "elements": [h.to_dict() for h in self.elements],
        }
        if self.dmax is not None:
            data["dmax"] = self.dmax
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "HilbertBasis":
        try:
            system = ConeSystem.from_dict(data["system"])
            elements = tuple(LatticePoint.from_dict(h) for h in data["elements"])
            kind = data["kind"]
        except (KeyError, TypeError) as e:
            raise SchemaError(f"Malformed Hilbert basis: {e}") from e
        if kind not in ("minimal", "truncated"):
            raise SchemaError(f"Unknown Hilbert basis kind {kind!r}.")
        return cls(system, elements, kind, data.get("dmax"))


@dataclass(frozen=True)
class Decomposition:
    """Coefficients ``{element index: multiplicity}`` of a decomposition
    into Hilbert basis elements."""

    coefficients: dict[int, int] = field(default_factory=dict)

    def recombine(self, hb: HilbertBasis) -> tuple[int, ...]:
        total = [0] * hb.system.cols
        for index, c in self.coefficients.items():
            for j, x in enumerate(hb.elements[index].vector):
                total[j] += c * x
        return tuple(total)

    def degree(self, hb: HilbertBasis) -> int:
        return sum(c * hb.elements[i].degree for i, c in self.coefficients.items())

    def to_dict(self) -> dict[str, Any]:
        return {"coefficients": {str(i): c for i, c in sorted(self.coefficients.items())}}


class LatticeFrame:
    """Integer coordinates on ``ker A`` intersected with coordinate
    hyperplanes.

    Parameters
    ----------
    matrix : `IntMatrix`
        The constraint matrix ``A``.
    zero_coordinates : sequence of `int`
        Coordinates forced to vanish.
    """

    def __init__(self, matrix: IntMatrix, zero_coordinates: Sequence[int] = ()):
        n = matrix.cols
        if zero_coordinates:
            units = IntMatrix.from_rows(
                [[int(j == c) for j in range(n)] for c in zero_coordinates], cols=n
            )
            matrix = matrix.vstack(units)
        self.n = n
        self.basis = integer_kernel_basis(matrix)
        self.k = len(self.basis)
        self.rows = [tuple(b[j] for b in self.basis) for j in range(n)]
        self.pivots = independent_rows(self.rows) if self.k else []
        if self.k:
            self.adjugate, self.det = integer_inverse(
                IntMatrix.from_rows([self.rows[j] for j in self.pivots])
            )

    def to_z(self, y: Sequence[int]) -> tuple[int, ...]:
        numerators = self.adjugate.apply([y[j] for j in self.pivots])
        if any(x % self.det for x in numerators):
            raise ValueError(f"{tuple(y)} is not in the lattice.")
        return tuple(x // self.det for x in numerators)

    def to_y(self, z: Sequence[int]) -> tuple[int, ...]:
        return tuple(dot(row, z) for row in self.rows)


def _double_description(
    rows: list[tuple[int, ...]], k: int, budget: Budget
) -> list[tuple[int, ...]]:
    """Extreme rays of the pointed cone ``{z ∈ ℚ^k : row·z ≥ 0}``."""
    pivots = independent_rows(rows)
    adjugate, det = integer_inverse(IntMatrix.from_rows([rows[j] for j in pivots]))
    sign = 1 if det > 0 else -1
    pivot_mask = sum(1 << j for j in pivots)
    rays = []
    zeros = []
    for i, j in enumerate(pivots):
        rays.append(primitive_ray([sign * adjugate.row(r)[i] for r in range(k)]))
        zeros.append(pivot_mask & ~(1 << j))

    processed = set(pivots)
    for j, row in enumerate(rows):
        if j in processed:
            continue
        processed.add(j)
        bit = 1 << j
        values = [dot(row, r) for r in rays]
        if all(v >= 0 for v in values):
            zeros = [z | bit if v == 0 else z for z, v in zip(zeros, values)]
            continue
        positive = [i for i, v in enumerate(values) if v > 0]
        negative = [i for i, v in enumerate(values) if v < 0]
        new_rays = [r for r, v in zip(rays, values) if v >= 0]
        new_zeros = [z | bit if v == 0 else z for z, v in zip(zeros, values) if v >= 0]
        for p in positive:
            for m in negative:
                common = zeros[p] & zeros[m]
                if common.bit_count() < k - 2:
                    continue
                if any(
                    t != p and t != m and zeros[t] & common == common
                    for t in range(len(rays))
                ):
                    continue
                budget.check_time()
                vp, vm = values[p], values[m]
                combined = [vp * a - vm * b for a, b in zip(rays[m], rays[p])]
                new_rays.append(primitive_ray(combined))
                new_zeros.append(common | bit)
        rays, zeros = new_rays, new_zeros
    log.debug(f"Double description finished with {len(rays)} rays")
    return rays


@functools.lru_cache(maxsize=32)
def extreme_rays(sys: ConeSystem) -> list[tuple[int, ...]]:
    """Primitive integer generators of the extreme rays, sorted
    lexicographically.

    Raises
    ------
    NotPointedError
        If the grading is not positive on some ray.
    """
    frame = LatticeFrame(sys.matrix)
    if frame.k == 0:
        return []
    budget = Budget()
    z_rays = _double_description(frame.rows, frame.k, budget)
    rays = sorted({frame.to_y(z) for z in z_rays})
    for ray in rays:
        if sys.degree(ray) <= 0:
            raise NotPointedError(
                f"Grading is not positive on the ray {ray} of {sys.family.value}."
            )
    return rays


@functools.lru_cache(maxsize=32)
def _span_frame(sys: ConeSystem) -> LatticeFrame:
    rays = extreme_rays(sys)
    zero = [j for j in range(sys.cols) if all(r[j] == 0 for r in rays)]
    return LatticeFrame(sys.matrix, zero)


@functools.lru_cache(maxsize=32)
def triangulate(sys: ConeSystem) -> list[tuple[int, ...]]:
    """Pulling triangulation of the cone.

    Returns simplicial cones as tuples of indices into `extreme_rays`.
    Faces are cut out by coordinate hyperplanes; each face is triangulated
    by coning its first ray over the triangulations of the facets that do
    not contain it.
    """
    rays = extreme_rays(sys)
    if not rays:
        return []
    frame = _span_frame(sys)
    zs = [frame.to_z(r) for r in rays]
    ranks: dict[tuple[int, ...], int] = {}
    memo: dict[tuple[int, ...], list[tuple[int, ...]]] = {}

    def rank(face: tuple[int, ...]) -> int:
        if face not in ranks:
            ranks[face] = rational_rank(IntMatrix.from_rows([zs[i] for i in face]))
        return ranks[face]

    def pull(face: tuple[int, ...], dim: int) -> list[tuple[int, ...]]:
        if len(face) == dim:
            return [face]
        if face in memo:
            return memo[face]
        apex = face[0]
        facets = set()
        for j in range(sys.cols):
            sub = tuple(i for i in face if rays[i][j] == 0)
            if sub and apex not in sub and len(sub) >= dim - 1 and sub not in facets:
                if rank(sub) == dim - 1:
                    facets.add(sub)
        simplices = [
            (apex,) + simplex
            for sub in sorted(facets)
            for simplex in pull(sub, dim - 1)
        ]
        memo[face] = simplices
        return simplices

    simplices = sorted(pull(tuple(range(len(rays))), frame.k))
    log.debug(f"Triangulated {sys.family.value} into {len(simplices)} simplicial cones")
    return simplices


def _parallelepiped(
    zs: Sequence[tuple[int, ...]],
    simplex: tuple[int, ...],
    open_facets: Sequence[bool] | None = None,
) -> Iterator[tuple[int, ...]]:
    """Lattice points ``Σ λ_i v_i`` with ``0 ≤ λ_i < 1``.

    For the facets flagged in ``open_facets`` the range is ``0 < λ_i ≤ 1``
    instead.
    """
    d = len(simplex)
    v = IntMatrix.from_rows([[zs[i][r] for i in simplex] for r in range(d)])
    adjugate, det = integer_inverse(v)
    sign = 1 if det > 0 else -1
    volume = abs(det)
    hermite, _, _ = column_hermite_form(v)
    diagonal = [hermite.row(i)[i] for i in range(d)]
    for x in itertools.product(*(range(h) for h in diagonal)):
        q = [(sign * c) % volume for c in adjugate.apply(x)]
        if open_facets is not None:
            q = [volume if c == 0 and o else c for c, o in zip(q, open_facets)]
        yield tuple(
            sum(v.row(r)[i] * q[i] for i in range(d)) // volume for r in range(d)
        )


def _primal_basis(sys: ConeSystem, budget: Budget) -> list[tuple[int, ...]]:
    rays = extreme_rays(sys)
    if not rays:
        return []
    frame = _span_frame(sys)
    zs = [frame.to_z(r) for r in rays]
    candidates = set(rays)
    for simplex in triangulate(sys):
        for z in _parallelepiped(zs, simplex):
            if any(z):
                budget.charge("candidates")
                candidates.add(frame.to_y(z))
    log.debug(f"Filtering {len(candidates)} candidates")
    return _irreducible_filter(sys, candidates)


def _irreducible_filter(
    sys: ConeSystem, candidates: Iterator[tuple[int, ...]] | set[tuple[int, ...]]
) -> list[tuple[int, ...]]:
    """Members not dominating a smaller member of the candidate set.

    Candidates must contain every irreducible member up to their largest
    degree.
    """
    basis: list[tuple[int, ...]] = []
    for c in sorted(candidates, key=lambda y: (sys.degree(y), y)):
        if not any(all(a <= b for a, b in zip(h, c)) for h in basis):
            basis.append(c)
    return basis


def _generated_basis(sys: ConeSystem, dmax: int, budget: Budget) -> list[tuple[int, ...]]:
    basis: list[tuple[int, ...]] = []
    for s in range(1, dmax + 1):
        for q in LatticePointSearch(sys, s, budget=budget):
            if not any(all(a <= b for a, b in zip(h, q)) for h in basis):
                basis.append(q)
    return basis


def _degree_bound(sys: ConeSystem) -> int:
    """Degree bound for the minimal basis from the triangulation."""
    rays = extreme_rays(sys)
    bound = max((sys.degree(r) for r in rays), default=0)
    for simplex in triangulate(sys):
        bound = max(bound, sum(sys.degree(rays[i]) for i in simplex) - 1)
    return bound


def hilbert_basis(
    sys: ConeSystem, method: str = "primal", budget: Budget | None = None
) -> HilbertBasis:
    """Minimal Hilbert basis of the cone.

    Parameters
    ----------
    sys : `ConeSystem`
        A pointed system.
    method : `str`
        ``"primal"`` (triangulation and parallelepiped candidates),
        ``"generation"`` (degree-by-degree enumeration up to a degree bound)
        or ``"elimination"`` (lex Gröbner elimination, small systems only).
    budget : `Budget`, optional
        Limits; exceeding them raises `BudgetExceededError`.
    """
    if budget is None:
        budget = Budget(
            candidates=Config.max_basis_candidates, nodes=Config.max_search_nodes
        )
    if method == "primal":
        vectors = _primal_basis(sys, budget)
    elif method == "generation":
        vectors = _generated_basis(sys, _degree_bound(sys), budget)
    elif method == "elimination":
        from .binomial import elimination_hilbert_basis

        extreme_rays(sys)
        vectors = elimination_hilbert_basis(sys.matrix, budget=budget)
    else:
        raise ValueError(f"Unknown Hilbert basis method {method!r}.")
    log.info(f"Hilbert basis of {sys.family.value} has {len(vectors)} elements")
    return HilbertBasis.from_vectors(sys, vectors)


def truncated_hilbert_basis(
    sys: ConeSystem, dmax: int, budget: Budget | None = None
) -> HilbertBasis:
    """Minimal Hilbert basis elements of degree at most ``dmax``."""
    if budget is None:
        budget = Budget(nodes=Config.max_search_nodes)
    vectors = _generated_basis(sys, dmax, budget) if dmax > 0 else []
    return HilbertBasis.from_vectors(sys, vectors, kind="truncated", dmax=dmax)


def _as_vector(p: LatticePoint | Sequence[int]) -> tuple[int, ...]:
    return p.vector if isinstance(p, LatticePoint) else tuple(p)


def is_irreducible(p: LatticePoint | Sequence[int], sys: ConeSystem) -> bool:
    """True iff the member ``p`` is not a sum of two nonzero members.

    Raises
    ------
    NotAMemberError
        If ``p`` is not in the cone.
    """
    vector = _as_vector(p)
    degree = verify_member(sys, vector)
    if degree == 0:
        return False
    for s in range(1, degree):
        if next(iter(LatticePointSearch(sys, s, upper=vector)), None) is not None:
            return False
    return True


def decompose(
    p: LatticePoint | Sequence[int], hb: HilbertBasis, all_solutions: bool = False
) -> Decomposition | list[Decomposition] | None:
    """Write ``p`` as a nonnegative integer combination of ``hb``.

    Depth-first over basis elements that fit under the residual, largest
    degree first. Returns the first decomposition found, every
    decomposition with ``all_solutions``, or `None` when ``p`` is not a
    member.

    Raises
    ------
    ValueError
        If the declared degree of ``p`` disagrees with the grading.
    """
    sys = hb.system
    vector = _as_vector(p)
    if isinstance(p, LatticePoint) and p.degree != sys.degree(vector):
        raise ValueError(
            f"Declared degree {p.degree} does not match grading degree {sys.degree(vector)}."
        )
    try:
        verify_member(sys, vector)
    except NotAMemberError:
        return [] if all_solutions else None

    order = sorted(range(len(hb)), key=lambda i: (-hb.elements[i].degree, i))
    vectors = [hb.elements[i].vector for i in order]
    failed: set[tuple[tuple[int, ...], int]] = set()
    found: list[dict[int, int]] = []
    chosen: list[int] = []

    def search(residual: tuple[int, ...], start: int) -> bool:
        if not any(residual):
            counts: dict[int, int] = {}
            for i in chosen:
                counts[order[i]] = counts.get(order[i], 0) + 1
            found.append(counts)
            return not all_solutions
        if (residual, start) in failed:
            return False
        before = len(found)
        for i in range(start, len(vectors)):
            h = vectors[i]
            if all(a <= b for a, b in zip(h, residual)):
                chosen.append(i)
                done = search(tuple(b - a for a, b in zip(h, residual)), i)
                chosen.pop()
                if done:
                    return True
        if len(found) == before:
            failed.add((residual, start))
        return False

    search(vector, 0)
    decompositions = [Decomposition(dict(sorted(c.items()))) for c in found]
    if all_solutions:
        return decompositions
    return decompositions[0] if decompositions else None


def stanley_series(sys: ConeSystem) -> RationalGenFn:
    """Hilbert series of the cone's lattice points from a half-open
    decomposition of the triangulation.

    Every simplicial cone drops the facets a generic interior point sees
    from outside, so each lattice point is counted exactly once. The
    result is written over ``(1 − t^L)^k`` with ``L`` the lcm of the ray
    degrees.
    """
    rays = extreme_rays(sys)
    if not rays:
        return RationalGenFn((1,), ())
    frame = _span_frame(sys)
    zs = [frame.to_z(r) for r in rays]
    k = frame.k
    z_grading = [sys.degree(b) for b in frame.basis]
    interior = [sum(z[t] for z in zs) for t in range(k)]
    ray_degrees = [sys.degree(r) for r in rays]
    period = math.lcm(*ray_degrees)

    numerators: dict[tuple[int, ...], dict[int, int]] = {}
    for simplex in triangulate(sys):
        v = IntMatrix.from_rows([[zs[i][r] for i in simplex] for r in range(k)])
        adjugate, det = integer_inverse(v)
        sign = 1 if det > 0 else -1
        open_facets = []
        for i in range(k):
            normal = [sign * x for x in adjugate.row(i)]
            key = [dot(normal, interior)] + normal
            open_facets.append(next(x for x in key if x != 0) < 0)
        degrees = tuple(sorted(ray_degrees[i] for i in simplex))
        bucket = numerators.setdefault(degrees, {})
        for z in _parallelepiped(zs, simplex, open_facets):
            s = dot(z_grading, z)
            bucket[s] = bucket.get(s, 0) + 1

    total = sympy.Poly(0, T, domain=sympy.ZZ)
    for degrees, bucket in numerators.items():
        poly = sympy.Poly(
            sum(c * T**s for s, c in bucket.items()), T, domain=sympy.ZZ
        )
        for g in degrees:
            poly *= sympy.Poly(
                sum(T**e for e in range(0, period, g)), T, domain=sympy.ZZ
            )
        total += poly
    log.debug(f"Stanley decomposition of {sys.family.value} over (1 - t^{period})^{k}")
    return RationalGenFn.from_poly(total, [period] * k)
