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

"""Binomial ideals: term orders, Buchberger, saturation, initial ideals
and Hilbert–Poincaré numerators."""

__all__ = [
    "Binomial",
    "TermOrder",
    "MonomialIdeal",
    "buchberger",
    "reduce",
    "ideal_contains",
    "saturate",
    "saturate_by_elimination",
    "toric_ideal",
    "lattice_ideal",
    "elimination_hilbert_basis",
    "initial_ideal",
    "hilbert_numerator",
    "hilbert_series",
]

import heapq
import logging
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np
import sympy
from sympy.polys.monomials import monomial_divides, monomial_lcm

from .budget import Budget
from .config import Config
from .cones import ConeSystem
from .genfn import T, RationalGenFn
from .hilbert import HilbertBasis, hilbert_basis, stanley_series
from .linalg import IntMatrix, independent_rows, integer_kernel_basis

log = logging.getLogger(__name__)

Monomial = tuple[int, ...]


def _format_monomial(m: Monomial, names: Sequence[str]) -> str:
    factors = [
        name if e == 1 else f"{name}^{e}" for name, e in zip(names, m) if e
    ]
    return "*".join(factors) or "1"


@dataclass(frozen=True)
class Binomial:
    """The binomial ``x^plus − x^minus``."""

    plus: Monomial
    minus: Monomial

    def __post_init__(self) -> None:
        if len(self.plus) != len(self.minus):
            raise ValueError(
                f"Monomials of different lengths: {len(self.plus)} and {len(self.minus)}."
            )
        if any(e < 0 for e in self.plus + self.minus):
            raise ValueError(f"Negative exponent in {self.plus} - {self.minus}.")

    @classmethod
    def from_vector(cls, u: Sequence[int]) -> "Binomial":
        """Pure difference binomial ``x^{u⁺} − x^{u⁻}``."""
        return cls(tuple(max(x, 0) for x in u), tuple(max(-x, 0) for x in u))

    @property
    def nvars(self) -> int:
        return len(self.plus)

    @property
    def vector(self) -> tuple[int, ...]:
        return tuple(a - b for a, b in zip(self.plus, self.minus))

    def is_zero(self) -> bool:
        return self.plus == self.minus

    def is_homogeneous(self, weights: Sequence[int]) -> bool:
        return _weighted_degree(self.plus, weights) == _weighted_degree(
            self.minus, weights
        )

    def format(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = [f"x{i + 1}" for i in range(self.nvars)]
        return f"{_format_monomial(self.plus, names)} - {_format_monomial(self.minus, names)}"

    def __str__(self) -> str:
        return self.format()

    def to_dict(self) -> dict[str, Any]:
        return {"plus": list(self.plus), "minus": list(self.minus)}


def _weighted_degree(m: Monomial, weights: Sequence[int]) -> int:
    return sum(e * w for e, w in zip(m, weights))


@dataclass(frozen=True)
class TermOrder:
    """A monomial order.

    Parameters
    ----------
    kind : `str`
        ``"lex"``, ``"degrevlex"`` or ``"elimination"``.
    priority : `tuple` [`int`], optional
        Variables from most to least significant; defaults to
        ``x1 > x2 > …``.
    weights : `tuple` [`int`], optional
        Positive degrees of the variables for ``degrevlex`` and
        ``elimination``; defaults to all ones.
    blocks : `tuple` [`tuple` [`int`]]
        For ``elimination``: variable blocks, most significant first, each
        compared by weighted degrevlex in its listed order.
    """

    kind: str = "degrevlex"
    priority: tuple[int, ...] | None = None
    weights: tuple[int, ...] | None = None
    blocks: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in ("lex", "degrevlex", "elimination"):
            raise ValueError(f"Unknown term order {self.kind!r}.")
        if self.kind == "elimination" and not self.blocks:
            raise ValueError("An elimination order needs variable blocks.")
        if self.weights is not None and any(w <= 0 for w in self.weights):
            raise ValueError(f"Weights must be positive: {self.weights}.")

    def _weight(self, v: int) -> int:
        return 1 if self.weights is None else self.weights[v]

    def _degrevlex(self, m: Monomial, variables: Sequence[int]) -> tuple:
        return (
            sum(self._weight(v) * m[v] for v in variables),
            tuple(-m[v] for v in reversed(variables)),
        )

    def key(self, m: Monomial) -> tuple:
        """Sort key; larger keys are larger monomials."""
        priority = self.priority if self.priority is not None else range(len(m))
        if self.kind == "lex":
            return tuple(m[v] for v in priority)
        if self.kind == "degrevlex":
            return self._degrevlex(m, list(priority))
        return tuple(self._degrevlex(m, block) for block in self.blocks)

    def orient(self, b: Binomial) -> Binomial:
        """The same binomial up to sign with its leading term first."""
        if self.key(b.plus) < self.key(b.minus):
            return Binomial(b.minus, b.plus)
        return b

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {"kind": self.kind}
        if self.priority is not None:
            data["priority"] = list(self.priority)
        if self.weights is not None:
            data["weights"] = list(self.weights)
        if self.blocks:
            data["blocks"] = [list(b) for b in self.blocks]
        return data


@dataclass(frozen=True)
class MonomialIdeal:
    """A monomial ideal given by minimal generators."""

    nvars: int
    generators: tuple[Monomial, ...]

    @classmethod
    def from_generators(cls, nvars: int, monomials: Sequence[Monomial]) -> "MonomialIdeal":
        return cls(nvars, tuple(sorted(_minimalize(monomials))))

    def is_zero(self) -> bool:
        return not self.generators

    def contains(self, m: Monomial) -> bool:
        return any(monomial_divides(g, m) for g in self.generators)


def _minimalize(monomials: Sequence[Monomial]) -> list[Monomial]:
    kept: list[Monomial] = []
    for m in sorted(set(monomials), key=sum):
        if not any(monomial_divides(g, m) for g in kept):
            kept.append(m)
    return kept


def _reduce_monomial(m: Monomial, basis: Sequence[Binomial]) -> Monomial:
    """Rewrite ``m`` by leading terms of ``basis`` until irreducible."""
    reducing = True
    while reducing:
        reducing = False
        for g in basis:
            if monomial_divides(g.plus, m):
                m = tuple(a - p + q for a, p, q in zip(m, g.plus, g.minus))
                reducing = True
                break
    return m


def reduce(b: Binomial, gb: Sequence[Binomial], order: TermOrder) -> Binomial:
    """Normal form of ``b`` modulo the oriented basis ``gb``.

    Each term is rewritten separately; the result is zero iff both terms
    reach the same standard monomial.
    """
    return _normal_form(b, [order.orient(g) for g in gb], order)


def _normal_form(b: Binomial, oriented: Sequence[Binomial], order: TermOrder) -> Binomial:
    return order.orient(
        Binomial(_reduce_monomial(b.plus, oriented), _reduce_monomial(b.minus, oriented))
    )


def ideal_contains(gb: Sequence[Binomial], b: Binomial, order: TermOrder) -> bool:
    """Membership of ``b`` in the ideal of the Gröbner basis ``gb``."""
    return reduce(b, gb, order).is_zero()


def _s_binomial(f: Binomial, g: Binomial) -> Binomial:
    lcm = monomial_lcm(f.plus, g.plus)
    return Binomial(
        tuple(l - a + b for l, a, b in zip(lcm, f.plus, f.minus)),
        tuple(l - c + d for l, c, d in zip(lcm, g.plus, g.minus)),
    )


def _coprime(a: Monomial, b: Monomial) -> bool:
    return not any(x and y for x, y in zip(a, b))


def _reduced_basis(basis: Sequence[Binomial], order: TermOrder) -> list[Binomial]:
    minimal: list[Binomial] = []
    for g in sorted(basis, key=lambda g: (order.key(g.plus), order.key(g.minus))):
        if not any(monomial_divides(h.plus, g.plus) for h in minimal):
            minimal.append(g)
    reduced = []
    for g in minimal:
        tail = _reduce_monomial(g.minus, minimal)
        reduced.append(Binomial(g.plus, tail))
    return sorted(reduced, key=lambda g: (g.plus, g.minus))


def buchberger(
    gens: Sequence[Binomial], order: TermOrder, budget: Budget | None = None
) -> list[Binomial]:
    """Reduced Gröbner basis of the ideal generated by binomials.

    Pairs are processed smallest lcm first; pairs with coprime leading
    terms and pairs covered by the chain criterion are skipped.

    Raises
    ------
    BudgetExceededError
        If more than ``Config.max_groebner_pairs`` pairs are processed.
    """
    if budget is None:
        budget = Budget(pairs=Config.max_groebner_pairs)
    basis: list[Binomial] = []
    for g in gens:
        g = order.orient(g)
        if not g.is_zero():
            basis.append(g)
    queue: list[tuple[tuple, int, int]] = []
    pending: set[tuple[int, int]] = set()

    def push(i: int, j: int) -> None:
        heapq.heappush(queue, (order.key(monomial_lcm(basis[i].plus, basis[j].plus)), i, j))
        pending.add((i, j))

    for j in range(len(basis)):
        for i in range(j):
            push(i, j)

    processed = 0
    while queue:
        _, i, j = heapq.heappop(queue)
        pending.discard((i, j))
        f, g = basis[i], basis[j]
        if _coprime(f.plus, g.plus):
            continue
        lcm = monomial_lcm(f.plus, g.plus)
        if any(
            k != i
            and k != j
            and (min(i, k), max(i, k)) not in pending
            and (min(j, k), max(j, k)) not in pending
            and monomial_divides(basis[k].plus, lcm)
            for k in range(len(basis))
        ):
            continue
        budget.charge("pairs")
        processed += 1
        h = _normal_form(_s_binomial(f, g), basis, order)
        if not h.is_zero():
            basis.append(h)
            for k in range(len(basis) - 1):
                push(k, len(basis) - 1)
    result = _reduced_basis(basis, order)
    log.debug(f"Buchberger processed {processed} S-pairs into {len(result)} binomials")
    return result


def _check_homogeneous(gens: Sequence[Binomial], weights: Sequence[int]) -> None:
    for g in gens:
        if not g.is_homogeneous(weights):
            raise ValueError(f"Binomial {g} is not homogeneous for weights {tuple(weights)}.")


def saturate(
    gens: Sequence[Binomial],
    order: TermOrder | None = None,
    weights: Sequence[int] | None = None,
    budget: Budget | None = None,
) -> list[Binomial]:
    """Gröbner basis of ``(I : (x₁⋯x_r)^∞)`` for a homogeneous binomial
    ideal ``I``.

    One variable at a time: a Gröbner basis in weighted degrevlex with the
    variable last is divided through by the largest power of that variable
    in each element.

    Raises
    ------
    ValueError
        If a generator is not homogeneous for the weights.
    """
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return []
    nvars = gens[0].nvars
    if weights is None:
        weights = order.weights if order is not None and order.weights else (1,) * nvars
    weights = tuple(weights)
    if order is None:
        order = TermOrder("degrevlex", weights=weights)
    _check_homogeneous(gens, weights)
    if budget is None:
        budget = Budget(pairs=Config.max_groebner_pairs)

    current = list(gens)
    for v in range(nvars):
        if not any(g.plus[v] or g.minus[v] for g in current):
            continue
        cheapest_last = TermOrder(
            "degrevlex",
            priority=tuple(u for u in range(nvars) if u != v) + (v,),
            weights=weights,
        )
        divided = []
        for g in buchberger(current, cheapest_last, budget):
            e = min(g.plus[v], g.minus[v])
            if e:
                g = Binomial(
                    g.plus[:v] + (g.plus[v] - e,) + g.plus[v + 1 :],
                    g.minus[:v] + (g.minus[v] - e,) + g.minus[v + 1 :],
                )
            divided.append(g)
        current = divided
        log.debug(f"Saturated by x{v + 1}: {len(current)} binomials")
    return buchberger(current, order, budget)


def saturate_by_elimination(
    gens: Sequence[Binomial], order: TermOrder, budget: Budget | None = None
) -> list[Binomial]:
    """Saturation by eliminating ``t`` from ``I + (t·x₁⋯x_r − 1)``.

    Only for at most ten variables.
    """
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return []
    nvars = gens[0].nvars
    if nvars > 10:
        raise ValueError(f"Elimination saturation supports at most 10 variables, got {nvars}.")
    extended = [Binomial(g.plus + (0,), g.minus + (0,)) for g in gens]
    extended.append(Binomial((1,) * (nvars + 1), (0,) * (nvars + 1)))
    priority = order.priority if order.priority is not None else tuple(range(nvars))
    weights = (order.weights or (1,) * nvars) + (1,)
    if order.kind == "degrevlex":
        inner = (tuple(priority),)
    elif order.kind == "elimination":
        inner = order.blocks
    else:
        inner = tuple((v,) for v in priority)
    eliminate = TermOrder("elimination", weights=weights, blocks=((nvars,),) + inner)
    gb = buchberger(extended, eliminate, budget)
    kept = [
        Binomial(g.plus[:nvars], g.minus[:nvars])
        for g in gb
        if g.plus[nvars] == 0 and g.minus[nvars] == 0
    ]
    return buchberger(kept, order, budget)


def toric_ideal(
    points: Sequence[Sequence[int]],
    weights: Sequence[int] | None = None,
    order: TermOrder | None = None,
    budget: Budget | None = None,
) -> list[Binomial]:
    """Gröbner basis of the toric ideal of a point configuration.

    Starts from the lattice basis of the kernel of the matrix with columns
    ``points`` and saturates by all variables.

    Parameters
    ----------
    points : sequence of sequences of `int`
        The points ``a_i``, one per variable.
    weights : sequence of `int`, optional
        Positive weights making the kernel binomials homogeneous; defaults
        to the coordinate sums of the points.
    """
    if not points:
        return []
    if weights is None:
        weights = [sum(p) for p in points]
    columns = IntMatrix.from_rows(list(points)).transpose()
    kernel = integer_kernel_basis(columns)
    gens = [Binomial.from_vector(u) for u in kernel]
    if order is None:
        order = TermOrder("degrevlex", weights=tuple(weights))
    return saturate(gens, order, weights, budget)


def lattice_ideal(
    hb: HilbertBasis, order: TermOrder | None = None, budget: Budget | None = None
) -> list[Binomial]:
    """Gröbner basis of the toric ideal of a Hilbert basis; variable ``i``
    maps to basis element ``i`` and has weight ``deg h_i``."""
    weights = tuple(hb.degrees)
    if order is None:
        order = TermOrder("degrevlex", weights=weights)
    return toric_ideal(hb.vectors, weights, order, budget)


def elimination_hilbert_basis(
    matrix: IntMatrix, budget: Budget | None = None
) -> list[tuple[int, ...]]:
    """Hilbert basis of ``{Ay = 0, y ≥ 0}`` read off a lex Gröbner basis.

    Variables are ``t0, t1 … tm, x1 … xn, y1 … yn`` with
    ``x_i ↦ y_i·t^{a_i}``; the ``t`` are made invertible by
    ``t0·t1⋯tm − 1``. The basis consists of the ``β`` with
    ``x^β − y^β`` in the reduced Gröbner basis.
    """
    n = matrix.cols
    if n > Config.elimination_max_variables:
        raise ValueError(
            f"Elimination supports at most {Config.elimination_max_variables} columns, got {n}."
        )
    rows = [matrix.row(i) for i in independent_rows(matrix.to_rows())]
    m = len(rows)
    nvars = 1 + m + 2 * n
    zero = (0,) * nvars

    def monomial(t: Sequence[int] = (), x: Sequence[int] = (), y: Sequence[int] = ()) -> Monomial:
        m_ = list(zero)
        for offset, part in ((0, t), (1 + m, x), (1 + m + n, y)):
            for i, e in enumerate(part):
                m_[offset + i] += e
        return tuple(m_)

    gens = [Binomial(monomial(t=(1,) * (m + 1)), zero)]
    for i in range(n):
        column = [row[i] for row in rows]
        negative = [0] + [max(-a, 0) for a in column]
        positive = [0] + [max(a, 0) for a in column]
        unit = [int(j == i) for j in range(n)]
        gens.append(Binomial(monomial(t=negative, x=unit), monomial(t=positive, y=unit)))
    gb = buchberger(gens, TermOrder("lex"), budget)
    basis = []
    for g in gb:
        x_part = g.plus[1 + m : 1 + m + n]
        y_part = g.minus[1 + m + n :]
        if (
            not any(g.plus[: 1 + m]) and not any(g.minus[: 1 + m + n])
            and not any(g.plus[1 + m + n :])
            and x_part == y_part
        ):
            basis.append(x_part)
    return sorted(basis)


def initial_ideal(gb: Sequence[Binomial], order: TermOrder) -> MonomialIdeal:
    """Ideal of leading monomials of a Gröbner basis."""
    if not gb:
        return MonomialIdeal(0, ())
    return MonomialIdeal.from_generators(gb[0].nvars, [order.orient(g).plus for g in gb])


def _minimal_rows(gens: np.ndarray) -> np.ndarray:
    kept: list[np.ndarray] = []
    for m in sorted(gens, key=lambda r: int(r.sum())):
        if not any(np.all(m >= g) for g in kept):
            kept.append(m)
    return np.array(kept, dtype=np.int64).reshape(len(kept), gens.shape[1])


def _pure_power_numerator(pure: np.ndarray, weights: np.ndarray) -> sympy.Poly:
    result = sympy.Poly(1, T, domain=sympy.ZZ)
    for m in pure:
        result *= sympy.Poly(1 - T ** int(m @ weights), T, domain=sympy.ZZ)
    return result


def _pivot_numerator(gens: np.ndarray, weights: np.ndarray, strategy: str) -> sympy.Poly:
    if len(gens) == 0:
        return sympy.Poly(1, T, domain=sympy.ZZ)
    if np.any(np.all(gens == 0, axis=1)):
        return sympy.Poly(0, T, domain=sympy.ZZ)
    support = np.count_nonzero(gens, axis=1)
    mixed = gens[support > 1]
    if len(mixed) <= 1:
        pure = gens[support == 1]
        numerator = _pure_power_numerator(pure, weights)
        if len(mixed) == 0:
            return numerator
        m = mixed[0]
        colon = np.maximum(pure - m, 0)
        if np.any(np.all(colon == 0, axis=1)):
            return numerator
        shift = sympy.Poly(T ** int(m @ weights), T, domain=sympy.ZZ)
        return numerator - shift * _pure_power_numerator(colon, weights)

    if strategy == "most-frequent":
        v = int(np.argmax(np.count_nonzero(mixed, axis=0)))
    elif strategy == "first-variable":
        v = int(np.flatnonzero(np.any(mixed > 0, axis=0))[0])
    else:
        raise ValueError(f"Unknown pivot strategy {strategy!r}.")
    exponents = mixed[:, v]
    pivot = np.zeros(gens.shape[1], dtype=np.int64)
    pivot[v] = int(exponents[exponents > 0].min())

    left = _minimal_rows(np.vstack([gens, pivot]))
    right = _minimal_rows(np.maximum(gens - pivot, 0))
    shift = sympy.Poly(T ** int(pivot @ weights), T, domain=sympy.ZZ)
    return _pivot_numerator(left, weights, strategy) + shift * _pivot_numerator(
        right, weights, strategy
    )


def hilbert_numerator(
    mi: MonomialIdeal, weights: Sequence[int], strategy: str = "most-frequent"
) -> sympy.Poly:
    """Numerator ``⟨I⟩`` of ``H_{R/I}(t) = ⟨I⟩ / ∏ (1 − t^{w_i})``.

    Pivots on a variable power ``x_v^k`` using
    ``⟨I⟩ = ⟨I + (x_v^k)⟩ + t^{k·w_v}·⟨I : x_v^k⟩`` until at most one
    generator involves two or more variables.

    Parameters
    ----------
    mi : `MonomialIdeal`
        The ideal.
    weights : sequence of `int`
        Positive degrees of the variables.
    strategy : `str`
        ``"most-frequent"`` pivots on the variable occurring in most
        generators; ``"first-variable"`` on the first one occurring.
    """
    if any(w <= 0 for w in weights):
        raise ValueError(f"Weights must be positive: {tuple(weights)}.")
    if mi.is_zero():
        return sympy.Poly(1, T, domain=sympy.ZZ)
    gens = np.array(mi.generators, dtype=np.int64)
    return _pivot_numerator(gens, np.array(weights, dtype=np.int64), strategy)


def hilbert_series(
    sys: ConeSystem, method: str = "auto", budget: Budget | None = None
) -> RationalGenFn:
    """Hilbert series ``Σ count(s)·t^s`` of the cone's lattice points.

    Parameters
    ----------
    sys : `ConeSystem`
        A pointed system.
    method : `str`
        ``"toric"`` composes Hilbert basis, toric ideal, initial ideal and
        pivot numerator over ``∏ (1 − t^{deg h})``; ``"triangulation"``
        uses the half-open Stanley decomposition; ``"auto"`` picks the
        toric route when the basis has at most
        ``Config.toric_max_variables`` elements.
    """
    if method not in ("auto", "toric", "triangulation"):
        raise ValueError(f"Unknown series method {method!r}.")
    if method == "triangulation":
        return stanley_series(sys)
    hb = hilbert_basis(sys, budget=budget)
    if method == "auto" and len(hb) > Config.toric_max_variables:
        log.info(f"{len(hb)} basis elements; using the triangulation series")
        return stanley_series(sys)
    weights = tuple(hb.degrees)
    order = TermOrder("degrevlex", weights=weights)
    gb = lattice_ideal(hb, order, budget)
    numerator = hilbert_numerator(initial_ideal(gb, order), weights)
    return RationalGenFn.from_poly(numerator, weights)
