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

__all__ = ["RationalGenFn", "T"]

from dataclasses import dataclass
from typing import Any, Sequence

import sympy

from .errors import SchemaError

T = sympy.Symbol("t")
"""The series variable."""


@dataclass(frozen=True)
class RationalGenFn:
    """Rational generating function ``numerator(t) / ∏ (1 − t^d)``.

    Parameters
    ----------
    numerator : `tuple` [`int`]
        Coefficients in ascending powers of ``t``.
    denominator : `tuple` [`int`]
        Multiset of exponents ``d``; each contributes a factor ``1 − t^d``.
    """

    numerator: tuple[int, ...]
    denominator: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(d < 1 for d in self.denominator):
            raise ValueError(f"Denominator exponents must be positive: {self.denominator}.")

    @classmethod
    def from_poly(cls, numerator: sympy.Poly, denominator: Sequence[int]) -> "RationalGenFn":
        coeffs = [int(c) for c in reversed(numerator.all_coeffs())]
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        return cls(tuple(coeffs), tuple(sorted(denominator)))

    def numerator_poly(self) -> sympy.Poly:
        return sympy.Poly(list(reversed(self.numerator)) or [0], T, domain=sympy.ZZ)

    def denominator_poly(self) -> sympy.Poly:
        result = sympy.Poly(1, T, domain=sympy.ZZ)
        for d in self.denominator:
            result *= sympy.Poly(1 - T**d, T, domain=sympy.ZZ)
        return result

    def expand(self, dmax: int) -> list[int]:
        """Power series coefficients ``c_0 … c_dmax``."""
        if dmax < 0:
            raise ValueError(f"dmax must be nonnegative, got {dmax}.")
        coeffs = list(self.numerator[: dmax + 1]) + [0] * max(
            0, dmax + 1 - len(self.numerator)
        )
        for d in self.denominator:
            for k in range(d, dmax + 1):
                coeffs[k] += coeffs[k - d]
        return coeffs

    def with_denominator(self, denominator: Sequence[int]) -> "RationalGenFn":
        """The same function written over ``∏ (1 − t^e)`` for the given
        exponents.

        Raises
        ------
        ValueError
            If the current denominator does not divide the new one.
        """
        target = RationalGenFn((1,), tuple(denominator)).denominator_poly()
        quotient, remainder = sympy.div(target, self.denominator_poly())
        if not remainder.is_zero:
            raise ValueError(
                f"Denominator {self.denominator} does not divide {tuple(denominator)}."
            )
        return RationalGenFn.from_poly(self.numerator_poly() * quotient, denominator)

    def as_expr(self) -> sympy.Expr:
        return self.numerator_poly().as_expr() / self.denominator_poly().as_expr()

    def to_dict(self) -> dict[str, Any]:
        return {"numerator": list(self.numerator), "denominator": list(self.denominator)}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "RationalGenFn":
        try:
            return cls(
                tuple(int(c) for c in data["numerator"]),
                tuple(int(d) for d in data["denominator"]),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise SchemaError(f"Malformed generating function: {data!r}") from e
