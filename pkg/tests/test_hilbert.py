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


import logging
import os
import random
import unittest

from lsst.ts.magiccones import (
    LOH_SHU,
    ConeSystem,
    Decomposition,
    Family,
    HilbertBasis,
    IntMatrix,
    LatticePoint,
    LatticePointSearch,
    NotAMemberError,
    NotPointedError,
    SchemaError,
    build_system,
    decompose,
    extreme_rays,
    hilbert_basis,
    is_irreducible,
    stanley_series,
    triangulate,
    truncated_hilbert_basis,
)

MAGIC3_BASIS = [
    (0, 2, 1, 2, 1, 0, 1, 0, 2),
    (1, 0, 2, 2, 1, 0, 0, 2, 1),
    (1, 1, 1, 1, 1, 1, 1, 1, 1),
    (1, 2, 0, 0, 1, 2, 2, 0, 1),
    (2, 0, 1, 0, 1, 2, 1, 2, 0),
]


class TestExtremeRays(unittest.TestCase):
    def setUp(self) -> None:
        self.log = logging.getLogger()
        self.magic3 = build_system(Family.MAGIC, n=3)

    def test_magic_3_rays(self) -> None:
        rays = extreme_rays(self.magic3)
        self.assertEqual(rays, [v for v in MAGIC3_BASIS if v != (1,) * 9])

    def test_semi_magic_rays_are_permutations(self) -> None:
        rays = extreme_rays(build_system(Family.SEMI_MAGIC, n=3))
        self.assertEqual(len(rays), 6)
        for ray in rays:
            self.assertEqual(sorted(ray), [0] * 6 + [1] * 3)

    def test_not_pointed(self) -> None:
        sys = ConeSystem(
            Family.MAGIC,
            IntMatrix.from_rows([[1, -1, 0]]),
            (1, 1, 0),
            ((0, 0), (0, 1), (0, 2)),
            3,
        )
        with self.assertRaises(NotPointedError):
            extreme_rays(sys)

    def test_triangulation(self) -> None:
        simplices = triangulate(self.magic3)
        self.assertEqual(len(simplices), 2)
        for simplex in simplices:
            self.assertEqual(len(simplex), 3)
            self.assertTrue(set(simplex) <= {0, 1, 2, 3})


class TestHilbertBasis(unittest.TestCase):
    def setUp(self) -> None:
        self.log = logging.getLogger()
        self.magic3 = build_system(Family.MAGIC, n=3)

    def test_magic_3(self) -> None:
        hb = hilbert_basis(self.magic3)
        self.assertEqual(hb.vectors, MAGIC3_BASIS)
        self.assertEqual(hb.degrees, [3] * 5)
        self.assertEqual(hb.kind, "minimal")

    def test_methods_agree(self) -> None:
        primal = hilbert_basis(self.magic3, method="primal")
        generated = hilbert_basis(self.magic3, method="generation")
        self.assertEqual(primal, generated)
        with self.assertRaises(ValueError):
            hilbert_basis(self.magic3, method="dual")

    def test_magic_4(self) -> None:
        sys = build_system(Family.MAGIC, n=4)
        hb = hilbert_basis(sys)
        self.assertEqual(len(hb), 20)
        self.assertEqual(len(hb.by_degree()[1]), 8)
        for s in range(1, 4):
            for vector in LatticePointSearch(sys, s):
                self.assertIsNotNone(
                    decompose(vector, hb), f"{vector} has no decomposition"
                )

    def test_magic_cube(self) -> None:
        hb = hilbert_basis(build_system(Family.MAGIC_CUBE, n=3))
        self.assertEqual(len(hb), 19)
        self.assertEqual(set(hb.degrees), {3})

    def test_semi_magic_is_birkhoff(self) -> None:
        """Semi-magic squares are generated by permutation matrices."""
        hb = hilbert_basis(build_system(Family.SEMI_MAGIC, n=3))
        self.assertEqual(len(hb), 6)
        self.assertEqual(set(hb.degrees), {1})

    def test_truncated(self) -> None:
        sys = build_system(Family.MAGIC, n=4)
        empty = truncated_hilbert_basis(sys, 0)
        self.assertEqual(len(empty), 0)
        self.assertEqual((empty.kind, empty.dmax), ("truncated", 0))
        partial = truncated_hilbert_basis(sys, 2)
        self.assertTrue(set(partial.vectors) <= set(hilbert_basis(sys).vectors))
        self.assertEqual(max(partial.degrees), 2)

    def test_serialization(self) -> None:
        hb = hilbert_basis(self.magic3)
        self.assertEqual(HilbertBasis.from_dict(hb.to_dict()), hb)
        data = hb.to_dict()
        data["kind"] = "approximate"
        with self.assertRaises(SchemaError):
            HilbertBasis.from_dict(data)

    @unittest.skipUnless(os.environ.get("MAGICCONES_SLOW_TESTS"), "slow test")
    def test_franklin_8(self) -> None:
        hb = hilbert_basis(build_system(Family.FRANKLIN8))
        self.assertEqual(len(hb), 98)

    @unittest.skipUnless(os.environ.get("MAGICCONES_SLOW_TESTS"), "slow test")
    def test_semi_magic_cube(self) -> None:
        hb = hilbert_basis(build_system(Family.SEMI_MAGIC_HYPERCUBE, n=3, d=3))
        self.assertEqual(len(hb), 66)
        self.assertEqual(len(hb.by_degree()[1]), 12)
        self.assertEqual(len(hb.by_degree()[2]), 54)


class TestDecomposition(unittest.TestCase):
    def setUp(self) -> None:
        self.magic3 = build_system(Family.MAGIC, n=3)
        self.hb = hilbert_basis(self.magic3)

    def test_loh_shu(self) -> None:
        d = decompose(LOH_SHU, self.hb)
        self.assertIsInstance(d, Decomposition)
        self.assertEqual(d.recombine(self.hb), LOH_SHU)
        self.assertEqual(d.degree(self.hb), 15)
        self.assertEqual(sum(d.coefficients.values()), 5)

    def test_all_decompositions(self) -> None:
        twice = decompose((2,) * 9, self.hb, all_solutions=True)
        self.assertEqual(
            [d.coefficients for d in twice],
            [{0: 1, 4: 1}, {1: 1, 3: 1}, {2: 2}],
        )
        self.assertEqual(twice[2].to_dict(), {"coefficients": {"2": 2}})

    def test_non_members(self) -> None:
        self.assertIsNone(decompose((1,) + (0,) * 8, self.hb))
        self.assertEqual(decompose((1,) + (0,) * 8, self.hb, all_solutions=True), [])
        with self.assertRaises(ValueError):
            decompose(LatticePoint(LOH_SHU, 14), self.hb)

    def test_irreducibility(self) -> None:
        self.assertTrue(is_irreducible((1,) * 9, self.magic3))
        self.assertFalse(is_irreducible(LOH_SHU, self.magic3))
        self.assertFalse(is_irreducible((0,) * 9, self.magic3))
        for h in self.hb:
            self.assertTrue(is_irreducible(h, self.magic3))
        with self.assertRaises(NotAMemberError):
            is_irreducible((1,) + (0,) * 8, self.magic3)

    def test_random_combinations(self) -> None:
        """Random combinations of basis elements decompose and recombine."""
        birkhoff = build_system(Family.SEMI_MAGIC, n=3)
        bases = [(self.hb, self.magic3), (hilbert_basis(birkhoff), birkhoff)]
        rng = random.Random(3)
        for k in range(200):
            hb, sys = bases[k % 2]
            coefficients = [rng.randint(0, 3) for _ in hb.vectors]
            if not any(coefficients):
                coefficients[rng.randrange(len(coefficients))] = 1
            v = tuple(
                sum(c * h[i] for c, h in zip(coefficients, hb.vectors)) for i in range(sys.cols)
            )
            d = decompose(v, hb)
            self.assertIsNotNone(d, f"{v}")
            self.assertEqual(d.recombine(hb), v)
            if sum(coefficients) >= 2:
                self.assertFalse(is_irreducible(v, sys), f"{v}")
            else:
                self.assertTrue(is_irreducible(v, sys), f"{v}")


class TestStanleySeries(unittest.TestCase):
    def test_magic_3(self) -> None:
        series = stanley_series(build_system(Family.MAGIC, n=3))
        self.assertEqual(series.denominator, (3, 3, 3))
        self.assertEqual(series.expand(12), [1, 0, 0, 5, 0, 0, 13, 0, 0, 25, 0, 0, 41])

    def test_magic_4(self) -> None:
        series = stanley_series(build_system(Family.MAGIC, n=4))
        self.assertEqual(
            series.expand(8), [1, 8, 48, 200, 675, 1904, 4736, 10608, 21925]
        )

    def test_semi_magic_matches_search(self) -> None:
        sys = build_system(Family.SEMI_MAGIC, n=3)
        coefficients = stanley_series(sys).expand(6)
        for s, c in enumerate(coefficients):
            self.assertEqual(c, LatticePointSearch(sys, s).count(), f"magic sum {s}")


if __name__ == "__main__":
    unittest.main()
