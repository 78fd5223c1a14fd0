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
import unittest

from lsst.ts.magiccones import (
    DURER,
    FRANKLIN_F1,
    FRANKLIN_F2,
    JAINA,
    LOH_SHU,
    ConeSystem,
    Family,
    LatticePoint,
    NotAMemberError,
    SchemaError,
    as_grid,
    build_system,
    flatten,
    franklin_block_lift,
    latin_square_bijection,
    latin_square_to_cube,
    natural_square_even,
    natural_square_odd,
    render_grid,
    semi_magic_latin_squares,
    verify_member,
)


class TestBuildSystem(unittest.TestCase):
    def setUp(self) -> None:
        self.log = logging.getLogger()

    def test_magic_3_rows(self) -> None:
        sys = build_system(Family.MAGIC, n=3)
        self.assertEqual(sys.matrix.rows, 7)
        self.assertEqual(sys.cols, 9)
        self.assertEqual(list(sys.matrix.row(0)), [-1, -1, -1, 1, 1, 1, 0, 0, 0])
        self.assertEqual(sys.grading, (1, 1, 1, 0, 0, 0, 0, 0, 0))

    def test_row_counts(self) -> None:
        """One row per mandated sum other than the reference sum."""
        self.assertEqual(build_system(Family.MAGIC, n=4).matrix.rows, 9)
        for n in (3, 4, 5):
            self.assertEqual(
                build_system(Family.PANDIAGONAL, n=n).matrix.rows,
                4 * n - 1,
                f"pandiagonal n={n}",
            )
        self.assertEqual(build_system(Family.FRANKLIN8).matrix.rows, 127)
        franklin16 = build_system(Family.FRANKLIN16)
        self.assertEqual((franklin16.matrix.rows, franklin16.cols), (383, 256))
        cube = build_system(Family.MAGIC_CUBE, n=3)
        self.assertEqual((cube.matrix.rows, cube.cols), (30, 27))

    def test_dimensions(self) -> None:
        self.assertEqual(build_system(Family.MAGIC, n=3).dimension, 3)
        self.assertEqual(build_system(Family.MAGIC, n=4).dimension, 8)
        self.assertEqual(build_system(Family.MAGIC, n=4).polytope_dimension, 7)
        self.assertEqual(build_system(Family.FRANKLIN8).dimension, 10)
        for n in range(1, 6):
            self.assertEqual(
                build_system(Family.SEMI_MAGIC, n=n).dimension,
                (n - 1) ** 2 + 1,
                f"semi-magic n={n}",
            )

    def test_systems_are_cached(self) -> None:
        self.assertIs(build_system("magic", n=3), build_system(Family.MAGIC, n=3))

    def test_unsupported_parameters(self) -> None:
        with self.assertRaises(ValueError):
            build_system("no-such-family", n=3)
        with self.assertRaises(ValueError):
            build_system(Family.FRANKLIN8, n=4)
        with self.assertRaises(ValueError):
            build_system(Family.MAGIC, n=0)
        with self.assertRaises(ValueError):
            build_system(Family.MAGIC)
        with self.assertRaises(ValueError):
            build_system(Family.MAGIC_CUBE, n=3, d=4)
        with self.assertRaises(ValueError):
            build_system(Family.MAGIC, n=3, d=3)
        with self.assertRaises(ValueError):
            build_system(Family.GRAPH_LABELING)

    def test_params(self) -> None:
        self.assertEqual(build_system(Family.MAGIC, n=3).params, {"n": 3})
        self.assertEqual(build_system(Family.MAGIC_CUBE, n=3).params, {"n": 3, "d": 3})
        self.assertEqual(
            build_system(Family.SEMI_MAGIC_HYPERCUBE, n=2, d=4).params, {"n": 2, "d": 4}
        )

    def test_serialization(self) -> None:
        sys = build_system(Family.PANDIAGONAL, n=4)
        data = sys.to_dict()
        self.assertEqual(data["family"], "pandiagonal")
        self.assertEqual(len(data["shape"]["cells"]), 16)
        self.assertEqual(ConeSystem.from_dict(data), sys)
        del data["grading"]
        with self.assertRaises(SchemaError):
            ConeSystem.from_dict(data)


class TestMembership(unittest.TestCase):
    def test_historical_squares(self) -> None:
        self.assertEqual(verify_member(build_system(Family.MAGIC, n=3), LOH_SHU), 15)
        self.assertEqual(verify_member(build_system(Family.MAGIC, n=4), DURER), 34)
        self.assertEqual(verify_member(build_system(Family.PANDIAGONAL, n=4), JAINA), 34)
        franklin = build_system(Family.FRANKLIN8)
        self.assertEqual(verify_member(franklin, FRANKLIN_F1), 260)
        self.assertEqual(verify_member(franklin, FRANKLIN_F2), 260)

    def test_durer_is_not_pandiagonal(self) -> None:
        with self.assertRaises(NotAMemberError) as cm:
            verify_member(build_system(Family.PANDIAGONAL, n=4), DURER)
        self.assertIsNotNone(cm.exception.row)

    def test_violated_row_is_reported(self) -> None:
        broken = (9, 4, 2, 3, 5, 7, 8, 1, 6)
        with self.assertRaises(NotAMemberError) as cm:
            verify_member(build_system(Family.MAGIC, n=3), broken)
        # rows 1 and 2 hold, column 0 is the first violated equation
        self.assertEqual(cm.exception.row, 2)

    def test_bad_vectors(self) -> None:
        sys = build_system(Family.MAGIC, n=3)
        with self.assertRaises(NotAMemberError):
            verify_member(sys, (-1, 1, 0, 1, 0, -1, 0, -1, 1))
        with self.assertRaises(ValueError):
            verify_member(sys, LOH_SHU[:8])

    def test_lattice_point(self) -> None:
        sys = build_system(Family.MAGIC, n=3)
        p = sys.point(LOH_SHU)
        self.assertEqual(p.degree, 15)
        self.assertEqual(len(p), 9)
        q = p + sys.point((1,) * 9)
        self.assertEqual(q.degree, 18)
        self.assertEqual(q.vector[0], 5)
        self.assertEqual(LatticePoint.from_dict(p.to_dict()), p)
        with self.assertRaises(NotAMemberError):
            LatticePoint((1, -1), 0)
        with self.assertRaises(SchemaError):
            LatticePoint.from_dict({"vector": [1, 2]})


class TestNaturalSquares(unittest.TestCase):
    def test_odd(self) -> None:
        self.assertEqual(natural_square_odd(3), [[2, 7, 6], [9, 5, 1], [4, 3, 8]])
        for n in (3, 5, 7):
            square = natural_square_odd(n)
            self.assertEqual(sorted(flatten(square)), list(range(1, n * n + 1)))
            sys = build_system(Family.MAGIC, n=n)
            self.assertEqual(verify_member(sys, flatten(square)), n * (n * n + 1) // 2)
        with self.assertRaises(ValueError):
            natural_square_odd(4)

    def test_even(self) -> None:
        self.assertEqual(natural_square_even(4)[0], [1, 15, 14, 4])
        for n in (4, 8):
            square = natural_square_even(n)
            self.assertEqual(sorted(flatten(square)), list(range(1, n * n + 1)))
            sys = build_system(Family.MAGIC, n=n)
            self.assertEqual(verify_member(sys, flatten(square)), n * (n * n + 1) // 2)
        with self.assertRaises(ValueError):
            natural_square_even(6)


class TestGrids(unittest.TestCase):
    def test_grid_helpers(self) -> None:
        self.assertEqual(as_grid(LOH_SHU, 3), [[4, 9, 2], [3, 5, 7], [8, 1, 6]])
        self.assertEqual(flatten(as_grid(LOH_SHU, 3)), LOH_SHU)
        self.assertEqual(flatten([[[1, 2], [3, 4]], [[5, 6], [7, 8]]]), tuple(range(1, 9)))
        self.assertEqual(render_grid(LOH_SHU, 3), "4 9 2\n3 5 7\n8 1 6")
        self.assertEqual(render_grid((1, 10, 100, 0), 2), "  1  10\n100   0")
        with self.assertRaises(ValueError):
            as_grid((1, 2, 3), 2)


class TestFranklinLift(unittest.TestCase):
    def test_block_lift(self) -> None:
        lifted = franklin_block_lift(FRANKLIN_F1)
        self.assertEqual(lifted.degree, 520)
        self.assertEqual(len(lifted), 256)
        sys16 = build_system(Family.FRANKLIN16)
        self.assertEqual(verify_member(sys16, lifted.vector), 520)
        self.assertEqual(lifted.vector[8 * 16 + 8], FRANKLIN_F1[0])

    def test_block_lift_of_lattice_point(self) -> None:
        p = build_system(Family.FRANKLIN8).point(FRANKLIN_F2)
        self.assertEqual(franklin_block_lift(p).degree, 520)

    def test_block_lift_rejects(self) -> None:
        with self.assertRaises(NotAMemberError):
            franklin_block_lift((1,) + (0,) * 63)
        with self.assertRaises(ValueError):
            franklin_block_lift((1,) * 10)
        with self.assertRaises(NotAMemberError):
            franklin_block_lift(DURER * 4)


class TestLatinSquares(unittest.TestCase):
    def test_latin_square_counts(self) -> None:
        self.assertEqual(len(semi_magic_latin_squares(1)), 1)
        self.assertEqual(len(semi_magic_latin_squares(3)), 12)
        self.assertEqual(len(semi_magic_latin_squares(4)), 576)

    def test_bijection(self) -> None:
        """Latin squares and stochastic semi-magic cubes correspond."""
        sys = build_system(Family.SEMI_MAGIC_HYPERCUBE, n=3, d=3)
        for square in semi_magic_latin_squares(3):
            cube = latin_square_to_cube(square)
            self.assertEqual(verify_member(sys, cube), 1)
            self.assertEqual(latin_square_bijection(cube, 3), [list(row) for row in square])

    def test_bijection_rejects(self) -> None:
        with self.assertRaises(NotAMemberError):
            latin_square_bijection((2,) + (0,) * 26, 3)
        with self.assertRaises(NotAMemberError):
            latin_square_bijection((0,) * 27, 3)
        with self.assertRaises(ValueError):
            latin_square_to_cube([[1, 2], [1, 2]])


if __name__ == "__main__":
    unittest.main()
