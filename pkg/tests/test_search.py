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


import itertools
import logging
import os
import random
import unittest
from fractions import Fraction

from lsst.ts.magiccones import (
    Budget,
    BudgetExceededError,
    Family,
    Graph,
    LatticePointSearch,
    build_system,
    count_points,
    enumerate_points,
    verify_member,
    variable_bounds,
)

MAGIC3_COUNTS = [1, 0, 0, 5, 0, 0, 13, 0, 0, 25, 0, 0, 41]
MAGIC4_COUNTS = [1, 8, 48, 200, 675, 1904, 4736, 10608, 21925]
PANDIAGONAL4_COUNTS = [1, 0, 8, 0, 33, 0, 96, 0, 225]


def random_looped_graph(rng: random.Random, directed: bool) -> Graph:
    """Random (di)graph with a loop at every vertex, so that its labeling
    cone is pointed."""
    n = rng.randint(1, 4)
    if directed:
        pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    else:
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = [(i, i) for i in range(n)] + [e for e in pairs if rng.random() < 0.5]
    rng.shuffle(edges)
    return Graph(n, tuple(edges), directed=directed)


def pandiagonal_franklin_8(s: int) -> Fraction:
    """Closed form of the pandiagonal Franklin 8×8 counting function."""
    if s % 4:
        return Fraction(0)
    coefficients = (
        1,
        Fraction(106, 105),
        Fraction(197, 420),
        Fraction(2, 15),
        Fraction(1, 40),
        Fraction(1, 320),
        Fraction(1, 3840),
        Fraction(1, 71680),
        Fraction(1, 2293760),
    )
    return sum((c * s**k for k, c in enumerate(coefficients)), Fraction(0))


class TestLatticePointSearch(unittest.TestCase):
    def setUp(self) -> None:
        self.log = logging.getLogger()
        self.magic3 = build_system(Family.MAGIC, n=3)

    def test_variable_bounds(self) -> None:
        self.assertEqual(variable_bounds(self.magic3, 3), [2, 2, 2, 2, 1, 2, 2, 2, 2])
        self.assertEqual(variable_bounds(self.magic3, 0), [0] * 9)

    def test_magic_3_counts(self) -> None:
        for s, expected in enumerate(MAGIC3_COUNTS):
            self.assertEqual(
                LatticePointSearch(self.magic3, s).count(), expected, f"magic sum {s}"
            )

    def test_magic_4_counts(self) -> None:
        sys = build_system(Family.MAGIC, n=4)
        for s, expected in enumerate(MAGIC4_COUNTS[:7]):
            self.assertEqual(count_points(sys, s), expected, f"magic sum {s}")

    def test_pandiagonal_counts(self) -> None:
        sys = build_system(Family.PANDIAGONAL, n=4)
        for s, expected in enumerate(PANDIAGONAL4_COUNTS):
            self.assertEqual(count_points(sys, s), expected, f"magic sum {s}")
        self.assertEqual(count_points(build_system(Family.PANDIAGONAL, n=5), 1), 10)

    def test_semi_magic_cube_counts(self) -> None:
        sys = build_system(Family.SEMI_MAGIC_HYPERCUBE, n=3, d=3)
        for s, expected in enumerate([1, 12, 132, 847]):
            self.assertEqual(count_points(sys, s), expected, f"magic sum {s}")

    def test_enumeration(self) -> None:
        """Enumerated members are distinct, verified and counted."""
        points = list(LatticePointSearch(self.magic3, 6))
        self.assertEqual(len(points), 13)
        self.assertEqual(len(set(points)), 13)
        for p in points:
            self.assertEqual(verify_member(self.magic3, p), 6)
        again = [p.vector for p in enumerate_points(self.magic3, 6)]
        self.assertEqual(again, points, "enumeration order is deterministic")

    def test_fixed_variables(self) -> None:
        self.assertEqual(LatticePointSearch(self.magic3, 3, fixed={4: 0}).count(), 0)
        self.assertEqual(
            list(LatticePointSearch(self.magic3, 3, fixed={0: 2})),
            [(2, 0, 1, 0, 1, 2, 1, 2, 0)],
        )
        self.assertEqual(LatticePointSearch(self.magic3, 3, fixed={0: 7}).count(), 0)

    def test_upper_bounds(self) -> None:
        points = list(LatticePointSearch(self.magic3, 3, upper=[1] * 9))
        self.assertEqual(points, [(1,) * 9])

    def test_root_split(self) -> None:
        split = LatticePointSearch(self.magic3, 6).root_split()
        self.assertIsNotNone(split)
        j, values = split
        self.assertEqual(
            sum(LatticePointSearch(self.magic3, 6, fixed={j: v}).count() for v in values),
            13,
        )
        self.assertIsNone(LatticePointSearch(self.magic3, 0).root_split())

    def test_negative_degree(self) -> None:
        with self.assertRaises(ValueError):
            LatticePointSearch(self.magic3, -1)
        with self.assertRaises(ValueError):
            count_points(self.magic3, -1)

    def test_node_budget(self) -> None:
        sys = build_system(Family.MAGIC, n=4)
        with self.assertRaises(BudgetExceededError) as cm:
            LatticePointSearch(sys, 5, budget=Budget(nodes=3)).count()
        self.assertEqual(cm.exception.budget, "nodes")
        self.assertEqual(cm.exception.limit, 3)

    def test_worker_pool(self) -> None:
        self.assertEqual(count_points(self.magic3, 9, workers=2), 25)

    def test_worker_pool_budget(self) -> None:
        """Subtrees counted in the pool spend the caller's budget."""
        with self.assertRaises(BudgetExceededError) as cm:
            count_points(self.magic3, 9, workers=2, budget=Budget(nodes=20))
        self.assertEqual(cm.exception.budget, "nodes")
        self.assertEqual(cm.exception.limit, 20)

        budget = Budget(nodes=100_000)
        self.assertEqual(count_points(self.magic3, 9, workers=2, budget=budget), 25)
        self.assertGreater(budget.counts["nodes"], 0)

    def test_zero_sum(self) -> None:
        """Every pointed cone has exactly one member of sum 0."""
        systems = [build_system(Family.MAGIC, n=n) for n in (3, 4)]
        systems += [build_system(Family.SEMI_MAGIC, n=n) for n in range(1, 5)]
        systems += [build_system(Family.PANDIAGONAL, n=n) for n in (3, 4, 5)]
        systems += [build_system(Family.SYMMETRIC_MAGIC, n=n) for n in range(1, 5)]
        systems += [build_system(Family.PANDIAGONAL_SYMMETRIC, n=n) for n in (3, 4, 5)]
        systems.append(build_system(Family.MAGIC_CUBE, n=3))
        systems += [
            build_system(Family.SEMI_MAGIC_HYPERCUBE, n=n, d=d) for n in (2, 3) for d in (2, 3)
        ]
        rng = random.Random(2024)
        for k in range(200):
            if k % 2:
                sys = rng.choice(systems)
            else:
                g = random_looped_graph(rng, k % 4 == 0)
                family = Family.DIGRAPH_LABELING if g.directed else Family.GRAPH_LABELING
                sys = build_system(family, graph=g)
            self.assertEqual(count_points(sys, 0), 1, f"case {k}")

    def test_sums_of_members_are_found(self) -> None:
        """Random sums of degree 3 members show up in the enumeration."""
        generators = list(LatticePointSearch(self.magic3, 3))
        self.assertEqual(len(generators), 5)
        by_degree = {}
        rng = random.Random(1729)
        for _ in range(200):
            k = rng.randint(1, 4)
            chosen = [rng.choice(generators) for _ in range(k)]
            total = tuple(sum(column) for column in zip(*chosen))
            s = 3 * k
            if s not in by_degree:
                by_degree[s] = set(LatticePointSearch(self.magic3, s))
            self.assertIn(total, by_degree[s])

    def test_adding_the_all_ones_square(self) -> None:
        """Adding the all-ones square embeds degree s into degree s + 3."""
        ones = (1,) * 9
        for s in (3, 6):
            shifted = {
                tuple(a + b for a, b in zip(p, ones))
                for p in LatticePointSearch(self.magic3, s)
            }
            self.assertTrue(shifted <= set(LatticePointSearch(self.magic3, s + 3)))

    @unittest.skipUnless(os.environ.get("MAGICCONES_SLOW_TESTS"), "slow test")
    def test_franklin_counts(self) -> None:
        sys = build_system(Family.FRANKLIN8)
        expected = [1, 0, 34, 64, 483, 1152, 4228, 9792, 25957]
        for s, value in zip(itertools.count(0, 2), expected):
            self.assertEqual(count_points(sys, s), value, f"magic sum {s}")
        self.assertEqual(count_points(sys, 3), 0)

    @unittest.skipUnless(os.environ.get("MAGICCONES_SLOW_TESTS"), "slow test")
    def test_pandiagonal_franklin_counts(self) -> None:
        sys = build_system(Family.PANDIAGONAL_FRANKLIN8)
        counts = [count_points(sys, s) for s in range(0, 13, 4)]
        self.assertEqual(counts, [1, 32, 417, 3072])
        self.assertEqual(counts, [pandiagonal_franklin_8(s) for s in range(0, 13, 4)])
        self.assertEqual(count_points(sys, 2), 0)

    @unittest.skipUnless(os.environ.get("MAGICCONES_SLOW_TESTS"), "slow test")
    def test_semi_magic_cube_counts_slow(self) -> None:
        sys = build_system(Family.SEMI_MAGIC_HYPERCUBE, n=3, d=3)
        expected = [1, 12, 132, 847, 3921, 14286, 43687, 116757]
        for s, value in enumerate(expected):
            self.assertEqual(count_points(sys, s), value, f"magic sum {s}")


class TestBudget(unittest.TestCase):
    def test_counters(self) -> None:
        budget = Budget(pairs=2)
        budget.charge("pairs")
        budget.charge("pairs")
        with self.assertRaises(BudgetExceededError):
            budget.charge("pairs")
        budget.charge("unlimited", 10)
        self.assertEqual(budget.counts["unlimited"], 10)

    def test_clock(self) -> None:
        Budget(seconds=60).check_time()
        with self.assertRaises(BudgetExceededError) as cm:
            Budget(seconds=-1).check_time()
        self.assertEqual(cm.exception.budget, "seconds")


if __name__ == "__main__":
    unittest.main()
