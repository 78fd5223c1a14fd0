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
from fractions import Fraction

from lsst.ts.magiccones import (
    Family,
    Graph,
    Labeling,
    NotPositiveError,
    SchemaError,
    bipartite_components,
    bipartite_to_digraph,
    birkhoff_vertices,
    build_system,
    cayley_digraph,
    cayley_labeling,
    complete,
    complete_bipartite,
    count_points,
    counting_function,
    digraph_to_bipartite,
    dimension,
    face_poset,
    faces,
    gamma,
    generalized_petersen,
    hilbert_basis,
    labeling_cone,
    labeling_from_symmetric_square,
    lift_labeling,
    named_graph,
    oriented_octahedron,
    perfect_matchings,
    petersen,
    pi,
    platonic,
    positify,
    restrict_labeling,
    symmetric_group_table,
    symmetric_square,
)


def pendant_k4() -> Graph:
    """K4 with a pendant edge at vertex 0; the edges 01, 02 and 03 vanish
    in every magic labeling."""
    return Graph(5, complete(4).edges + ((0, 4),))


class TestGraph(unittest.TestCase):
    def test_normalization(self) -> None:
        g = Graph(3, ((1, 0), (2, 2)))
        self.assertEqual(g.edges, ((0, 1), (2, 2)))
        self.assertEqual(g.index((1, 0)), 0)
        d = Graph(2, ((1, 0), (0, 1)), directed=True)
        self.assertEqual(d.edges, ((1, 0), (0, 1)))

    def test_invalid(self) -> None:
        with self.assertRaises(ValueError):
            Graph(2, ((0, 1), (1, 0)))
        with self.assertRaises(ValueError):
            Graph(2, ((0, 2),))
        with self.assertRaises(ValueError):
            Graph(-1, ())
        with self.assertRaises(SchemaError):
            Graph.from_dict({"n": 2})

    def test_structure(self) -> None:
        g = Graph(5, ((0, 1), (1, 2), (3, 3)))
        self.assertEqual(g.components(), [[0, 1, 2], [3], [4]])
        self.assertEqual(sorted(g.neighbours(1)), [0, 2])
        self.assertFalse(g.is_bipartite())
        self.assertEqual(bipartite_components(g), 2)
        self.assertTrue(complete_bipartite(2, 3).is_bipartite())
        self.assertFalse(complete(3).is_bipartite())
        self.assertEqual(g.subgraph([(2, 1)]).edges, ((1, 2),))
        self.assertEqual(Graph.from_dict(g.to_dict()), g)

    def test_constructors(self) -> None:
        self.assertEqual(gamma(3).q, 6)
        self.assertEqual(pi(3).q, 9)
        self.assertEqual(complete_bipartite(2, 3).edges[0], (0, 2))
        self.assertEqual(petersen(), generalized_petersen(5, 2))
        self.assertEqual(petersen().q, 15)
        with self.assertRaises(ValueError):
            generalized_petersen(4, 2)
        sizes = {
            "tetrahedral": (4, 6),
            "cube": (8, 12),
            "octahedral": (6, 12),
            "dodecahedral": (20, 30),
            "icosahedral": (12, 30),
        }
        for name, (n, q) in sizes.items():
            g = platonic(name)
            self.assertEqual((g.n, g.q), (n, q), name)
            degrees = {len(g.neighbours(v)) for v in range(g.n)}
            self.assertEqual(len(degrees), 1, f"{name} is regular")
        with self.assertRaises(ValueError):
            platonic("torus")

    def test_named_graphs(self) -> None:
        self.assertEqual(named_graph("complete:4"), complete(4))
        self.assertEqual(named_graph("gamma:3"), gamma(3))
        self.assertEqual(named_graph("pi:2"), pi(2))
        self.assertEqual(named_graph("bipartite:3,3"), complete_bipartite(3, 3))
        self.assertEqual(named_graph("gp:5,2"), petersen())
        self.assertEqual(named_graph("cube"), platonic("cube"))
        self.assertEqual(named_graph("oriented-octahedron"), oriented_octahedron())
        for bad in ("complete", "complete:x", "gp:5", "mobius:3"):
            with self.assertRaises(ValueError, msg=bad):
                named_graph(bad)


class TestLabeling(unittest.TestCase):
    def test_vertex_sums(self) -> None:
        g = Graph(2, ((0, 0), (0, 1)))
        labeling = Labeling(g, (2, 3))
        self.assertEqual(labeling.vertex_sums(), [5, 3])
        self.assertFalse(labeling.is_magic())
        d = Graph(2, ((0, 1), (1, 0), (1, 1)), directed=True)
        self.assertEqual(Labeling(d, (1, 2, 3)).vertex_sums(), [1, 5, 2, 4])

    def test_magic(self) -> None:
        labeling = Labeling(gamma(2), (1, 2, 1))
        self.assertEqual(labeling.magic_sum(), 3)
        self.assertEqual(labeling.support(), ((0, 0), (0, 1), (1, 1)))
        self.assertEqual(labeling.to_matrix(), [[1, 2], [2, 1]])
        self.assertEqual(Labeling.from_dict(labeling.to_dict()), labeling)

    def test_invalid(self) -> None:
        with self.assertRaises(ValueError):
            Labeling(complete(3), (1, 1))
        with self.assertRaises(ValueError):
            Labeling(complete(2), (-1,))

    def test_lift_and_restrict(self) -> None:
        matching = perfect_matchings(complete(4))[0]
        lifted = lift_labeling(matching)
        self.assertEqual(lifted.graph, gamma(4))
        self.assertEqual(lifted.magic_sum(), 1)
        self.assertEqual(restrict_labeling(lifted, complete(4)), matching)
        with self.assertRaises(ValueError):
            restrict_labeling(lifted, Graph(4, ()))
        d_lifted = lift_labeling(birkhoff_vertices(oriented_octahedron())[0])
        self.assertEqual(d_lifted.graph, pi(6))

    def test_symmetric_squares(self) -> None:
        labeling = Labeling(gamma(3), (1, 2, 0, 0, 1, 2))
        square = symmetric_square(labeling)
        self.assertEqual(square, [[1, 2, 0], [2, 0, 1], [0, 1, 2]])
        self.assertEqual(labeling_from_symmetric_square(square), labeling)
        with self.assertRaises(ValueError):
            labeling_from_symmetric_square([[1, 2], [0, 1]])
        with self.assertRaises(ValueError):
            symmetric_square(Labeling(pi(1), (1,)))


class TestDigraphs(unittest.TestCase):
    def test_bipartite_round_trip(self) -> None:
        d = oriented_octahedron()
        b = digraph_to_bipartite(d)
        self.assertEqual(b.n, 12)
        self.assertTrue(b.is_bipartite())
        self.assertEqual(len(b.components()), 1)
        self.assertEqual(bipartite_to_digraph(b), d)
        with self.assertRaises(ValueError):
            bipartite_to_digraph(complete(3))
        with self.assertRaises(ValueError):
            bipartite_to_digraph(Graph(4, ((0, 1),)))
        with self.assertRaises(ValueError):
            digraph_to_bipartite(complete(3))

    def test_random_digraphs(self) -> None:
        """Round trips and matching counts on random digraphs with loops."""
        rng = random.Random(11)
        for _ in range(100):
            n = rng.randint(1, 5)
            arcs = [(i, j) for i in range(n) for j in range(n) if rng.random() < 0.5]
            rng.shuffle(arcs)
            d = Graph(n, tuple(arcs), directed=True)
            b = digraph_to_bipartite(d)
            self.assertTrue(b.is_bipartite())
            self.assertEqual(bipartite_to_digraph(b), d, f"{arcs}")
            self.assertEqual(len(birkhoff_vertices(d)), len(perfect_matchings(b)), f"{arcs}")

    def test_birkhoff(self) -> None:
        self.assertEqual(len(birkhoff_vertices(pi(3))), 6)
        self.assertEqual(len(birkhoff_vertices(oriented_octahedron())), 2)
        with self.assertRaises(ValueError):
            birkhoff_vertices(complete(3))

    def test_cayley(self) -> None:
        table = symmetric_group_table(3)
        self.assertEqual(cayley_digraph(table), pi(6))
        labeling = cayley_labeling(table)
        self.assertEqual(labeling.magic_sum(), 15)
        self.assertEqual(sorted(labeling.to_matrix()[0]), list(range(6)))
        with self.assertRaises(ValueError):
            cayley_digraph([[0, 0], [0, 0]])


class TestMatchings(unittest.TestCase):
    def test_counts(self) -> None:
        self.assertEqual(len(perfect_matchings(complete(4))), 3)
        self.assertEqual(len(perfect_matchings(complete(6))), 15)
        self.assertEqual(len(perfect_matchings(complete_bipartite(3, 3))), 6)
        self.assertEqual(len(perfect_matchings(platonic("octahedral"))), 8)
        self.assertEqual(len(perfect_matchings(platonic("cube"))), 9)
        self.assertEqual(len(perfect_matchings(petersen())), 6)
        self.assertEqual(len(perfect_matchings(oriented_octahedron())), 2)
        self.assertEqual(len(perfect_matchings(complete(3))), 0)

    def test_loops_cover_vertices(self) -> None:
        """Matchings of gamma(n) may use loops."""
        self.assertEqual(len(perfect_matchings(gamma(2))), 2)
        self.assertEqual(len(perfect_matchings(gamma(3))), 4)
        for m in perfect_matchings(gamma(3)):
            self.assertEqual(m.magic_sum(), 1)


class TestLabelingCone(unittest.TestCase):
    def setUp(self) -> None:
        self.log = logging.getLogger()

    def test_cone(self) -> None:
        sys = labeling_cone(complete(4))
        self.assertEqual(sys.family, Family.GRAPH_LABELING)
        self.assertEqual(sys.cols, 6)
        self.assertEqual(sys.grading, (1, 1, 1, 0, 0, 0))
        self.assertEqual(build_system(Family.GRAPH_LABELING, graph=complete(4)), sys)
        self.assertEqual(labeling_cone(pi(2)).family, Family.DIGRAPH_LABELING)
        with self.assertRaises(ValueError):
            build_system(Family.DIGRAPH_LABELING, graph=complete(4))

    def test_counts(self) -> None:
        self.assertEqual(
            [count_points(labeling_cone(complete(4)), r) for r in range(3)], [1, 3, 6]
        )
        self.assertEqual(
            [count_points(labeling_cone(complete(3)), r) for r in range(4)], [1, 0, 1, 0]
        )
        self.assertEqual(
            [count_points(labeling_cone(complete(2)), r) for r in range(3)], [1, 1, 1]
        )
        self.assertEqual(
            [count_points(labeling_cone(petersen()), r) for r in range(6)],
            [1, 6, 27, 87, 228, 513],
        )
        self.assertEqual(count_points(labeling_cone(platonic("cube")), 1), 9)
        self.assertEqual(count_points(labeling_cone(gamma(3)), 1), 4)
        self.assertEqual(count_points(labeling_cone(gamma(4)), 1), 10)

    def test_counting_functions(self) -> None:
        k4 = counting_function(labeling_cone(complete(4)))
        self.assertEqual(k4.period, 1)
        self.assertEqual(k4.constituents[0], (1, Fraction(3, 2), Fraction(1, 2)))
        gamma2 = counting_function(labeling_cone(gamma(2)))
        self.assertEqual(gamma2.constituents, ((1, 1),))
        k3 = counting_function(labeling_cone(complete(3)))
        self.assertEqual(k3.constituents, ((1,), (0,)))
        gamma3 = counting_function(labeling_cone(gamma(3)))
        self.assertEqual(gamma3.period, 2)
        self.assertEqual(
            gamma3.constituents[0],
            (1, Fraction(7, 4), Fraction(9, 8), Fraction(1, 4)),
        )
        self.assertEqual(gamma3.constituents[1][0], Fraction(7, 8))
        self.assertEqual([gamma3(r) for r in range(3)], [1, 4, 11])

    def test_octahedron(self) -> None:
        g = platonic("octahedral")
        hb = hilbert_basis(labeling_cone(g))
        self.assertEqual(len(hb), 12)
        self.assertEqual(len(hb.by_degree()[1]), 8)
        qp = counting_function(labeling_cone(g))
        self.assertEqual(qp.period, 2)
        self.assertEqual(
            qp.constituents[0],
            tuple(
                Fraction(x)
                for x in (1, "12/5", "38/15", "3/2", "25/48", "1/10", "1/120")
            ),
        )
        self.assertEqual(qp.constituents[1][0], Fraction(15, 16))
        self.assertEqual(qp(1), 8)

    def test_platonic_counting_functions(self) -> None:
        tetrahedron = platonic("tetrahedral")
        self.assertEqual(tetrahedron, complete(4))
        qp = counting_function(labeling_cone(tetrahedron))
        self.assertEqual(qp.constituents, ((1, Fraction(3, 2), Fraction(1, 2)),))
        cube = counting_function(labeling_cone(platonic("cube")))
        self.assertEqual(cube.period, 1)
        self.assertEqual(
            cube.constituents[0],
            tuple(Fraction(x) for x in (1, "83/30", 3, "5/3", "1/2", "1/15")),
        )
        self.assertEqual(cube(1), 9)

    @unittest.skipUnless(os.environ.get("MAGICCONES_SLOW_TESTS"), "slow test")
    def test_gamma_4(self) -> None:
        qp = counting_function(labeling_cone(gamma(4)))
        self.assertEqual(qp.period, 2)
        even = tuple(Fraction(x) for x in (1, "8/3", "29/9", "13/6", "119/144", "1/6", "1/72"))
        self.assertEqual(qp.constituents[0], even)
        self.assertEqual(qp.constituents[1], (Fraction(15, 16),) + even[1:])
        self.assertEqual(qp(1), 10)


class TestPositivity(unittest.TestCase):
    def test_dimensions(self) -> None:
        for n in range(1, 5):
            self.assertEqual(dimension(gamma(n)), n * (n - 1) // 2, f"gamma({n})")
            self.assertEqual(dimension(pi(n)), (n - 1) ** 2, f"pi({n})")
        self.assertEqual(dimension(petersen()), 5)
        self.assertEqual(dimension(complete_bipartite(3, 3)), 4)
        self.assertEqual(dimension(complete(4)), 2)

    def test_positify(self) -> None:
        star = complete_bipartite(1, 3)
        self.assertEqual(positify(star).edges, ())
        g = pendant_k4()
        self.assertEqual(positify(g).edges, ((1, 2), (1, 3), (2, 3), (0, 4)))
        self.assertEqual(positify(complete(4)), complete(4))

    def test_non_positive_dimension(self) -> None:
        with self.assertLogs(level="WARNING"):
            self.assertEqual(dimension(pendant_k4()), 0)
        with self.assertRaises(NotPositiveError):
            dimension(pendant_k4(), strict=True)
        with self.assertLogs(level="WARNING"):
            self.assertEqual(dimension(complete_bipartite(1, 3)), 0)


class TestFaces(unittest.TestCase):
    def test_k4_triangle(self) -> None:
        all_faces = faces(complete(4))
        self.assertEqual([f.dim for f in all_faces], [0, 0, 0, 1, 1, 1, 2])
        self.assertEqual(len(faces(complete(4), dim=1)), 3)
        top = all_faces[-1]
        self.assertEqual(top.zero_edges, ())
        self.assertEqual(top.to_dict(), {"zero_edges": [], "dim": 2})
        _, covers = face_poset(complete(4))
        self.assertEqual(len(covers), 9)

    def test_birkhoff_3(self) -> None:
        self.assertEqual(len(faces(pi(3), dim=0)), 6)
        self.assertEqual(len(faces(pi(3), dim=3)), 9)
        self.assertEqual(len(faces(pi(3), dim=4)), 1)

    def test_gamma_4_birkhoff_faces(self) -> None:
        """The edges of Γ4 include three copies of the Birkhoff polytope B2,
        one per 4-cycle of K4."""
        cycles = [
            f.positive
            for f in faces(gamma(4), dim=1)
            if len(f.positive.edges) == 4
            and all(i != j for i, j in f.positive.edges)
            and f.positive.is_bipartite()
            and len(f.positive.components()) == 1
        ]
        self.assertEqual(len(cycles), 3)


if __name__ == "__main__":
    unittest.main()
