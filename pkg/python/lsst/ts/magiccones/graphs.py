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

"""Magic labelings of graphs and digraphs.

Graphs are simple with optional loops. A loop counts once in the sum of
its vertex. Edge order is variable order in the labeling cone.
"""

__all__ = [
    "Graph",
    "Labeling",
    "FaceDescriptor",
    "gamma",
    "complete",
    "complete_bipartite",
    "pi",
    "generalized_petersen",
    "petersen",
    "platonic",
    "oriented_octahedron",
    "named_graph",
    "symmetric_group_table",
    "cayley_digraph",
    "cayley_labeling",
    "digraph_to_bipartite",
    "bipartite_to_digraph",
    "labeling_cone",
    "positify",
    "dimension",
    "bipartite_components",
    "faces",
    "face_poset",
    "perfect_matchings",
    "birkhoff_vertices",
    "lift_labeling",
    "restrict_labeling",
    "symmetric_square",
    "labeling_from_symmetric_square",
]

import itertools
import logging
from dataclasses import dataclass
from typing import Any, Sequence

from .budget import Budget
from .config import Config
from .cones import ConeSystem, Family
from .errors import NotPositiveError, SchemaError
from .hilbert import extreme_rays
from .linalg import IntMatrix

log = logging.getLogger(__name__)

Edge = tuple[int, int]


@dataclass(frozen=True)
class Graph:
    """A graph or digraph on vertices ``0 … n−1``.

    Parameters
    ----------
    n : `int`
        Number of vertices.
    edges : `tuple` [`tuple` [`int`, `int`]]
        Edges ``(i, j)``; undirected edges are stored with ``i ≤ j``.
        Loops ``(i, i)`` are allowed, parallel edges are not.
    directed : `bool`
        True for a digraph; edges are then arcs ``i → j``.
    """

    n: int
    edges: tuple[Edge, ...]
    directed: bool = False

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError(f"Vertex count must be nonnegative, got {self.n}.")
        normalized = []
        for edge in self.edges:
            i, j = (int(v) for v in edge)
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"Edge {edge} out of range for {self.n} vertices.")
            normalized.append((i, j) if self.directed or i <= j else (j, i))
        if len(set(normalized)) != len(normalized):
            raise ValueError(f"Parallel edges in {normalized}.")
        object.__setattr__(self, "edges", tuple(normalized))

    @property
    def q(self) -> int:
        return len(self.edges)

    def index(self, edge: Edge) -> int:
        i, j = edge
        if not self.directed and i > j:
            i, j = j, i
        return self.edges.index((i, j))

    def subgraph(self, edges: Sequence[Edge]) -> "Graph":
        """Spanning subgraph with the given edges, in this graph's order."""
        keep = set(Graph(self.n, tuple(edges), self.directed).edges)
        return Graph(self.n, tuple(e for e in self.edges if e in keep), self.directed)

    def neighbours(self, v: int) -> list[int]:
        result = []
        for i, j in self.edges:
            if i == v:
                result.append(j)
            elif j == v:
                result.append(i)
        return result

    def components(self) -> list[list[int]]:
        """Connected components of the underlying undirected graph."""
        seen: set[int] = set()
        components = []
        for start in range(self.n):
            if start in seen:
                continue
            component = []
            stack = [start]
            seen.add(start)
            while stack:
                v = stack.pop()
                component.append(v)
                for u in self.neighbours(v):
                    if u not in seen:
                        seen.add(u)
                        stack.append(u)
            components.append(sorted(component))
        return components

    def two_coloring(self) -> dict[int, int] | None:
        """Proper 2-coloring of the underlying graph, or `None`."""
        color: dict[int, int] = {}
        for component in self.components():
            color[component[0]] = 0
            stack = [component[0]]
            while stack:
                v = stack.pop()
                for u in self.neighbours(v):
                    if u not in color:
                        color[u] = 1 - color[v]
                        stack.append(u)
                    elif color[u] == color[v]:
                        return None
        return color

    def is_bipartite(self) -> bool:
        return self.two_coloring() is not None

    def to_dict(self) -> dict[str, Any]:
        return {"n": self.n, "directed": self.directed, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "Graph":
        try:
            return cls(
                int(data["n"]),
                tuple((int(i), int(j)) for i, j in data["edges"]),
                bool(data.get("directed", False)),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise SchemaError(f"Malformed graph: {e}") from e


@dataclass(frozen=True)
class Labeling:
    """Nonnegative integer labels on the edges of a graph, in edge order."""

    graph: Graph
    labels: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.labels) != self.graph.q:
            raise ValueError(f"Need {self.graph.q} labels, got {len(self.labels)}.")
        if any(x < 0 for x in self.labels):
            raise ValueError(f"Labels must be nonnegative: {self.labels}.")

    def vertex_sums(self) -> list[int]:
        """Incident label sums; out-sums followed by in-sums for digraphs."""
        n = self.graph.n
        if self.graph.directed:
            out = [0] * n
            into = [0] * n
            for (i, j), x in zip(self.graph.edges, self.labels):
                out[i] += x
                into[j] += x
            return out + into
        sums = [0] * n
        for (i, j), x in zip(self.graph.edges, self.labels):
            sums[i] += x
            if j != i:
                sums[j] += x
        return sums

    def magic_sum(self) -> int | None:
        """The common vertex sum, or `None` if the labeling is not magic."""
        sums = set(self.vertex_sums())
        return sums.pop() if len(sums) == 1 else None

    def is_magic(self) -> bool:
        return self.magic_sum() is not None

    def support(self) -> tuple[Edge, ...]:
        return tuple(e for e, x in zip(self.graph.edges, self.labels) if x)

    def to_matrix(self) -> list[list[int]]:
        """``m[i][j]`` = label of edge ``(i, j)``; symmetric for graphs."""
        n = self.graph.n
        m = [[0] * n for _ in range(n)]
        for (i, j), x in zip(self.graph.edges, self.labels):
            m[i][j] = x
            if not self.graph.directed:
                m[j][i] = x
        return m

    def to_dict(self) -> dict[str, Any]:
        return {"graph": self.graph.to_dict(), "labels": list(self.labels)}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "Labeling":
        try:
            return cls(Graph.from_dict(data["graph"]), tuple(int(x) for x in data["labels"]))
        except (KeyError, TypeError, ValueError) as e:
            raise SchemaError(f"Malformed labeling: {e}") from e


@dataclass(frozen=True)
class FaceDescriptor:
    """A face of the polytope of magic labelings of sum 1.

    ``positive`` is the positive subgraph of the face and ``zero_edges``
    the edges of the ambient graph that vanish on it.
    """

    zero_edges: tuple[Edge, ...]
    positive: Graph
    dim: int

    def to_dict(self) -> dict[str, Any]:
        return {"zero_edges": [list(e) for e in self.zero_edges], "dim": self.dim}


def gamma(n: int) -> Graph:
    """Complete graph with a loop at every vertex."""
    return Graph(n, tuple((i, j) for i in range(n) for j in range(i, n)))


def complete(n: int) -> Graph:
    return Graph(n, tuple(itertools.combinations(range(n), 2)))


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph(a + b, tuple((i, a + j) for i in range(a) for j in range(b)))


def pi(n: int) -> Graph:
    """Complete digraph with a loop at every vertex."""
    return Graph(n, tuple((i, j) for i in range(n) for j in range(n)), directed=True)


def generalized_petersen(n: int, k: int) -> Graph:
    """Outer cycle ``u_i``, spokes ``u_i v_i`` and inner edges
    ``v_i v_{i+k}``; ``u_i = i``, ``v_i = n + i``."""
    if n < 3 or not 1 <= k < n / 2:
        raise ValueError(f"Invalid generalized Petersen parameters {n=} {k=}.")
    edges = [(i, (i + 1) % n) for i in range(n)]
    edges += [(i, n + i) for i in range(n)]
    edges += [(n + i, n + (i + k) % n) for i in range(n)]
    return Graph(2 * n, tuple(edges))


def petersen() -> Graph:
    return generalized_petersen(5, 2)


def platonic(name: str) -> Graph:
    """Skeleton of a platonic solid."""
    if name == "tetrahedral":
        return complete(4)
    if name == "cube":
        return generalized_petersen(4, 1)
    if name == "octahedral":
        opposite = {(0, 5), (1, 4), (2, 3)}
        return Graph(6, tuple(e for e in itertools.combinations(range(6), 2) if e not in opposite))
    if name == "dodecahedral":
        return generalized_petersen(10, 2)
    if name == "icosahedral":
        edges = [(0, i) for i in range(1, 6)]
        edges += [(i, i % 5 + 1) for i in range(1, 6)]
        edges += [(i, 5 + i) for i in range(1, 6)]
        edges += [(i, 5 + i % 5 + 1) for i in range(1, 6)]
        edges += [(5 + i, 5 + i % 5 + 1) for i in range(1, 6)]
        edges += [(5 + i, 11) for i in range(1, 6)]
        return Graph(12, tuple(edges))
    raise ValueError(f"Unknown platonic solid {name!r}.")


def oriented_octahedron() -> Graph:
    """An orientation of the octahedron whose bipartite graph is a single
    12-cycle, so it has exactly two perfect matchings."""
    arcs = (
        (0, 1), (0, 2), (1, 2), (1, 5), (2, 4), (2, 5),
        (3, 0), (3, 1), (4, 0), (4, 3), (5, 3), (5, 4),
    )  # fmt: skip
    return Graph(6, arcs, directed=True)


def named_graph(name: str) -> Graph:
    """Graph from a short name.

    ``complete:n``, ``gamma:n``, ``pi:n``, ``bipartite:a,b``, ``gp:n,k``,
    ``petersen``, ``oriented-octahedron`` and the platonic solid names
    are understood.
    """
    base, _, arg = name.partition(":")
    try:
        params = [int(x) for x in arg.split(",")] if arg else []
    except ValueError:
        raise ValueError(f"Bad parameters in graph name {name!r}.") from None
    builders = {
        "complete": (complete, 1),
        "gamma": (gamma, 1),
        "pi": (pi, 1),
        "bipartite": (complete_bipartite, 2),
        "gp": (generalized_petersen, 2),
        "petersen": (petersen, 0),
        "oriented-octahedron": (oriented_octahedron, 0),
    }
    if base in builders:
        builder, arity = builders[base]
        if len(params) != arity:
            raise ValueError(f"Graph {base!r} takes {arity} parameters, got {name!r}.")
        return builder(*params)
    if not params:
        return platonic(base)
    raise ValueError(f"Unknown graph {name!r}.")


def symmetric_group_table(n: int) -> list[list[int]]:
    """Multiplication table of ``S_n`` on permutations in lexicographic
    order; ``table[i][j]`` is the index of ``g_i ∘ g_j``."""
    elements = list(itertools.permutations(range(n)))
    index = {g: i for i, g in enumerate(elements)}
    return [
        [index[tuple(a[b[k]] for k in range(n))] for b in elements] for a in elements
    ]


def _check_group_table(table: Sequence[Sequence[int]]) -> tuple[int, list[int]]:
    n = len(table)
    if n == 0 or any(len(row) != n or any(not 0 <= x < n for x in row) for row in table):
        raise ValueError("Multiplication table must be square with entries in range.")
    identity = next(
        (
            e
            for e in range(n)
            if all(table[e][x] == x and table[x][e] == x for x in range(n))
        ),
        None,
    )
    if identity is None:
        raise ValueError("Multiplication table has no identity.")
    inverse = []
    for x in range(n):
        y = next((y for y in range(n) if table[x][y] == identity), None)
        if y is None or table[y][x] != identity:
            raise ValueError(f"Element {x} has no inverse.")
        inverse.append(y)
    for a, b, c in itertools.product(range(n), repeat=3):
        if table[table[a][b]][c] != table[a][table[b][c]]:
            raise ValueError(f"Multiplication is not associative at {(a, b, c)}.")
    return identity, inverse


def cayley_digraph(table: Sequence[Sequence[int]]) -> Graph:
    """Complete digraph with loops on the elements of a group.

    Raises
    ------
    ValueError
        If ``table`` is not the multiplication table of a group.
    """
    _check_group_table(table)
    return pi(len(table))


def cayley_labeling(table: Sequence[Sequence[int]]) -> Labeling:
    """Label the arc ``g_i → g_j`` with the index ``α`` of
    ``g_j·g_i⁻¹``; magic with sum ``n(n−1)/2``."""
    _, inverse = _check_group_table(table)
    graph = pi(len(table))
    return Labeling(graph, tuple(table[j][inverse[i]] for i, j in graph.edges))


def digraph_to_bipartite(d: Graph) -> Graph:
    """Bipartite graph with an edge ``(a_i, b_j)`` per arc ``i → j``;
    ``a_i = i`` and ``b_j = n + j``."""
    if not d.directed:
        raise ValueError("Expected a digraph.")
    return Graph(2 * d.n, tuple((i, d.n + j) for i, j in d.edges))


def bipartite_to_digraph(
    b: Graph, parts: tuple[Sequence[int], Sequence[int]] | None = None
) -> Graph:
    """Inverse of `digraph_to_bipartite`.

    Parameters
    ----------
    b : `Graph`
        A bipartite graph.
    parts : `tuple`, optional
        The parts ``(A, B)``; defaults to the two halves of the vertex
        range.

    Raises
    ------
    ValueError
        If the parts differ in size or an edge does not join them.
    """
    if b.directed:
        raise ValueError("Expected an undirected bipartite graph.")
    if parts is None:
        half = b.n // 2
        parts = (range(half), range(half, b.n))
    a_part, b_part = list(parts[0]), list(parts[1])
    if len(a_part) != len(b_part):
        raise ValueError(f"Parts of sizes {len(a_part)} and {len(b_part)} do not match.")
    a_index = {v: i for i, v in enumerate(a_part)}
    b_index = {v: i for i, v in enumerate(b_part)}
    arcs = []
    for u, v in b.edges:
        if u in a_index and v in b_index:
            arcs.append((a_index[u], b_index[v]))
        elif v in a_index and u in b_index:
            arcs.append((a_index[v], b_index[u]))
        else:
            raise ValueError(f"Edge {(u, v)} does not join the two parts.")
    return Graph(len(a_part), tuple(arcs), directed=True)


def labeling_cone(g: Graph) -> ConeSystem:
    """Cone of magic labelings of ``g``.

    Every vertex sum is equated to the sum at vertex 0; for digraphs both
    out- and in-sums are equated to the out-sum at vertex 0.
    """
    q = g.q

    def incidence(v: int, side: int | None = None) -> list[int]:
        if side is None:
            return [int(v in e) for e in g.edges]
        return [int(e[side] == v) for e in g.edges]

    if g.directed:
        reference = incidence(0, 0)
        rows = [
            [a - b for a, b in zip(incidence(v, 0), reference)] for v in range(1, g.n)
        ]
        rows += [[a - b for a, b in zip(incidence(v, 1), reference)] for v in range(g.n)]
        family = Family.DIGRAPH_LABELING
    else:
        reference = incidence(0)
        rows = [[a - b for a, b in zip(incidence(v), reference)] for v in range(1, g.n)]
        family = Family.GRAPH_LABELING
    rows = [row for row in rows if any(row)]
    return ConeSystem(
        family,
        IntMatrix.from_rows(rows, cols=q),
        tuple(reference),
        tuple(g.edges),
        g.n,
        graph=g,
    )


def positify(g: Graph) -> Graph:
    """Subgraph of the edges positive in some magic labeling."""
    rays = extreme_rays(labeling_cone(g))
    return Graph(
        g.n,
        tuple(e for k, e in enumerate(g.edges) if any(r[k] for r in rays)),
        g.directed,
    )


def bipartite_components(g: Graph) -> int:
    """Number of bipartite connected components; isolated vertices
    count."""
    count = 0
    for component in g.components():
        vertices = set(component)
        sub = Graph(
            g.n, tuple(e for e in g.edges if e[0] in vertices and e[1] in vertices)
        )
        if sub.is_bipartite():
            count += 1
    return count


def _undirected(g: Graph) -> Graph:
    return digraph_to_bipartite(g) if g.directed else g


def _face_dimension(g: Graph) -> int:
    if g.directed:
        return g.q - 2 * g.n + bipartite_components(digraph_to_bipartite(g))
    return g.q - g.n + bipartite_components(g)


def dimension(g: Graph, strict: bool = False) -> int:
    """Dimension of the polytope of magic labelings of sum 1.

    ``q − n + b`` for a positive graph and ``q − 2n + b`` for a positive
    digraph, with ``b`` the bipartite components of the graph (of its
    bipartite graph for digraphs). A graph that is not positive is
    replaced by its positive subgraph.

    Raises
    ------
    NotPositiveError
        If ``strict`` and ``g`` is not positive.
    """
    positive = positify(g)
    if positive.edges != g.edges:
        zero_edges = [e for e in g.edges if e not in positive.edges]
        log.warning(f"Graph is not positive; {zero_edges=}")
        if strict:
            raise NotPositiveError(f"Edges {zero_edges} vanish in every magic labeling.")
    return _face_dimension(positive)


def faces(g: Graph, dim: int | None = None, budget: Budget | None = None) -> list[FaceDescriptor]:
    """Nonempty faces of the polytope of magic labelings of sum 1.

    Faces are the positive subgraphs obtained by forcing subsets of edges
    to zero; the positive part of a face is the union of supports of the
    extreme rays vanishing on the zero set.
    """
    if budget is None:
        budget = Budget(subsets=Config.max_search_nodes)
    rays = extreme_rays(labeling_cone(g))
    masks = [sum(1 << k for k, x in enumerate(r) if x) for r in rays]
    seen: dict[int, FaceDescriptor] = {}
    for zero_count in range(g.q + 1):
        for zero in itertools.combinations(range(g.q), zero_count):
            budget.charge("subsets")
            zero_mask = sum(1 << k for k in zero)
            support = 0
            for mask in masks:
                if not mask & zero_mask:
                    support |= mask
            if not support or support in seen:
                continue
            positive = Graph(
                g.n, tuple(e for k, e in enumerate(g.edges) if support >> k & 1), g.directed
            )
            zero_edges = tuple(e for k, e in enumerate(g.edges) if not support >> k & 1)
            seen[support] = FaceDescriptor(zero_edges, positive, _face_dimension(positive))
    result = sorted(seen.values(), key=lambda f: (f.dim, f.positive.edges))
    if dim is not None:
        result = [f for f in result if f.dim == dim]
    log.debug(f"Enumerated {len(result)} faces")
    return result


def face_poset(g: Graph) -> tuple[list[FaceDescriptor], list[tuple[int, int]]]:
    """Faces and the covering pairs ``(i, j)`` of face ``i`` in face
    ``j``."""
    all_faces = faces(g)
    edge_sets = [set(f.positive.edges) for f in all_faces]
    covers = [
        (i, j)
        for i, lower in enumerate(all_faces)
        for j, upper in enumerate(all_faces)
        if upper.dim == lower.dim + 1 and edge_sets[i] < edge_sets[j]
    ]
    return all_faces, covers


def perfect_matchings(g: Graph) -> list[Labeling]:
    """All 0/1 magic labelings of sum 1; a loop covers its vertex.

    For a digraph these are the matchings of its bipartite graph,
    transported back to arcs.
    """
    graph = _undirected(g)
    by_vertex: list[list[tuple[int, int]]] = [[] for _ in range(graph.n)]
    for k, (i, j) in enumerate(graph.edges):
        by_vertex[i].append((k, j))
        if i != j:
            by_vertex[j].append((k, i))
    covered = [False] * graph.n
    chosen: list[int] = []
    matchings = []

    def extend() -> None:
        v = next((v for v in range(graph.n) if not covered[v]), None)
        if v is None:
            labels = [0] * graph.q
            for k in chosen:
                labels[k] = 1
            matchings.append(Labeling(g, tuple(labels)))
            return
        covered[v] = True
        for k, u in by_vertex[v]:
            if u == v or not covered[u]:
                covered[u] = True
                chosen.append(k)
                extend()
                chosen.pop()
                covered[u] = u == v
        covered[v] = False

    extend()
    return matchings


def birkhoff_vertices(d: Graph) -> list[Labeling]:
    """Permutation matrices supported on the arcs of ``d``."""
    if not d.directed:
        raise ValueError("Expected a digraph.")
    arcs = {e: k for k, e in enumerate(d.edges)}
    vertices = []
    for sigma in itertools.permutations(range(d.n)):
        if all((i, sigma[i]) in arcs for i in range(d.n)):
            labels = [0] * d.q
            for i in range(d.n):
                labels[arcs[(i, sigma[i])]] = 1
            vertices.append(Labeling(d, tuple(labels)))
    return vertices


def lift_labeling(l: Labeling) -> Labeling:
    """Extend by zero to ``gamma(n)`` (``pi(n)`` for digraphs)."""
    g = l.graph
    big = pi(g.n) if g.directed else gamma(g.n)
    labels = dict(zip(g.edges, l.labels))
    return Labeling(big, tuple(labels.get(e, 0) for e in big.edges))


def restrict_labeling(l: Labeling, g: Graph) -> Labeling:
    """Restrict to the edges of ``g``.

    Raises
    ------
    ValueError
        If an edge outside ``g`` carries a nonzero label.
    """
    labels = dict(zip(l.graph.edges, l.labels))
    keep = set(g.edges)
    dropped = [e for e, x in labels.items() if x and e not in keep]
    if dropped:
        raise ValueError(f"Edges {dropped} are labeled but not in the graph.")
    return Labeling(g, tuple(labels.get(e, 0) for e in g.edges))


def symmetric_square(l: Labeling) -> list[list[int]]:
    """Symmetric matrix with ``m[i][j] = m[j][i]`` the label of ``e_ij``."""
    if l.graph.directed:
        raise ValueError("Expected a labeling of an undirected graph.")
    return l.to_matrix()


def labeling_from_symmetric_square(m: Sequence[Sequence[int]]) -> Labeling:
    """Inverse of `symmetric_square`, as a labeling of ``gamma(n)``."""
    n = len(m)
    if any(len(row) != n for row in m) or any(
        m[i][j] != m[j][i] for i in range(n) for j in range(n)
    ):
        raise ValueError(f"Not a symmetric square matrix: {m}.")
    g = gamma(n)
    return Labeling(g, tuple(m[i][j] for i, j in g.edges))
