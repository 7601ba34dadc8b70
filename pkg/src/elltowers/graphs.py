"""Finite multigraphs in the paired-directed-edge formalism.

A multigraph is a vertex count plus an ordered tuple of undirected edges
given as vertex pairs; loops and parallel edges are allowed.  Undirected
edge j materializes as two directed edges 2j (the pair as listed) and
2j + 1 (its reverse), so inversion is e ^ 1: automatically a
fixed-point-free involution satisfying o(e) = t(inv(e)).

This layout keeps vertex and edge ids dense and stable, which the cover
constructions rely on for deterministic output.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import bareiss_det, solve_linear_fractions


class GraphInputError(ValueError):
    pass


@dataclass(frozen=True)
class MultiGraph:
    n_vertices: int
    edge_pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n_vertices < 1:
            raise GraphInputError("graph needs at least one vertex")
        if not self.edge_pairs:
            raise GraphInputError("graph needs at least one edge")
        for a, b in self.edge_pairs:
            if not (0 <= a < self.n_vertices and 0 <= b < self.n_vertices):
                raise GraphInputError(f"edge ({a},{b}) has an out-of-range vertex index")

    # directed edge structure ------------------------------------------------

    @property
    def n_undirected(self) -> int:
        return len(self.edge_pairs)

    @property
    def n_directed(self) -> int:
        return 2 * len(self.edge_pairs)

    def origin(self, e: int) -> int:
        return self.edge_pairs[e >> 1][e & 1]

    def terminus(self, e: int) -> int:
        return self.edge_pairs[e >> 1][1 - (e & 1)]

    def inverse(self, e: int) -> int:
        return e ^ 1

    @property
    def euler_char(self) -> int:
        return self.n_vertices - self.n_undirected

    def valencies(self) -> list[int]:
        val = [0] * self.n_vertices
        for a, b in self.edge_pairs:
            val[a] += 1
            val[b] += 1
        return val

    def is_connected(self) -> bool:
        adj = [[] for _ in range(self.n_vertices)]
        for a, b in self.edge_pairs:
            adj[a].append(b)
            adj[b].append(a)
        seen = [False] * self.n_vertices
        seen[0] = True
        stack = [0]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        return all(seen)


def build_graph(vertex_count: int, undirected_edge_list) -> MultiGraph:
    """Materialize a multigraph from a list of vertex pairs.

    Loops [i, i] and repeated pairs are allowed; the pair order is kept, so
    edge ids are reproducible across runs.
    """
    pairs = tuple((int(a), int(b)) for a, b in undirected_edge_list)
    return MultiGraph(int(vertex_count), pairs)


@dataclass(frozen=True)
class ValidationReport:
    connected: bool
    min_valency: int
    euler_characteristic: int
    reasons: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.reasons


def validate_base(g: MultiGraph) -> ValidationReport:
    """Check the three standing hypotheses for tower computations:
    connected, minimum valency at least two, nonzero Euler characteristic."""
    connected = g.is_connected()
    min_val = min(g.valencies())
    chi = g.euler_char
    reasons = []
    if not connected:
        reasons.append("graph is not connected")
    if min_val < 2:
        reasons.append(f"graph has a vertex of valency {min_val} < 2")
    if chi == 0:
        reasons.append("Euler characteristic is zero")
    return ValidationReport(connected, min_val, chi, tuple(reasons))


@dataclass(frozen=True)
class GraphMatrices:
    adjacency: tuple[tuple[int, ...], ...]
    degree: tuple[tuple[int, ...], ...]
    euler_char: int


def matrices(g: MultiGraph) -> GraphMatrices:
    """Adjacency and valency matrices.  A loop contributes 2 to its
    diagonal adjacency entry (one per orientation), matching the valency
    convention, so row sums of A equal the diagonal of D."""
    n = g.n_vertices
    a = [[0] * n for _ in range(n)]
    for e in range(g.n_directed):
        a[g.origin(e)][g.terminus(e)] += 1
    val = g.valencies()
    d = [[val[i] if i == j else 0 for j in range(n)] for i in range(n)]
    return GraphMatrices(
        tuple(tuple(r) for r in a),
        tuple(tuple(r) for r in d),
        g.euler_char,
    )


@dataclass(frozen=True)
class IharaPolynomial:
    """Integer polynomial det(I - A u + (D - I) u^2), stored low degree first."""

    coeffs: tuple[int, ...]

    def __call__(self, u: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * u + c
        return acc

    def derivative_at(self, u: int) -> int:
        acc = 0
        for i in range(len(self.coeffs) - 1, 0, -1):
            acc = acc * u + i * self.coeffs[i]
        return acc

    @property
    def degree(self) -> int:
        d = len(self.coeffs) - 1
        while d > 0 and self.coeffs[d] == 0:
            d -= 1
        return d


def ihara_h(g: MultiGraph) -> IharaPolynomial:
    """The three-term determinant polynomial of the graph.

    Computed by evaluating det(I - A t + (D - I) t^2) at 2|V| + 1 integer
    points with fraction-free determinants and interpolating; the
    interpolation is exact and the coefficients are checked to be integers.
    """
    mats = matrices(g)
    n = g.n_vertices
    deg = 2 * n
    points = list(range(deg + 1))
    values = []
    for t in points:
        m = [
            [
                (1 if i == j else 0)
                - mats.adjacency[i][j] * t
                + ((mats.degree[i][j] - (1 if i == j else 0)) * t * t)
                for j in range(n)
            ]
            for i in range(n)
        ]
        values.append(bareiss_det(m))
    vander = [[t**k for k in range(deg + 1)] for t in points]
    sol = solve_linear_fractions(vander, values)
    coeffs = []
    for c in sol:
        if c.denominator != 1:
            raise RuntimeError("interpolated polynomial is not integral")
        coeffs.append(int(c))
    return IharaPolynomial(tuple(coeffs))


# i/o ------------------------------------------------------------------------


def graph_from_json(doc) -> MultiGraph:
    if not isinstance(doc, dict):
        raise GraphInputError("graph document must be a JSON object")
    try:
        vertices = doc["vertices"]
        edges = doc["edges"]
    except KeyError as missing:
        raise GraphInputError(f"graph document is missing the {missing} field")
    if not isinstance(vertices, int):
        raise GraphInputError("'vertices' must be an integer")
    if not isinstance(edges, list):
        raise GraphInputError("'edges' must be a list of vertex pairs")
    pairs = []
    for idx, item in enumerate(edges):
        if not (isinstance(item, list) and len(item) == 2 and all(isinstance(x, int) for x in item)):
            raise GraphInputError(f"edge #{idx} must be a pair of integers, got {item!r}")
        pairs.append((item[0], item[1]))
    return build_graph(vertices, pairs)


def graph_to_json(g: MultiGraph) -> dict:
    return {"vertices": g.n_vertices, "edges": [[a, b] for a, b in g.edge_pairs]}


def graph_to_dot(g: MultiGraph, name: str = "X") -> str:
    """Undirected DOT rendering; parallel edges are repeated lines."""
    lines = [f"graph {name} {{"]
    for v in range(g.n_vertices):
        lines.append(f"  v{v};")
    for a, b in g.edge_pairs:
        lines.append(f"  v{a} -- v{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"
