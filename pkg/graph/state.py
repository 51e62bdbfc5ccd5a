"""
Growing simple undirected graph.

The graph keeps exactly what the generators touch on every round: an
append-only edge pool (so a uniform edge is one index draw) and a degree
list. Adjacency sets are only built on demand for analysis.

In checked mode every add_edge also checks a set of unordered pairs and
rejects self-loops, duplicates and unknown vertices. The generators never
produce those, so checking is off by default.
"""

from collections import deque

import numpy as np


class GraphInvariantError(Exception):
    """Raised when an operation would break the simple-graph invariants."""

    def __init__(self, message: str, error_code: str | None = None):
        self.message = message
        self.error_code = error_code
        super().__init__(self.message)


class Graph:
    """
    Simple undirected graph with dense vertex ids 0..num_vertices-1.

    edges[k] is the k-th inserted edge, stored with the smaller id first.
    degrees[v] is the number of edges in the pool containing v.
    """

    def __init__(self, num_vertices: int = 0, *, checked: bool = False):
        if num_vertices < 0:
            raise ValueError("num_vertices must be non-negative")

        self.edges: list[tuple[int, int]] = []
        self.degrees: list[int] = [0] * num_vertices
        self._pairs: set[tuple[int, int]] | None = set() if checked else None

    # ── Construction ─────────────────────────────────────────

    @classmethod
    def complete(cls, k: int, *, checked: bool = False) -> "Graph":
        """The complete graph K_k."""
        g = cls(k, checked=checked)
        for a in range(k):
            for b in range(a + 1, k):
                g.add_edge(a, b)
        return g

    @classmethod
    def from_edges(
        cls,
        edges: list[tuple[int, int]],
        num_vertices: int | None = None,
        *,
        checked: bool = True,
    ) -> "Graph":
        """Build a graph from explicit pairs; ids must already be dense."""
        if num_vertices is None:
            num_vertices = 1 + max((max(e) for e in edges), default=-1)
        g = cls(num_vertices, checked=checked)
        for a, b in edges:
            g.add_edge(a, b)
        return g

    def copy(self) -> "Graph":
        clone = Graph(checked=self.checked)
        clone.edges = list(self.edges)
        clone.degrees = list(self.degrees)
        if self._pairs is not None:
            clone._pairs = set(self._pairs)
        return clone

    # ── Growth ───────────────────────────────────────────────

    @property
    def checked(self) -> bool:
        return self._pairs is not None

    @property
    def num_vertices(self) -> int:
        return len(self.degrees)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def add_vertex(self) -> int:
        """Append an isolated vertex and return its id."""
        self.degrees.append(0)
        return len(self.degrees) - 1

    def add_edge(self, a: int, b: int) -> None:
        """Append the edge {a, b} to the pool and bump both degrees."""
        pair = (a, b) if a < b else (b, a)
        if self._pairs is not None:
            if a == b:
                raise GraphInvariantError(f"self-loop on vertex {a}", "self-loop")
            if pair[0] < 0 or pair[1] >= len(self.degrees):
                raise GraphInvariantError(f"edge {pair} references an unknown vertex", "unknown-vertex")
            if pair in self._pairs:
                raise GraphInvariantError(f"duplicate edge {pair}", "duplicate-edge")
            self._pairs.add(pair)

        self.edges.append(pair)
        self.degrees[a] += 1
        self.degrees[b] += 1

    def uniform_random_edge(self, rng: np.random.Generator) -> tuple[int, int]:
        """Return an edge drawn uniformly from the pool."""
        if not self.edges:
            raise GraphInvariantError("cannot draw an edge from an empty pool", "empty-pool")
        return self.edges[int(rng.integers(len(self.edges)))]

    # ── Queries ──────────────────────────────────────────────

    def adjacency(self) -> list[set[int]]:
        """Neighbour sets, built from the pool in O(|E|)."""
        adj: list[set[int]] = [set() for _ in range(self.num_vertices)]
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def is_connected(self) -> bool:
        n = self.num_vertices
        if n <= 1:
            return True
        adj = self.adjacency()
        seen = [False] * n
        seen[0] = True
        queue = deque([0])
        reached = 1
        while queue:
            for w in adj[queue.popleft()]:
                if not seen[w]:
                    seen[w] = True
                    reached += 1
                    queue.append(w)
        return reached == n

    def validate(self) -> list[str]:
        """Full scan of the simple-graph invariants; returns one line per problem."""
        problems = []
        seen: set[tuple[int, int]] = set()
        counted = [0] * self.num_vertices
        for a, b in self.edges:
            if a == b:
                problems.append(f"self-loop on vertex {a}")
                continue
            if not (0 <= a < self.num_vertices and 0 <= b < self.num_vertices):
                problems.append(f"edge ({a}, {b}) references an unknown vertex")
                continue
            pair = (min(a, b), max(a, b))
            if pair in seen:
                problems.append(f"duplicate edge {pair}")
            seen.add(pair)
            counted[a] += 1
            counted[b] += 1
        for v, (stored, actual) in enumerate(zip(self.degrees, counted)):
            if stored != actual:
                problems.append(f"vertex {v} stores degree {stored} but has {actual} edges")
        return problems

    def __repr__(self) -> str:
        return f"Graph(num_vertices={self.num_vertices}, num_edges={self.num_edges})"


def triangle_count(g: Graph) -> int:
    """Exact number of triangles, by intersecting neighbour sets per edge."""
    adj = g.adjacency()
    total = 0
    for a, b in g.edges:
        small, large = (adj[a], adj[b]) if len(adj[a]) <= len(adj[b]) else (adj[b], adj[a])
        total += sum(1 for w in small if w in large)
    # Each triangle is seen once from each of its three edges.
    return total // 3
