"""
Local clustering coefficients and the closed forms they converge to for
SE-A with z = 1, where every vertex of degree d has coefficient 2/d.
"""

import math

import numpy as np
from pydantic import BaseModel
from scipy.special import zeta

from analysis.degree import theoretical_degree_pmf
from graph.state import Graph


class ClusteringStats(BaseModel):
    per_vertex: list[float]
    mean: float
    variance: float


def closed_wedges(adj: list[set[int]], v: int) -> int:
    """Number of edges among the neighbours of v."""
    neighbours = adj[v]
    total = 0
    for w in neighbours:
        small, large = (adj[w], neighbours) if len(adj[w]) <= len(neighbours) else (neighbours, adj[w])
        total += sum(1 for x in small if x in large)
    return total // 2


def local_clustering(g: Graph, v: int, adj: list[set[int]] | None = None) -> float:
    """2E_v / (d(d-1)); vertices of degree below 2 get 0."""
    adj = g.adjacency() if adj is None else adj
    d = len(adj[v])
    if d < 2:
        return 0.0
    return 2 * closed_wedges(adj, v) / (d * (d - 1))


def clustering_stats(g: Graph) -> ClusteringStats:
    if g.num_vertices == 0:
        raise ValueError("clustering of an empty graph is undefined")
    adj = g.adjacency()
    per_vertex = [local_clustering(g, v, adj) for v in range(g.num_vertices)]
    values = np.array(per_vertex)
    return ClusteringStats(
        per_vertex=per_vertex,
        mean=float(values.mean()),
        variance=float(values.var()),
    )


def theoretical_lcc_constants() -> tuple[float, float]:
    """Limiting mean and variance of the local clustering coefficient."""
    pi2 = math.pi**2
    c_avg = 2 * pi2 - 19
    variance = 24 * float(zeta(3)) - 330 + 70 * pi2 - 4 * pi2**2
    return c_avg, variance


def lcc_pmf(c: float) -> float:
    """Mass of the limiting clustering law at c = 2/d, d >= 2."""
    if c <= 0 or c > 1:
        raise ValueError(f"clustering value {c} is outside (0, 1]")
    d = round(2 / c)
    if d < 2 or not math.isclose(2 / c, d, rel_tol=1e-9):
        raise ValueError(f"clustering value {c} is not of the form 2/d")
    return theoretical_degree_pmf(2, d)
