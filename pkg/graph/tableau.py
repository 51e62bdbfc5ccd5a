"""
Hyperedge tableau H: the whole-sampling pool for m > 2.

H is a list of m-sets of vertex ids, a possibly non-simple m-uniform
hypergraph. Correct generation needs two invariants after every round:

  1. no vertex appears twice inside one hyperedge;
  2. every vertex appears in exactly degree(v) hyperedges.

A stronger, optional Invariant 3 (used by SE-B*) asks that for every ordered
pair (x, y), x != y, some hyperedge contains x but not y.

The incidence index (vertex -> positions of hyperedges containing it) is
maintained only when requested, because only SE-B* reads it.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from graph.initial import check_feasible
from graph.state import Graph
from sampling.systematic import FrequencyBag, rsp_partition

logger = logging.getLogger(__name__)

Hyperedge = list[int]


class IncidenceIndex:
    """
    vertex -> list of hyperedge positions, with O(1) add and remove.

    _slot[(v, pos)] is the index of pos inside _positions[v]; removal swaps
    the entry with the last one in that list.
    """

    def __init__(self):
        self._positions: list[list[int]] = []
        self._slot: dict[tuple[int, int], int] = {}

    def _ensure(self, v: int) -> None:
        while len(self._positions) <= v:
            self._positions.append([])

    def add(self, v: int, pos: int) -> None:
        self._ensure(v)
        bucket = self._positions[v]
        self._slot[(v, pos)] = len(bucket)
        bucket.append(pos)

    def remove(self, v: int, pos: int) -> None:
        bucket = self._positions[v]
        index = self._slot.pop((v, pos))
        last = bucket.pop()
        if last != pos:
            bucket[index] = last
            self._slot[(v, last)] = index

    def positions(self, v: int) -> list[int]:
        if v >= len(self._positions):
            return []
        return self._positions[v]

    def as_sets(self) -> dict[int, set[int]]:
        return {v: set(bucket) for v, bucket in enumerate(self._positions) if bucket}


class HyperedgeTableau:
    """Append-and-mutate list of hyperedges of arity m."""

    def __init__(self, m: int, *, with_incidence: bool = False):
        if m < 2:
            raise ValueError("hyperedge arity must be at least 2")
        self.m = m
        self.edges: list[Hyperedge] = []
        self.incidence: IncidenceIndex | None = IncidenceIndex() if with_incidence else None

    def __len__(self) -> int:
        return len(self.edges)

    @classmethod
    def from_edge_pool(cls, g: Graph, *, with_incidence: bool = False) -> "HyperedgeTableau":
        """For m = 2 the edge pool itself satisfies Invariants 1-2."""
        t = cls(2, with_incidence=with_incidence)
        for a, b in g.edges:
            t.append([a, b])
        return t

    # ── Mutation ─────────────────────────────────────────────

    def append(self, members: Hyperedge) -> int:
        pos = len(self.edges)
        self.edges.append(members)
        if self.incidence is not None:
            for v in members:
                self.incidence.add(v, pos)
        return pos

    def replace(self, pos: int, old: int, new: int) -> None:
        """Swap one member of the hyperedge at pos in place."""
        members = self.edges[pos]
        members[members.index(old)] = new
        if self.incidence is not None:
            self.incidence.remove(old, pos)
            self.incidence.add(new, pos)

    def remove(self, pos: int) -> Hyperedge:
        """
        Remove and return the hyperedge at pos; the last hyperedge moves
        into its place so positions stay dense.
        """
        last_pos = len(self.edges) - 1
        removed = self.edges[pos]
        if self.incidence is not None:
            for v in removed:
                self.incidence.remove(v, pos)
        if pos != last_pos:
            moved = self.edges[last_pos]
            self.edges[pos] = moved
            if self.incidence is not None:
                for v in moved:
                    self.incidence.remove(v, last_pos)
                    self.incidence.add(v, pos)
        self.edges.pop()
        return removed

    # ── Access ───────────────────────────────────────────────

    def uniform_random_hyperedge(self, rng: np.random.Generator) -> tuple[int, Hyperedge]:
        if not self.edges:
            raise ValueError("cannot draw from an empty tableau")
        pos = int(rng.integers(len(self.edges)))
        return pos, self.edges[pos]

    def positions_of(self, v: int) -> list[int]:
        """Positions of hyperedges containing v; needs the incidence index."""
        if self.incidence is None:
            raise RuntimeError("tableau was built without an incidence index")
        return self.incidence.positions(v)

    def rebuild_incidence(self) -> dict[int, set[int]]:
        """Incidence computed from scratch, for comparison with the maintained one."""
        fresh: dict[int, set[int]] = {}
        for pos, members in enumerate(self.edges):
            for v in members:
                fresh.setdefault(v, set()).add(pos)
        return fresh


def init_tableau(
    g0: Graph,
    m: int,
    rng: np.random.Generator,
    *,
    with_incidence: bool = False,
) -> HyperedgeTableau:
    """
    Spread the vertex copies of G0 over s = 2|E0|/m hyperedges with random
    systematic partitioning of the bag {v: degree(v)}.

    For m = 2 the tableau is the edge pool itself, so the tableau variants
    sample exactly as SE-A does.
    """
    s = check_feasible(g0, m)
    if m == 2:
        return HyperedgeTableau.from_edge_pool(g0, with_incidence=with_incidence)
    bag = FrequencyBag.from_mapping(dict(enumerate(g0.degrees)))
    partition = rsp_partition(bag, s, m, rng)

    t = HyperedgeTableau(m, with_incidence=with_incidence)
    for group in partition.groups:
        t.append(group)
    logger.debug("tableau initialised with %d hyperedges of %d", s, m)
    return t


# ── Invariant checking ───────────────────────────────────────

@dataclass
class InvariantReport:
    """Violations found by check_invariants; empty lists mean a clean state."""

    arity_mismatches: list[tuple[int, int]] = field(default_factory=list)
    duplicate_members: list[tuple[int, int]] = field(default_factory=list)
    degree_mismatches: list[tuple[int, int, int]] = field(default_factory=list)
    incidence_mismatches: list[int] = field(default_factory=list)
    invariant3_violations: list[tuple[int, int]] | None = None

    @property
    def ok(self) -> bool:
        return not (
            self.arity_mismatches
            or self.duplicate_members
            or self.degree_mismatches
            or self.incidence_mismatches
            or self.invariant3_violations
        )

    @property
    def violation_count(self) -> int:
        return (
            len(self.arity_mismatches)
            + len(self.duplicate_members)
            + len(self.degree_mismatches)
            + len(self.incidence_mismatches)
            + len(self.invariant3_violations or ())
        )

    def summary(self) -> list[str]:
        lines = [f"hyperedge {pos} has {size} members" for pos, size in self.arity_mismatches]
        lines += [f"vertex {v} repeated in hyperedge {pos}" for pos, v in self.duplicate_members]
        lines += [
            f"vertex {v} has degree {d} but {c} hyperedges"
            for v, d, c in self.degree_mismatches
        ]
        lines += [f"incidence index out of date for vertex {v}" for v in self.incidence_mismatches]
        lines += [
            f"every hyperedge containing {x} also contains {y}"
            for x, y in self.invariant3_violations or ()
        ]
        return lines


def invariant3_violations(t: HyperedgeTableau, num_vertices: int) -> list[tuple[int, int]]:
    """
    Every ordered pair (x, y) with no hyperedge containing x but not y.

    For a fixed x those y are exactly the intersection of all hyperedges
    containing x, so the full pair scan costs one pass over the tableau.
    """
    common: list[set[int] | None] = [None] * num_vertices
    for members in t.edges:
        for x in members:
            if x >= num_vertices:
                continue
            if common[x] is None:
                common[x] = set(members)
            else:
                common[x].intersection_update(members)

    violations = []
    for x, shared in enumerate(common):
        if shared is None:
            # x sits in no hyperedge at all
            violations.extend((x, y) for y in range(num_vertices) if y != x)
            continue
        violations.extend((x, y) for y in sorted(shared) if y != x)
    return violations


def check_invariants(
    t: HyperedgeTableau,
    g: Graph,
    *,
    invariant3: bool = False,
) -> InvariantReport:
    """Scan the tableau against the graph; never raises."""
    report = InvariantReport()
    counts = [0] * g.num_vertices
    extra: dict[int, int] = {}

    for pos, members in enumerate(t.edges):
        if len(members) != t.m:
            report.arity_mismatches.append((pos, len(members)))
        seen: set[int] = set()
        for v in members:
            if v in seen:
                report.duplicate_members.append((pos, v))
            seen.add(v)
            if 0 <= v < g.num_vertices:
                counts[v] += 1
            else:
                extra[v] = extra.get(v, 0) + 1

    for v, (d, c) in enumerate(zip(g.degrees, counts)):
        if d != c:
            report.degree_mismatches.append((v, d, c))
    for v, c in sorted(extra.items()):
        report.degree_mismatches.append((v, 0, c))

    if t.incidence is not None:
        fresh = t.rebuild_incidence()
        maintained = t.incidence.as_sets()
        for v in sorted(set(fresh) | set(maintained)):
            if fresh.get(v, set()) != maintained.get(v, set()):
                report.incidence_mismatches.append(v)

    if invariant3:
        report.invariant3_violations = invariant3_violations(t, g.num_vertices)
    return report
