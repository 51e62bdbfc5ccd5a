"""
One round of each generation algorithm.

Every round picks m distinct existing vertices with inclusion probability
exactly m * degree / sum(degrees), attaches a newborn vertex to them, and
(for the tableau variants) repairs the tableau so Invariants 1-2 hold again.

RNG draw order for one round, all from the run's single Generator:

  SE-A   z edge indices; RSS shuffle; RSS offset.
  SE-*   z hyperedge indices; RSS shuffle; RSS offset; then the update:
  SE-B   shuffle of u; m-2 donor positions; per donor, the receiving
         hyperedge (only while both are open) and the donor scan.
  SE-B*  m-2 donor positions; per donor, the donor scan; per donated
         member, the shuffle that draws up to m-1 of its other hyperedges.
  SE-C   width-2 positions; RSP shuffle.
"""

import logging
from collections.abc import Callable
from enum import Enum
from itertools import chain
from typing import TYPE_CHECKING

import numpy as np

from graph.state import Graph
from graph.tableau import Hyperedge, HyperedgeTableau
from sampling.systematic import FrequencyBag, rsp_partition, rss_sample
from sampling.uniform import choose_with_replacement, choose_without_replacement, virtual_shuffle

if TYPE_CHECKING:
    from graph.generate import GeneratorConfig

logger = logging.getLogger(__name__)


class Algorithm(str, Enum):
    SE_A = "se-a"
    SE_B = "se-b"
    SE_B_STAR = "se-b-star"
    SE_C = "se-c"


UpdateRule = Callable[[HyperedgeTableau, int, list[int], np.random.Generator], None]


def attach(g: Graph, targets: list[int]) -> int:
    """Add a newborn vertex joined to every target; return its id."""
    v = g.add_vertex()
    for u in targets:
        g.add_edge(v, u)
    return v


# ── SE-A ─────────────────────────────────────────────────────

def select_se_a(g: Graph, z: int, rng: np.random.Generator) -> list[int]:
    """
    Draw z edges with replacement and RSS two distinct endpoints out of
    their 2z endpoint occurrences. Each vertex is included with
    probability degree / |E|.
    """
    picks = choose_with_replacement(g.num_edges, z, rng)
    bag = FrequencyBag.from_members(x for i in picks for x in g.edges[i])
    return rss_sample(bag, 2, rng)


def se_a_step(g: Graph, z: int, rng: np.random.Generator) -> int:
    return attach(g, select_se_a(g, z, rng))


# ── Tableau variants ─────────────────────────────────────────

def select_from_tableau(t: HyperedgeTableau, z: int, rng: np.random.Generator) -> list[int]:
    """z hyperedges with replacement, then RSS of m members out of the zm."""
    picks = choose_with_replacement(len(t), z, rng)
    bag = FrequencyBag.from_members(x for i in picks for x in t.edges[i])
    return rss_sample(bag, t.m, rng)


def _scan_donor(donor: Hyperedge, taken: Hyperedge, rng: np.random.Generator) -> int:
    """First member of donor, in random order, that is not already in taken."""
    for k in virtual_shuffle(len(donor), rng):
        w = donor[k]
        if w not in taken:
            return w
    # taken has at most m - 1 members, the donor m distinct ones.
    raise RuntimeError(f"donor {donor} has no member outside {taken}")


def update_se_b(t: HyperedgeTableau, v: int, u: list[int], rng: np.random.Generator) -> None:
    m = t.m
    order = list(u)
    rng.shuffle(order)
    half = (m + 1) // 2
    h_x = order[:half] + [v]
    h_y = order[half:] + [v]

    for pos in choose_without_replacement(len(t), m - 2, rng):
        open_edges = [h for h in (h_x, h_y) if len(h) < m]
        h_c = open_edges[int(rng.integers(2))] if len(open_edges) == 2 else open_edges[0]
        w = _scan_donor(t.edges[pos], h_c, rng)
        h_c.append(w)
        t.replace(pos, w, v)

    t.append(h_x)
    t.append(h_y)


def _family(t: HyperedgeTableau, donor_pos: int, w: int, rng: np.random.Generator) -> list[int]:
    """
    The donor followed by up to m - 1 other hyperedges of w, drawn
    uniformly without replacement from its incidence list.
    """
    positions = t.positions_of(w)
    family = [donor_pos]
    for k in virtual_shuffle(len(positions), rng):
        if len(family) == t.m:
            break
        if positions[k] != donor_pos:
            family.append(positions[k])
    return family


def _cascade(t: HyperedgeTableau, family: list[int], h_b: Hyperedge, v: int) -> int | None:
    """
    Intersect the other members of h_b with the family hyperedges in turn.

    s_2 = (h_b & f_2) - {u_m, v}, s_k = s_{k-1} & f_k, and finally
    s_last = s_m - f_1. An empty s_last keeps the donor; otherwise the
    first f_k with s_k == s_{k-1} takes its place. None when the family
    is too short for the chain to stabilise.
    """
    if len(family) < 2:
        return family[0]
    chain_sets = [set(h_b).intersection(t.edges[family[1]]) - {h_b[0], v}]
    for pos in family[2:]:
        chain_sets.append(chain_sets[-1].intersection(t.edges[pos]))
    if not chain_sets[-1].difference(t.edges[family[0]]):
        return family[0]
    for j in range(1, len(chain_sets)):
        if chain_sets[j] == chain_sets[j - 1]:
            return family[j + 1]
    return None


def _keeps_witnesses(
    t: HyperedgeTableau,
    c: int,
    family: list[int],
    positions: list[int],
    at_risk: list[int],
) -> bool:
    """Every y in at_risk missing from c is missing from another hyperedge of w too."""
    members = t.edges[c]
    for y in at_risk:
        if y in members:
            continue
        if any(p != c and y not in t.edges[p] for p in family):
            continue
        if not any(p != c and y not in t.edges[p] for p in positions):
            return False
    return True


def _ensure_invariant3(
    t: HyperedgeTableau,
    donor_pos: int,
    w: int,
    h_a: Hyperedge,
    h_b: Hyperedge,
    v: int,
    rng: np.random.Generator,
) -> int:
    """
    Pick the hyperedge that gives w up to h_b without leaving any pair
    (w, y) without a witness.

    The cascade over the donor and up to m - 1 other hyperedges of w makes
    the first choice. Moving w can only hurt pairs (w, y) with y in h_b;
    when w is also in h_a, h_a still witnesses every y outside it. If the
    cascade's choice already holds v or drops the last witness of such a
    pair, the family and then the rest of w's hyperedges are searched for
    one that does neither.
    """
    family = _family(t, donor_pos, w, rng)
    positions = t.positions_of(w)
    at_risk = [y for y in h_b if y != w and y != v]
    if w in h_a:
        at_risk = [y for y in at_risk if y in h_a]

    picked = _cascade(t, family, h_b, v)
    if picked is not None and v not in t.edges[picked] and _keeps_witnesses(t, picked, family, positions, at_risk):
        return picked

    fallback = None
    rest = (p for p in positions if p not in family)
    for c in chain(family, rest):
        if v in t.edges[c]:
            continue
        if fallback is None:
            fallback = c
        if _keeps_witnesses(t, c, family, positions, at_risk):
            return c

    # A witness-preserving donor always exists for m <= 4 when every degree
    # is at least m; past that, keep Invariants 1-2 and report the gap.
    if fallback is None:
        raise RuntimeError(f"every hyperedge of vertex {w} already holds the newborn {v}")
    logger.warning("vertex %d donated from hyperedge %d without an Invariant-3 witness", w, fallback)
    return fallback


def update_se_b_star(t: HyperedgeTableau, v: int, u: list[int], rng: np.random.Generator) -> None:
    m = t.m
    h_a = u[: m - 1] + [v]
    h_b = [u[m - 1], v]

    donations = []
    for pos in choose_without_replacement(len(t), m - 2, rng):
        w = _scan_donor(t.edges[pos], h_b, rng)
        h_b.append(w)
        donations.append((pos, w))

    for pos, w in donations:
        target = _ensure_invariant3(t, pos, w, h_a, h_b, v, rng)
        t.replace(target, w, v)

    t.append(h_a)
    t.append(h_b)


def update_se_c(
    t: HyperedgeTableau,
    v: int,
    u: list[int],
    rng: np.random.Generator,
    width: int | None = None,
) -> None:
    """
    Remove width-2 random hyperedges, pool their members with m copies of v
    and the targets, and re-partition the pool into width hyperedges.
    """
    m = t.m
    width = m if width is None else width
    pooled: list[int] = []
    # Descending order keeps swap-with-last from moving a chosen hyperedge.
    for pos in sorted(choose_without_replacement(len(t), width - 2, rng), reverse=True):
        pooled.extend(t.remove(pos))
    pooled.extend([v] * m)
    pooled.extend(u)

    partition = rsp_partition(FrequencyBag.from_members(pooled), width, m, rng)
    for group in partition.groups:
        t.append(group)


UPDATE_RULES: dict[Algorithm, UpdateRule] = {
    Algorithm.SE_B: update_se_b,
    Algorithm.SE_B_STAR: update_se_b_star,
    Algorithm.SE_C: update_se_c,
}


def se_step(
    g: Graph,
    t: HyperedgeTableau,
    config: "GeneratorConfig",
    rng: np.random.Generator,
) -> int:
    """Select m targets from the tableau, attach v, then repair the tableau."""
    u = select_from_tableau(t, config.z, rng)
    v = attach(g, u)
    if config.algorithm is Algorithm.SE_C:
        update_se_c(t, v, u, rng, config.shuffle_width)
    else:
        UPDATE_RULES[config.algorithm](t, v, u, rng)
    return v
