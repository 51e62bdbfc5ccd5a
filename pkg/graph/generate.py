"""
Generation driver: config, the stepping Generator, and generate().

A run is a Markov chain over graph states, so everything here is strictly
sequential and draws from one numpy Generator seeded by config.seed.
"""

import logging

import numpy as np
from pydantic import BaseModel, Field, model_validator
from tqdm import tqdm

from graph.initial import (
    InitDisconnectedError,
    InitialGraphSpec,
    InitTooSmallError,
    build_initial,
    check_feasible,
)
from graph.nodes import Algorithm, se_a_step, se_step, select_from_tableau, select_se_a
from graph.state import Graph
from graph.tableau import HyperedgeTableau, check_invariants, init_tableau

logger = logging.getLogger(__name__)

SEED_BOUND = 2**64


class GeneratorConfig(BaseModel):
    """
    Parameters of one generation run.

    When initial is omitted, G0 is K_{m+1} for SE-B* (a start satisfying
    Invariant 3) and K_m otherwise.
    """

    algorithm: Algorithm = Algorithm.SE_A
    n: int = Field(ge=2)
    m: int = Field(default=2, ge=2)
    z: int = Field(default=1, ge=1)
    seed: int = Field(default=0, ge=0, lt=SEED_BOUND)
    initial: InitialGraphSpec | None = None
    sec_shuffle_width: int | None = None
    checked: bool = False

    @model_validator(mode="after")
    def _check_combination(self) -> "GeneratorConfig":
        if self.algorithm is Algorithm.SE_A and self.m != 2:
            raise ValueError(f"se-a attaches exactly 2 edges per vertex, got m = {self.m}")
        if self.sec_shuffle_width is not None:
            if self.algorithm is not Algorithm.SE_C:
                raise ValueError("sec_shuffle_width only applies to se-c")
            if self.sec_shuffle_width < self.m:
                raise ValueError(
                    f"sec_shuffle_width {self.sec_shuffle_width} cannot hold the {self.m} copies of the newborn"
                )
        if self.algorithm is Algorithm.SE_B_STAR and self.z < self.m:
            logger.warning("se-b-star with z = %d < m = %d: some m-sets may be unreachable", self.z, self.m)
        if self.initial is None:
            size = self.m + 1 if self.algorithm is Algorithm.SE_B_STAR else self.m
            self.initial = InitialGraphSpec(kind="complete", size=size)
        return self

    @property
    def shuffle_width(self) -> int:
        return self.sec_shuffle_width or self.m

    @property
    def uses_tableau(self) -> bool:
        return self.algorithm is not Algorithm.SE_A


class Generator:
    """
    Holds the growing graph, its tableau and the RNG of one run.

    select_targets() is read-only and may be replayed with another RNG to
    measure inclusion probabilities; step() performs a full round.
    """

    def __init__(self, config: GeneratorConfig, initial_graph: Graph | None = None):
        self.config = config
        self.rng = np.random.default_rng(config.seed)

        if initial_graph is None:
            g0 = build_initial(config.initial, config.m, self.rng)
        else:
            g0 = initial_graph
            if not g0.is_connected():
                raise InitDisconnectedError()
            check_feasible(g0, config.m)

        if config.n < g0.num_vertices:
            raise InitTooSmallError(f"n = {config.n} is below the {g0.num_vertices} initial vertices")

        self.graph = Graph(g0.num_vertices, checked=config.checked)
        for a, b in g0.edges:
            self.graph.add_edge(a, b)
        self.initial_vertices = g0.num_vertices
        self.initial_edges = g0.num_edges

        self.tableau: HyperedgeTableau | None = None
        if config.uses_tableau:
            self.tableau = self._build_tableau()

    def _build_tableau(self) -> HyperedgeTableau:
        config = self.config
        star = config.algorithm is Algorithm.SE_B_STAR
        t = init_tableau(self.graph, config.m, self.rng, with_incidence=star)

        reserve = (config.shuffle_width if config.algorithm is Algorithm.SE_C else config.m) - 2
        if len(t) < reserve:
            raise InitTooSmallError(
                f"{len(t)} initial hyperedges, but every round touches {reserve} existing ones"
            )
        if star:
            violations = check_invariants(t, self.graph, invariant3=True).invariant3_violations
            if violations:
                logger.warning(
                    "initial tableau violates Invariant 3 for %d ordered pairs, e.g. %s",
                    len(violations), violations[0],
                )
        return t

    @property
    def steps_done(self) -> int:
        return self.graph.num_vertices - self.initial_vertices

    @property
    def steps_left(self) -> int:
        return self.config.n - self.graph.num_vertices

    def select_targets(self, rng: np.random.Generator | None = None) -> list[int]:
        """The m targets the next round would attach to; touches no state."""
        rng = self.rng if rng is None else rng
        if self.tableau is None:
            return select_se_a(self.graph, self.config.z, rng)
        return select_from_tableau(self.tableau, self.config.z, rng)

    def step(self) -> int:
        """Add one vertex; returns its id."""
        if self.tableau is None:
            return se_a_step(self.graph, self.config.z, self.rng)
        return se_step(self.graph, self.tableau, self.config, self.rng)

    def run(self, *, progress: bool = False) -> Graph:
        """Grow the graph to config.n vertices and return it."""
        with tqdm(total=self.steps_left, disable=not progress, unit="vertex") as bar:
            while self.graph.num_vertices < self.config.n:
                self.step()
                bar.update()
        logger.info(
            "%s finished: %d vertices, %d edges",
            self.config.algorithm.value, self.graph.num_vertices, self.graph.num_edges,
        )
        return self.graph


def generate(config: GeneratorConfig, *, progress: bool = False) -> Graph:
    return Generator(config).run(progress=progress)
