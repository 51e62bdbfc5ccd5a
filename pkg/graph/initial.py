"""
Initial graph construction and feasibility.

A tableau of m-sets with the same degree sequence as G0 exists only when
  1. m divides 2|E0|, and
  2. no vertex has degree above 2|E0|/m.
G0 must also be connected, otherwise the process can grow a disconnected
graph. build_initial enforces all three for every InitialGraphSpec kind.
"""

import logging
import math
from fractions import Fraction
from pathlib import Path
from typing import Literal

import numpy as np
from pydantic import BaseModel, model_validator

from graph.data import read_edge_list
from graph.state import Graph
from sampling.uniform import choose_without_replacement

logger = logging.getLogger(__name__)

DEFAULT_REJECTION_BUDGET = 10_000


class InitialGraphError(Exception):
    """Raised when the initial graph cannot seed a generation run."""

    def __init__(self, message: str, error_code: str | None = None):
        self.message = message
        self.error_code = error_code
        super().__init__(self.message)


class InitDivisibilityError(InitialGraphError):
    def __init__(self, num_edges: int, m: int):
        self.num_edges = num_edges
        self.m = m
        self.factor = lambda_factor(num_edges, m)
        super().__init__(
            f"divisibility: 2|E0| = {2 * num_edges} vertex copies are not divisible by m = {m}"
            f" (multiplication factor would be {self.factor})",
            "divisibility",
        )


class InitInfeasibleError(InitialGraphError):
    def __init__(self, vertex: int, degree: int, bound: int):
        self.vertex = vertex
        self.degree = degree
        self.bound = bound
        super().__init__(
            f"max-degree: vertex {vertex} has degree {degree} but 2|E0|/m = {bound}",
            "max-degree",
        )


class InitDisconnectedError(InitialGraphError):
    def __init__(self):
        super().__init__("disconnected: the initial graph must be connected", "disconnected")


class InitRejectionError(InitialGraphError):
    def __init__(self, attempts: int):
        super().__init__(
            f"rejection-budget: no feasible connected G(n, M) draw in {attempts} attempts",
            "rejection-budget",
        )


class InitTooSmallError(InitialGraphError):
    def __init__(self, message: str):
        super().__init__(f"too-small: {message}", "too-small")


class InitialGraphSpec(BaseModel):
    """
    How to build G0: complete:K, gnm:V (forced edge count) or file:PATH.

    Use InitialGraphSpec.parse("complete:5") for the CLI form.
    """

    kind: Literal["complete", "gnm", "file"]
    size: int | None = None
    path: Path | None = None

    @model_validator(mode="after")
    def _check_fields(self) -> "InitialGraphSpec":
        if self.kind == "file":
            if self.path is None:
                raise ValueError("file initial graph needs a path")
        elif self.size is None or self.size < 2:
            raise ValueError(f"{self.kind} initial graph needs at least 2 vertices")
        return self

    @classmethod
    def parse(cls, text: str) -> "InitialGraphSpec":
        kind, sep, value = text.partition(":")
        if not sep or not value:
            raise ValueError(f"expected complete:K, gnm:V or file:PATH, got {text!r}")
        if kind == "file":
            return cls(kind="file", path=Path(value))
        if kind not in ("complete", "gnm"):
            raise ValueError(f"unknown initial graph kind {kind!r}")
        try:
            size = int(value)
        except ValueError:
            raise ValueError(f"{kind} needs an integer vertex count, got {value!r}") from None
        return cls(kind=kind, size=size)

    def __str__(self) -> str:
        return f"file:{self.path}" if self.kind == "file" else f"{self.kind}:{self.size}"


# ── Feasibility ──────────────────────────────────────────────

def check_feasible(g: Graph, m: int) -> int:
    """
    Raise if G0 cannot seed a tableau of m-sets; return s = 2|E0|/m.
    """
    copies = 2 * g.num_edges
    if copies == 0:
        raise InitTooSmallError("the initial graph has no edges")
    if copies % m:
        raise InitDivisibilityError(g.num_edges, m)
    s = copies // m
    for v, d in enumerate(g.degrees):
        if d > s:
            raise InitInfeasibleError(v, d, s)
    return s


def lambda_factor(e0: int, m: int) -> Fraction:
    """
    Multiplication factor lcm(2|E0|, m) / (2|E0|) that would make the
    initial copy count divisible by m. Diagnostic only.
    """
    if e0 < 1:
        raise ValueError("e0 must be positive")
    copies = 2 * e0
    return Fraction(math.lcm(copies, m), copies)


def forced_edge_count(v0: int, m: int) -> int:
    """
    Largest M <= v0(v0-1)/2 that is a multiple of lcm(m, 2)/2, so that
    m divides 2M.
    """
    unit = math.lcm(m, 2) // 2
    return (v0 * (v0 - 1) // 2) // unit * unit


# ── Builders ─────────────────────────────────────────────────

def _pair_from_index(index: int, v0: int) -> tuple[int, int]:
    """Map 0..C(v0,2)-1 onto the pairs (a, b), a < b, row by row."""
    a = 0
    row = v0 - 1
    while index >= row:
        index -= row
        a += 1
        row -= 1
    return a, a + 1 + index


def random_gnm(v0: int, num_edges: int, rng: np.random.Generator) -> Graph:
    """Uniform G(n, M) draw: M distinct pairs out of C(v0, 2)."""
    pairs = v0 * (v0 - 1) // 2
    chosen = sorted(choose_without_replacement(pairs, num_edges, rng))
    return Graph.from_edges([_pair_from_index(i, v0) for i in chosen], v0)


def forced_gnm(
    v0: int,
    m: int,
    rng: np.random.Generator,
    budget: int = DEFAULT_REJECTION_BUDGET,
) -> Graph:
    """
    Draw G(v0, M) with the forced edge count, rejecting draws that are
    disconnected or violate the max-degree bound.
    """
    num_edges = forced_edge_count(v0, m)
    if num_edges < v0 - 1:
        raise InitTooSmallError(f"{num_edges} edges cannot connect {v0} vertices")

    for attempt in range(1, budget + 1):
        g = random_gnm(v0, num_edges, rng)
        if not g.is_connected():
            continue
        try:
            check_feasible(g, m)
        except InitInfeasibleError:
            continue
        logger.debug("G(%d, %d) accepted after %d attempt(s)", v0, num_edges, attempt)
        return g
    raise InitRejectionError(budget)


def build_initial(spec: InitialGraphSpec, m: int, rng: np.random.Generator) -> Graph:
    """Build G0 from an InitialGraphSpec and verify connectivity and feasibility."""
    if spec.kind == "complete":
        g = Graph.complete(spec.size, checked=True)
    elif spec.kind == "gnm":
        g = forced_gnm(spec.size, m, rng)
    else:
        g = read_edge_list(spec.path)

    if g.num_edges == 0:
        raise InitTooSmallError("the initial graph has no edges")
    if not g.is_connected():
        raise InitDisconnectedError()
    s = check_feasible(g, m)
    logger.info(
        "initial graph %s: %d vertices, %d edges, %d hyperedges of %d",
        spec, g.num_vertices, g.num_edges, s, m,
    )
    return g
