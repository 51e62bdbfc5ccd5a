"""
Invariant harness and the independence consistency check.
"""

import logging

import numpy as np
from pydantic import BaseModel

from graph.generate import Generator, GeneratorConfig
from graph.nodes import Algorithm
from graph.state import Graph
from graph.tableau import check_invariants

logger = logging.getLogger(__name__)


class HarnessReport(BaseModel):
    algorithm: Algorithm
    m: int
    steps: int
    checked_steps: int
    tableau_violations: int
    invariant3_scanned: bool
    invariant3_violations: int
    graph_problems: list[str]
    edge_count_ok: bool
    first_failure: str | None = None
    first_failure_step: int | None = None
    passed: bool


def invariant_harness(
    config: GeneratorConfig,
    steps_to_check: int = 1_000,
    *,
    invariant3: bool | None = None,
    initial_graph: Graph | None = None,
) -> HarnessReport:
    """
    Run one generation, scanning the tableau after each of the first
    steps_to_check rounds and once more at the end.

    The ordered-pair Invariant 3 scan runs by default only for SE-B*, and
    only SE-B* fails on its violations; other variants merely record them.
    """
    gen = Generator(config, initial_graph)
    scan3 = config.algorithm is Algorithm.SE_B_STAR if invariant3 is None else invariant3

    tableau_violations = 0
    invariant3_violations = 0
    checked_steps = 0
    first_failure: str | None = None
    first_failure_step: int | None = None

    def scan() -> None:
        nonlocal tableau_violations, invariant3_violations, checked_steps, first_failure, first_failure_step
        checked_steps += 1
        if gen.tableau is None:
            return
        report = check_invariants(gen.tableau, gen.graph, invariant3=scan3)
        found3 = len(report.invariant3_violations or ())
        invariant3_violations += found3
        tableau_violations += report.violation_count - found3
        if not report.ok and first_failure is None:
            first_failure = report.summary()[0]
            first_failure_step = gen.steps_done
            logger.warning("step %d: %s", first_failure_step, first_failure)

    scan()
    while gen.steps_left > 0:
        gen.step()
        if gen.steps_done <= steps_to_check:
            scan()
    if gen.steps_done > steps_to_check:
        scan()

    g = gen.graph
    problems = g.validate()
    if not g.is_connected():
        problems.append("generated graph is disconnected")
    edge_count_ok = g.num_edges == gen.initial_edges + config.m * gen.steps_done

    strict3 = config.algorithm is Algorithm.SE_B_STAR
    passed = (
        tableau_violations == 0
        and not problems
        and edge_count_ok
        and (invariant3_violations == 0 or not strict3)
    )
    return HarnessReport(
        algorithm=config.algorithm,
        m=config.m,
        steps=gen.steps_done,
        checked_steps=checked_steps,
        tableau_violations=tableau_violations,
        invariant3_scanned=scan3,
        invariant3_violations=invariant3_violations,
        graph_problems=problems,
        edge_count_ok=edge_count_ok,
        first_failure=first_failure,
        first_failure_step=first_failure_step,
        passed=passed,
    )


def elementary_symmetric(values: np.ndarray, k: int) -> float:
    """e_k(values), read off the coefficients of prod (t + x_i)."""
    if k == 0:
        return 1.0
    if k > len(values):
        return 0.0
    return float(np.poly(-values)[k])


def impossibility_demo(pi: list[float], m: int, *, rescaled: bool = True) -> bool:
    """
    Can independent joint probabilities reproduce the marginals pi?

    With pi_S = prod_{i in S} pi_i over m-sets, the marginal of i is
    pi_i * e_{m-1}(pi without i), so every such e_{m-1} must be 1. Allowing
    a common rescaling constant, they only need to be equal.
    """
    x = np.asarray(pi, dtype=float)
    if x.ndim != 1 or len(x) < m:
        raise ValueError(f"need at least m = {m} probabilities")
    if np.any(x <= 0) or np.any(x > 1):
        raise ValueError("inclusion probabilities must lie in (0, 1]")
    if not np.isclose(x.sum(), m, rtol=1e-9, atol=1e-12):
        raise ValueError(f"inclusion probabilities sum to {x.sum()}, expected {m}")

    sums = np.array([elementary_symmetric(np.delete(x, i), m - 1) for i in range(len(x))])
    if rescaled:
        return bool(np.allclose(sums, sums[0], rtol=1e-9, atol=1e-12))
    return bool(np.allclose(sums, 1.0, rtol=1e-9, atol=1e-12))
