"""
Fast acceptance subset, run by `python -m graph.main selftest`.

Each check returns a CheckResult; the run passes iff every check passes.
"""

import logging
import time
from collections import Counter
from collections.abc import Callable

import numpy as np
from pydantic import BaseModel

from analysis.clustering import local_clustering
from graph.generate import Generator, GeneratorConfig
from graph.initial import InitDivisibilityError, InitialGraphError, InitInfeasibleError, check_feasible
from graph.nodes import Algorithm
from graph.state import Graph, triangle_count
from sampling.systematic import FrequencyBag, rsp_partition, rss_sample
from verify.harness import invariant_harness
from verify.oracle import binomial_z

logger = logging.getLogger(__name__)


class CheckResult(BaseModel):
    name: str
    passed: bool
    detail: str
    seconds: float


class SelftestReport(BaseModel):
    seed: int
    checks: list[CheckResult]
    passed: bool


def _rss_marginals(rng: np.random.Generator) -> tuple[bool, str]:
    bag = FrequencyBag(((0, 1), (1, 2), (2, 3), (3, 4), (4, 2)))
    m, trials = 3, 20_000
    hits = Counter()
    for _ in range(trials):
        sample = rss_sample(bag, m, rng)
        if len(set(sample)) != m:
            return False, f"repeated element in {sample}"
        hits.update(sample)
    worst = max(abs(binomial_z(hits[e], trials, m * f / bag.total)) for e, f in bag.items)
    return worst < 5, f"max |z| = {worst:.2f} over {trials} samples"


def _rsp_validity(rng: np.random.Generator) -> tuple[bool, str]:
    instances = 500
    for _ in range(instances):
        s = int(rng.integers(1, 11))
        k = int(rng.integers(1, 16))
        m = int(rng.integers(1, k + 1))
        seed_groups = [rng.choice(k, size=m, replace=False).tolist() for _ in range(s)]
        bag = FrequencyBag.from_members(x for group in seed_groups for x in group)
        partition = rsp_partition(bag, s, m, rng)
        if partition.operations != s * m:
            return False, f"{partition.operations} placements for s={s}, m={m}"
        if any(len(set(group)) != m for group in partition.groups):
            return False, f"repeated element in a group for s={s}, m={m}"
        if Counter(x for group in partition.groups for x in group) != Counter(dict(bag.items)):
            return False, "partition changed the element frequencies"
    return True, f"{instances} random instances"


def _harness(seed: int) -> tuple[bool, str]:
    details = []
    ok = True
    for algorithm in (Algorithm.SE_B, Algorithm.SE_B_STAR, Algorithm.SE_C):
        for m in (3, 4):
            config = GeneratorConfig(algorithm=algorithm, n=150, m=m, z=m, seed=seed)
            report = invariant_harness(config, steps_to_check=150)
            ok = ok and report.passed
            details.append(f"{algorithm.value}/m={m}: {'ok' if report.passed else report.first_failure}")
    return ok, "; ".join(details)


def _se_a_clustering(seed: int) -> tuple[bool, str]:
    n = 2_000
    g = Generator(GeneratorConfig(algorithm=Algorithm.SE_A, n=n, z=1, seed=seed)).run()
    adj = g.adjacency()
    off = [v for v in range(2, n) if local_clustering(g, v, adj) != 2 / g.degrees[v]]
    triangles = triangle_count(g)
    ok = not off and triangles == n - 2
    return ok, f"{len(off)} vertices off 2/d, {triangles} triangles (expected {n - 2})"


def _infeasibility(_seed: int) -> tuple[bool, str]:
    try:
        check_feasible(Graph.complete(6), 4)
        return False, "K_6 accepted for m = 4"
    except InitDivisibilityError:
        pass
    star = Graph.from_edges([(0, 1), (0, 2), (0, 3), (0, 4)])
    try:
        check_feasible(star, 4)
        return False, "star on 5 vertices accepted for m = 4"
    except InitInfeasibleError:
        pass
    for m in range(2, 9):
        try:
            check_feasible(Graph.complete(m), m)
        except InitialGraphError as exc:
            return False, f"K_{m} rejected: {exc.message}"
    return True, "K_6/m=4 and star/m=4 rejected, K_m accepted for m = 2..8"


def run_selftest(seed: int) -> SelftestReport:
    rng = np.random.default_rng(seed)
    checks: list[tuple[str, Callable[[], tuple[bool, str]]]] = [
        ("rss-marginals", lambda: _rss_marginals(rng)),
        ("rsp-validity", lambda: _rsp_validity(rng)),
        ("invariant-harness", lambda: _harness(seed)),
        ("se-a-clustering", lambda: _se_a_clustering(seed)),
        ("infeasibility", lambda: _infeasibility(seed)),
    ]
    results = []
    for name, check in checks:
        started = time.perf_counter()
        passed, detail = check()
        results.append(CheckResult(
            name=name,
            passed=passed,
            detail=detail,
            seconds=round(time.perf_counter() - started, 3),
        ))
        logger.info("%s: %s (%s)", name, "ok" if passed else "FAILED", detail)
    return SelftestReport(seed=seed, checks=results, passed=all(r.passed for r in results))
