"""
Monte Carlo step-replay oracles.

A frozen Generator is asked for its next targets N times, each time with an
independent RNG stream; the generator itself is never stepped. The
selection phase only reads the graph and tableau, so worker threads share
one Generator without copying it.

Worker i draws from SeedSequence(seed).spawn(workers)[i] and runs
trials // workers trials (the first trials % workers workers run one more).
Counts are summed after joining, so results depend only on seed and worker
count.

Selection is pure Python and holds the GIL, so more workers change how the
trials split into streams, not the wall time.
"""

import logging
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.stats import norm
from tqdm import tqdm

from graph.generate import Generator
from graph.nodes import Algorithm

logger = logging.getLogger(__name__)

CHUNK = 1_000


@dataclass
class StepReplayOracle:
    """Hit counters for replays of one frozen state."""

    generator: Generator
    tracked: set[tuple[int, ...]] = field(default_factory=set)
    vertex_hits: np.ndarray = field(init=False)
    set_hits: Counter = field(default_factory=Counter)
    trials: int = 0

    def __post_init__(self):
        self.vertex_hits = np.zeros(self.generator.graph.num_vertices, dtype=np.int64)

    def replay(self, trials: int, rng: np.random.Generator, bar: tqdm | None = None) -> None:
        done = 0
        while done < trials:
            chunk = min(CHUNK, trials - done)
            for _ in range(chunk):
                targets = self.generator.select_targets(rng)
                self.vertex_hits[targets] += 1
                if self.tracked:
                    key = tuple(sorted(targets))
                    if key in self.tracked:
                        self.set_hits[key] += 1
            done += chunk
            if bar is not None:
                bar.update(chunk)
        self.trials += trials

    def merge(self, other: "StepReplayOracle") -> None:
        self.vertex_hits += other.vertex_hits
        self.set_hits.update(other.set_hits)
        self.trials += other.trials


def run_replays(
    generator: Generator,
    trials: int,
    seed: int,
    *,
    workers: int = 1,
    tracked: set[tuple[int, ...]] | None = None,
    progress: bool = False,
) -> StepReplayOracle:
    """Replay the next selection `trials` times across worker threads."""
    if trials < 1:
        raise ValueError("trials must be positive")
    workers = max(1, min(workers, trials))
    tracked = tracked or set()
    streams = [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(workers)]
    shares = [trials // workers + (1 if i < trials % workers else 0) for i in range(workers)]
    oracles = [StepReplayOracle(generator, tracked=tracked) for _ in range(workers)]

    with tqdm(total=trials, disable=not progress, unit="trial") as bar:
        if workers == 1:
            oracles[0].replay(shares[0], streams[0], bar)
        else:
            with ThreadPoolExecutor(max_workers=workers) as ex:
                futures = [
                    ex.submit(oracle.replay, share, stream, bar)
                    for oracle, share, stream in zip(oracles, shares, streams)
                ]
                for f in futures:
                    f.result()

    merged = oracles[0]
    for other in oracles[1:]:
        merged.merge(other)
    return merged


# ── Reports ──────────────────────────────────────────────────

class VertexRecord(BaseModel):
    id: int
    degree: int
    target: float
    empirical: float
    z: float


class VerifySummary(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    max_abs_z: float
    alpha: float
    critical_z: float
    passed: bool = Field(alias="pass")


class VerifyReport(BaseModel):
    algorithm: Algorithm
    m: int
    z: int
    trials: int
    vertices: list[VertexRecord]
    summary: VerifySummary


class JointReport(BaseModel):
    algorithm: Algorithm
    target_set: list[int]
    trials: int
    hits: int
    empirical: float
    # Known only for SE-A with z = 1: 1/|E| on edges, 0 elsewhere.
    exact: float | None = None


def binomial_z(hits: int, trials: int, p: float) -> float:
    """z-score of hits/trials against p; degenerate p must match exactly."""
    empirical = hits / trials
    if p <= 0.0 or p >= 1.0:
        return 0.0 if empirical == p else math.inf
    return (empirical - p) / math.sqrt(p * (1 - p) / trials)


def inclusion_targets(generator: Generator) -> list[float]:
    """m * d / sum(d) for every vertex of the frozen state."""
    g = generator.graph
    total = sum(g.degrees)
    m = generator.config.m
    return [m * d / total for d in g.degrees]


def inclusion_oracle(
    generator: Generator,
    trials: int,
    seed: int,
    *,
    alpha: float = 0.01,
    workers: int = 1,
    progress: bool = False,
) -> VerifyReport:
    """
    Empirical first-order inclusion frequencies of the next round against
    m * d / sum(d), with a Bonferroni-corrected two-sided threshold.
    """
    oracle = run_replays(generator, trials, seed, workers=workers, progress=progress)
    targets = inclusion_targets(generator)
    g = generator.graph

    records = []
    for v, (hits, p) in enumerate(zip(oracle.vertex_hits.tolist(), targets)):
        records.append(VertexRecord(
            id=v,
            degree=g.degrees[v],
            target=p,
            empirical=hits / trials,
            z=binomial_z(hits, trials, p),
        ))

    critical = float(norm.isf(alpha / (2 * len(records))))
    max_abs_z = max(abs(r.z) for r in records)
    logger.info("inclusion oracle: %d trials, max |z| = %.3f, critical %.3f", trials, max_abs_z, critical)
    return VerifyReport(
        algorithm=generator.config.algorithm,
        m=generator.config.m,
        z=generator.config.z,
        trials=trials,
        vertices=records,
        summary=VerifySummary(
            max_abs_z=max_abs_z,
            alpha=alpha,
            critical_z=critical,
            passed=max_abs_z < critical,
        ),
    )


def joint_oracle(
    generator: Generator,
    target_set: list[int],
    trials: int,
    seed: int,
    *,
    workers: int = 1,
    progress: bool = False,
) -> JointReport:
    """Empirical probability that the next round selects exactly target_set."""
    m = generator.config.m
    key = tuple(sorted(target_set))
    if len(set(key)) != m:
        raise ValueError(f"target set must hold {m} distinct vertices, got {list(target_set)}")
    if key[0] < 0 or key[-1] >= generator.graph.num_vertices:
        raise ValueError(f"target set {list(target_set)} names an unknown vertex")

    oracle = run_replays(generator, trials, seed, workers=workers, tracked={key}, progress=progress)
    hits = oracle.set_hits[key]

    exact = None
    config = generator.config
    if config.algorithm is Algorithm.SE_A and config.z == 1:
        adjacent = key in set(generator.graph.edges)
        exact = 1 / generator.graph.num_edges if adjacent else 0.0

    return JointReport(
        algorithm=config.algorithm,
        target_set=list(key),
        trials=trials,
        hits=hits,
        empirical=hits / trials,
        exact=exact,
    )
