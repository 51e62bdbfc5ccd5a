"""
Degree histograms and their fit against the limiting law
P(d) = 2m(m+1) / (d(d+1)(d+2)), d >= m.
"""

import csv
import logging
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from pydantic import BaseModel
from scipy.stats import chi2

from graph.state import Graph

logger = logging.getLogger(__name__)

MIN_EXPECTED = 5.0


@dataclass
class DegreeHistogram:
    """degree -> number of vertices with that degree."""

    counts: dict[int, int] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return sum(self.counts.values())

    def add(self, other: "DegreeHistogram") -> None:
        """Pool another run's histogram into this one."""
        for d, c in other.counts.items():
            self.counts[d] = self.counts.get(d, 0) + c

    def degrees(self) -> list[int]:
        return sorted(self.counts)


def degree_histogram(g: Graph) -> DegreeHistogram:
    return DegreeHistogram(dict(Counter(g.degrees)))


def theoretical_degree_pmf(m: int, d: int) -> float:
    if d < m:
        raise ValueError(f"the degree law is defined for d >= m = {m}, got d = {d}")
    return 2 * m * (m + 1) / (d * (d + 1) * (d + 2))


def theoretical_tail(m: int, d: int) -> float:
    """P(degree > d); the pmf telescopes to m(m+1) / ((d+1)(d+2))."""
    return m * (m + 1) / ((d + 1) * (d + 2))


class FitReport(BaseModel):
    m: int
    n: int
    d_cap: int
    relative_errors: dict[int, float]
    chi_square: float
    dof: int
    p_value: float
    alpha: float
    rejected: bool
    tail_slope: float | None


def _default_cap(n: int, m: int) -> int:
    d = m
    while n * theoretical_degree_pmf(m, d + 1) >= MIN_EXPECTED:
        d += 1
    return d


def _tail_slope(h: DegreeHistogram, m: int, d_cap: int, n: int) -> float | None:
    """
    Weighted least squares of log frequency against the log of the geometric
    mean of (d, d+1, d+2); the limiting law is a line of slope -3 there.
    """
    points = [(d, h.counts[d]) for d in range(m, d_cap + 1) if h.counts.get(d, 0) > 0]
    if len(points) < 2:
        return None
    degrees = np.array([d for d, _ in points], dtype=float)
    counts = np.array([c for _, c in points], dtype=float)
    x = (np.log(degrees) + np.log(degrees + 1) + np.log(degrees + 2)) / 3
    y = np.log(counts / n)
    slope, _ = np.polyfit(x, y, 1, w=np.sqrt(counts))
    return float(slope)


def fit_report(
    h: DegreeHistogram,
    m: int,
    d_cap: int | None = None,
    alpha: float = 0.01,
) -> FitReport:
    """
    Compare a histogram with the limiting degree law.

    Vertices below degree m are left out. Bins are d = m..d_cap plus one
    tail bin for d > d_cap, merged into the last bin when its expected count
    is under MIN_EXPECTED.
    """
    n = sum(c for d, c in h.counts.items() if d >= m)
    if n == 0 or n * theoretical_degree_pmf(m, m) < MIN_EXPECTED:
        raise ValueError(f"{n} vertices of degree >= {m} are too few to fit")
    if d_cap is None:
        d_cap = _default_cap(n, m)
    elif d_cap < m:
        raise ValueError(f"d_cap {d_cap} is below m = {m}")

    observed = [h.counts.get(d, 0) for d in range(m, d_cap + 1)]
    expected = [n * theoretical_degree_pmf(m, d) for d in range(m, d_cap + 1)]
    relative_errors = {
        d: (o - e) / e for d, o, e in zip(range(m, d_cap + 1), observed, expected)
    }

    tail_observed = sum(c for d, c in h.counts.items() if d > d_cap)
    tail_expected = n * theoretical_tail(m, d_cap)
    if tail_expected >= MIN_EXPECTED:
        observed.append(tail_observed)
        expected.append(tail_expected)
    else:
        observed[-1] += tail_observed
        expected[-1] += tail_expected

    obs = np.array(observed, dtype=float)
    exp = np.array(expected, dtype=float)
    statistic = float(np.sum((obs - exp) ** 2 / exp))
    dof = max(len(obs) - 1, 1)
    p_value = float(chi2.sf(statistic, dof))

    report = FitReport(
        m=m,
        n=n,
        d_cap=d_cap,
        relative_errors=relative_errors,
        chi_square=statistic,
        dof=dof,
        p_value=p_value,
        alpha=alpha,
        rejected=p_value < alpha,
        tail_slope=_tail_slope(h, m, d_cap, n),
    )
    logger.debug("degree fit: chi2 = %.3f on %d dof, p = %.4g", statistic, dof, p_value)
    return report


def write_histogram_csv(h: DegreeHistogram, m: int | None, path: str | Path) -> None:
    """degree,count,empirical_pmf,theoretical_pmf; theoretical is empty below m."""
    n = h.n
    with open(path, "w", encoding="ascii", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["degree", "count", "empirical_pmf", "theoretical_pmf"])
        for d in h.degrees():
            theory = "" if m is None or d < m else repr(theoretical_degree_pmf(m, d))
            writer.writerow([d, h.counts[d], repr(h.counts[d] / n), theory])
    logger.info("wrote %d histogram rows to %s", len(h.counts), path)

