import csv

import numpy as np
import pytest

from analysis.degree import (
    DegreeHistogram,
    degree_histogram,
    fit_report,
    theoretical_degree_pmf,
    theoretical_tail,
    write_histogram_csv,
)
from graph.generate import GeneratorConfig, generate
from graph.nodes import Algorithm
from graph.state import Graph


def exact_histogram() -> DegreeHistogram:
    """420000 vertices laid out exactly on the m = 2 law up to d = 7."""
    return DegreeHistogram({2: 210_000, 3: 84_000, 4: 42_000, 5: 24_000, 6: 15_000, 7: 10_000, 9: 35_000})


def test_pmf_values():
    assert theoretical_degree_pmf(2, 2) == pytest.approx(0.5)
    assert theoretical_degree_pmf(5, 5) == pytest.approx(2 / 7)
    with pytest.raises(ValueError):
        theoretical_degree_pmf(3, 2)


def test_pmf_is_decreasing_and_normalised():
    for m in (2, 3, 5):
        values = np.array([theoretical_degree_pmf(m, d) for d in range(m, 10_001)])
        assert np.all(np.diff(values) < 0)
        assert abs(values.sum() - 1.0) < 1e-6
        assert values.sum() + theoretical_tail(m, 10_000) == pytest.approx(1.0, abs=1e-12)


def test_degree_histogram_and_pooling(path3):
    h = degree_histogram(path3)
    assert h.counts == {1: 2, 2: 1}
    assert h.n == 3
    h.add(degree_histogram(Graph.complete(3)))
    assert h.counts == {1: 2, 2: 4}


def test_exact_histogram_fits_perfectly():
    report = fit_report(exact_histogram(), 2, d_cap=7)
    assert report.n == 420_000
    assert all(abs(e) < 1e-12 for e in report.relative_errors.values())
    assert report.chi_square == pytest.approx(0.0, abs=1e-9)
    assert report.dof == 6
    assert not report.rejected
    assert report.tail_slope == pytest.approx(-3.0, abs=1e-9)


def test_vertices_below_m_are_ignored():
    h = exact_histogram()
    h.counts[1] = 999
    assert fit_report(h, 2, d_cap=7).chi_square == pytest.approx(0.0, abs=1e-9)


def test_default_cap_keeps_expected_counts_above_five():
    report = fit_report(exact_histogram(), 2)
    assert 420_000 * theoretical_degree_pmf(2, report.d_cap) >= 5
    assert 420_000 * theoretical_degree_pmf(2, report.d_cap + 1) < 5


def test_uniform_histogram_is_rejected():
    h = DegreeHistogram({d: 1_000 for d in range(2, 22)})
    report = fit_report(h, 2)
    assert report.rejected
    assert report.p_value < 0.01


def test_too_few_vertices():
    with pytest.raises(ValueError):
        fit_report(DegreeHistogram({2: 3}), 2)


def test_histogram_csv(tmp_path):
    g = generate(GeneratorConfig(algorithm=Algorithm.SE_A, n=200, z=1, seed=6))
    h = degree_histogram(g)
    path = tmp_path / "hist.csv"
    write_histogram_csv(h, 2, path)

    text = path.read_text()
    assert text.startswith("degree,count,empirical_pmf,theoretical_pmf\n")
    assert "\r" not in text
    rows = list(csv.DictReader(text.splitlines()))
    assert sum(int(r["count"]) for r in rows) == 200
    first = rows[0]
    assert int(first["degree"]) == 2
    assert float(first["theoretical_pmf"]) == theoretical_degree_pmf(2, 2)


def test_histogram_csv_below_m_is_blank(tmp_path):
    path = tmp_path / "hist.csv"
    write_histogram_csv(DegreeHistogram({1: 2, 2: 1}), 2, path)
    assert path.read_text().splitlines()[1] == "1,2,0.6666666666666666,"


@pytest.mark.slow
@pytest.mark.parametrize(
    "algorithm, m",
    [(Algorithm.SE_A, 2), (Algorithm.SE_B, 5), (Algorithm.SE_C, 5)],
)
def test_pooled_degree_law(algorithm, m):
    pooled = DegreeHistogram()
    for seed in range(10):
        config = GeneratorConfig(algorithm=algorithm, n=100_000, m=m, z=m if m > 2 else 1, seed=seed)
        pooled.add(degree_histogram(generate(config)))
    report = fit_report(pooled, m)
    assert not report.rejected, report.p_value
    assert report.tail_slope == pytest.approx(-3.0, abs=0.2)
