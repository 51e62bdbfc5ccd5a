import numpy as np
import pytest

from graph.generate import GeneratorConfig
from graph.nodes import Algorithm
from graph.state import Graph
from graph.tableau import HyperedgeTableau
from verify.harness import elementary_symmetric, impossibility_demo, invariant_harness


@pytest.mark.parametrize("algorithm", [Algorithm.SE_B, Algorithm.SE_B_STAR, Algorithm.SE_C])
@pytest.mark.parametrize("m", [3, 4, 5])
def test_harness_passes(algorithm, m):
    config = GeneratorConfig(algorithm=algorithm, n=120, m=m, z=m, seed=m)
    report = invariant_harness(config, steps_to_check=60)
    assert report.passed, report.first_failure
    assert report.tableau_violations == 0
    assert report.graph_problems == []
    assert report.edge_count_ok
    # one scan at the start, one per checked step, one at the end
    assert report.checked_steps == 62
    assert report.invariant3_scanned is (algorithm is Algorithm.SE_B_STAR)


@pytest.mark.parametrize("m", [3, 4])
def test_se_b_star_scan_from_complete_start(m):
    config = GeneratorConfig(algorithm=Algorithm.SE_B_STAR, n=200, m=m, z=m, seed=9)
    report = invariant_harness(config, steps_to_check=200, initial_graph=Graph.complete(m + 1))
    assert report.checked_steps == report.steps + 1
    assert report.passed
    assert report.invariant3_scanned
    assert report.invariant3_violations == 0


def test_se_a_has_no_tableau():
    report = invariant_harness(GeneratorConfig(n=100, z=2, seed=1))
    assert report.passed
    assert report.tableau_violations == 0


def test_skipped_replace_is_caught(monkeypatch):
    original = HyperedgeTableau.replace
    calls = {"n": 0}

    def flaky(self, pos, old, new):
        calls["n"] += 1
        if calls["n"] == 5:
            return
        original(self, pos, old, new)

    monkeypatch.setattr(HyperedgeTableau, "replace", flaky)
    config = GeneratorConfig(algorithm=Algorithm.SE_B, n=60, m=3, z=3, seed=4)
    report = invariant_harness(config, steps_to_check=60)
    assert not report.passed
    assert report.tableau_violations > 0
    assert "degree" in report.first_failure
    assert report.first_failure_step == 5


def test_plain_se_b_only_records_invariant3():
    # K_3 with m = 3 starts as two copies of one hyperedge, so every pair is unwitnessed.
    config = GeneratorConfig(algorithm=Algorithm.SE_B, n=40, m=3, z=3, seed=2,
                             initial={"kind": "complete", "size": 3})
    report = invariant_harness(config, invariant3=True)
    assert report.invariant3_scanned
    assert report.invariant3_violations > 0
    assert report.passed


def test_elementary_symmetric():
    values = np.array([1.0, 2.0, 3.0])
    assert elementary_symmetric(values, 0) == 1.0
    assert elementary_symmetric(values, 1) == pytest.approx(6.0)
    assert elementary_symmetric(values, 2) == pytest.approx(11.0)
    assert elementary_symmetric(values, 3) == pytest.approx(6.0)
    assert elementary_symmetric(values, 4) == 0.0


def test_impossibility_demo():
    assert impossibility_demo([1.0, 1.0], 2)
    assert not impossibility_demo([0.9, 0.6, 0.5], 2)
    assert not impossibility_demo([0.9, 0.6, 0.5], 2, rescaled=False)
    assert impossibility_demo([0.75] * 4, 3)
    assert not impossibility_demo([0.75] * 4, 3, rescaled=False)


@pytest.mark.parametrize(
    "pi, m",
    [([0.5, 0.5], 2), ([1.0], 2), ([0.0, 1.0, 1.0], 2), ([1.5, 0.5], 2)],
)
def test_impossibility_demo_rejects_bad_input(pi, m):
    with pytest.raises(ValueError):
        impossibility_demo(pi, m)


@pytest.mark.slow
@pytest.mark.parametrize("algorithm", [Algorithm.SE_B, Algorithm.SE_B_STAR, Algorithm.SE_C])
@pytest.mark.parametrize("m", [3, 4, 5])
def test_harness_acceptance(algorithm, m):
    config = GeneratorConfig(algorithm=algorithm, n=2_000, m=m, z=m, seed=100 + m)
    report = invariant_harness(config, steps_to_check=2_000)
    assert report.checked_steps == report.steps + 1
    assert report.passed, report.first_failure


@pytest.mark.slow
@pytest.mark.parametrize("m", [3, 4])
def test_invariant3_acceptance(m):
    start = Graph.complete(m + 1)
    config = GeneratorConfig(algorithm=Algorithm.SE_B_STAR, n=500, m=m, z=m, seed=200 + m)
    report = invariant_harness(config, steps_to_check=500, initial_graph=start)
    assert report.checked_steps == report.steps + 1
    assert report.passed, report.first_failure
    assert report.invariant3_violations == 0

    # Plain SE-B under the same scan may violate; it is recorded, not failed.
    control = config.model_copy(update={"algorithm": Algorithm.SE_B})
    report = invariant_harness(control, steps_to_check=500, invariant3=True, initial_graph=start)
    assert report.invariant3_scanned
    assert report.passed
