from collections import Counter

import numpy as np
import pytest

from sampling.systematic import (
    ArityError,
    DivisibilityError,
    FrequencyBag,
    InfeasibleError,
    rsp_partition,
    rss_sample,
)
from tests.conftest import assert_binomial


def test_frequency_bag_counts_members():
    bag = FrequencyBag.from_members([3, 1, 3, 2, 3])
    assert bag.items == ((3, 3), (1, 1), (2, 1))
    assert bag.total == 5
    assert len(bag) == 3
    assert bag.max_item() == (3, 3)


def test_frequency_bag_rejects_non_positive():
    with pytest.raises(ValueError):
        FrequencyBag(((0, 0),))
    assert FrequencyBag.from_mapping({0: 2, 1: 0}).items == ((0, 2),)


def test_rss_returns_m_distinct(rng):
    bag = FrequencyBag(((0, 2), (1, 2), (2, 2), (3, 2)))
    for _ in range(500):
        sample = rss_sample(bag, 2, rng)
        assert len(sample) == 2
        assert len(set(sample)) == 2


def test_rss_marginals_are_proportional(rng):
    bag = FrequencyBag(((0, 1), (1, 2), (2, 3), (3, 4), (4, 2)))
    m, trials = 3, 50_000
    hits = Counter()
    for _ in range(trials):
        hits.update(rss_sample(bag, m, rng))
    for element, frequency in bag.items:
        assert_binomial(hits[element], trials, m * frequency / bag.total)


def test_rss_element_at_bound_is_always_sampled(rng):
    # frequency == s/m means inclusion probability 1
    bag = FrequencyBag(((0, 4), (1, 1), (2, 1), (3, 2)))
    for _ in range(200):
        assert 0 in rss_sample(bag, 2, rng)


def test_rss_randomized_instances_match_targets(rng):
    for _ in range(20):
        m = int(rng.integers(1, 4))
        k = int(rng.integers(m, 8))
        step = int(rng.integers(1, 4))
        # Build a feasible bag: total m * step, every frequency <= step.
        freqs = Counter()
        for _ in range(step):
            freqs.update(rng.choice(k, size=m, replace=False).tolist())
        bag = FrequencyBag.from_mapping(dict(freqs))
        trials = 4_000
        hits = Counter()
        for _ in range(trials):
            sample = rss_sample(bag, m, rng)
            assert len(set(sample)) == m
            hits.update(sample)
        for element, frequency in bag.items:
            p = m * frequency / bag.total
            if p == 1.0:
                assert hits[element] == trials
            else:
                assert_binomial(hits[element], trials, p)


def test_rss_errors(rng):
    with pytest.raises(DivisibilityError):
        rss_sample(FrequencyBag(((0, 1), (1, 2))), 2, rng)
    with pytest.raises(InfeasibleError) as info:
        rss_sample(FrequencyBag(((0, 3), (1, 1))), 2, rng)
    assert info.value.element == 0
    with pytest.raises(ValueError):
        rss_sample(FrequencyBag(()), 1, rng)


def test_rss_is_reproducible():
    bag = FrequencyBag(((0, 3), (1, 3), (2, 2), (3, 4)))
    a = [rss_sample(bag, 3, np.random.default_rng(9)) for _ in range(5)]
    b = [rss_sample(bag, 3, np.random.default_rng(9)) for _ in range(5)]
    assert a == b


def test_rsp_partition_validity(rng):
    for _ in range(1_000):
        s = int(rng.integers(1, 11))
        k = int(rng.integers(1, 21))
        m = int(rng.integers(1, min(k, 20) + 1))
        groups = [rng.choice(k, size=m, replace=False).tolist() for _ in range(s)]
        bag = FrequencyBag.from_members(x for g in groups for x in g)

        partition = rsp_partition(bag, s, m, rng)

        assert len(partition.groups) == s
        assert all(len(g) == m and len(set(g)) == m for g in partition.groups)
        assert Counter(x for g in partition.groups for x in g) == Counter(dict(bag.items))
        assert partition.operations == s * m


def test_rsp_saturated_element_is_in_every_group(rng):
    bag = FrequencyBag(((7, 4), (1, 2), (2, 2), (3, 2), (4, 2)))
    partition = rsp_partition(bag, 4, 3, rng)
    assert all(7 in g for g in partition.groups)


def test_rsp_errors(rng):
    with pytest.raises(ArityError):
        rsp_partition(FrequencyBag(((0, 1), (1, 2))), 2, 2, rng)
    with pytest.raises(InfeasibleError):
        rsp_partition(FrequencyBag(((0, 3), (1, 1))), 2, 2, rng)
