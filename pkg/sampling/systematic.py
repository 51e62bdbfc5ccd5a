"""
Random systematic sampling (RSS) and random systematic partitioning (RSP).

Both operate on a FrequencyBag: distinct elements with positive integer
frequencies. RSS draws m distinct elements with inclusion probability exactly
m * d_i / s. RSP deals all s * m copies into s groups of m distinct elements.

All arithmetic is integral: the RSS offset is a uniform integer in
[0, s/m), so the design is exact and bit-reproducible for a given seed.
"""

from collections import Counter
from collections.abc import Iterable
from dataclasses import dataclass, field

import numpy as np


class SamplingError(ValueError):
    """Raised when a bag cannot be sampled or partitioned as requested."""

    def __init__(self, message: str, error_code: str | None = None):
        self.message = message
        self.error_code = error_code
        super().__init__(self.message)


class DivisibilityError(SamplingError):
    def __init__(self, total: int, m: int):
        super().__init__(f"sample size {m} does not divide bag total {total}", "divisibility")


class ArityError(SamplingError):
    def __init__(self, total: int, s: int, m: int):
        super().__init__(f"{s} groups of {m} cannot hold a bag of total {total}", "arity")


class InfeasibleError(SamplingError):
    def __init__(self, element: int, frequency: int, bound: int):
        self.element = element
        self.frequency = frequency
        self.bound = bound
        super().__init__(
            f"element {element} has frequency {frequency} above the bound {bound}",
            "infeasible",
        )


@dataclass(frozen=True)
class FrequencyBag:
    """A multiset of element ids stored as (element, frequency) pairs."""

    items: tuple[tuple[int, int], ...]
    total: int = field(init=False)

    def __post_init__(self):
        total = 0
        for element, frequency in self.items:
            if frequency < 1:
                raise ValueError(f"element {element} has non-positive frequency {frequency}")
            total += frequency
        object.__setattr__(self, "total", total)

    @classmethod
    def from_members(cls, members: Iterable[int]) -> "FrequencyBag":
        """Count occurrences; items keep first-appearance order."""
        return cls(tuple(Counter(members).items()))

    @classmethod
    def from_mapping(cls, frequencies: dict[int, int]) -> "FrequencyBag":
        return cls(tuple((e, f) for e, f in frequencies.items() if f > 0))

    def __len__(self) -> int:
        return len(self.items)

    def max_item(self) -> tuple[int, int]:
        """The (element, frequency) pair with the largest frequency."""
        return max(self.items, key=lambda item: item[1])


@dataclass
class Partition:
    """Output of rsp_partition: s groups of m distinct elements."""

    groups: list[list[int]]
    # Number of copy placements performed; always s * m.
    operations: int = 0


def rss_sample(bag: FrequencyBag, m: int, rng: np.random.Generator) -> list[int]:
    """
    Draw m distinct elements with inclusion probabilities m * d_i / s.

    The element list is shuffled first, then walked with cumulative
    frequencies against the thresholds r, r + s/m, r + 2s/m, ...
    Elements are returned in traversal order.
    """
    if m < 1:
        raise ValueError("m must be positive")
    if not bag.items:
        raise ValueError("cannot sample from an empty bag")
    if bag.total % m:
        raise DivisibilityError(bag.total, m)

    step = bag.total // m
    element, frequency = bag.max_item()
    if frequency > step:
        raise InfeasibleError(element, frequency, step)

    order = list(bag.items)
    rng.shuffle(order)

    threshold = int(rng.integers(step))
    cumulative = 0
    sample = []
    for element, frequency in order:
        cumulative += frequency
        # frequency <= step, so at most one threshold falls inside this element.
        if cumulative > threshold:
            sample.append(element)
            threshold += step
    return sample


def rsp_partition(bag: FrequencyBag, s: int, m: int, rng: np.random.Generator) -> Partition:
    """
    Partition the bag into s groups of m distinct elements.

    Unique elements are shuffled, then their copies are dealt round-robin
    into the groups, so the d_i copies of an element land in d_i
    consecutive (mod s) groups. Runs in Theta(s * m).
    """
    if s < 1 or m < 1:
        raise ValueError("s and m must be positive")
    if bag.total != s * m:
        raise ArityError(bag.total, s, m)
    element, frequency = bag.max_item()
    if frequency > s:
        raise InfeasibleError(element, frequency, s)

    order = list(bag.items)
    rng.shuffle(order)

    groups: list[list[int]] = [[] for _ in range(s)]
    k = 0
    operations = 0
    for element, frequency in order:
        for _ in range(frequency):
            groups[k].append(element)
            k += 1
            if k == s:
                k = 0
            operations += 1
    return Partition(groups=groups, operations=operations)
