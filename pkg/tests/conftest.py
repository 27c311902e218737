"""Shared fixtures: the worked-example systems and random-system helpers."""

from __future__ import annotations

import random

import pytest

from netctrl import StructuredSystem

# 9-node network used throughout: state edges i -> j
EXAMPLE_EDGES = (
    (1, 2), (1, 6),
    (2, 3), (2, 5),
    (4, 3), (4, 5),
    (5, 6), (5, 7), (5, 8), (5, 9),
    (6, 8), (6, 9),
    (7, 8),
    (9, 1),
)


@pytest.fixture
def io_system() -> StructuredSystem:
    """The 9-state, 2-input, 2-output example system."""
    return StructuredSystem(
        n=9,
        state_edges=EXAMPLE_EDGES,
        explicit_inputs=((4, 7), (6, 9)),
        explicit_outputs=((8,), (8, 9)),
    )


@pytest.fixture
def chain_system() -> StructuredSystem:
    """Single-input path-plus-branch system: u1 -> x1 -> x2 -> x3, x1 -> x4."""
    return StructuredSystem(
        n=4,
        state_edges=((1, 2), (2, 3), (1, 4)),
        explicit_inputs=((1,),),
    )


@pytest.fixture
def steering_system() -> StructuredSystem:
    """The steering-selection example: same dynamics, A = {1..4}, T = {8, 9}."""
    return StructuredSystem(
        n=9,
        state_edges=EXAMPLE_EDGES,
        available=(1, 2, 3, 4),
        targets=(8, 9),
    )


def random_system(
    rng: random.Random,
    max_n: int = 10,
    max_available: int = 6,
    max_targets: int = 3,
    edge_factor: float = 1.8,
) -> StructuredSystem:
    """A random sparse system with nonempty available and target sets."""
    n = rng.randint(2, max_n)
    n_edges = rng.randint(0, max(1, int(edge_factor * n)))
    edges = set()
    for _ in range(n_edges):
        edges.add((rng.randint(1, n), rng.randint(1, n)))
    n_avail = rng.randint(1, min(max_available, n))
    n_targets = rng.randint(1, min(max_targets, n))
    available = tuple(rng.sample(range(1, n + 1), n_avail))
    targets = tuple(rng.sample(range(1, n + 1), n_targets))
    return StructuredSystem(
        n=n, state_edges=tuple(edges), available=available, targets=targets
    )
