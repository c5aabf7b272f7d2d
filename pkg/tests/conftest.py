"""Shared helpers for the test suite."""

from __future__ import annotations

import pytest

from antsim.config import RunConfig, TreasureSpec
from antsim.runner import run_experiment


def make_metrics(**kwargs):
    cfg = RunConfig(**kwargs)
    return run_experiment(cfg)


@pytest.fixture(scope="session")
def sweep_grid():
    """The reference verification grid: both sweep strategies, three agent
    counts, 50 seeds each, 400 rounds, with the invariant checker recording
    into the metrics. Shared by the timing, spacing, and cleanliness tests."""
    grid = {}
    for strategy in ("rect-oracle", "rect-psta"):
        for n in (5, 20, 100):
            for seed in range(50):
                m = make_metrics(n=n, strategy=strategy, seed=seed,
                                 max_rounds=400, assert_invariants=True)
                grid[(strategy, n, seed)] = m
    return grid
