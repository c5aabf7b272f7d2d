"""Composition of the sweep and the geometric walk."""

from antsim.config import RunConfig, TreasureSpec
from antsim.engine import P, init_world, run
from antsim.hybrid import HInit, HybridController, branch_of
from antsim.emission import Elector
from antsim.geom import GInit
from antsim.rng import RngStream
from antsim.runner import run_experiment


def test_initial_coin_is_between_the_two_branches():
    ctl = HybridController()
    enabled = ctl.enabled(HInit(), None)
    assert len(enabled) == 2
    states = {type(st) for st, mv in enabled}
    assert states == {Elector, GInit}
    assert all(mv == P for _, mv in enabled)


def test_branch_of_classification():
    assert branch_of(HInit()) == "init"
    assert branch_of(Elector()) == "rect"
    assert branch_of(GInit()) == "geom"


def test_branch_split_is_fair():
    m = run_experiment(RunConfig(n=10_000, strategy="hybrid", seed=4,
                                 max_rounds=1))
    assert abs(m.n_r / 10_000 - 0.5) < 0.02
    assert m.n_r + m.n_g == 10_000


def _trajectories(ids, seed, rounds):
    """Run the composed controller for the given agent ids only and record
    every agent's (state, position) per round."""
    ctl = HybridController()
    world = init_world(max(ids) + 1, ctl.initial_state)
    for aid in list(world.states):
        if aid not in ids:
            del world.states[aid]
            del world.positions[aid]
    out = {aid: [] for aid in ids}

    def record(w):
        for aid in ids:
            out[aid].append((w.states[aid], w.positions[aid]))

    run(world, ctl, RngStream(seed), rounds, observers=[record])
    return out


def test_branches_evolve_independently():
    # removing the other branch's agents changes nothing, bit for bit
    seed, rounds, n = 11, 150, 60
    full = _trajectories(set(range(n)), seed, rounds)
    rect_ids = {aid for aid in range(n)
                if branch_of(full[aid][1][0]) == "rect"}
    geom_ids = set(range(n)) - rect_ids
    assert rect_ids and geom_ids
    for ids in (rect_ids, geom_ids):
        alone = _trajectories(ids, seed, rounds)
        for aid in ids:
            assert alone[aid] == full[aid]


def test_hybrid_finds_a_nearby_treasure():
    m = run_experiment(RunConfig(n=100, strategy="hybrid", seed=0,
                                 max_rounds=500,
                                 treasure=TreasureSpec("explicit", (1, 1))))
    assert m.discovery_round is not None
