"""Diamond sweep: per-rule behavior and frozen whole-run timing values."""

from antsim.engine import LocalInput, N, S, E, W, P
from antsim.config import RunConfig, TreasureSpec
from antsim.rect import (LEG_NE, LEG_NW, LEG_SE, LEG_SW, Explorer,
                         FreshExplorer, FreshGuide, Guide, MovingExplorer,
                         MovingGuide, explorer_step, fresh_explorer_step,
                         fresh_guide_step, guide_step, moving_guide_step,
                         moving_explorer_step, rect_enabled, team_states)
from antsim.runner import run_experiment


def _inp(*sensed, at_origin=False):
    return LocalInput(frozenset(sensed), at_origin, False)


# ------------------------------------------------------------ single rules

def test_fresh_guide_walks_out_of_the_origin():
    s = FreshGuide(N)
    assert fresh_guide_step(s, _inp(at_origin=True)) == (s, N)


def test_first_team_guide_parks_one_cell_out():
    s = FreshGuide(E, first=True)
    assert fresh_guide_step(s, _inp()) == (Guide(E), P)


def test_fresh_guide_passes_the_parked_block_then_stops():
    s = FreshGuide(N)
    st, mv = fresh_guide_step(s, _inp(Guide(N)))
    assert (st, mv) == (FreshGuide(N, True), N)
    # one cell past the outermost parked guide: stop
    assert fresh_guide_step(st, _inp()) == (Guide(N), P)
    # unless the block is still shifting outwards
    assert fresh_guide_step(st, _inp(MovingGuide(N))) == (st, N)


def test_fresh_explorer_stop_emits_the_first_sweep_move():
    s = FreshExplorer(seen_guide=True)
    assert fresh_explorer_step(s, _inp()) == (Explorer(LEG_SW, True), W)


def test_guide_moves_outwards_when_visited_by_the_sweep():
    assert guide_step(Guide(N), _inp(Explorer(LEG_NW))) == (MovingGuide(N), N)
    # fresh and moving explorers do not disturb the block
    assert guide_step(Guide(N), _inp(FreshExplorer())) == (Guide(N), P)
    assert guide_step(Guide(N), _inp(MovingExplorer())) == (Guide(N), P)


def test_moving_guide_hops_past_the_block():
    assert moving_guide_step(MovingGuide(N), _inp(Guide(N))) == \
        (MovingGuide(N), N)
    assert moving_guide_step(MovingGuide(N), _inp()) == (Guide(N), P)


def test_explorer_zigzag_alternates_moves():
    # on the south-west leg the moves alternate W, S, W, S, ...
    s = Explorer(LEG_SW, True)
    st, mv = explorer_step(s, _inp())
    assert (st, mv) == (Explorer(LEG_SW, False), S)
    st, mv = explorer_step(st, _inp())
    assert (st, mv) == (Explorer(LEG_SW, True), W)


def test_explorer_turns_at_a_guide():
    st, mv = explorer_step(Explorer(LEG_SW, False), _inp(Guide(S)))
    assert (st, mv) == (Explorer(LEG_SE, True), S)
    st, mv = explorer_step(Explorer(LEG_SE, False), _inp(Guide(E)))
    assert (st, mv) == (Explorer(LEG_NE, True), E)
    st, mv = explorer_step(Explorer(LEG_NE, False), _inp(Guide(N)))
    assert (st, mv) == (Explorer(LEG_NW, True), N)


def test_explorer_finishes_the_level_at_the_north_guide():
    st, mv = explorer_step(Explorer(LEG_NW, False), _inp(Guide(N)))
    assert (st, mv) == (MovingExplorer(), N)


def test_moving_explorer_rides_past_guides_then_restarts():
    s = MovingExplorer()
    assert moving_explorer_step(s, _inp(Guide(N))) == (s, N)
    assert moving_explorer_step(s, _inp()) == (Explorer(LEG_SW, True), W)


def test_rect_enabled_is_always_a_singleton():
    for s in (FreshGuide(N), Guide(E), MovingGuide(S), FreshExplorer(),
              Explorer(LEG_NE, False), MovingExplorer()):
        assert len(rect_enabled(s, _inp())) == 1


def test_team_states_layout():
    states = team_states(first=True)
    assert isinstance(states[0], FreshExplorer) and states[0].first
    assert [g.dir for g in states[1:]] == [N, E, S, W]


# --------------------------------------------------------- whole-run values

def test_single_team_level_timing():
    m = run_experiment(RunConfig(n=5, strategy="rect-oracle", seed=0,
                                 max_rounds=300, assert_invariants=True))
    assert m.level_starts[1] == 2
    assert m.level_finishes[1] == 10
    assert m.level_starts[2] == 11
    assert m.level_finishes[2] == 27
    for d, f in m.level_finishes.items():
        assert f - m.level_starts[d] == 8 * d
        if d + 1 in m.level_starts:
            assert m.level_starts[d + 1] == f + 1
    assert not m.violations


def test_single_team_discovery_round():
    m = run_experiment(RunConfig(n=5, strategy="rect-oracle", seed=0,
                                 max_rounds=300,
                                 treasure=TreasureSpec("explicit", (0, 2))))
    assert m.discovery_round == 11


def test_many_teams_start_levels_every_other_round():
    m = run_experiment(RunConfig(n=100, strategy="rect-oracle", seed=0,
                                 max_rounds=200, assert_invariants=True))
    # one fresh team arrives per round and needs d rounds to reach level d
    for d in range(1, 10):
        assert m.level_starts[d] == 2 * d
    # from level 10 on, recycled sweepers from finished levels get there first
    assert m.level_starts[10] == 19
    assert not m.violations


def test_oracle_sweep_is_seed_independent():
    # every enabled set is a singleton, so no randomness is ever drawn
    a = run_experiment(RunConfig(n=20, strategy="rect-oracle", seed=0,
                                 max_rounds=300))
    b = run_experiment(RunConfig(n=20, strategy="rect-oracle", seed=987654,
                                 max_rounds=300))
    assert a.level_starts == b.level_starts
    assert a.level_finishes == b.level_finishes
