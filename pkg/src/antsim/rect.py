"""Diamond-sweep search with guide agents (RectSearch).

Each five-agent search team consists of four guides, one per cardinal
direction, and one explorer. Guides park on the axes and mark the corners of
the diamond of cells at distance d from the origin; the explorer zigzags
along the diamond's four sides, turning where it senses a guide, covering
all 4d cells of level d in exactly 8d moves. After a visit, a guide hops
outward past the block of parked guides; after completing a level, the
explorer rides north with its guide and starts the next uncovered level.

All transitions are deterministic given sensing: every enabled set is a
singleton.
"""

from __future__ import annotations

from dataclasses import dataclass

from .engine import Controller, LocalInput, N, S, E, W, P, UsageError, ORIGIN

DIRS = (N, E, S, W)

# legs of the diamond, traversed counterclockwise starting south-west
LEG_SW, LEG_SE, LEG_NE, LEG_NW = "SW", "SE", "NE", "NW"
NEXT_LEG = {LEG_SW: LEG_SE, LEG_SE: LEG_NE, LEG_NE: LEG_NW}
# (entry move, alternate move): on entering a leg the explorer takes the
# entry move, then alternates alternate/entry/alternate/...
LEG_MOVES = {LEG_SW: (W, S), LEG_SE: (S, E), LEG_NE: (E, N), LEG_NW: (N, W)}


class RectState:
    """Marker base for the six agent types."""
    __slots__ = ()


@dataclass(frozen=True)
class FreshGuide(RectState):
    dir: str
    seen_guide: bool = False
    first: bool = False


@dataclass(frozen=True)
class Guide(RectState):
    dir: str


@dataclass(frozen=True)
class MovingGuide(RectState):
    dir: str


@dataclass(frozen=True)
class FreshExplorer(RectState):
    seen_guide: bool = False
    first: bool = False


@dataclass(frozen=True)
class Explorer(RectState):
    leg: str = LEG_SW
    next_alt: bool = False  # parity bit: next move is the leg's alternate move


@dataclass(frozen=True)
class MovingExplorer(RectState):
    pass


RECT_TAGS = (FreshGuide, Guide, MovingGuide, FreshExplorer, Explorer,
             MovingExplorer)

EXPLORING_TAGS = (FreshExplorer, Explorer, MovingExplorer)


def _has(sensed, cls) -> bool:
    return any(isinstance(q, cls) for q in sensed)


def fresh_guide_step(s: FreshGuide, inp: LocalInput):
    if inp.at_origin:
        return s, s.dir
    if s.first:
        # the first team parks one cell outwards from the origin
        return Guide(s.dir), P
    if _has(inp.sensed, Guide):
        return FreshGuide(s.dir, True, s.first), s.dir
    if s.seen_guide and not _has(inp.sensed, MovingGuide):
        return Guide(s.dir), P
    return s, s.dir


def fresh_explorer_step(s: FreshExplorer, inp: LocalInput):
    # same walk as a fresh guide, but the stop emits the first sweep move
    if inp.at_origin:
        return s, N
    if s.first:
        return Explorer(LEG_SW, True), W
    if _has(inp.sensed, Guide):
        return FreshExplorer(True, s.first), N
    if s.seen_guide and not _has(inp.sensed, MovingGuide):
        return Explorer(LEG_SW, True), W
    return s, N


def guide_step(s: Guide, inp: LocalInput):
    # reacts only to the rectangle-searching Explorer variant; fresh and
    # moving explorers pass over the block without disturbing it
    if _has(inp.sensed, Explorer):
        return MovingGuide(s.dir), s.dir
    return s, P


def moving_guide_step(s: MovingGuide, inp: LocalInput):
    if _has(inp.sensed, Guide):
        return s, s.dir
    return Guide(s.dir), P


def explorer_step(s: Explorer, inp: LocalInput):
    if _has(inp.sensed, Guide):
        if s.leg == LEG_NW:
            # back at the north guide: level complete
            return MovingExplorer(), N
        leg = NEXT_LEG[s.leg]
        return Explorer(leg, True), LEG_MOVES[leg][0]
    entry, alt = LEG_MOVES[s.leg]
    if s.next_alt:
        return Explorer(s.leg, False), alt
    return Explorer(s.leg, True), entry


def moving_explorer_step(s: MovingExplorer, inp: LocalInput):
    if _has(inp.sensed, Guide):
        return s, N
    return Explorer(LEG_SW, True), W


_STEPS = {
    FreshGuide: fresh_guide_step,
    FreshExplorer: fresh_explorer_step,
    Guide: guide_step,
    MovingGuide: moving_guide_step,
    Explorer: explorer_step,
    MovingExplorer: moving_explorer_step,
}


def rect_enabled(state, inp: LocalInput):
    """Singleton enabled set for any rect-family state."""
    return (_STEPS[type(state)](state, inp),)


def rect_sensed_view(sensed: frozenset) -> frozenset:
    """Restrict sensing to rect-family states so co-located agents of other
    protocol families cannot disturb the sweep."""
    return frozenset(q for q in sensed if isinstance(q, RectState))


class RectController(Controller):
    def enabled(self, state, inp):
        return rect_enabled(state, inp)

    def sensed_view(self, state, sensed):
        return rect_sensed_view(sensed)


def team_states(first: bool):
    """Initial states of one emitted search team: explorer first, then the
    four guides in N, E, S, W order."""
    return (FreshExplorer(False, first),) + tuple(
        FreshGuide(d, False, first) for d in DIRS)


def emit_team(world, agent_ids, first: bool) -> None:
    """Turn five origin agents into a fresh search team (in place)."""
    ids = list(agent_ids)
    if len(ids) != 5:
        raise UsageError(f"a search team needs exactly 5 agents, got {len(ids)}")
    for aid in ids:
        if world.positions[aid] != ORIGIN:
            raise UsageError(f"agent {aid} is not at the origin")
    for aid, st in zip(ids, team_states(first)):
        world.states[aid] = st
