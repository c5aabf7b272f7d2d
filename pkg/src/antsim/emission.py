"""Search-team emission at the origin.

Two schemes produce the five-agent teams consumed by the diamond sweep:

* An oracle scheme that emits one team per round straight from a pool of
  idle origin agents. It runs outside the FSM model, at the round barrier,
  and serves as the idealized reference emission.

* A protocol-faithful scheme: agents spread east along the ray of cells
  (x, 0), x > 0, by repeated fair coin tosses (an agent moves east with
  probability 1/2, guarded so that a cell is never abandoned by all of its
  occupants). An agent alone in a ray cell stops as the cell's elected
  leader; every fifth cell is dedicated to an explorer and the four cells
  after it to the four guides. The innermost flagged explorer walks east
  collecting its four guides, hands the flag to the next explorer cell, and
  the completed team walks back to the origin where it is emitted.

Election runs in two subrounds (publish intent, then commit) because the
"not everybody leaves" guard needs one round of sensing; all agents start
in lockstep so the subround parity stays globally synchronized.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .engine import Controller, LocalInput, N, S, E, W, P
from .rect import (RectState, FreshExplorer, FreshGuide, rect_enabled,
                   rect_sensed_view, emit_team)

# team roles, keyed by ray-cell distance mod 5
ROLE_EXPLORER = "explorer"
ROLE_GUIDE_N = "guide_n"
ROLE_GUIDE_E = "guide_e"
ROLE_GUIDE_S = "guide_s"
ROLE_GUIDE_W = "guide_w"
GUIDE_ROLES = (ROLE_GUIDE_N, ROLE_GUIDE_E, ROLE_GUIDE_S, ROLE_GUIDE_W)
ROLE_DIR = {ROLE_GUIDE_N: N, ROLE_GUIDE_E: E, ROLE_GUIDE_S: S,
            ROLE_GUIDE_W: W}

_ROLE_OF = {1: ROLE_EXPLORER, 2: ROLE_GUIDE_N, 3: ROLE_GUIDE_E,
            4: ROLE_GUIDE_S, 0: ROLE_GUIDE_W}

# commit-phase decisions
MOVE, STAY, FORCED = "move", "stay", "forced"

# rounds without a passing elector before the innermost leader starts
# collecting; a gap this long mid-drain has probability well under 1e-4
HOLD_ROUNDS = 30


def role_of(m: int) -> str:
    """Role dedicated to a ray cell at distance d with d mod 5 == m."""
    return _ROLE_OF[m]


class PstaState:
    """Marker base for all emission-protocol states."""
    __slots__ = ()


@dataclass(frozen=True)
class Elector(PstaState):
    """An agent still participating in the spread-out coin process.

    mod5 tracks (east moves since leaving the origin) mod 5; adj_origin is
    true while the agent sits in the cell it entered directly from the
    origin; decision is set only in the commit subround.
    """
    commit: bool = False
    decision: Optional[str] = None
    mod5: int = 0
    flag: bool = False
    adj_origin: bool = False


@dataclass(frozen=True)
class Ready(PstaState):
    role: str
    flag: bool = False
    adj_origin: bool = False
    hold: int = 0  # quiet rounds counted by the innermost flagged explorer


@dataclass(frozen=True)
class Collector(PstaState):
    k: int                 # guides absorbed so far
    waiting: bool = False
    first: bool = False    # elected in the cell adjacent to the origin


@dataclass(frozen=True)
class CollectedGuide(PstaState):
    role: str


@dataclass(frozen=True)
class FlagTrip(PstaState):
    first: bool = False
    hold: int = 0  # rounds spent in front of an empty destination cell


@dataclass(frozen=True)
class FlagReturn(PstaState):
    first: bool = False


@dataclass(frozen=True)
class TeamReturn(PstaState):
    role: str
    first: bool = False


def _election_states(sensed):
    return (q for q in sensed if isinstance(q, (Elector, Ready)))


def _any_ready(sensed) -> bool:
    return any(isinstance(q, Ready) for q in sensed)


def _ready_guide(sensed) -> bool:
    return any(isinstance(q, Ready) and q.role != ROLE_EXPLORER for q in sensed)


def _sensed_collector(sensed) -> Optional[Collector]:
    for q in sensed:
        if isinstance(q, Collector):
            return q
    return None


def _flag_broadcast(sensed) -> bool:
    return any(isinstance(q, FlagTrip) for q in sensed)


def _stay_published(sensed) -> bool:
    for q in sensed:
        if isinstance(q, Ready):
            return True
        if isinstance(q, Elector) and q.commit and q.decision == STAY:
            return True
    return False


def _elector_intent(s: Elector, inp: LocalInput):
    fl = s.flag or _flag_broadcast(inp.sensed)
    alone = next(iter(_election_states(inp.sensed)), None) is None
    if inp.at_origin:
        if alone:
            # a lone origin agent must leave or it would strand; origin
            # agents never become leaders
            return ((Elector(True, FORCED, s.mod5, fl, s.adj_origin), P),)
    else:
        if alone:
            return ((Ready(role_of(s.mod5), fl or s.adj_origin,
                           s.adj_origin), P),)
        if _any_ready(inp.sensed):
            # the cell already has its leader: keep moving east
            return ((Elector(True, FORCED, s.mod5, fl, s.adj_origin), P),)
    # the fair coin, published as an intent
    return ((Elector(True, MOVE, s.mod5, fl, s.adj_origin), P),
            (Elector(True, STAY, s.mod5, fl, s.adj_origin), P))


def _elector_commit(s: Elector, inp: LocalInput):
    fl = s.flag or _flag_broadcast(inp.sensed)
    moves = s.decision == FORCED or (s.decision == MOVE
                                     and _stay_published(inp.sensed))
    if moves:
        # east moves reset the flag and re-derive the origin-adjacency bit
        return ((Elector(False, None, (s.mod5 + 1) % 5, False,
                         inp.at_origin), E),)
    return ((Elector(False, None, s.mod5, fl, s.adj_origin), P),)


def _ready_step(s: Ready, inp: LocalInput):
    fl = s.flag or _flag_broadcast(inp.sensed)
    if s.role == ROLE_EXPLORER:
        if fl:
            if not s.adj_origin:
                # the flag was handed over: start collecting right away
                return ((Collector(0, False, False), E),)
            # the innermost leader holds its cell until stragglers from the
            # origin stop passing through; leaving earlier would let a late
            # arrival elect itself a second flag holder
            if any(isinstance(q, Elector) for q in inp.sensed):
                return ((Ready(s.role, fl, True, 0), P),)
            if s.hold < HOLD_ROUNDS:
                return ((Ready(s.role, fl, True, s.hold + 1), P),)
            return ((Collector(0, False, True), E),)
    else:
        col = _sensed_collector(inp.sensed)
        if col is not None:
            move = E if col.k <= 2 else P
            return ((CollectedGuide(s.role), move),)
    if fl != s.flag:
        return ((Ready(s.role, fl, s.adj_origin), P),)
    return ((s, P),)


def _collector_step(s: Collector, inp: LocalInput):
    if _ready_guide(inp.sensed):
        if s.k <= 2:
            return ((Collector(s.k + 1, False, s.first), E),)
        return ((Collector(4, False, s.first), P),)
    if s.k == 4:
        # team complete: hand the flag to the next explorer cell
        return ((FlagTrip(s.first), E),)
    return ((Collector(s.k, True, s.first), P),)


def _collected_guide_step(s: CollectedGuide, inp: LocalInput):
    if any(isinstance(q, FlagReturn) for q in inp.sensed):
        return ((TeamReturn(s.role), W),)
    col = _sensed_collector(inp.sensed)
    if col is not None and col.k <= 2 and _ready_guide(inp.sensed):
        # the group shifts east together with the collector
        return ((s, E),)
    return ((s, P),)


def _team_return_step(s: TeamReturn, inp: LocalInput):
    if not inp.at_origin:
        return ((s, W),)
    if s.role == ROLE_EXPLORER:
        return ((FreshExplorer(False, s.first), P),)
    first = False
    for q in inp.sensed:
        if isinstance(q, TeamReturn) and q.role == ROLE_EXPLORER:
            first = q.first
            break
    return ((FreshGuide(ROLE_DIR[s.role], False, first), P),)


def psta_enabled(state, inp: LocalInput):
    if isinstance(state, Elector):
        return _elector_commit(state, inp) if state.commit \
            else _elector_intent(state, inp)
    if isinstance(state, Ready):
        return _ready_step(state, inp)
    if isinstance(state, Collector):
        return _collector_step(state, inp)
    if isinstance(state, CollectedGuide):
        return _collected_guide_step(state, inp)
    if isinstance(state, FlagTrip):
        # hand over the flag only once the destination cell's election has
        # concluded; delivering it to an empty cell would lose it for good.
        # If the cell stays empty long enough the ray is exhausted: abandon
        # the handoff so the team can still walk back and be emitted.
        if _any_ready(inp.sensed):
            return ((FlagReturn(state.first), W),)
        if any(isinstance(q, Elector) for q in inp.sensed):
            return ((FlagTrip(state.first, 0), P),)
        if state.hold < HOLD_ROUNDS:
            return ((FlagTrip(state.first, state.hold + 1), P),)
        return ((FlagReturn(state.first), W),)
    if isinstance(state, FlagReturn):
        return ((TeamReturn(ROLE_EXPLORER, state.first), W),)
    if isinstance(state, TeamReturn):
        return _team_return_step(state, inp)
    raise TypeError(f"not an emission-protocol state: {state!r}")


def psta_sensed_view(sensed: frozenset) -> frozenset:
    return frozenset(q for q in sensed if isinstance(q, PstaState))


class PstaRectController(Controller):
    """Full search protocol: coin-toss emission feeding the diamond sweep."""

    initial_state = Elector()

    def enabled(self, state, inp):
        if isinstance(state, RectState):
            return rect_enabled(state, inp)
        return psta_enabled(state, inp)

    def sensed_view(self, state, sensed):
        if isinstance(state, RectState):
            return rect_sensed_view(sensed)
        return psta_sensed_view(sensed)


@dataclass(frozen=True)
class Idle:
    """Reserved origin state for agents not yet emitted (oracle mode);
    invisible to the sweep rules."""


class OracleRectController(Controller):
    """Diamond sweep with emission handled by a harness-level oracle."""

    initial_state = Idle()

    def enabled(self, state, inp):
        if isinstance(state, Idle):
            return ((state, P),)
        return rect_enabled(state, inp)

    def sensed_view(self, state, sensed):
        if isinstance(state, Idle):
            return frozenset()
        return rect_sensed_view(sensed)


class OracleEmission:
    """Round-barrier hook converting five idle agents into a search team at
    every round t = 1, 2, ..., floor(n/5); leftovers stay idle forever."""

    def __init__(self):
        self.emission_rounds: list[int] = []

    def __call__(self, world) -> None:
        if world.round < 1:
            return
        idle = sorted(aid for aid, st in world.states.items()
                      if isinstance(st, Idle))
        if len(idle) >= 5:
            emit_team(world, idle[:5], first=not self.emission_rounds)
            self.emission_rounds.append(world.round)
