"""Synchronous-round simulation of anonymous FSM agents on the infinite grid.

The world is the grid Z^2 with a distinguished origin (0, 0). All agents run
the same protocol: a transition function from (state, local input) to a
nonempty set of (state, move) pairs, one of which is chosen uniformly at
random each round. An agent's local input is the set of states held by the
*other* agents in its cell plus two flags (at the origin / at the treasure
cell). All agents transition simultaneously from the same round snapshot.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .rng import RngStream

Coord = tuple[int, int]

# position-transition alphabet
N, S, E, W, P = "N", "S", "E", "W", "P"
MOVES = (N, S, E, W, P)
MOVE_DELTA = {N: (0, 1), S: (0, -1), E: (1, 0), W: (-1, 0), P: (0, 0)}

ORIGIN: Coord = (0, 0)
COORD_LIMIT = 2**31  # desk-scale sanity bound on coordinates

EMPTY_SENSED: frozenset = frozenset()


class ProtocolError(Exception):
    """A controller produced an empty enabled set for a reachable input."""


class UsageError(Exception):
    """Invalid argument to a simulation-level operation."""


def l1_distance(a: Coord, b: Coord) -> int:
    return abs(a[0] - b[0]) + abs(a[1] - b[1])


def apply_move(c: Coord, m: str) -> Coord:
    dx, dy = MOVE_DELTA[m]
    return (c[0] + dx, c[1] + dy)


@dataclass(frozen=True)
class LocalInput:
    """What a single agent perceives in its cell at the start of a round."""

    sensed: frozenset
    at_origin: bool
    at_treasure: bool


class Controller:
    """Base protocol controller.

    `enabled` must be a pure function of (state, input) returning a nonempty
    tuple of (new_state, move) pairs; a uniform choice over the tuple is the
    agent's transition. `sensed_view` lets a controller restrict which sensed
    states its rules can react to (used to keep composed protocols from
    interfering); it must likewise be pure.
    """

    initial_state = None

    def enabled(self, state, inp: LocalInput):
        raise NotImplementedError

    def sensed_view(self, state, sensed: frozenset) -> frozenset:
        return sensed


class WorldState:
    """Round counter plus the positions and states of all agents.

    Only occupied cells are represented; the grid itself is never
    materialized.
    """

    __slots__ = ("round", "treasure", "states", "positions")

    def __init__(self, round_: int, states: dict, positions: dict,
                 treasure: Optional[Coord] = None):
        self.round = round_
        self.states = states        # agent id -> state
        self.positions = positions  # agent id -> (x, y)
        self.treasure = treasure

    def agent_ids(self):
        return self.states.keys()

    @property
    def n_agents(self) -> int:
        return len(self.states)

    def cell_index(self) -> dict:
        """Mapping cell -> list of agent ids occupying it (derived)."""
        cells: dict = {}
        for aid, pos in self.positions.items():
            ids = cells.get(pos)
            if ids is None:
                cells[pos] = [aid]
            else:
                ids.append(aid)
        return cells

    def copy(self) -> "WorldState":
        return WorldState(self.round, dict(self.states), dict(self.positions),
                          self.treasure)


def init_world(n: int, s0, treasure: Optional[Coord] = None) -> WorldState:
    """All n agents at the origin in state s0, round 0."""
    if n < 1:
        raise UsageError(f"need at least one agent, got n={n}")
    states = {aid: s0 for aid in range(n)}
    positions = {aid: ORIGIN for aid in range(n)}
    return WorldState(0, states, positions, treasure)


def sense(world: WorldState, agent_id: int) -> frozenset:
    """States held by at least one *other* agent in the agent's cell."""
    if agent_id not in world.states:
        raise UsageError(f"unknown agent id {agent_id}")
    pos = world.positions[agent_id]
    own = world.states[agent_id]
    seen = set()
    own_count = 0
    for aid, p in world.positions.items():
        if p == pos:
            st = world.states[aid]
            if aid == agent_id:
                own_count += 1
            else:
                seen.add(st)
    return frozenset(seen)


def local_input(world: WorldState, agent_id: int) -> LocalInput:
    pos = world.positions[agent_id]
    return LocalInput(
        sensed=sense(world, agent_id),
        at_origin=pos == ORIGIN,
        at_treasure=world.treasure is not None and pos == world.treasure,
    )


def _cell_sensed(states: dict, ids: list) -> dict:
    """Per-state sensed sets for one cell: state -> frozenset of states held
    by at least one other agent. Shared across agents with equal states."""
    if len(ids) == 1:
        return {states[ids[0]]: EMPTY_SENSED}
    counts: dict = {}
    for aid in ids:
        st = states[aid]
        counts[st] = counts.get(st, 0) + 1
    base = frozenset(counts)
    out = {}
    for st, cnt in counts.items():
        out[st] = base if cnt > 1 else base - {st}
    return out


class _StepContext:
    """Per-(controller, run) caches: transition memo and sensed-view memo.

    Both caches hold pure-function results, so sharing them across rounds
    and across parallel evaluation is safe.
    """

    __slots__ = ("controller", "memo", "view_memo")

    def __init__(self, controller: Controller):
        self.controller = controller
        self.memo: dict = {}
        self.view_memo: dict = {}

    def enabled_for(self, state, sensed: frozenset, at_origin: bool,
                    at_treasure: bool):
        vkey = (type(state), sensed)
        view = self.view_memo.get(vkey)
        if view is None:
            view = self.controller.sensed_view(state, sensed)
            self.view_memo[vkey] = view
        key = (state, view, at_origin, at_treasure)
        enabled = self.memo.get(key)
        if enabled is None:
            inp = LocalInput(view, at_origin, at_treasure)
            enabled = tuple(self.controller.enabled(state, inp))
            if not enabled:
                raise ProtocolError(
                    f"empty enabled set for state {state!r} with input {inp!r}")
            self.memo[key] = enabled
        return enabled


def step(world: WorldState, ctl: Controller, rng: RngStream, *,
         context: Optional[_StepContext] = None,
         order: Optional[Iterable[int]] = None,
         parallelism: int = 1) -> WorldState:
    """Advance the world by one synchronous round (in place).

    Phase 1 computes every agent's local input from the round-t snapshot and
    selects one enabled transition via the keyed rng; phase 2 applies all
    state changes and moves simultaneously. The result is independent of
    `order` and `parallelism` by construction.
    """
    if context is None:
        context = _StepContext(ctl)
    t = world.round
    states = world.states
    positions = world.positions
    treasure = world.treasure
    cells = world.cell_index()
    sensed_by_cell = {pos: _cell_sensed(states, ids)
                      for pos, ids in cells.items()}
    ids = list(states) if order is None else list(order)

    enabled_for = context.enabled_for
    randrange = rng.randrange

    def decide(chunk):
        out = []
        for aid in chunk:
            pos = positions[aid]
            st = states[aid]
            enabled = enabled_for(
                st, sensed_by_cell[pos][st], pos == ORIGIN,
                treasure is not None and pos == treasure)
            if len(enabled) == 1:
                choice = enabled[0]
            else:
                choice = enabled[randrange(len(enabled), aid, t)]
            out.append((aid, choice))
        return out

    if parallelism <= 1 or len(ids) < 2 * parallelism:
        decisions = decide(ids)
    else:
        from concurrent.futures import ThreadPoolExecutor
        chunks = [ids[i::parallelism] for i in range(parallelism)]
        decisions = []
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            for part in pool.map(decide, chunks):
                decisions.extend(part)

    deltas = MOVE_DELTA
    for aid, (new_state, move) in decisions:
        states[aid] = new_state
        if move != P:
            x, y = positions[aid]
            dx, dy = deltas[move]
            nx, ny = x + dx, y + dy
            assert -COORD_LIMIT < nx < COORD_LIMIT and -COORD_LIMIT < ny < COORD_LIMIT
            positions[aid] = (nx, ny)
    world.round = t + 1
    return world


@dataclass
class RunResult:
    discovery_round: Optional[int]
    world: WorldState
    rounds_simulated: int = 0


def _treasure_found(world: WorldState) -> bool:
    if world.treasure is None:
        return False
    tr = world.treasure
    return any(pos == tr for pos in world.positions.values())


def run(world: WorldState, ctl: Controller, rng: RngStream, max_rounds: int,
        observers: Iterable[Callable[[WorldState], None]] = (),
        hooks: Iterable[Callable[[WorldState], None]] = (), *,
        order_fn: Optional[Callable[[WorldState], Iterable[int]]] = None,
        parallelism: int = 1,
        stop_when: Optional[Callable[[WorldState], bool]] = None) -> RunResult:
    """Step the world until discovery, `stop_when`, or `max_rounds`.

    `hooks` may mutate the world at the round barrier (e.g. an emission
    oracle); `observers` get read-only access once per round, including
    round 0.
    """
    if max_rounds < 0:
        raise UsageError("max_rounds must be nonnegative")
    context = _StepContext(ctl)
    observers = list(observers)
    hooks = list(hooks)

    for hook in hooks:
        hook(world)
    for obs in observers:
        obs(world)
    if _treasure_found(world):
        return RunResult(0, world, 0)
    if stop_when is not None and stop_when(world):
        return RunResult(None, world, 0)

    while world.round < max_rounds:
        order = None if order_fn is None else order_fn(world)
        step(world, ctl, rng, context=context, order=order,
             parallelism=parallelism)
        for hook in hooks:
            hook(world)
        for obs in observers:
            obs(world)
        if _treasure_found(world):
            return RunResult(world.round, world, world.round)
        if stop_when is not None and stop_when(world):
            break
    return RunResult(None, world, world.round)
