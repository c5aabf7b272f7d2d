"""Per-agent L-shaped geometric walk.

Each agent picks one of the four quarter-planes uniformly at random, takes
one mandatory step into it, then walks a geometrically distributed number of
further steps in the same direction followed by a geometrically distributed
number of perpendicular steps, each continuation decided by a fair coin
realized as a two-element enabled set. The coin that ends a leg is a
stationary transition, so the total walk length after the mandatory first
step is the sum of two geometric(1/2) variables starting at zero, with
P(length = k) = (k + 1) * 2^-(k + 2).
"""

from __future__ import annotations

from dataclasses import dataclass

from .engine import Controller, LocalInput, N, S, E, W, P
from .rng import RngStream

QUAD_NE, QUAD_NW, QUAD_SW, QUAD_SE = "NE", "NW", "SW", "SE"
QUADRANTS = (QUAD_NE, QUAD_NW, QUAD_SW, QUAD_SE)
# (first/longitudinal move, lateral move) per quarter-plane; the non-NE
# quadrants are 90-degree rotations so all cells of a level are covered
# with equal probability
QUAD_MOVES = {QUAD_NE: (E, N), QUAD_NW: (N, W),
              QUAD_SW: (W, S), QUAD_SE: (S, E)}


class GeomState:
    """Marker base for the geometric-walk states."""
    __slots__ = ()


@dataclass(frozen=True)
class GInit(GeomState):
    pass


@dataclass(frozen=True)
class Leg1(GeomState):
    quad: str


@dataclass(frozen=True)
class Leg2(GeomState):
    quad: str


@dataclass(frozen=True)
class GDone(GeomState):
    pass


def geom_enabled(state, inp: LocalInput):
    if isinstance(state, GInit):
        return tuple((Leg1(q), QUAD_MOVES[q][0]) for q in QUADRANTS)
    if isinstance(state, Leg1):
        return ((state, QUAD_MOVES[state.quad][0]), (Leg2(state.quad), P))
    if isinstance(state, Leg2):
        return ((state, QUAD_MOVES[state.quad][1]), (GDone(), P))
    if isinstance(state, GDone):
        return ((state, P),)
    raise TypeError(f"not a geometric-walk state: {state!r}")


class GeomController(Controller):
    initial_state = GInit()

    def enabled(self, state, inp):
        return geom_enabled(state, inp)

    def sensed_view(self, state, sensed):
        # walks are mutually independent; sensing is unused
        return frozenset()


def walk_length_pmf(k: int) -> float:
    """Reference law of the walk length after the mandatory first step."""
    if k < 0:
        raise ValueError("walk length must be nonnegative")
    return (k + 1) * 2.0 ** -(k + 2)


def sample_walk(rng: RngStream, agent_id: int):
    """Trajectory of one agent, driven by the controller itself.

    Returns (quadrant, visits) where visits is the list of (round, cell)
    pairs from the origin at round 0 until the walk halts. Identical to the
    agent's trajectory in a full engine run with the same seed and id,
    because the walk never senses other agents.
    """
    from .engine import apply_move

    inp = LocalInput(frozenset(), True, False)
    state = GInit()
    pos = (0, 0)
    t = 0
    visits = [(0, pos)]
    quad = None
    while not isinstance(state, GDone):
        enabled = geom_enabled(state, inp)
        if len(enabled) == 1:
            state, move = enabled[0]
        else:
            state, move = enabled[rng.randrange(len(enabled), agent_id, t)]
        t += 1
        if move != P:
            pos = apply_move(pos, move)
            visits.append((t, pos))
        if quad is None and isinstance(state, Leg1):
            quad = state.quad
    return quad, visits


def sample_walk_length(rng: RngStream, agent_id: int) -> int:
    """Walk length after the mandatory first step."""
    _, visits = sample_walk(rng, agent_id)
    return len(visits) - 2
