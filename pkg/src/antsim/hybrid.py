"""Composition of the sweep strategy and the geometric walk.

Every agent tosses one fair coin at the start and then permanently joins
either the emission-fed diamond sweep or the geometric walk. Each branch
only ever reacts to sensed states of its own family, so co-located agents
of the other branch are invisible and the branches cannot interfere.
"""

from __future__ import annotations

from dataclasses import dataclass

from .engine import Controller, LocalInput, P
from .emission import Elector, PstaState, psta_enabled, psta_sensed_view
from .geom import GeomState, GInit, geom_enabled
from .rect import RectState, rect_enabled, rect_sensed_view


@dataclass(frozen=True)
class HInit:
    pass


class HybridController(Controller):
    initial_state = HInit()

    def enabled(self, state, inp):
        if isinstance(state, HInit):
            return ((Elector(), P), (GInit(), P))
        if isinstance(state, GeomState):
            return geom_enabled(state, inp)
        if isinstance(state, RectState):
            return rect_enabled(state, inp)
        if isinstance(state, PstaState):
            return psta_enabled(state, inp)
        raise TypeError(f"unknown state family: {state!r}")

    def sensed_view(self, state, sensed):
        if isinstance(state, RectState):
            return rect_sensed_view(sensed)
        if isinstance(state, PstaState):
            return psta_sensed_view(sensed)
        return frozenset()


def branch_of(state) -> str:
    """'rect', 'geom', or 'init' for an agent's current state family."""
    if isinstance(state, (RectState, PstaState)):
        return "rect"
    if isinstance(state, GeomState):
        return "geom"
    return "init"
