"""Round observers: metrics recording, invariant checking, trace output.

All observers work from ground-truth coordinates, never from agent memory:
the properties they check are statements about the global configuration.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, TextIO

from .engine import ORIGIN, WorldState, l1_distance
from .levels import diamond_cells
from .rect import (Explorer, FreshExplorer, FreshGuide, Guide, MovingExplorer,
                   MovingGuide)
from .emission import CollectedGuide, Ready, role_of

FRESH_TAGS = (FreshExplorer, FreshGuide)

# unit vector of each guide direction (for axis/contiguity checks)
_AXIS = {"N": (0, 1), "S": (0, -1), "E": (1, 0), "W": (-1, 0)}


@dataclass(frozen=True)
class Violation:
    round: int
    rule: str
    detail: str


class LevelRecorder:
    """Tracks sweep start/finish rounds, coverage, emissions, and per-round
    exploring-agent counts.

    Start of level d: an agent moves from (0, d) to (-1, d) and is an
    explorer afterwards. Finish: the sweeping agent moves onto (0, d) from
    (1, d). These are exactly the defining moves of the sweep, so the 8d
    identity is checked convention-free.
    """

    def __init__(self, violations: Optional[list] = None):
        self.start_round: dict[int, int] = {}
        self.finish_round: dict[int, int] = {}
        self.sweeper: dict[int, int] = {}           # agent id -> level
        self.visited: dict[int, set] = {}           # agent id -> level cells seen
        self.coverage_ok: dict[int, bool] = {}
        self.emission_rounds: list[int] = []
        self.exploring_counts: list[tuple[int, int, int]] = []  # (expl, fresh, moving)
        self.cells_explored: set = set()
        self.cells_explored_by_round: list[int] = []
        self._last_fresh_round: Optional[int] = None
        self._had_fresh = False
        self._prev: Optional[dict] = None           # id -> (state, pos)
        self.violations = violations if violations is not None else []

    # -- queries ---------------------------------------------------------

    @property
    def t0(self) -> Optional[int]:
        """First round from which no fresh explorer ever exists again."""
        if not self._had_fresh:
            return None
        return self._last_fresh_round + 1

    def completed_levels(self):
        return sorted(d for d in self.finish_round if d in self.start_round)

    def teams_emitted_by(self, t: int) -> int:
        return sum(1 for r in self.emission_rounds if r <= t)

    # -- recording -------------------------------------------------------

    def __call__(self, world: WorldState) -> None:
        t = world.round
        states = world.states
        positions = world.positions
        prev = self._prev

        n_expl = n_fresh = n_moving = 0
        new_fresh_at_origin = 0
        for aid, st in states.items():
            tag = type(st)
            if tag is Explorer:
                n_expl += 1
                self.cells_explored.add(positions[aid])
            elif tag is FreshExplorer:
                n_fresh += 1
            elif tag is MovingExplorer:
                n_moving += 1
            if prev is not None and tag in FRESH_TAGS \
                    and positions[aid] == ORIGIN \
                    and not isinstance(prev[aid][0], FRESH_TAGS):
                new_fresh_at_origin += 1
        if n_fresh:
            self._had_fresh = True
            self._last_fresh_round = t
        self.exploring_counts.append((n_expl, n_fresh, n_moving))
        self.cells_explored_by_round.append(len(self.cells_explored))

        if new_fresh_at_origin:
            if new_fresh_at_origin != 5:
                self.violations.append(Violation(
                    t, "distinct-emission",
                    f"{new_fresh_at_origin} agents emitted in one round"))
            self.emission_rounds.append(t)

        if prev is not None:
            for aid, (_, ppos) in prev.items():
                pos = positions[aid]
                if pos != ppos and isinstance(states[aid], Explorer) \
                        and ppos[0] == 0 and ppos[1] > 0 \
                        and pos == (-1, ppos[1]):
                    self._on_start(t - 1, aid, ppos[1])
                lvl = self.sweeper.get(aid)
                if lvl is not None:
                    if l1_distance(pos, ORIGIN) == lvl:
                        self.visited[aid].add(pos)
                    if ppos == (1, lvl) and pos == (0, lvl):
                        self._on_finish(t, aid, lvl)

        self._prev = {aid: (states[aid], positions[aid]) for aid in states}

    def _on_start(self, t: int, aid: int, d: int) -> None:
        if d in self.start_round:
            self.violations.append(Violation(
                t, "duplicate-sweep", f"level {d} started twice"))
            return
        self.start_round[d] = t
        self.sweeper[aid] = d
        self.visited[aid] = {(0, d)}

    def _on_finish(self, t: int, aid: int, d: int) -> None:
        self.finish_round[d] = t
        seen = self.visited.pop(aid)
        del self.sweeper[aid]
        self.coverage_ok[d] = diamond_cells(d) <= seen
        if not self.coverage_ok[d]:
            missing = sorted(diamond_cells(d) - seen)[:4]
            self.violations.append(Violation(
                t, "coverage", f"level {d} incomplete, e.g. {missing}"))


class InvariantChecker:
    """Per-round checks of the protocol's structural invariants."""

    def __init__(self, violations: Optional[list] = None):
        self.violations = violations if violations is not None else []
        self.ready_cell_first_round: dict[int, int] = {}

    def __call__(self, world: WorldState) -> None:
        t = world.round
        states = world.states
        positions = world.positions
        report = self.violations.append

        cells: dict = {}
        for aid, pos in positions.items():
            cells.setdefault(pos, []).append(aid)

        guides: dict[str, list[int]] = {}
        movers: list = []
        for pos, ids in cells.items():
            tags_seen = set()
            for aid in ids:
                st = states[aid]
                tag = type(st)
                if tag is Guide:
                    x, y = pos
                    ax, ay = _AXIS[st.dir]
                    dist = x * ax + y * ay
                    if dist < 1 or (x, y) != (ax * dist, ay * dist):
                        report(Violation(t, "guide-axis",
                                         f"{st.dir}-guide off axis at {pos}"))
                    else:
                        guides.setdefault(st.dir, []).append(dist)
                elif tag is MovingExplorer:
                    movers.append(pos)
                elif tag is Ready:
                    x, y = pos
                    if y != 0 or x < 1 or st.role != role_of(x % 5):
                        report(Violation(
                            t, "mod5", f"ready {st.role} at {pos}"))
                    self.ready_cell_first_round.setdefault(x, t)
                elif tag is CollectedGuide:
                    if pos[1] == 0 and pos[0] >= 1:
                        self.ready_cell_first_round.setdefault(pos[0], t)
                if pos != ORIGIN and issubclass(
                        tag, (FreshGuide, Guide, MovingGuide, FreshExplorer,
                              Explorer, MovingExplorer)):
                    if tag in tags_seen:
                        report(Violation(
                            t, "same-type-exclusion",
                            f"two {tag.__name__} agents in {pos}"))
                    tags_seen.add(tag)
            flagged = sum(1 for aid in ids
                          if isinstance(states[aid], Ready) and states[aid].flag)
            if flagged > 1:
                report(Violation(t, "flag-uniqueness",
                                 f"{flagged} flagged ready agents in {pos}"))

        for direction, dists in guides.items():
            dists.sort()
            if dists[-1] - dists[0] != len(dists) - 1 or \
                    len(set(dists)) != len(dists):
                report(Violation(t, "guide-contiguity",
                                 f"{direction}-guides at distances {dists}"))

        for i, a in enumerate(movers):
            for b in movers[i + 1:]:
                dist = abs(a[0] - b[0]) + abs(a[1] - b[1])
                if dist < 8:
                    report(Violation(t, "mexplorer-spacing",
                                     f"moving explorers at {a} and {b}"))


def check_exploring_fraction(recorder: LevelRecorder,
                             violations: list) -> None:
    """Post-run check that explorers dominate the exploring agents after the
    last fresh explorer is gone. Meaningful only for runs with many teams;
    apply where configured."""
    t0 = recorder.t0
    if t0 is None:
        return
    for t, (n_expl, n_fresh, n_moving) in enumerate(recorder.exploring_counts):
        if t <= t0:
            continue
        total = n_expl + n_fresh + n_moving
        if total and n_expl / total < 7 / 8:
            violations.append(Violation(
                t, "exploring-fraction",
                f"{n_expl}/{total} explorers after t0={t0}"))


class TraceWriter:
    """Line-delimited trace: one record per agent per sampled round."""

    def __init__(self, stream: TextIO, stride: int = 1):
        self.stream = stream
        self.stride = stride

    def __call__(self, world: WorldState) -> None:
        if world.round % self.stride:
            return
        t = world.round
        for aid in sorted(world.states):
            x, y = world.positions[aid]
            self.stream.write(json.dumps(
                {"round": t, "id": aid,
                 "state": type(world.states[aid]).__name__,
                 "x": x, "y": y}) + "\n")


class FirstVisitRecorder:
    """First round at which each target cell is entered by any agent."""

    def __init__(self, targets):
        self.first_visit: dict = {}
        self._remaining = set(targets)

    def __call__(self, world: WorldState) -> None:
        if not self._remaining:
            return
        t = world.round
        hit = self._remaining.intersection(world.positions.values())
        for cell in hit:
            self.first_visit[cell] = t
            self._remaining.discard(cell)

    @property
    def all_visited(self) -> bool:
        return not self._remaining
