"""Per-run metrics and their CSV/JSON serialization."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .engine import Coord
from .observers import Violation

CSV_COLUMNS = ("run_id", "seed", "n", "strategy", "D", "treasure_x",
               "treasure_y", "discovery_round", "rounds_simulated", "t0",
               "n_r", "n_g", "violations")


@dataclass
class RunMetrics:
    run_id: str
    seed: int
    n: int
    strategy: str
    distance: Optional[int]
    treasure: Optional[Coord]
    discovery_round: Optional[int]
    rounds_simulated: int
    t0: Optional[int] = None
    n_r: Optional[int] = None
    n_g: Optional[int] = None
    violations: list[Violation] = field(default_factory=list)
    level_starts: dict[int, int] = field(default_factory=dict)
    level_finishes: dict[int, int] = field(default_factory=dict)
    emission_rounds: list[int] = field(default_factory=list)
    ready_cell_first_round: dict[int, int] = field(default_factory=dict)
    first_visit: dict[Coord, int] = field(default_factory=dict)

    def emission_function(self) -> list[int]:
        """Measured cumulative teams emitted by round t, t = 0..end."""
        counts = [0] * (self.rounds_simulated + 1)
        for r in self.emission_rounds:
            if r <= self.rounds_simulated:
                counts[r] += 1
        total = 0
        out = []
        for c in counts:
            total += c
            out.append(total)
        return out

    def csv_row(self) -> str:
        def opt(v):
            return "" if v is None else str(v)

        tx, ty = (self.treasure if self.treasure is not None else ("", ""))
        cells = (self.run_id, self.seed, self.n, self.strategy,
                 opt(self.distance), tx, ty, opt(self.discovery_round),
                 self.rounds_simulated, opt(self.t0), opt(self.n_r),
                 opt(self.n_g), len(self.violations))
        return ",".join(str(c) for c in cells)

    def to_dict(self) -> dict:
        return {
            "run_id": self.run_id,
            "seed": self.seed,
            "n": self.n,
            "strategy": self.strategy,
            "D": self.distance,
            "treasure": list(self.treasure) if self.treasure else None,
            "discovery_round": self.discovery_round,
            "rounds_simulated": self.rounds_simulated,
            "t0": self.t0,
            "n_r": self.n_r,
            "n_g": self.n_g,
            "violations": [[v.round, v.rule, v.detail]
                           for v in self.violations],
            "level_starts": {str(d): r for d, r in
                             sorted(self.level_starts.items())},
            "level_finishes": {str(d): r for d, r in
                               sorted(self.level_finishes.items())},
            "emission_rounds": self.emission_rounds,
            "ready_cell_first_round": {
                str(x): r for x, r in
                sorted(self.ready_cell_first_round.items())},
        }


def csv_header() -> str:
    return ",".join(CSV_COLUMNS)
