"""Level geometry: diamonds of cells at fixed distance from the origin."""

from __future__ import annotations

from .engine import Coord, UsageError


def diamond_cells(d: int) -> set[Coord]:
    """All cells at L1 distance exactly d from the origin (brute force;
    used as the coverage oracle)."""
    if d < 1:
        raise UsageError("level must be positive")
    cells = set()
    for x in range(-d, d + 1):
        r = d - abs(x)
        cells.add((x, r))
        cells.add((x, -r))
    return cells


def level_cells_ccw(d: int) -> list[Coord]:
    """The 4d cells of level d, counterclockwise starting at (d, 0)."""
    if d < 1:
        raise UsageError("level must be positive")
    cells = []
    x, y = d, 0
    for dx, dy in ((-1, 1), (-1, -1), (1, -1), (1, 1)):
        for _ in range(d):
            cells.append((x, y))
            x += dx
            y += dy
    return cells
