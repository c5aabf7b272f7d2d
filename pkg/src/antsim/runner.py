"""Experiment driver: strategy assembly, treasure placement, batch and
statistical runners."""

from __future__ import annotations

import json
import math
import random
from typing import Optional

from .config import ConfigError, RunConfig, TreasureSpec
from .engine import Coord, UsageError, init_world, run
from .emission import OracleEmission, OracleRectController, PstaRectController
from .geom import GeomController
from .hybrid import HybridController, branch_of
from .levels import diamond_cells, level_cells_ccw
from .metrics import RunMetrics, csv_header
from .observers import (FirstVisitRecorder, InvariantChecker, LevelRecorder,
                        TraceWriter, check_exploring_fraction)
from .rng import RngStream

# reserved rng key for harness-level draws (never collides with agent ids)
_PLACEMENT_KEY = 2**62


def build_controller(strategy: str):
    if strategy == "rect-oracle":
        return OracleRectController()
    if strategy == "rect-psta":
        return PstaRectController()
    if strategy == "geom":
        return GeomController()
    if strategy == "hybrid":
        return HybridController()
    raise ConfigError(f"unknown strategy {strategy!r}")


def place_treasure(spec: TreasureSpec, rng: RngStream) -> Optional[Coord]:
    """Resolve a placement policy to a cell; worst-of-level is resolved by
    run_experiment (it needs the whole run)."""
    spec.validate()
    if spec.kind == "none" or spec.kind == "worst-of-level":
        return None
    if spec.kind == "explicit":
        return spec.coord
    cells = level_cells_ccw(spec.distance)
    if spec.kind == "on-level":
        return cells[spec.index]
    return cells[rng.randrange(len(cells), _PLACEMENT_KEY, 0)]


def run_id_for(cfg: RunConfig) -> str:
    tr = cfg.treasure
    if tr.kind == "explicit":
        where = f"at{tr.coord[0]}_{tr.coord[1]}"
    elif tr.kind == "none":
        where = "none"
    else:
        where = f"{tr.kind}-D{tr.distance}-i{tr.index}"
    return f"{cfg.strategy}-n{cfg.n}-{where}-s{cfg.seed}"


def run_experiment(cfg: RunConfig) -> RunMetrics:
    """Build world and controller, attach observers, run, collect metrics."""
    cfg.validate()
    rng = RngStream(cfg.seed)
    ctl = build_controller(cfg.strategy)
    worst_mode = cfg.treasure.kind == "worst-of-level"
    treasure = place_treasure(cfg.treasure, rng)

    world = init_world(cfg.n, ctl.initial_state, treasure)

    violations: list = []
    observers = []
    hooks = []
    recorder = None
    checker = None
    visits = None
    trace_fh = None

    if cfg.strategy != "geom":
        recorder = LevelRecorder(violations)
        observers.append(recorder)
    if cfg.strategy == "rect-oracle":
        oracle = OracleEmission()
        hooks.append(oracle)
    if cfg.assert_invariants or cfg.strategy in ("rect-psta", "hybrid"):
        checker = InvariantChecker(violations if cfg.assert_invariants
                                   else [])
        observers.append(checker)
    if worst_mode:
        visits = FirstVisitRecorder(diamond_cells(cfg.treasure.distance))
        observers.append(visits)
    if cfg.trace_path:
        trace_fh = open(cfg.trace_path, "w")
        observers.append(TraceWriter(trace_fh, cfg.trace_stride))

    order_fn = None
    if cfg.shuffle_order:
        def order_fn(w, _seed=cfg.seed):
            ids = list(w.states)
            random.Random((_seed << 1) ^ w.round).shuffle(ids)
            return ids

    stop_when = (lambda w: visits.all_visited) if worst_mode else None

    try:
        result = run(world, ctl, rng, cfg.max_rounds, observers, hooks,
                     order_fn=order_fn, parallelism=cfg.parallelism,
                     stop_when=stop_when)
    finally:
        if trace_fh is not None:
            trace_fh.close()

    discovery = result.discovery_round
    if worst_mode:
        if visits.all_visited:
            # controllers never react to the treasure flag, so the run is
            # placement-independent and the worst placement of the level is
            # the cell discovered last
            treasure, discovery = max(
                visits.first_visit.items(), key=lambda kv: (kv[1], kv[0]))
        else:
            treasure, discovery = None, None

    if cfg.strategy == "hybrid":
        n_r = sum(1 for st in world.states.values()
                  if branch_of(st) == "rect")
        n_g = sum(1 for st in world.states.values()
                  if branch_of(st) == "geom")
    else:
        n_r = n_g = None

    if cfg.check_fraction and recorder is not None:
        check_exploring_fraction(recorder, violations)

    if cfg.treasure.kind == "explicit":
        distance = abs(treasure[0]) + abs(treasure[1])
    elif cfg.treasure.kind == "none":
        distance = None
    else:
        distance = cfg.treasure.distance

    metrics = RunMetrics(
        run_id=run_id_for(cfg),
        seed=cfg.seed,
        n=cfg.n,
        strategy=cfg.strategy,
        distance=distance,
        treasure=treasure,
        discovery_round=discovery,
        rounds_simulated=result.rounds_simulated,
        t0=recorder.t0 if recorder else None,
        n_r=n_r,
        n_g=n_g,
        violations=violations,
        level_starts=dict(recorder.start_round) if recorder else {},
        level_finishes=dict(recorder.finish_round) if recorder else {},
        emission_rounds=list(recorder.emission_rounds) if recorder else [],
        ready_cell_first_round=dict(checker.ready_cell_first_round)
        if checker else {},
        first_visit=dict(visits.first_visit) if visits else {},
    )
    if cfg.metrics_out:
        with open(cfg.metrics_out, "w") as fh:
            json.dump(metrics.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
    return metrics


def _run_one(cfg: RunConfig):
    try:
        return run_experiment(cfg), None
    except Exception as exc:  # noqa: BLE001 - batch must not halt
        return None, f"{run_id_for(cfg)}: {exc}"


def batch(configs, seeds=None, workers: int = 1):
    """Run every (config, seed) pair; returns (metrics list, errors list).

    Runs are independent; with workers > 1 they execute in parallel
    processes, with output order preserved.
    """
    jobs = []
    for cfg in configs:
        for seed in (seeds if seeds is not None else [cfg.seed]):
            job = RunConfig(**{**cfg.__dict__})
            job.seed = seed
            jobs.append(job)
    if workers > 1 and len(jobs) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(job) for job in jobs]
    rows = [m for m, _ in results if m is not None]
    errors = [e for _, e in results if e is not None]
    return rows, errors


def write_csv(path: str, rows) -> None:
    with open(path, "w") as fh:
        fh.write(csv_header() + "\n")
        for m in rows:
            fh.write(m.csv_row() + "\n")


def pmf_test(samples, k_max: int = 30) -> float:
    """Total-variation distance between the empirical walk-length law and
    the reference law on {0..k_max} with the tail pooled."""
    from .geom import walk_length_pmf

    samples = list(samples)
    if len(samples) < 10**5:
        raise UsageError(f"need at least 1e5 samples, got {len(samples)}")
    n = len(samples)
    counts = [0] * (k_max + 1)
    tail = 0
    for s in samples:
        if s <= k_max:
            counts[s] += 1
        else:
            tail += 1
    ref = [walk_length_pmf(k) for k in range(k_max + 1)]
    ref_tail = 1.0 - sum(ref)
    tv = sum(abs(counts[k] / n - ref[k]) for k in range(k_max + 1))
    tv += abs(tail / n - ref_tail)
    return tv / 2.0


def expected_time(strategy: str, n: int, distance: int) -> float:
    """Denominator of the run-time ratio for the scaling report."""
    if distance < 1:
        raise UsageError("distance must be at least 1 for scaling ratios")
    base = distance + distance * distance / n
    if strategy == "rect-psta":
        base += math.log2(n)
    return base


def scaling_report(rows):
    """Discovery-time ratios against the theoretical scaling, grouped by
    (strategy, n). Each entry reports min/max/median ratio across D."""
    groups: dict = {}
    for m in rows:
        if m.discovery_round is None or not m.distance:
            continue
        ratio = m.discovery_round / expected_time(m.strategy, m.n, m.distance)
        groups.setdefault((m.strategy, m.n), []).append((m.distance, ratio))
    report = {}
    for key, pairs in sorted(groups.items()):
        ratios = [r for _, r in pairs]
        ratios.sort()
        mid = ratios[len(ratios) // 2]
        report[key] = {
            "runs": len(ratios),
            "min_ratio": min(ratios),
            "max_ratio": max(ratios),
            "spread": max(ratios) / min(ratios),
            "median_ratio": mid,
        }
    return report


def format_scaling_report(report) -> str:
    lines = [f"{'strategy':<12}{'n':>6}{'runs':>6}{'min':>9}{'max':>9}"
             f"{'spread':>9}{'median':>9}"]
    for (strategy, n), stats in report.items():
        lines.append(
            f"{strategy:<12}{n:>6}{stats['runs']:>6}"
            f"{stats['min_ratio']:>9.3f}{stats['max_ratio']:>9.3f}"
            f"{stats['spread']:>9.3f}{stats['median_ratio']:>9.3f}")
    return "\n".join(lines)
