"""Grid-ladder hyperparameter tuning.

A fixed grid of settings is run through shrinking stages with growing
per-run time limits (default 1000 points at 0.5 s, top 100 at 5 s, top 10 at
50 s, best one returned).  Ranking uses a three-part score: dev instances
solved, then summed normalized residual cost, then total time to first
solve.  A crashing runner only zeroes its own setting's score.
"""

from __future__ import annotations

import itertools
import random
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .catalog import ProblemParams
from .solvers import Budget, Hyperparams, HyperRange, SolverError, solve

WORST_SCORE = (-1, float("-inf"), float("-inf"))


class TunerError(ValueError):
    pass


@dataclass(frozen=True)
class LadderConfig:
    sizes: tuple[int, ...] = (1000, 100, 10)
    limits: tuple[float, ...] = (0.5, 5.0, 50.0)
    parallelism: int = 1
    scale: float = 1.0

    def __post_init__(self):
        if len(self.sizes) != len(self.limits) or not self.sizes:
            raise TunerError("sizes and limits must align and be non-empty")
        if any(a <= b for a, b in zip(self.sizes, self.sizes[1:])):
            raise TunerError("stage sizes must strictly decrease")
        if any(a >= b for a, b in zip(self.limits, self.limits[1:])):
            raise TunerError("stage limits must strictly increase")
        if self.parallelism < 1 or self.scale <= 0:
            raise TunerError("parallelism >= 1 and scale > 0 required")

    def scaled_sizes(self):
        sizes = [max(1, round(s * self.scale)) for s in self.sizes]
        # keep the strict decrease after rounding
        for i in range(1, len(sizes)):
            sizes[i] = min(sizes[i], max(1, sizes[i - 1] - 1))
        return tuple(sizes)

    def scaled_limits(self):
        return tuple(l * self.scale for l in self.limits)


@dataclass
class TuneOutcome:
    best: dict                       # best settings (name -> value)
    best_score: tuple
    solved_any: bool                 # False marks an all-fail ("no-solve") run
    table: list = field(default_factory=list)   # (setting_id, stage, score, wall_ms)
    ledger: list = field(default_factory=list)  # "setting-id score stage wall-ms"


def _param_points(r: HyperRange, m: int) -> list:
    """m-ish values: linear through the central half, geometrically finer
    toward both endpoints, always containing lo, hi, and the default."""
    if r.hi == r.lo:
        return [r.clamp(r.lo)]
    span = r.hi - r.lo
    quarter = span / 4.0
    pts = {r.lo, r.hi, r.default}
    n_mid = max(2, m // 2)
    for t in range(n_mid):
        pts.add(r.lo + quarter + (span / 2.0) * t / max(1, n_mid - 1))
    n_edge = max(1, (m - n_mid) // 2)
    for t in range(1, n_edge + 1):
        step = quarter / (2 ** t)
        pts.add(r.lo + step)
        pts.add(r.hi - step)
    vals = sorted({r.clamp(p) for p in pts})
    return vals


def build_grid(ranges: tuple[HyperRange, ...], max_points: int,
               points_per_range: int | None = None) -> list[dict]:
    """Deterministic settings grid, truncated to max_points by stratified
    subsampling seeded from the range names."""
    if max_points < 1:
        raise TunerError("max_points must be >= 1")
    ranges = tuple(ranges)
    if not ranges:
        return [{}]
    m = points_per_range or max(2, round(max_points ** (1.0 / len(ranges))))
    axes = [_param_points(r, m) for r in ranges]
    names = [r.name for r in ranges]
    grid = [dict(zip(names, combo)) for combo in itertools.product(*axes)]
    default = {r.name: r.clamp(r.default) for r in ranges}
    if len(grid) > max_points:
        rng = random.Random(zlib.crc32(",".join(sorted(names)).encode()))
        stride = len(grid) / max_points
        picked = []
        for i in range(max_points):
            lo = int(i * stride)
            hi = max(lo + 1, int((i + 1) * stride))
            picked.append(grid[rng.randrange(lo, min(hi, len(grid)))])
        grid = picked
    if default not in grid:
        grid[-1] = default
    return grid


def _score_attempts(attempts):
    """(solved count, -sum normalized residual, -time to first solve)."""
    solved = 0
    residual = 0.0
    first_solve_time = 0.0
    for att in attempts:
        if att is None:
            residual += 1.0
            continue
        if getattr(att, "solved", False) or getattr(att, "status", "") == "solved":
            solved += 1
            first_solve_time += getattr(att, "wall", 0.0)
        else:
            cost = max(0, getattr(att, "cost", 0))
            residual += cost / (cost + 1.0)
    return (solved, -residual, -first_solve_time)


def hypertune(runner, ranges, dev_instances, ladder: LadderConfig | None = None,
              max_points: int | None = None) -> TuneOutcome:
    """Run the staged grid ladder.

    ``runner(settings: dict, instance, time_limit) -> attempt`` where the
    attempt exposes ``solved``/``status``, ``cost``, and ``wall``; raising or
    returning garbage only hurts that setting's score.
    """
    ladder = ladder or LadderConfig()
    sizes = ladder.scaled_sizes()
    limits = ladder.scaled_limits()
    default = {r.name: r.clamp(r.default) for r in ranges}
    survivors = build_grid(ranges, max_points or sizes[0])
    survivors = survivors[:sizes[0]]
    outcome = TuneOutcome(best=default, best_score=WORST_SCORE, solved_any=False)
    setting_ids = {tuple(sorted(s.items())): i for i, s in enumerate(survivors)}

    def run_one(setting, limit):
        attempts = []
        import time as _t
        t0 = _t.monotonic()
        for inst in dev_instances:
            try:
                attempts.append(runner(dict(setting), inst, limit))
            except Exception:
                attempts.append(None)
        try:
            score = _score_attempts(attempts)
        except Exception:
            score = WORST_SCORE
        # quantize time-to-first-solve to halves of the per-run limit so
        # that scheduling jitter cannot reorder otherwise-equal settings
        if score != WORST_SCORE and limit > 0:
            step = 0.5 * limit
            score = (score[0], score[1], -(int(-score[2] / step) * step))
        wall_ms = (_t.monotonic() - t0) * 1000.0
        if limit > 0:
            step_ms = 500.0 * limit  # same half-limit buckets, in ms
            wall_ms = int(wall_ms / step_ms) * step_ms
        return score, wall_ms

    for stage, (size, limit) in enumerate(zip(sizes, limits), start=1):
        survivors = survivors[:size]
        scored = []
        if ladder.parallelism > 1:
            with ThreadPoolExecutor(max_workers=ladder.parallelism) as pool:
                results = list(pool.map(lambda s: run_one(s, limit), survivors))
        else:
            results = [run_one(s, limit) for s in survivors]
        for setting, (score, wall_ms) in zip(survivors, results):
            sid = setting_ids[tuple(sorted(setting.items()))]
            scored.append((score, wall_ms, sid, setting))
            outcome.table.append((sid, stage, score, wall_ms))
            outcome.ledger.append(
                f"{sid} {score[0]}:{-score[1]:.6f}:{-score[2]:.3f} "
                f"{stage} {wall_ms:.1f}")
        # rank: score desc, then earlier completion, then lexicographic settings
        scored.sort(key=lambda t: (tuple(-x for x in t[0]), t[1],
                                   tuple(sorted(t[3].items()))))
        survivors = [s for _, _, _, s in scored]
    best_score, _, _, best = scored[0]
    outcome.best_score = best_score
    outcome.solved_any = best_score[0] > 0
    outcome.best = best if outcome.solved_any else default
    if not outcome.solved_any:
        outcome.ledger.append("no-solve")
    assert outcome.best_score == max(t[2] for t in outcome.table
                                     if t[1] == len(sizes))
    return outcome


def strategy_runner(strategy: str, ranges, seed: int = 0):
    """Adapt a built-in solver strategy to the tuner's runner protocol."""
    def run(settings: dict, instance: ProblemParams, limit: float):
        h = Hyperparams(tuple(ranges), **settings)
        return solve(instance, strategy, Budget(seconds=limit), h=h, seed=seed)
    return run
