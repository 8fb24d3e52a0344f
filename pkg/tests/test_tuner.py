import time

import pytest

from combdesign.catalog import ProblemParams
from combdesign.solvers import HyperRange
from combdesign.tuner import (WORST_SCORE, LadderConfig, TunerError,
                              build_grid, hypertune, strategy_runner)

RANGES = (
    HyperRange("x", 0.0, 10.0, 5.0),
    HyperRange("steps", 1, 1000, 100, integer=True),
)


class FakeAttempt:
    def __init__(self, solved, cost, wall):
        self.solved = solved
        self.status = "solved" if solved else "timeout"
        self.cost = cost
        self.wall = wall


def quadratic_runner(settings, instance, limit):
    """Stub scoring surface: solves iff x is near 7, faster when closer."""
    x = settings.get("x", 5.0)
    gap = abs(x - 7.0)
    return FakeAttempt(gap < 1.0, int(gap * 10), 0.01 + gap)


def test_build_grid_contains_endpoints_and_default():
    grid = build_grid(RANGES, 60)
    assert len(grid) <= 60
    xs = {g["x"] for g in grid}
    assert {0.0, 10.0, 5.0} <= xs
    steps = {g["steps"] for g in grid}
    assert {1, 1000, 100} <= steps
    assert all(isinstance(g["steps"], int) for g in grid)
    # deterministic
    assert build_grid(RANGES, 60) == build_grid(RANGES, 60)


def test_build_grid_truncates_exactly():
    grid = build_grid(RANGES, 17)
    assert len(grid) == 17


def test_ladder_config_validation():
    LadderConfig(sizes=(1000, 100, 10), limits=(0.5, 5.0, 50.0))
    with pytest.raises(TunerError):
        LadderConfig(sizes=(10, 100), limits=(0.5, 5.0))  # must shrink
    with pytest.raises(TunerError):
        LadderConfig(sizes=(100, 10), limits=(5.0, 0.5))  # must grow
    with pytest.raises(TunerError):
        LadderConfig(sizes=(100, 10), limits=(5.0,))      # length mismatch


def test_hyperrange_default_inside_bounds():
    with pytest.raises(Exception):
        HyperRange("x", 0.0, 1.0, 4.0)


def test_stub_surface_finds_optimum():
    ladder = LadderConfig(sizes=(60, 12, 4), limits=(0.001, 0.002, 0.003))
    out = hypertune(quadratic_runner, RANGES,
                    [ProblemParams.parse("costas 4")], ladder)
    assert out.solved_any
    assert abs(out.best["x"] - 7.0) < 1.0
    assert out.best_score[0] == 1


def test_crash_isolation():
    def crashy(settings, instance, limit):
        if settings["x"] > 5.0:
            raise RuntimeError("boom")
        return FakeAttempt(settings["x"] > 4.0, 1, 0.01)

    ladder = LadderConfig(sizes=(30, 6, 2), limits=(0.001, 0.002, 0.003))
    out = hypertune(crashy, RANGES, [ProblemParams.parse("costas 4")], ladder)
    assert out.solved_any
    assert 4.0 < out.best["x"] <= 5.0


def test_all_fail_returns_defaults_with_marker():
    def hopeless(settings, instance, limit):
        return FakeAttempt(False, 100, limit)

    ladder = LadderConfig(sizes=(10, 4, 2), limits=(0.001, 0.002, 0.003))
    out = hypertune(hopeless, RANGES, [ProblemParams.parse("costas 4")], ladder)
    assert not out.solved_any
    assert out.best == {"x": 5.0, "steps": 100}
    assert out.ledger[-1] == "no-solve"


def test_survivor_monotonicity():
    ladder = LadderConfig(sizes=(40, 8, 3), limits=(0.001, 0.002, 0.003))
    out = hypertune(quadratic_runner, RANGES,
                    [ProblemParams.parse("costas 4")], ladder)
    # settings evaluated per stage must shrink with the ladder sizes
    per_stage = {}
    for sid, stage, score, wall in out.table:
        per_stage.setdefault(stage, set()).add(sid)
    assert [len(per_stage[s]) for s in sorted(per_stage)] == [40, 8, 3]
    # every later-stage survivor appeared in the previous stage
    for s in (2, 3):
        assert per_stage[s] <= per_stage[s - 1]
    # final winner score equals the best final-stage table entry
    finals = [score for sid, stage, score, _ in out.table if stage == 3]
    assert out.best_score == max(finals)


def test_wall_clock_within_budget_bound():
    ladder = LadderConfig(sizes=(6, 3, 1), limits=(0.2, 0.4, 0.8))
    n_instances = 1
    bound = sum(s * l * n_instances for s, l in
                zip(ladder.scaled_sizes(), ladder.scaled_limits()))

    def sleeper(settings, instance, limit):
        # a compliant runner returns at (just under) its deadline
        time.sleep(0.95 * limit)
        return FakeAttempt(False, 1, limit)

    t0 = time.monotonic()
    hypertune(sleeper, RANGES, [ProblemParams.parse("costas 4")], ladder)
    wall = time.monotonic() - t0
    assert wall <= 1.10 * bound  # second-scale limits leave real margin


def test_strategy_runner_end_to_end():
    from combdesign.solvers import TABU_RANGES
    ladder = LadderConfig(sizes=(6, 3, 2), limits=(0.2, 0.4, 0.8))
    runner = strategy_runner("tabu", TABU_RANGES, seed=1)
    out = hypertune(runner, TABU_RANGES,
                    [ProblemParams.parse("bibd 7 7 3 3 1")], ladder,
                    max_points=6)
    assert out.solved_any


def test_worst_score_orders_below_everything():
    assert WORST_SCORE < (0, 0.0, 0.0)
    assert WORST_SCORE < (0, -5.0, -1e9)
