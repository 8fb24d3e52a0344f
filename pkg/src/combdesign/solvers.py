"""Search strategies over SearchAdapters: simulated annealing (constant,
cooling, and reset schedules), tabu search, a genetic algorithm, GRASP,
randomized row-greedy, type-specific backtracking DFS, Algorithm X for exact
cover, and the two-phase routes for balanced repeated-measures designs and
uniform nested quadruple systems.

Every solver verifies a zero-cost state against the exact verifier before
returning it; an unverified grid is never returned.  Budgets count both wall
time and adapter evaluations so tests can pin trajectories deterministically.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from collections import Counter
from dataclasses import dataclass, field

from .adapters import SearchAdapter, make_adapter
from .catalog import ProblemParams, validate_params
from .grids import Grid
from .verify import verify


class SolverError(ValueError):
    pass


@dataclass(frozen=True)
class HyperRange:
    """A named tunable with an inclusive range and a default."""
    name: str
    lo: float
    hi: float
    default: float
    integer: bool = False
    scale: str = "linear"  # spacing hint for grid builders

    def __post_init__(self):
        if not (self.lo <= self.default <= self.hi):
            raise SolverError(f"{self.name}: default outside [lo, hi]")

    def clamp(self, value):
        value = max(self.lo, min(self.hi, value))
        return int(round(value)) if self.integer else value


class Hyperparams:
    """Validated name -> value settings against declared ranges."""

    def __init__(self, ranges: tuple[HyperRange, ...], **values):
        self.ranges = {r.name: r for r in ranges}
        self._values = {}
        for name, r in self.ranges.items():
            v = values.pop(name, r.default)
            if not (r.lo <= v <= r.hi):
                raise SolverError(f"{name}={v} outside [{r.lo}, {r.hi}]")
            self._values[name] = int(round(v)) if r.integer else float(v)
        if values:
            raise SolverError(f"unknown hyperparameters: {sorted(values)}")

    def __getitem__(self, name):
        return self._values[name]

    def asdict(self):
        return dict(self._values)

    @classmethod
    def defaults(cls, ranges):
        return cls(ranges)


@dataclass(frozen=True)
class Budget:
    """Wall-clock and/or evaluation limits for one solver run."""
    seconds: float | None = None
    evaluations: int | None = None

    def __post_init__(self):
        if self.seconds is None and self.evaluations is None:
            raise SolverError("budget needs a wall or evaluation limit")
        if self.seconds is not None and self.seconds <= 0:
            raise SolverError("wall limit must be positive")
        if self.evaluations is not None and self.evaluations <= 0:
            raise SolverError("evaluation limit must be positive")


@dataclass
class SolveResult:
    status: str                   # "solved" | "exhausted" | "timeout"
    solution: Grid | None
    cost: int
    evaluations: int
    wall: float
    seed: int | None = None
    solutions: list | None = None  # only for enumerating DFS runs

    @property
    def solved(self):
        return self.status == "solved"


class _Meter:
    """Budget bookkeeping shared by all solver loops."""

    __slots__ = ("budget", "start", "evals", "_check")

    def __init__(self, budget: Budget):
        self.budget = budget
        self.start = time.monotonic()
        self.evals = 0
        self._check = 0

    def tick(self, n=1):
        self.evals += n

    def exhausted(self):
        b = self.budget
        if b.evaluations is not None and self.evals >= b.evaluations:
            return True
        if b.seconds is not None:
            # look at the clock only every few hundred evaluations
            self._check += 1
            if self._check % 256 == 0 or b.evaluations is None:
                return time.monotonic() - self.start >= b.seconds
        return False

    def wall(self):
        return time.monotonic() - self.start


def _finish(adapter, state, meter, seed):
    """Verify a zero-cost state and wrap it; loud failure on disagreement."""
    grid = adapter.solution(state)
    res = verify(adapter.params, grid)
    if not res.valid:
        raise SolverError(
            "adapter reported cost 0 on a grid the verifier rejects: "
            f"{res.violations[0]}")
    return SolveResult("solved", grid, 0, meter.evals, meter.wall(), seed)


def _give_up(state, meter, seed, status="timeout"):
    cost = state.cost if state is not None else -1
    return SolveResult(status, None, cost, meter.evals, meter.wall(), seed)


# ---------------------------------------------------------------------------
# Simulated annealing (constant / cooling / resets)

ANNEAL_RANGES = (
    HyperRange("temperature", 0.0, 20.0, 1.5),
    HyperRange("cool_rate", 0.8, 1.0, 0.9995),
    HyperRange("t_min", 0.0, 1.0, 0.05),
    HyperRange("reset_interval", 100, 10_000_000, 200_000, integer=True),
)


def anneal(adapter: SearchAdapter, h: Hyperparams | None, budget: Budget,
           seed: int = 0, schedule: str = "const") -> SolveResult:
    if schedule not in ("const", "cool", "reset"):
        raise SolverError(f"unknown annealing schedule {schedule!r}")
    h = h or Hyperparams.defaults(ANNEAL_RANGES)
    rng = random.Random(seed)
    meter = _Meter(budget)
    t0 = h["temperature"]
    temp = t0
    state = adapter.random_init(rng)
    since_reset = 0
    while True:
        if state.cost == 0:
            return _finish(adapter, state, meter, seed)
        if meter.exhausted():
            return _give_up(state, meter, seed)
        move = adapter.propose(state, rng)
        d = adapter.delta(state, move)
        meter.tick()
        if d <= 0 or (temp > 0 and rng.random() < math.exp(-d / temp)):
            adapter.apply(state, move)
        if schedule == "cool":
            temp = max(h["t_min"], temp * h["cool_rate"])
        elif schedule == "reset":
            since_reset += 1
            if since_reset >= h["reset_interval"]:
                state = adapter.random_init(rng)
                since_reset = 0


# ---------------------------------------------------------------------------
# Tabu search

TABU_RANGES = (
    HyperRange("tenure", 0, 1000, 12, integer=True),
    HyperRange("width", 1, 200, 24, integer=True),
    HyperRange("restart_after", 100, 10_000_000, 60_000, integer=True),
)


def tabu(adapter: SearchAdapter, h: Hyperparams | None, budget: Budget,
         seed: int = 0) -> SolveResult:
    h = h or Hyperparams.defaults(TABU_RANGES)
    rng = random.Random(seed)
    meter = _Meter(budget)
    state = adapter.random_init(rng)
    tenure, width = h["tenure"], h["width"]
    tabu_until: dict = {}
    best = state.cost
    stale = 0
    iteration = 0
    while True:
        if state.cost == 0:
            return _finish(adapter, state, meter, seed)
        if meter.exhausted():
            return _give_up(state, meter, seed)
        iteration += 1
        chosen = None
        chosen_d = None
        for _ in range(width):
            move = adapter.propose(state, rng)
            d = adapter.delta(state, move)
            meter.tick()
            key = adapter.move_key(move)
            banned = tabu_until.get(key, 0) > iteration
            if banned and state.cost + d >= best:  # aspiration
                continue
            if chosen is None or d < chosen_d:
                chosen, chosen_d = move, d
        if chosen is None:
            continue
        adapter.apply(state, chosen)
        tabu_until[adapter.move_key(adapter.inverse(chosen))] = iteration + tenure
        if state.cost < best:
            best = state.cost
            stale = 0
        else:
            stale += 1
            if stale >= h["restart_after"]:
                state = adapter.random_init(rng)
                tabu_until.clear()
                best = state.cost
                stale = 0


# ---------------------------------------------------------------------------
# Genetic algorithm

GENETIC_RANGES = (
    HyperRange("population", 2, 200, 24, integer=True),
    HyperRange("elite", 1, 50, 4, integer=True),
    HyperRange("mutations", 1, 100, 6, integer=True),
    HyperRange("tournament", 2, 16, 3, integer=True),
    HyperRange("descent", 0, 10_000, 120, integer=True),
)


def genetic(adapter: SearchAdapter, h: Hyperparams | None, budget: Budget,
            seed: int = 0) -> SolveResult:
    h = h or Hyperparams.defaults(GENETIC_RANGES)
    rng = random.Random(seed)
    meter = _Meter(budget)
    pop_size = h["population"]
    elite = min(h["elite"], pop_size - 1)
    pop = [adapter.random_init(rng) for _ in range(pop_size)]
    meter.tick(pop_size)

    def pick():
        cands = [pop[rng.randrange(pop_size)] for _ in range(h["tournament"])]
        return min(cands, key=lambda s: s.cost)

    while True:
        pop.sort(key=lambda s: s.cost)
        if pop[0].cost == 0:
            return _finish(adapter, pop[0], meter, seed)
        if meter.exhausted():
            return _give_up(pop[0], meter, seed)
        children = pop[:elite]
        while len(children) < pop_size:
            child_grid = adapter.crossover(pick().grid, pick().grid, rng)
            child = adapter.state_from_grid(child_grid)
            for _ in range(h["mutations"]):
                adapter.apply(child, adapter.propose(child, rng))
            meter.tick(1 + h["mutations"])
            # short first-improvement descent keeps children locally tight
            for _ in range(h["descent"]):
                if child.cost == 0:
                    break
                move = adapter.propose(child, rng)
                if adapter.delta(child, move) < 0:
                    adapter.apply(child, move)
                meter.tick()
            children.append(child)
            if child.cost == 0:
                return _finish(adapter, child, meter, seed)
        pop = children


# ---------------------------------------------------------------------------
# GRASP

GRASP_RANGES = (
    HyperRange("alpha", 0.0, 1.0, 0.3),
    HyperRange("width", 2, 100, 16, integer=True),
    HyperRange("construct_steps", 10, 1_000_000, 3000, integer=True),
    HyperRange("patience", 10, 100_000, 800, integer=True),
)


def grasp(adapter: SearchAdapter, h: Hyperparams | None, budget: Budget,
          seed: int = 0) -> SolveResult:
    """Greedy randomized construction (restricted candidate list over sampled
    moves) followed by sampled hill-climbing, restarted until the budget
    runs out."""
    h = h or Hyperparams.defaults(GRASP_RANGES)
    rng = random.Random(seed)
    meter = _Meter(budget)
    alpha, width = h["alpha"], h["width"]
    state = None
    while True:
        # construction: greedy over a randomized candidate list
        state = adapter.random_init(rng)
        for _ in range(h["construct_steps"]):
            if state.cost == 0 or meter.exhausted():
                break
            scored = []
            for _ in range(width):
                move = adapter.propose(state, rng)
                scored.append((adapter.delta(state, move), move))
                meter.tick()
            scored.sort(key=lambda t: t[0])
            lo, hi = scored[0][0], scored[-1][0]
            cut = lo + alpha * (hi - lo)
            rcl = [mv for d, mv in scored if d <= cut]
            adapter.apply(state, rng.choice(rcl))
        # local search: strict descent on sampled neighborhoods
        stale = 0
        while state.cost > 0 and stale < h["patience"] and not meter.exhausted():
            best_move, best_d = None, 0
            for _ in range(width):
                move = adapter.propose(state, rng)
                d = adapter.delta(state, move)
                meter.tick()
                if d < best_d:
                    best_move, best_d = move, d
            if best_move is None:
                stale += 1
            else:
                adapter.apply(state, best_move)
                stale = 0
        if state.cost == 0:
            return _finish(adapter, state, meter, seed)
        if meter.exhausted():
            return _give_up(state, meter, seed)


# ---------------------------------------------------------------------------
# Randomized row greedy

RG_RANGES = (
    HyperRange("row_tries", 1, 1_000_000, 400, integer=True),
)


def randomized_greedy(adapter: SearchAdapter, h: Hyperparams | None,
                      budget: Budget, seed: int = 0) -> SolveResult:
    """Build the grid row by row with rejection sampling; restart from the
    top whenever a row cannot be placed."""
    if not adapter.supports_rows:
        raise SolverError(
            f"{adapter.params.type_key} has no row-by-row construction")
    h = h or Hyperparams.defaults(RG_RANGES)
    rng = random.Random(seed)
    meter = _Meter(budget)
    n_rows = None
    while True:
        rows: Grid = []
        probe = adapter.random_grid(rng)
        n_rows = len(probe)
        failed = False
        for i in range(n_rows):
            placed = False
            for _ in range(h["row_tries"]):
                meter.tick()
                rows.append(adapter.sample_row(i, rng))
                if adapter.prefix_feasible(rows):
                    placed = True
                    break
                rows.pop()
                if meter.exhausted():
                    return _give_up(None, meter, seed)
            if not placed:
                failed = True
                break
        if not failed:
            state = adapter.state_from_grid(rows)
            if state.cost == 0:
                return _finish(adapter, state, meter, seed)
        if meter.exhausted():
            return _give_up(None, meter, seed)


# ---------------------------------------------------------------------------
# Backtracking DFS (type-specific orderings)

DFS_RANGES = ()


def dfs_backtrack(params: ProblemParams, h: Hyperparams | None, budget: Budget,
                  order: str = "ascending",
                  enumerate_all: bool = False) -> SolveResult:
    """Exhaustive depth-first search with a fixed value ordering.  Supports
    the permutation (Costas) and small weighing-matrix types; reports
    "exhausted" when the whole tree was explored without a hit."""
    if order not in ("ascending", "descending"):
        raise SolverError(f"unknown search order {order!r}")
    if params.type_key == "costas":
        return _dfs_costas(params, budget, order, enumerate_all)
    if params.type_key in ("symmw", "skeww"):
        return _dfs_weighing(params, budget, order, enumerate_all)
    raise SolverError(f"dfs_backtrack does not support {params.type_key!r}")


def _dfs_costas(params, budget, order, enumerate_all):
    n = params.values[0]
    meter = _Meter(budget)
    values = list(range(n))
    if order == "descending":
        values.reverse()
    found: list[Grid] = []
    perm: list[int] = []
    used = [False] * n
    vecs: set = set()
    timed_out = False

    def place(col):
        nonlocal timed_out
        if timed_out or (found and not enumerate_all):
            return
        if col == n:
            found.append([perm.copy()])
            return
        for val in values:
            if used[val]:
                continue
            meter.tick()
            if meter.exhausted():
                timed_out = True
                return
            new = [(col - i, val - perm[i]) for i in range(col)]
            if any(v in vecs for v in new) or len(set(new)) != len(new):
                continue
            perm.append(val)
            used[val] = True
            vecs.update(new)
            place(col + 1)
            vecs.difference_update(new)
            used[val] = False
            perm.pop()

    place(0)
    return _dfs_result(params, found, meter, timed_out, enumerate_all)


def _dfs_weighing(params, budget, order, enumerate_all):
    n, w = params.values
    skew = params.type_key == "skeww"
    meter = _Meter(budget)
    values = [-1, 0, 1] if order == "ascending" else [1, 0, -1]
    cells = [(i, j) for i in range(n) for j in range(i + (1 if skew else 0), n)]
    grid = [[0] * n for _ in range(n)]
    found: list[Grid] = []
    timed_out = False

    def row_ok(i):
        dot = sum(x * x for x in grid[i])
        if dot != w:
            return False
        return all(sum(grid[i][t] * grid[y][t] for t in range(n)) == 0
                   for y in range(i))

    def place(idx):
        nonlocal timed_out
        if timed_out or (found and not enumerate_all):
            return
        if idx == len(cells):
            found.append([row.copy() for row in grid])
            return
        i, j = cells[idx]
        for val in values:
            meter.tick()
            if meter.exhausted():
                timed_out = True
                return
            grid[i][j] = val
            grid[j][i] = -val if skew else val
            if j == n - 1 and not row_ok(i):
                grid[i][j] = grid[j][i] = 0
                continue
            place(idx + 1)
            grid[i][j] = grid[j][i] = 0

    place(0)
    return _dfs_result(params, found, meter, timed_out, enumerate_all)


def _dfs_result(params, found, meter, timed_out, enumerate_all):
    for sol in found:
        res = verify(params, sol)
        if not res.valid:
            raise SolverError(f"DFS produced an invalid grid: {res.violations[0]}")
    if found:
        return SolveResult("solved", found[0], 0, meter.evals, meter.wall(),
                           solutions=found if enumerate_all else None)
    status = "timeout" if timed_out else "exhausted"
    return SolveResult(status, None, -1, meter.evals, meter.wall(),
                       solutions=[] if enumerate_all else None)


# ---------------------------------------------------------------------------
# Algorithm X (exact cover)

def algorithm_x(matrix, budget: Budget | None = None, seed: int | None = None,
                n_cols: int | None = None):
    """Exact cover by backtracking with min-branching column choice.

    ``matrix`` is either a 0/1 grid or a list of column-index iterables, one
    per row.  Returns a sorted list of chosen row indices, or None when the
    instance is unsatisfiable or the budget runs out (distinguish via the
    second element of the returned tuple from :func:`algorithm_x_status`).
    """
    rows, cols = _normalize_cover(matrix, n_cols)
    rng = random.Random(seed)
    meter = _Meter(budget) if budget else None
    # column -> set of row ids still available
    col_rows = {c: set() for c in cols}
    for ri, row in enumerate(rows):
        for c in row:
            col_rows[c].add(ri)
    chosen: list[int] = []

    def search():
        if meter is not None:
            meter.tick()
            if meter.exhausted():
                raise TimeoutError
        if not col_rows:
            return True
        col = min(col_rows, key=lambda c: (len(col_rows[c]), rng.random()))
        candidates = list(col_rows[col])
        rng.shuffle(candidates)
        for ri in candidates:
            chosen.append(ri)
            removed = []
            for c in rows[ri]:
                for other in col_rows[c]:
                    for c2 in rows[other]:
                        if c2 != c and other in col_rows.get(c2, ()):
                            col_rows[c2].discard(other)
                            removed.append((c2, other))
                removed.append((c, col_rows.pop(c)))
            if search():
                return True
            for item in reversed(removed):
                c2, payload = item
                if isinstance(payload, set):
                    col_rows[c2] = payload
                else:
                    col_rows[c2].add(payload)
            chosen.pop()
        return False

    try:
        ok = search()
    except TimeoutError:
        return None
    return sorted(chosen) if ok else None


def _normalize_cover(matrix, n_cols):
    if not matrix:
        return [], set()
    first = matrix[0]
    if n_cols is not None or (first and set(first) - {0, 1}):
        rows = [sorted(set(r)) for r in matrix]
        cols = set()
        for r in rows:
            cols.update(r)
        if n_cols is not None:
            cols.update(range(n_cols))
    else:
        # 0/1 grid
        width = len(first)
        rows = [[j for j in range(width) if r[j]] for r in matrix]
        cols = set(range(width))
    return rows, cols


# ---------------------------------------------------------------------------
# Two-phase routes

TWO_PHASE_RANGES = (
    HyperRange("phase1_frac", 0.05, 0.95, 0.5),
    HyperRange("tenure", 0, 1000, 12, integer=True),
    HyperRange("width", 1, 200, 24, integer=True),
)


def two_phase_brd(params: ProblemParams, h: Hyperparams | None, budget: Budget,
                  seed: int = 0) -> SolveResult:
    """Find a 0/1 incidence with the row/column counts and pairwise overlap
    of the target design, then balance +/- signs on its nonzeros."""
    if params.type_key != "brd":
        raise SolverError("two_phase_brd only handles brd")
    validate_params(params)  # rejects e.g. odd L before any search
    v, b, r, k, L = params.values
    h = h or Hyperparams.defaults(TWO_PHASE_RANGES)
    meter = _Meter(budget)
    wall = budget.seconds
    evals = budget.evaluations
    p1_budget = Budget(
        seconds=wall * h["phase1_frac"] if wall else None,
        evaluations=int(evals * h["phase1_frac"]) if evals else None)
    inc_params = ProblemParams("bibd", (v, b, r, k, L))
    inc_res = tabu(make_adapter(inc_params),
                   Hyperparams(TABU_RANGES, tenure=h["tenure"], width=h["width"]),
                   p1_budget, seed)
    if not inc_res.solved:
        return SolveResult("timeout", None, inc_res.cost,
                           inc_res.evaluations, meter.wall(), seed)
    incidence = inc_res.solution
    result = _brd_sign_search(params, incidence, h, budget, meter,
                              inc_res.evaluations, seed)
    return result


def _brd_sign_search(params, incidence, h, budget, meter, spent_evals, seed):
    v, b, r, k, L = params.values
    half = L // 2
    rng = random.Random(seed + 1)
    grid = [[incidence[i][j] and rng.choice((-1, 1)) for j in range(b)]
            for i in range(v)]
    nonzeros = [(i, j) for i in range(v) for j in range(b) if incidence[i][j]]
    # neg[y][z]: count of columns where rows y,z have product -1
    neg = [[0] * v for _ in range(v)]
    for y in range(v):
        for z in range(y + 1, v):
            neg[y][z] = neg[z][y] = sum(
                1 for j in range(b) if grid[y][j] * grid[z][j] == -1)

    def cost():
        return sum(abs(neg[y][z] - half)
                   for y in range(v) for z in range(y + 1, v))

    cur = cost()
    temp = 1.0
    evals = spent_evals
    while cur > 0:
        evals += 1
        if budget.evaluations is not None and evals >= budget.evaluations:
            return SolveResult("timeout", None, cur, evals, meter.wall(), seed)
        if budget.seconds is not None and evals % 512 == 0 \
                and meter.wall() >= budget.seconds:
            return SolveResult("timeout", None, cur, evals, meter.wall(), seed)
        i, j = nonzeros[rng.randrange(len(nonzeros))]
        # flipping grid[i][j] swaps the sign of its product with every row
        d = 0
        touched = []
        for y in range(v):
            if y == i or grid[y][j] == 0:
                continue
            prod = grid[i][j] * grid[y][j]
            new_neg = neg[i][y] + (1 if prod == 1 else -1)
            d += abs(new_neg - half) - abs(neg[i][y] - half)
            touched.append((y, new_neg))
        if d <= 0 or rng.random() < math.exp(-d / temp):
            grid[i][j] = -grid[i][j]
            for y, new_neg in touched:
                neg[i][y] = neg[y][i] = new_neg
            cur += d
    sol = [row.copy() for row in grid]
    res = verify(params, sol)
    if not res.valid:
        raise SolverError(f"sign search produced an invalid grid: {res.violations[0]}")
    return SolveResult("solved", sol, 0, evals, meter.wall(), seed)


def sqs_blocks(v: int, seed: int = 0, budget: Budget | None = None):
    """A Steiner quadruple system on 0..v-1 via Algorithm X on the exact
    cover of all 3-subsets by 4-blocks, or None on budget exhaustion."""
    triples = {t: i for i, t in enumerate(itertools.combinations(range(v), 3))}
    blocks = list(itertools.combinations(range(v), 4))
    rows = [[triples[t] for t in itertools.combinations(blk, 3)]
            for blk in blocks]
    picked = algorithm_x(rows, budget=budget, seed=seed, n_cols=len(triples))
    if picked is None:
        return None
    return [blocks[i] for i in picked]


def two_phase_unsqs(params: ProblemParams, h: Hyperparams | None, budget: Budget,
                    seed: int = 0) -> SolveResult:
    """Build a quadruple system with Algorithm X, then tabu-search the
    pair splits toward the uniform nesting."""
    if params.type_key != "unsqs":
        raise SolverError("two_phase_unsqs only handles unsqs")
    validate_params(params)  # rejects non-integral block/pair counts
    h = h or Hyperparams.defaults(TWO_PHASE_RANGES)
    meter = _Meter(budget)
    v, p = params.values
    wall = budget.seconds
    evals = budget.evaluations
    p1_budget = Budget(
        seconds=wall * h["phase1_frac"] if wall else None,
        evaluations=int(evals * h["phase1_frac"]) if evals else None)
    blocks = sqs_blocks(v, seed=seed, budget=p1_budget)
    if blocks is None:
        return SolveResult("timeout", None, -1, 0, meter.wall(), seed)
    adapter = make_adapter(params)
    rng = random.Random(seed)
    grid = [adapter._split_row(tuple(sorted(blk)), rng.randrange(3))
            for blk in blocks]
    state = adapter.state_from_grid(grid)
    p2_budget = Budget(
        seconds=max(0.01, wall - meter.wall()) if wall else None,
        evaluations=max(1, evals - int(evals * h["phase1_frac"])) if evals else None)
    # tabu over the resplit neighborhood, seeded from the fixed system
    res = _tabu_from_state(adapter, state,
                           Hyperparams(TABU_RANGES, tenure=h["tenure"],
                                       width=h["width"]),
                           p2_budget, seed)
    res.wall = meter.wall()
    return res


def _tabu_from_state(adapter, state, h, budget, seed):
    """Tabu main loop starting from a caller-provided state (restarts
    re-randomize only the part the adapter's moves can reach)."""
    rng = random.Random(seed)
    meter = _Meter(budget)
    tenure, width = h["tenure"], h["width"]
    tabu_until: dict = {}
    best = state.cost
    iteration = 0
    while True:
        if state.cost == 0:
            return _finish(adapter, state, meter, seed)
        if meter.exhausted():
            return _give_up(state, meter, seed)
        iteration += 1
        chosen, chosen_d = None, None
        for _ in range(width):
            move = adapter.propose(state, rng)
            d = adapter.delta(state, move)
            meter.tick()
            key = adapter.move_key(move)
            if tabu_until.get(key, 0) > iteration and state.cost + d >= best:
                continue
            if chosen is None or d < chosen_d:
                chosen, chosen_d = move, d
        if chosen is None:
            continue
        adapter.apply(state, chosen)
        tabu_until[adapter.move_key(adapter.inverse(chosen))] = iteration + tenure
        best = min(best, state.cost)


# ---------------------------------------------------------------------------
# Strategy registry (CLI / tuner surface)

def _mk_anneal(schedule):
    def run(params, h, budget, seed):
        return anneal(make_adapter(params), h, budget, seed, schedule=schedule)
    return run


STRATEGIES = {
    "anneal:const": _mk_anneal("const"),
    "anneal:cool": _mk_anneal("cool"),
    "anneal:reset": _mk_anneal("reset"),
    "tabu": lambda params, h, budget, seed: tabu(make_adapter(params), h, budget, seed),
    "genetic": lambda params, h, budget, seed: genetic(make_adapter(params), h, budget, seed),
    "grasp": lambda params, h, budget, seed: grasp(make_adapter(params), h, budget, seed),
    "rg": lambda params, h, budget, seed: randomized_greedy(make_adapter(params), h, budget, seed),
    "dfs": lambda params, h, budget, seed: dfs_backtrack(params, h, budget),
    "two-phase-brd": two_phase_brd,
    "two-phase-unsqs": two_phase_unsqs,
}

STRATEGY_RANGES = {
    "anneal:const": ANNEAL_RANGES,
    "anneal:cool": ANNEAL_RANGES,
    "anneal:reset": ANNEAL_RANGES,
    "tabu": TABU_RANGES,
    "genetic": GENETIC_RANGES,
    "grasp": GRASP_RANGES,
    "rg": RG_RANGES,
    "dfs": DFS_RANGES,
    "two-phase-brd": TWO_PHASE_RANGES,
    "two-phase-unsqs": TWO_PHASE_RANGES,
}


def solve(params: ProblemParams, strategy: str, budget: Budget,
          h: Hyperparams | None = None, seed: int = 0) -> SolveResult:
    try:
        run = STRATEGIES[strategy]
    except KeyError:
        raise SolverError(f"unknown strategy {strategy!r}")
    return run(params, h, budget, seed)
