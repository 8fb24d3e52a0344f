"""Per-problem search adapters: state, neighborhood moves, and incremental
cost evaluation.

An adapter's cost counts definitional constraint violations (unit weight per
constraint class, absolute deviation for balance constraints) and is zero
exactly on valid designs.  Hard shape invariants (permutation rows, fixed
ones-per-row, monotone difference rows) are maintained by construction:
moves never break them, so the cost never has to price them.

``apply`` updates cached tallies touching only the constraints a move
affects; ``recompute_cost`` re-derives the cost from the bare grid and is the
independent path the delta-consistency property test compares against.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter

from .catalog import ProblemParams, get_type, validate_params
from .grids import Grid
from .verify import hamming_ball_masks


class AdapterError(ValueError):
    pass


class State:
    """Mutable search state: grid plus adapter-maintained tallies."""

    __slots__ = ("grid", "cost", "caches")

    def __init__(self, grid, cost, caches):
        self.grid = grid
        self.cost = cost
        self.caches = caches


class SearchAdapter:
    """Base adapter.  Subclasses define moves and incremental bookkeeping."""

    supports_rows = False  # randomized row-greedy hooks available

    def __init__(self, params: ProblemParams):
        validate_params(params)
        self.params = params
        self.ptype = get_type(params.type_key)
        self.values = params.values

    # -- construction -----------------------------------------------------
    def random_init(self, seed) -> State:
        rng = seed if isinstance(seed, random.Random) else random.Random(seed)
        return self.state_from_grid(self.random_grid(rng))

    def random_grid(self, rng) -> Grid:
        raise NotImplementedError

    def state_from_grid(self, grid: Grid) -> State:
        raise NotImplementedError

    # -- moves -------------------------------------------------------------
    def propose(self, state: State, rng) -> tuple:
        raise NotImplementedError

    def apply(self, state: State, move: tuple) -> None:
        raise NotImplementedError

    def inverse(self, move: tuple) -> tuple:
        raise NotImplementedError

    def move_key(self, move: tuple):
        """Hashable identity of a move for tabu bookkeeping."""
        return move

    def undo(self, state: State, move: tuple) -> None:
        self.apply(state, self.inverse(move))

    def delta(self, state: State, move: tuple) -> int:
        before = state.cost
        self.apply(state, move)
        d = state.cost - before
        self.undo(state, move)
        return d

    # external names for the same operations
    def propose_move(self, state: State, rng) -> tuple:
        return self.propose(state, rng)

    def incremental_delta(self, state: State, move: tuple) -> int:
        return self.delta(state, move)

    # -- cost ----------------------------------------------------------------
    def cost(self, state: State) -> int:
        return state.cost

    def recompute_cost(self, grid: Grid) -> int:
        """Full from-scratch recomputation; no cached tallies."""
        raise NotImplementedError

    def solution(self, state: State) -> Grid:
        return [row.copy() for row in state.grid]

    # -- genetic hooks ------------------------------------------------------
    def crossover(self, g1: Grid, g2: Grid, rng) -> Grid:
        return [(g1[i] if rng.random() < 0.5 else g2[i]).copy()
                for i in range(len(g1))]

    # -- randomized row-greedy hooks -----------------------------------------
    def sample_row(self, index: int, rng) -> list[int]:
        raise AdapterError(f"{self.params.type_key} has no row sampler")

    def prefix_feasible(self, rows: Grid) -> bool:
        raise AdapterError(f"{self.params.type_key} has no prefix check")


def _abs_dev(value, target):
    return abs(value - target)


# ---------------------------------------------------------------------------
# Incidence block designs

class BibdAdapter(SearchAdapter):
    """BIBD / supersimple BIBD.  Column sums stay exactly k by construction;
    a move swaps a 1 and a 0 within one column."""

    supports_rows = True

    def __init__(self, params):
        super().__init__(params)
        self.v, self.b, self.r, self.k, self.L = self.values
        self.supersimple = params.type_key == "sbibd"

    def random_grid(self, rng):
        grid = [[0] * self.b for _ in range(self.v)]
        for j in range(self.b):
            for i in rng.sample(range(self.v), self.k):
                grid[i][j] = 1
        return grid

    def state_from_grid(self, grid):
        v, b = self.v, self.b
        for j in range(b):
            if sum(grid[i][j] for i in range(v)) != self.k:
                raise AdapterError(f"column {j} does not hold exactly k ones")
        rowsum = [sum(row) for row in grid]
        inner = [[sum(grid[y][j] * grid[z][j] for j in range(b))
                  for z in range(v)] for y in range(v)]
        caches = {"rowsum": rowsum, "inner": inner}
        if self.supersimple:
            caches["colinner"] = [
                [sum(grid[i][g] * grid[i][h] for i in range(v))
                 for h in range(b)] for g in range(b)]
        state = State(grid, 0, caches)
        state.cost = self._cost_from_caches(caches)
        return state

    def _cost_from_caches(self, c):
        cost = sum(_abs_dev(s, self.r) for s in c["rowsum"])
        inner = c["inner"]
        cost += sum(_abs_dev(inner[y][z], self.L)
                    for y in range(self.v) for z in range(y + 1, self.v))
        if self.supersimple:
            ci = c["colinner"]
            cost += sum(max(0, ci[g][h] - 2)
                        for g in range(self.b) for h in range(g + 1, self.b))
        return cost

    def recompute_cost(self, grid):
        v, b = self.v, self.b
        cost = sum(_abs_dev(sum(row), self.r) for row in grid)
        for y in range(v):
            for z in range(y + 1, v):
                cost += _abs_dev(sum(grid[y][j] * grid[z][j] for j in range(b)), self.L)
        if self.supersimple:
            for g in range(b):
                for h in range(g + 1, b):
                    cost += max(0, sum(grid[i][g] * grid[i][h] for i in range(v)) - 2)
        return cost

    def propose(self, state, rng):
        j = rng.randrange(self.b)
        col = [i for i in range(self.v) if state.grid[i][j] == 1]
        empty = [i for i in range(self.v) if state.grid[i][j] == 0]
        return (j, rng.choice(col), rng.choice(empty))

    def inverse(self, move):
        j, i_on, i_off = move
        return (j, i_off, i_on)

    def apply(self, state, move):
        j, i_on, i_off = move  # i_on loses its 1, i_off gains one
        grid, c = state.grid, state.caches
        rowsum, inner = c["rowsum"], c["inner"]
        affected_rows = {i_on, i_off}
        before = sum(_abs_dev(rowsum[i], self.r) for i in affected_rows)
        for y in range(self.v):
            if y not in affected_rows:
                before += _abs_dev(inner[i_on][y], self.L)
                before += _abs_dev(inner[i_off][y], self.L)
        before += _abs_dev(inner[i_on][i_off], self.L)
        if self.supersimple:
            ci = c["colinner"]
            before += sum(max(0, ci[j][h] - 2) for h in range(self.b) if h != j)

        for i, d in ((i_on, -1), (i_off, 1)):
            grid[i][j] += d
            rowsum[i] += d
            for y in range(self.v):
                if y != i:
                    inner[i][y] += d * grid[y][j]
                    inner[y][i] = inner[i][y]
        if self.supersimple:
            ci = c["colinner"]
            for h in range(self.b):
                if h != j:
                    val = sum(grid[i][j] * grid[i][h] for i in range(self.v))
                    ci[j][h] = ci[h][j] = val

        after = sum(_abs_dev(rowsum[i], self.r) for i in affected_rows)
        for y in range(self.v):
            if y not in affected_rows:
                after += _abs_dev(inner[i_on][y], self.L)
                after += _abs_dev(inner[i_off][y], self.L)
        after += _abs_dev(inner[i_on][i_off], self.L)
        if self.supersimple:
            ci = c["colinner"]
            after += sum(max(0, ci[j][h] - 2) for h in range(self.b) if h != j)
        state.cost += after - before

    def crossover(self, g1, g2, rng):
        # mix whole columns so the exact-column-sum invariant survives
        out = [[0] * self.b for _ in range(self.v)]
        for j in range(self.b):
            src = g1 if rng.random() < 0.5 else g2
            for i in range(self.v):
                out[i][j] = src[i][j]
        return out

    # row-greedy hooks: a sampled row has exactly r ones
    def sample_row(self, index, rng):
        row = [0] * self.b
        for j in rng.sample(range(self.b), self.r):
            row[j] = 1
        return row

    def prefix_feasible(self, rows):
        placed = len(rows)
        for j in range(self.b):
            if sum(rows[i][j] for i in range(placed)) > self.k:
                return False
        for y in range(placed - 1):
            if sum(rows[y][j] * rows[-1][j] for j in range(self.b)) != self.L:
                return False
        if self.supersimple:
            for g in range(self.b):
                for h in range(g + 1, self.b):
                    if sum(rows[i][g] * rows[i][h] for i in range(placed)) > 2:
                        return False
        return True


class BtdAdapter(SearchAdapter):
    supports_rows = True

    def __init__(self, params):
        super().__init__(params)
        self.V, self.B, self.p1, self.p2, self.R, self.K, self.L = self.values

    def random_grid(self, rng):
        grid = []
        for _ in range(self.V):
            row = [1] * self.p1 + [2] * self.p2 + [0] * (self.B - self.p1 - self.p2)
            rng.shuffle(row)
            grid.append(row)
        return grid

    def state_from_grid(self, grid):
        V, B = self.V, self.B
        colsum = [sum(grid[i][j] for i in range(V)) for j in range(B)]
        rowc = [(row.count(1), row.count(2)) for row in grid]
        inner = [[sum(grid[y][j] * grid[z][j] for j in range(B))
                  for z in range(V)] for y in range(V)]
        caches = {"colsum": colsum, "rowc": rowc, "inner": inner}
        st = State(grid, 0, caches)
        st.cost = self.recompute_cost(grid)
        return st

    def recompute_cost(self, grid):
        V, B = self.V, self.B
        cost = 0
        for row in grid:
            cost += _abs_dev(row.count(1), self.p1) + _abs_dev(row.count(2), self.p2)
        for j in range(B):
            cost += _abs_dev(sum(grid[i][j] for i in range(V)), self.K)
        for y in range(V):
            for z in range(y + 1, V):
                cost += _abs_dev(sum(grid[y][j] * grid[z][j] for j in range(B)), self.L)
        return cost

    def propose(self, state, rng):
        i = rng.randrange(self.V)
        j = rng.randrange(self.B)
        old = state.grid[i][j]
        new = rng.choice([x for x in (0, 1, 2) if x != old])
        return (i, j, new, old)

    def inverse(self, move):
        i, j, new, old = move
        return (i, j, old, new)

    def move_key(self, move):
        return move[:3]

    def apply(self, state, move):
        i, j, new, old = move
        grid, c = state.grid, state.caches
        inner = c["inner"]
        before = _abs_dev(c["rowc"][i][0], self.p1) + _abs_dev(c["rowc"][i][1], self.p2)
        before += _abs_dev(c["colsum"][j], self.K)
        before += sum(_abs_dev(inner[i][y], self.L) for y in range(self.V) if y != i)

        grid[i][j] = new
        d = new - old
        c["colsum"][j] += d
        c1, c2 = c["rowc"][i]
        c1 += (new == 1) - (old == 1)
        c2 += (new == 2) - (old == 2)
        c["rowc"][i] = (c1, c2)
        for y in range(self.V):
            if y != i:
                inner[i][y] += d * grid[y][j]
                inner[y][i] = inner[i][y]

        after = _abs_dev(c1, self.p1) + _abs_dev(c2, self.p2)
        after += _abs_dev(c["colsum"][j], self.K)
        after += sum(_abs_dev(inner[i][y], self.L) for y in range(self.V) if y != i)
        state.cost += after - before

    def sample_row(self, index, rng):
        row = [1] * self.p1 + [2] * self.p2 + [0] * (self.B - self.p1 - self.p2)
        rng.shuffle(row)
        return row

    def prefix_feasible(self, rows):
        placed = len(rows)
        for j in range(self.B):
            if sum(rows[i][j] for i in range(placed)) > self.K:
                return False
        for y in range(placed - 1):
            if sum(rows[y][j] * rows[-1][j] for j in range(self.B)) != self.L:
                return False
        return True


class BrdAdapter(SearchAdapter):
    def __init__(self, params):
        super().__init__(params)
        self.v, self.b, self.r, self.k, self.L = self.values

    def random_grid(self, rng):
        grid = [[0] * self.b for _ in range(self.v)]
        for j in range(self.b):
            for i in rng.sample(range(self.v), self.k):
                grid[i][j] = rng.choice((-1, 1))
        return grid

    def state_from_grid(self, grid):
        v, b = self.v, self.b
        rownz = [sum(1 for x in row if x) for row in grid]
        colnz = [sum(1 for i in range(v) if grid[i][j]) for j in range(b)]
        neg = [[0] * v for _ in range(v)]
        pos = [[0] * v for _ in range(v)]
        for y in range(v):
            for z in range(y + 1, v):
                prods = Counter(grid[y][j] * grid[z][j] for j in range(b))
                neg[y][z] = neg[z][y] = prods[-1]
                pos[y][z] = pos[z][y] = prods[1]
        st = State(grid, 0, {"rownz": rownz, "colnz": colnz, "neg": neg, "pos": pos})
        st.cost = self.recompute_cost(grid)
        return st

    def recompute_cost(self, grid):
        v, b, half = self.v, self.b, self.L // 2
        cost = sum(_abs_dev(sum(1 for x in row if x), self.r) for row in grid)
        for j in range(b):
            cost += _abs_dev(sum(1 for i in range(v) if grid[i][j]), self.k)
        for y in range(v):
            for z in range(y + 1, v):
                prods = Counter(grid[y][j] * grid[z][j] for j in range(b))
                cost += _abs_dev(prods[-1], half) + _abs_dev(prods[1], half)
        return cost

    def propose(self, state, rng):
        i = rng.randrange(self.v)
        j = rng.randrange(self.b)
        old = state.grid[i][j]
        new = rng.choice([x for x in (-1, 0, 1) if x != old])
        return (i, j, new, old)

    def inverse(self, move):
        i, j, new, old = move
        return (i, j, old, new)

    def move_key(self, move):
        return move[:3]

    def apply(self, state, move):
        i, j, new, old = move
        grid, c = state.grid, state.caches
        half = self.L // 2
        neg, pos = c["neg"], c["pos"]
        before = _abs_dev(c["rownz"][i], self.r) + _abs_dev(c["colnz"][j], self.k)
        before += sum(_abs_dev(neg[i][y], half) + _abs_dev(pos[i][y], half)
                      for y in range(self.v) if y != i)

        for y in range(self.v):
            if y == i:
                continue
            other = grid[y][j]
            if other:
                op, np_ = old * other, new * other
                if op == -1:
                    neg[i][y] -= 1
                    neg[y][i] -= 1
                elif op == 1:
                    pos[i][y] -= 1
                    pos[y][i] -= 1
                if np_ == -1:
                    neg[i][y] += 1
                    neg[y][i] += 1
                elif np_ == 1:
                    pos[i][y] += 1
                    pos[y][i] += 1
        c["rownz"][i] += (new != 0) - (old != 0)
        c["colnz"][j] += (new != 0) - (old != 0)
        grid[i][j] = new

        after = _abs_dev(c["rownz"][i], self.r) + _abs_dev(c["colnz"][j], self.k)
        after += sum(_abs_dev(neg[i][y], half) + _abs_dev(pos[i][y], half)
                     for y in range(self.v) if y != i)
        state.cost += after - before


# ---------------------------------------------------------------------------
# Weighing matrices

class WeighingAdapter(SearchAdapter):
    """Symmetric or skew weighing matrix; the structural relation between
    cell (i,j) and (j,i) is enforced by construction, so the cost is just the
    Gram-matrix deviation from wI."""

    def __init__(self, params):
        super().__init__(params)
        self.n, self.w = self.values
        self.skew = params.type_key == "skeww"

    def random_grid(self, rng):
        n = self.n
        grid = [[0] * n for _ in range(n)]
        for i in range(n):
            start = i + 1 if self.skew else i
            for j in range(start, n):
                val = rng.choice((-1, 0, 1))
                grid[i][j] = val
                grid[j][i] = -val if self.skew else val
        return grid

    def state_from_grid(self, grid):
        n = self.n
        for i in range(n):
            for j in range(i, n):
                want = -grid[i][j] if self.skew else grid[i][j]
                if grid[j][i] != want:
                    raise AdapterError("grid breaks the structural symmetry")
        gram = [[sum(grid[i][t] * grid[j][t] for t in range(n)) for j in range(n)]
                for i in range(n)]
        st = State(grid, 0, {"gram": gram})
        st.cost = self.recompute_cost(grid)
        return st

    def recompute_cost(self, grid):
        n = self.n
        cost = 0
        for i in range(n):
            for j in range(i, n):
                dot = sum(grid[i][t] * grid[j][t] for t in range(n))
                cost += _abs_dev(dot, self.w) if i == j else abs(dot)
        return cost

    def propose(self, state, rng):
        n = self.n
        while True:
            i = rng.randrange(n)
            j = rng.randrange(n)
            if self.skew and i == j:
                continue
            if i > j:
                i, j = j, i
            break
        old = state.grid[i][j]
        new = rng.choice([x for x in (-1, 0, 1) if x != old])
        return (i, j, new, old)

    def inverse(self, move):
        i, j, new, old = move
        return (i, j, old, new)

    def move_key(self, move):
        return move[:3]

    def _local(self, gram, rows):
        # cost terms over x <= y touching any affected row
        total = 0
        for x in range(self.n):
            for y in range(x, self.n):
                if x in rows or y in rows:
                    total += (_abs_dev(gram[x][y], self.w) if x == y
                              else abs(gram[x][y]))
        return total

    def apply(self, state, move):
        i, j, new, old = move
        grid, gram = state.grid, state.caches["gram"]
        rows = {i, j}
        before = self._local(gram, rows)
        grid[i][j] = new
        grid[j][i] = -new if self.skew else new
        for x in rows:
            for y in range(self.n):
                gram[x][y] = sum(grid[x][t] * grid[y][t] for t in range(self.n))
                gram[y][x] = gram[x][y]
        state.cost += self._local(gram, rows) - before

    def crossover(self, g1, g2, rng):
        # mix the independent upper-triangle cells, rebuild the mirror
        n = self.n
        out = [[0] * n for _ in range(n)]
        for i in range(n):
            start = i + 1 if self.skew else i
            for j in range(start, n):
                val = (g1 if rng.random() < 0.5 else g2)[i][j]
                out[i][j] = val
                out[j][i] = -val if self.skew else val
        return out


# ---------------------------------------------------------------------------
# Orthogonal-style arrays over column pairs

class PaAdapter(SearchAdapter):
    """Packing array: over every unordered column pair, each ordered symbol
    pair may occur at most once."""

    def __init__(self, params):
        super().__init__(params)
        self.N, self.k, self.v = self.values

    def random_grid(self, rng):
        return [[rng.randrange(self.v) for _ in range(self.k)]
                for _ in range(self.N)]

    def state_from_grid(self, grid):
        counts = {}
        for c1 in range(self.k):
            for c2 in range(c1 + 1, self.k):
                counts[(c1, c2)] = Counter(
                    (row[c1], row[c2]) for row in grid)
        cost = sum(max(0, t - 1) for c in counts.values() for t in c.values())
        return State(grid, cost, {"counts": counts})

    def recompute_cost(self, grid):
        cost = 0
        for c1 in range(self.k):
            for c2 in range(c1 + 1, self.k):
                cnt = Counter((row[c1], row[c2]) for row in grid)
                cost += sum(max(0, t - 1) for t in cnt.values())
        return cost

    def propose(self, state, rng):
        r = rng.randrange(self.N)
        c = rng.randrange(self.k)
        old = state.grid[r][c]
        new = rng.choice([x for x in range(self.v) if x != old])
        return (r, c, new, old)

    def inverse(self, move):
        r, c, new, old = move
        return (r, c, old, new)

    def move_key(self, move):
        return move[:3]

    def _shift(self, counter, key, d, state):
        t = counter[key]
        if d == -1:
            if t > 1:
                state.cost -= 1
            counter[key] = t - 1
            if t == 1:
                del counter[key]
        else:
            if t >= 1:
                state.cost += 1
            counter[key] = t + 1

    def apply(self, state, move):
        r, c, new, old = move
        row = state.grid[r]
        counts = state.caches["counts"]
        for c2 in range(self.k):
            if c2 == c:
                continue
            lo, hi = min(c, c2), max(c, c2)
            cnt = counts[(lo, hi)]
            old_key = (old, row[c2]) if c == lo else (row[c2], old)
            new_key = (new, row[c2]) if c == lo else (row[c2], new)
            self._shift(cnt, old_key, -1, state)
            self._shift(cnt, new_key, +1, state)
        row[c] = new


class OaAdapter(SearchAdapter):
    """Orthogonal array of strength 2: each ordered symbol pair occurs
    exactly lambda times over every row pair (array is k x N)."""

    def __init__(self, params):
        super().__init__(params)
        self.N, self.k, self.s, self.lam = self.values

    def random_grid(self, rng):
        return [[rng.randrange(self.s) for _ in range(self.N)]
                for _ in range(self.k)]

    def state_from_grid(self, grid):
        counts = {}
        for r1 in range(self.k):
            for r2 in range(r1 + 1, self.k):
                counts[(r1, r2)] = Counter(
                    (grid[r1][j], grid[r2][j]) for j in range(self.N))
        st = State(grid, 0, {"counts": counts})
        st.cost = self._cost_from_counts(counts)
        return st

    def _cost_from_counts(self, counts):
        cost = 0
        for cnt in counts.values():
            seen = sum(1 for t in cnt.values() if t)
            cost += sum(_abs_dev(t, self.lam) for t in cnt.values())
            cost += (self.s * self.s - seen) * self.lam  # absent pairs
        return cost

    def recompute_cost(self, grid):
        cost = 0
        for r1 in range(self.k):
            for r2 in range(r1 + 1, self.k):
                cnt = Counter((grid[r1][j], grid[r2][j]) for j in range(self.N))
                for x in range(self.s):
                    for y in range(self.s):
                        cost += _abs_dev(cnt[(x, y)], self.lam)
        return cost

    def propose(self, state, rng):
        r = rng.randrange(self.k)
        j = rng.randrange(self.N)
        old = state.grid[r][j]
        new = rng.choice([x for x in range(self.s) if x != old])
        return (r, j, new, old)

    def inverse(self, move):
        r, j, new, old = move
        return (r, j, old, new)

    def move_key(self, move):
        return move[:3]

    def apply(self, state, move):
        r, j, new, old = move
        grid = state.grid
        counts = state.caches["counts"]
        for r2 in range(self.k):
            if r2 == r:
                continue
            lo, hi = min(r, r2), max(r, r2)
            cnt = counts[(lo, hi)]
            old_key = (old, grid[r2][j]) if r == lo else (grid[r2][j], old)
            new_key = (new, grid[r2][j]) if r == lo else (grid[r2][j], new)
            for key, d in ((old_key, -1), (new_key, +1)):
                t = cnt[key]
                state.cost += _abs_dev(t + d, self.lam) - _abs_dev(t, self.lam)
                cnt[key] = t + d
        grid[r][j] = new


class Ca3Adapter(SearchAdapter):
    """Strength-3 covering array: every column triple must cover all v^3
    symbol triples at least once."""

    def __init__(self, params):
        super().__init__(params)
        self.N, self.k, self.v = self.values

    def random_grid(self, rng):
        return [[rng.randrange(self.v) for _ in range(self.k)]
                for _ in range(self.N)]

    def state_from_grid(self, grid):
        counts = {}
        uncovered = 0
        total = self.v ** 3
        for trip in itertools.combinations(range(self.k), 3):
            c1, c2, c3 = trip
            cnt = Counter((row[c1], row[c2], row[c3]) for row in grid)
            counts[trip] = cnt
            uncovered += total - len(cnt)
        return State(grid, uncovered, {"counts": counts})

    def recompute_cost(self, grid):
        total = self.v ** 3
        cost = 0
        for c1, c2, c3 in itertools.combinations(range(self.k), 3):
            seen = {(row[c1], row[c2], row[c3]) for row in grid}
            cost += total - len(seen)
        return cost

    def propose(self, state, rng):
        r = rng.randrange(self.N)
        c = rng.randrange(self.k)
        old = state.grid[r][c]
        new = rng.choice([x for x in range(self.v) if x != old])
        return (r, c, new, old)

    def inverse(self, move):
        r, c, new, old = move
        return (r, c, old, new)

    def move_key(self, move):
        return move[:3]

    def apply(self, state, move):
        r, c, new, old = move
        row = state.grid[r]
        counts = state.caches["counts"]
        others = [x for x in range(self.k) if x != c]
        for a, b in itertools.combinations(others, 2):
            trip = tuple(sorted((a, b, c)))
            cnt = counts[trip]
            pos = trip.index(c)
            base = [row[trip[0]], row[trip[1]], row[trip[2]]]
            old_key = tuple(base[:pos] + [old] + base[pos + 1:])
            new_key = tuple(base[:pos] + [new] + base[pos + 1:])
            t = cnt[old_key]
            cnt[old_key] = t - 1
            if t == 1:
                del cnt[old_key]
                state.cost += 1
            t = cnt[new_key]
            if t == 0:
                state.cost -= 1
            cnt[new_key] = t + 1
        row[c] = new


class CoveringAdapter(SearchAdapter):
    """Covering design: n blocks of k points covering all t-subsets of a
    v-set.  Blocks keep exactly k ones by construction."""

    supports_rows = False

    def __init__(self, params):
        super().__init__(params)
        self.t, self.v, self.k, self.n = self.values
        self.total = len(list(itertools.combinations(range(self.v), self.t)))

    def random_grid(self, rng):
        grid = [[0] * self.v for _ in range(self.n)]
        for row in grid:
            for j in rng.sample(range(self.v), self.k):
                row[j] = 1
        return grid

    def _row_subsets(self, row):
        pts = [j for j, x in enumerate(row) if x]
        return list(itertools.combinations(pts, self.t))

    def state_from_grid(self, grid):
        for row in grid:
            if sum(row) != self.k:
                raise AdapterError("block does not hold exactly k points")
        cover = Counter()
        for row in grid:
            cover.update(self._row_subsets(row))
        cost = self.total - len(cover)
        return State(grid, cost, {"cover": cover})

    def recompute_cost(self, grid):
        seen = set()
        for row in grid:
            seen.update(self._row_subsets(row))
        return self.total - len(seen)

    def propose(self, state, rng):
        i = rng.randrange(self.n)
        row = state.grid[i]
        ones = [j for j, x in enumerate(row) if x]
        zeros = [j for j, x in enumerate(row) if not x]
        return (i, rng.choice(ones), rng.choice(zeros))

    def inverse(self, move):
        i, j_on, j_off = move
        return (i, j_off, j_on)

    def apply(self, state, move):
        i, j_on, j_off = move
        row = state.grid[i]
        cover = state.caches["cover"]
        pts = [j for j, x in enumerate(row) if x and j != j_on]
        for sub in itertools.combinations(pts, self.t - 1):
            key = tuple(sorted(sub + (j_on,)))
            t = cover[key]
            cover[key] = t - 1
            if t == 1:
                del cover[key]
                state.cost += 1
        for sub in itertools.combinations(pts, self.t - 1):
            key = tuple(sorted(sub + (j_off,)))
            t = cover[key]
            if t == 0:
                state.cost -= 1
            cover[key] = t + 1
        row[j_on] = 0
        row[j_off] = 1


# ---------------------------------------------------------------------------
# Permutation-based designs

class CostasAdapter(SearchAdapter):
    """Costas array as one permutation row; moves swap two positions."""

    def __init__(self, params):
        super().__init__(params)
        self.n = self.values[0]

    def random_grid(self, rng):
        perm = list(range(self.n))
        rng.shuffle(perm)
        return [perm]

    def state_from_grid(self, grid):
        perm = grid[0]
        if sorted(perm) != list(range(self.n)):
            raise AdapterError("row is not a permutation of 0..n-1")
        vecs = Counter((j - i, perm[j] - perm[i])
                       for i in range(self.n) for j in range(i + 1, self.n))
        cost = sum(t - 1 for t in vecs.values() if t > 1)
        return State(grid, cost, {"vecs": vecs})

    def recompute_cost(self, grid):
        perm = grid[0]
        vecs = Counter((j - i, perm[j] - perm[i])
                       for i in range(self.n) for j in range(i + 1, self.n))
        return sum(t - 1 for t in vecs.values() if t > 1)

    def propose(self, state, rng):
        a, b = rng.sample(range(self.n), 2)
        return (min(a, b), max(a, b))

    def inverse(self, move):
        return move

    def apply(self, state, move):
        a, b = move
        perm = state.grid[0]
        vecs = state.caches["vecs"]
        touched = {a, b}

        def pairs():
            for q in touched:
                for p in range(self.n):
                    if p == q or (p in touched and p > q):
                        continue
                    yield (min(p, q), max(p, q))

        for i, j in pairs():
            key = (j - i, perm[j] - perm[i])
            t = vecs[key]
            vecs[key] = t - 1
            if t > 1:
                state.cost -= 1
            elif t == 1:
                del vecs[key]
        perm[a], perm[b] = perm[b], perm[a]
        for i, j in pairs():
            key = (j - i, perm[j] - perm[i])
            t = vecs[key]
            if t >= 1:
                state.cost += 1
            vecs[key] = t + 1


class PermRowsAdapter(SearchAdapter):
    """Shared plumbing for designs whose rows are permutations of 0..n-1
    and whose moves swap two cells within one row."""

    def __init__(self, params, n, m):
        super().__init__(params)
        self.n = n
        self.m = m

    def random_grid(self, rng):
        grid = []
        for _ in range(self.m):
            row = list(range(self.n))
            rng.shuffle(row)
            grid.append(row)
        return grid

    def _check_perms(self, grid):
        want = list(range(self.n))
        for row in grid:
            if sorted(row) != want:
                raise AdapterError("row is not a permutation of 0..n-1")

    def propose(self, state, rng):
        i = rng.randrange(self.m)
        a, b = rng.sample(range(self.n), 2)
        return (i, min(a, b), max(a, b))

    def inverse(self, move):
        return move

    def crossover(self, g1, g2, rng):
        return [(g1[i] if rng.random() < 0.5 else g2[i]).copy()
                for i in range(self.m)]


class EpaAdapter(PermRowsAdapter):
    """Equidistant permutation array: Hamming distance exactly d between
    every pair of rows."""

    supports_rows = True

    def __init__(self, params):
        n, d, m = params.values
        super().__init__(params, n, m)
        self.d = d

    def state_from_grid(self, grid):
        self._check_perms(grid)
        dist = [[sum(1 for t in range(self.n) if grid[y][t] != grid[z][t])
                 for z in range(self.m)] for y in range(self.m)]
        cost = sum(_abs_dev(dist[y][z], self.d)
                   for y in range(self.m) for z in range(y + 1, self.m))
        return State(grid, cost, {"dist": dist})

    def recompute_cost(self, grid):
        cost = 0
        for y in range(self.m):
            for z in range(y + 1, self.m):
                h = sum(1 for t in range(self.n) if grid[y][t] != grid[z][t])
                cost += _abs_dev(h, self.d)
        return cost

    def apply(self, state, move):
        i, a, b = move
        grid, dist = state.grid, state.caches["dist"]
        row = grid[i]
        for y in range(self.m):
            if y == i:
                continue
            before = _abs_dev(dist[i][y], self.d)
            other = grid[y]
            for pos in (a, b):
                dist[i][y] -= (row[pos] != other[pos])
            row[a], row[b] = row[b], row[a]
            for pos in (a, b):
                dist[i][y] += (row[pos] != other[pos])
            row[a], row[b] = row[b], row[a]
            dist[y][i] = dist[i][y]
            state.cost += _abs_dev(dist[i][y], self.d) - before
        row[a], row[b] = row[b], row[a]

    def sample_row(self, index, rng):
        row = list(range(self.n))
        rng.shuffle(row)
        return row

    def prefix_feasible(self, rows):
        last = rows[-1]
        for other in rows[:-1]:
            if sum(1 for t in range(self.n) if last[t] != other[t]) != self.d:
                return False
        return True


class FlorentineAdapter(PermRowsAdapter):
    """(Circular) Florentine rectangle: for every ordered symbol pair and
    every displacement, at most one row realizes it."""

    supports_rows = True

    def __init__(self, params):
        r, n = params.values
        super().__init__(params, n, r)
        self.circular = params.type_key == "cfr"

    def _row_triples(self, row, positions=None):
        n = self.n
        out = []
        if self.circular:
            pos_pairs = ((p, q) for p in range(n) for q in range(n) if p != q)
        else:
            pos_pairs = ((p, q) for p in range(n) for q in range(p + 1, n))
        for p, q in pos_pairs:
            if positions is not None and p not in positions and q not in positions:
                continue
            if self.circular:
                out.append((row[p], row[q], (q - p) % n))
            else:
                out.append((row[p], row[q], q - p))
        return out

    def state_from_grid(self, grid):
        self._check_perms(grid)
        trips = Counter()
        for row in grid:
            trips.update(self._row_triples(row))
        cost = sum(t - 1 for t in trips.values() if t > 1)
        return State(grid, cost, {"trips": trips})

    def recompute_cost(self, grid):
        trips = Counter()
        for row in grid:
            trips.update(self._row_triples(row))
        return sum(t - 1 for t in trips.values() if t > 1)

    def apply(self, state, move):
        i, a, b = move
        row = state.grid[i]
        trips = state.caches["trips"]
        touched = {a, b}
        for key in self._row_triples(row, touched):
            t = trips[key]
            trips[key] = t - 1
            if t > 1:
                state.cost -= 1
            elif t == 1:
                del trips[key]
        row[a], row[b] = row[b], row[a]
        for key in self._row_triples(row, touched):
            t = trips[key]
            if t >= 1:
                state.cost += 1
            trips[key] = t + 1

    def sample_row(self, index, rng):
        row = list(range(self.n))
        rng.shuffle(row)
        return row

    def prefix_feasible(self, rows):
        trips = Counter()
        for row in rows:
            trips.update(self._row_triples(row))
        return all(t == 1 for t in trips.values())


class Tuscan2Adapter(SearchAdapter):
    """Tuscan-2 square: n rows over n+1 symbols; every ordered pair adjacent
    exactly once and at distance two at most once."""

    def __init__(self, params):
        super().__init__(params)
        self.n = self.values[0]
        self.width = self.n  # square: n permutation rows over 0..n-1

    def random_grid(self, rng):
        grid = []
        for _ in range(self.n):
            row = list(range(self.width))
            rng.shuffle(row)
            grid.append(row)
        return grid

    def _windows(self, row, gap, positions=None):
        out = []
        for p in range(len(row) - gap):
            if positions is not None and p not in positions \
                    and p + gap not in positions:
                continue
            out.append((row[p], row[p + gap]))
        return out

    def state_from_grid(self, grid):
        want = list(range(self.width))
        for row in grid:
            if sorted(row) != want:
                raise AdapterError("row is not a permutation of 0..n")
        adj = Counter()
        two = Counter()
        for row in grid:
            adj.update(self._windows(row, 1))
            two.update(self._windows(row, 2))
        st = State(grid, 0, {"adj": adj, "two": two})
        st.cost = self._cost_from(adj, two)
        return st

    def _cost_from(self, adj, two):
        cost = 0
        w = self.width
        for a in range(w):
            for b in range(w):
                if a != b:
                    cost += _abs_dev(adj[(a, b)], 1)
        cost += sum(t - 1 for t in two.values() if t > 1)
        return cost

    def recompute_cost(self, grid):
        adj = Counter()
        two = Counter()
        for row in grid:
            adj.update(self._windows(row, 1))
            two.update(self._windows(row, 2))
        return self._cost_from(adj, two)

    def propose(self, state, rng):
        i = rng.randrange(self.n)
        a, b = rng.sample(range(self.width), 2)
        return (i, min(a, b), max(a, b))

    def inverse(self, move):
        return move

    def apply(self, state, move):
        i, a, b = move
        row = state.grid[i]
        adj, two = state.caches["adj"], state.caches["two"]
        touched = {a, b}
        for key in self._windows(row, 1, touched):
            t = adj[key]
            adj[key] = t - 1
            state.cost += _abs_dev(t - 1, 1) - _abs_dev(t, 1)
        for key in self._windows(row, 2, touched):
            t = two[key]
            two[key] = t - 1
            if t > 1:
                state.cost -= 1
        row[a], row[b] = row[b], row[a]
        for key in self._windows(row, 1, touched):
            t = adj[key]
            adj[key] = t + 1
            state.cost += _abs_dev(t + 1, 1) - _abs_dev(t, 1)
        for key in self._windows(row, 2, touched):
            t = two[key]
            two[key] = t + 1
            if t >= 1:
                state.cost += 1


# ---------------------------------------------------------------------------
# Difference and distance structures

class DtsAdapter(SearchAdapter):
    """Difference triangle set: rows stay 0-anchored, strictly increasing and
    bounded by scope by construction; cost counts repeated differences."""

    def __init__(self, params):
        super().__init__(params)
        self.n, self.k, self.s = self.values

    def random_grid(self, rng):
        grid = []
        for _ in range(self.n):
            rest = sorted(rng.sample(range(1, self.s + 1), self.k))
            grid.append([0] + rest)
        return grid

    def state_from_grid(self, grid):
        for row in grid:
            if row[0] != 0 or any(row[j] >= row[j + 1] for j in range(self.k)) \
                    or row[-1] > self.s:
                raise AdapterError("row breaks the triangle-row invariant")
        diffs = Counter()
        for row in grid:
            for a, b in itertools.combinations(range(self.k + 1), 2):
                diffs[row[b] - row[a]] += 1
        cost = sum(t - 1 for t in diffs.values() if t > 1)
        return State(grid, cost, {"diffs": diffs})

    def recompute_cost(self, grid):
        diffs = Counter()
        for row in grid:
            for a, b in itertools.combinations(range(self.k + 1), 2):
                diffs[row[b] - row[a]] += 1
        return sum(t - 1 for t in diffs.values() if t > 1)

    def propose(self, state, rng):
        for _ in range(64):
            i = rng.randrange(self.n)
            j = rng.randrange(1, self.k + 1)
            row = state.grid[i]
            lo = row[j - 1] + 1
            hi = (row[j + 1] - 1) if j < self.k else self.s
            choices = [x for x in range(lo, hi + 1) if x != row[j]]
            if choices:
                return (i, j, rng.choice(choices), row[j])
        raise AdapterError("no feasible move found")

    def inverse(self, move):
        i, j, new, old = move
        return (i, j, old, new)

    def move_key(self, move):
        return move[:3]

    def apply(self, state, move):
        i, j, new, old = move
        row = state.grid[i]
        diffs = state.caches["diffs"]
        for other in range(self.k + 1):
            if other == j:
                continue
            key = abs(row[other] - row[j])
            t = diffs[key]
            diffs[key] = t - 1
            if t > 1:
                state.cost -= 1
            elif t == 1:
                del diffs[key]
        row[j] = new
        for other in range(self.k + 1):
            if other == j:
                continue
            key = abs(row[other] - row[j])
            t = diffs[key]
            if t >= 1:
                state.cost += 1
            diffs[key] = t + 1


class PmdAdapter(SearchAdapter):
    """Perfect Mendelsohn design: blocks keep distinct elements by
    construction; cost is the deviation of every ordered t-apart count
    from one."""

    def __init__(self, params):
        super().__init__(params)
        self.v, self.k, self.b = self.values

    def random_grid(self, rng):
        return [rng.sample(range(self.v), self.k) for _ in range(self.b)]

    def _block_triples(self, blk, positions=None):
        k = self.k
        out = []
        for p in range(k):
            for q in range(k):
                if p == q:
                    continue
                if positions is not None and p not in positions \
                        and q not in positions:
                    continue
                out.append((blk[p], blk[q], (q - p) % k))
        return out

    def state_from_grid(self, grid):
        for blk in grid:
            if len(set(blk)) != self.k:
                raise AdapterError("block holds a repeated element")
        apart = Counter()
        for blk in grid:
            apart.update(self._block_triples(blk))
        st = State(grid, 0, {"apart": apart})
        st.cost = self._cost_from(apart)
        return st

    def _cost_from(self, apart):
        cost = 0
        for x, y in itertools.permutations(range(self.v), 2):
            for t in range(1, self.k):
                cost += _abs_dev(apart[(x, y, t)], 1)
        return cost

    def recompute_cost(self, grid):
        apart = Counter()
        for blk in grid:
            apart.update(self._block_triples(blk))
        return self._cost_from(apart)

    def propose(self, state, rng):
        i = rng.randrange(self.b)
        blk = state.grid[i]
        if self.k < self.v and rng.random() < 0.5:
            pos = rng.randrange(self.k)
            new = rng.choice([x for x in range(self.v) if x not in blk])
            return ("set", i, pos, new, blk[pos])
        a, b = rng.sample(range(self.k), 2)
        return ("swap", i, min(a, b), max(a, b))

    def inverse(self, move):
        if move[0] == "swap":
            return move
        _, i, pos, new, old = move
        return ("set", i, pos, old, new)

    def move_key(self, move):
        return move if move[0] == "swap" else move[:4]

    def apply(self, state, move):
        i = move[1]
        blk = state.grid[i]
        apart = state.caches["apart"]
        if move[0] == "swap":
            touched = {move[2], move[3]}
        else:
            touched = {move[2]}
        for key in self._block_triples(blk, touched):
            t = apart[key]
            apart[key] = t - 1
            state.cost += _abs_dev(t - 1, 1) - _abs_dev(t, 1)
        if move[0] == "swap":
            _, _, a, b = move
            blk[a], blk[b] = blk[b], blk[a]
        else:
            blk[move[2]] = move[3]
        for key in self._block_triples(blk, touched):
            t = apart[key]
            apart[key] = t + 1
            state.cost += _abs_dev(t + 1, 1) - _abs_dev(t, 1)


class CapsetAdapter(SearchAdapter):
    """Cap set in F_3^n: cost counts zero-sum triples of distinct point slots
    plus a penalty for coinciding points."""

    def __init__(self, params):
        super().__init__(params)
        self.n, self.s = self.values

    def random_grid(self, rng):
        return [[rng.randrange(3) for _ in range(self.n)]
                for _ in range(self.s)]

    def state_from_grid(self, grid):
        st = State(grid, 0, {"cnt": Counter(tuple(r) for r in grid)})
        st.cost = self.recompute_cost(grid)
        return st

    def recompute_cost(self, grid):
        s = self.s
        cost = 0
        for i, j, k in itertools.combinations(range(s), 3):
            if all((grid[i][t] + grid[j][t] + grid[k][t]) % 3 == 0
                   for t in range(self.n)):
                cost += 1
        dup = Counter(tuple(r) for r in grid)
        cost += sum(t - 1 for t in dup.values() if t > 1)
        return cost

    def propose(self, state, rng):
        i = rng.randrange(self.s)
        c = rng.randrange(self.n)
        old = state.grid[i][c]
        new = rng.choice([x for x in (0, 1, 2) if x != old])
        return (i, c, new, old)

    def inverse(self, move):
        i, c, new, old = move
        return (i, c, old, new)

    def move_key(self, move):
        return move[:3]

    def _local_triples(self, grid, i):
        cost = 0
        for j, k in itertools.combinations(
                [x for x in range(self.s) if x != i], 2):
            if all((grid[i][t] + grid[j][t] + grid[k][t]) % 3 == 0
                   for t in range(self.n)):
                cost += 1
        return cost

    def apply(self, state, move):
        i, c, new, old = move
        grid, cnt = state.grid, state.caches["cnt"]
        before = self._local_triples(grid, i)
        old_pt = tuple(grid[i])
        grid[i][c] = new
        new_pt = tuple(grid[i])
        t = cnt[old_pt]
        cnt[old_pt] = t - 1  # one fewer copy: penalty drops iff it was a dup
        if t >= 2:
            state.cost -= 1
        if cnt[old_pt] == 0:
            del cnt[old_pt]
        t = cnt[new_pt]
        if t >= 1:
            state.cost += 1
        cnt[new_pt] = t + 1
        state.cost += self._local_triples(grid, i) - before


class DcAdapter(SearchAdapter):
    """Deletion code: cost counts shared s-deletion subsequences across
    word pairs (identical words share everything, so distinctness is free)."""

    def __init__(self, params):
        super().__init__(params)
        self.n, self.s, self.m = self.values

    def random_grid(self, rng):
        return [[rng.randrange(2) for _ in range(self.n)]
                for _ in range(self.m)]

    def state_from_grid(self, grid):
        from .verify import deletion_set
        dsets = [deletion_set(tuple(row), self.s) for row in grid]
        cnt = Counter()
        for d in dsets:
            cnt.update(d)
        cost = sum(t * (t - 1) // 2 for t in cnt.values() if t > 1)
        return State(grid, cost, {"dsets": dsets, "cnt": cnt})

    def recompute_cost(self, grid):
        from .verify import deletion_set
        cnt = Counter()
        for row in grid:
            cnt.update(deletion_set(tuple(row), self.s))
        return sum(t * (t - 1) // 2 for t in cnt.values() if t > 1)

    def propose(self, state, rng):
        return (rng.randrange(self.m), rng.randrange(self.n))

    def inverse(self, move):
        return move

    def apply(self, state, move):
        from .verify import deletion_set
        i, pos = move
        grid = state.grid
        dsets, cnt = state.caches["dsets"], state.caches["cnt"]
        old_d = dsets[i]
        grid[i][pos] ^= 1
        new_d = deletion_set(tuple(grid[i]), self.s)
        for sub in old_d - new_d:
            t = cnt[sub]
            cnt[sub] = t - 1
            state.cost -= t - 1
            if t == 1:
                del cnt[sub]
        for sub in new_d - old_d:
            t = cnt[sub]
            state.cost += t
            cnt[sub] = t + 1
        dsets[i] = new_d


class CsAdapter(SearchAdapter):
    """Cyclic covering sequence: cost is the number of n-bit words outside
    every window's Hamming ball."""

    def __init__(self, params):
        super().__init__(params)
        self.n, self.R, self.L = self.values
        self.masks = hamming_ball_masks(self.n, min(self.R, self.n))

    def random_grid(self, rng):
        return [[rng.randrange(2) for _ in range(self.L)]]

    def _word(self, seq, j):
        w = 0
        for t in range(self.n):
            w = (w << 1) | seq[(j + t) % self.L]
        return w

    def state_from_grid(self, grid):
        seq = grid[0]
        size = 1 << self.n
        counts = [0] * size
        for j in range(self.L):
            w = self._word(seq, j)
            for m in self.masks:
                counts[w ^ m] += 1
        uncovered = counts.count(0)
        st = State(grid, uncovered, {"counts": counts})
        return st

    def recompute_cost(self, grid):
        seq = grid[0]
        size = 1 << self.n
        covered = bytearray(size)
        for j in range(self.L):
            w = self._word(seq, j)
            for m in self.masks:
                covered[w ^ m] = 1
        return size - covered.count(1)

    def propose(self, state, rng):
        return (rng.randrange(self.L),)

    def inverse(self, move):
        return move

    def apply(self, state, move):
        (pos,) = move
        seq = state.grid[0]
        counts = state.caches["counts"]
        windows = [(pos - t) % self.L for t in range(self.n)]
        windows = sorted(set(windows))
        for j in windows:
            w = self._word(seq, j)
            for m in self.masks:
                counts[w ^ m] -= 1
                if counts[w ^ m] == 0:
                    state.cost += 1
        seq[pos] ^= 1
        for j in windows:
            w = self._word(seq, j)
            for m in self.masks:
                if counts[w ^ m] == 0:
                    state.cost -= 1
                counts[w ^ m] += 1


class UnsqsAdapter(SearchAdapter):
    """Uniform nested Steiner quadruple system.  The block set (a fixed SQS)
    never changes; moves re-pair one block's four elements, and the cost is
    the deviation of the ND-pair multiset from p pairs appearing equally
    often."""

    def __init__(self, params):
        super().__init__(params)
        self.v, self.p = self.values
        self.target = self.v * (self.v - 1) * (self.v - 2) // (12 * self.p)

    # the three pairings of a sorted quadruple (a,b,c,d)
    @staticmethod
    def _split_row(block, split):
        a, b, c, d = block
        if split == 0:
            return [a, b, c, d]
        if split == 1:
            return [a, c, b, d]
        return [a, d, b, c]

    def random_grid(self, rng):
        blocks = self._base_blocks(rng)
        return [self._split_row(blk, rng.randrange(3)) for blk in blocks]

    def _base_blocks(self, rng):
        v = self.v
        if v & (v - 1) == 0:  # power of two: XOR quadruples form an SQS
            blocks = []
            for a, b, c in itertools.combinations(range(v), 3):
                d = a ^ b ^ c
                if d > c:
                    blocks.append((a, b, c, d))
            return blocks
        raise AdapterError(
            f"no built-in quadruple system for v={v}; seed the search with "
            "state_from_grid on an explicit system")

    def state_from_grid(self, grid):
        trip = Counter()
        for row in grid:
            if len(set(row)) != 4:
                raise AdapterError("block holds a repeated element")
            trip.update(itertools.combinations(sorted(row), 3))
        if any(t != 1 for t in trip.values()) or \
                len(trip) != self.v * (self.v - 1) * (self.v - 2) // 6:
            raise AdapterError("rows do not form a Steiner quadruple system")
        nd = Counter()
        for row in grid:
            nd[frozenset(row[:2])] += 1
            nd[frozenset(row[2:])] += 1
        st = State(grid, 0, {"nd": nd})
        st.cost = self._cost_from(nd)
        return st

    def _cost_from(self, nd):
        cost = sum(_abs_dev(t, self.target) for t in nd.values() if t)
        cost += self.target * abs(self.p - sum(1 for t in nd.values() if t))
        return cost

    def recompute_cost(self, grid):
        nd = Counter()
        for row in grid:
            nd[frozenset(row[:2])] += 1
            nd[frozenset(row[2:])] += 1
        return self._cost_from(nd)

    def propose(self, state, rng):
        i = rng.randrange(len(state.grid))
        row = state.grid[i]
        block = tuple(sorted(row))
        old = next(s for s in range(3) if self._split_row(block, s) == row)
        new = rng.choice([s for s in range(3) if s != old])
        return (i, new, old)

    def inverse(self, move):
        i, new, old = move
        return (i, old, new)

    def move_key(self, move):
        return move[:2]

    def apply(self, state, move):
        i, new, old = move
        nd = state.caches["nd"]
        row = state.grid[i]
        block = tuple(sorted(row))
        new_row = self._split_row(block, new)
        before = self._cost_from(nd)
        for pair in (frozenset(row[:2]), frozenset(row[2:])):
            t = nd[pair]
            nd[pair] = t - 1
            if t == 1:
                del nd[pair]
        for pair in (frozenset(new_row[:2]), frozenset(new_row[2:])):
            nd[pair] += 1
        state.grid[i] = new_row
        state.cost += self._cost_from(nd) - before

    def crossover(self, g1, g2, rng):
        return [(g1[i] if rng.random() < 0.5 else g2[i]).copy()
                for i in range(len(g1))]


class JccAdapter(SearchAdapter):
    """Johnson-graph clique cover: rows are encoded cliques with distinct
    elements by construction; cost is the number of uncovered vertices."""

    def __init__(self, params):
        super().__init__(params)
        self.N, self.k, self.C = self.values
        from math import comb
        self.total = comb(self.N, self.k)

    def _expand(self, row):
        from .verify import expand_clique
        return expand_clique(self.N, self.k, row)

    def _random_row(self, rng):
        typ = rng.randrange(2)
        size = self.k - 1 if typ == 0 else self.k + 1
        return [typ] + sorted(rng.sample(range(1, self.N + 1), size))

    def random_grid(self, rng):
        return [self._random_row(rng) for _ in range(self.C)]

    def state_from_grid(self, grid):
        cover = Counter()
        for row in grid:
            if len(set(row[1:])) != len(row[1:]):
                raise AdapterError("clique holds a repeated element")
            cover.update(self._expand(row))
        cost = self.total - len(cover)
        return State(grid, cost, {"cover": cover})

    def recompute_cost(self, grid):
        covered = set()
        for row in grid:
            covered.update(self._expand(row))
        return self.total - len(covered)

    def propose(self, state, rng):
        i = rng.randrange(self.C)
        row = state.grid[i]
        if rng.random() < 0.15:
            return ("row", i, tuple(self._random_row(rng)), tuple(row))
        slot = rng.randrange(1, len(row))
        used = set(row[1:])
        new = rng.choice([x for x in range(1, self.N + 1) if x not in used])
        return ("el", i, slot, new, row[slot])

    def inverse(self, move):
        if move[0] == "row":
            _, i, new_row, old_row = move
            return ("row", i, old_row, new_row)
        _, i, slot, new, old = move
        return ("el", i, slot, old, new)

    def move_key(self, move):
        return move[:4] if move[0] == "el" else move[:3]

    def apply(self, state, move):
        i = move[1]
        cover = state.caches["cover"]
        row = state.grid[i]
        for vert in self._expand(row):
            t = cover[vert]
            cover[vert] = t - 1
            if t == 1:
                del cover[vert]
                state.cost += 1
        if move[0] == "row":
            state.grid[i] = list(move[2])
        else:
            row[move[2]] = move[3]
        for vert in self._expand(state.grid[i]):
            t = cover[vert]
            if t == 0:
                state.cost -= 1
            cover[vert] = t + 1

    def solution(self, state):
        return [row.copy() for row in state.grid]


# ---------------------------------------------------------------------------

_ADAPTERS = {
    "bibd": BibdAdapter,
    "sbibd": BibdAdapter,
    "pa": PaAdapter,
    "oa": OaAdapter,
    "symmw": WeighingAdapter,
    "skeww": WeighingAdapter,
    "brd": BrdAdapter,
    "btd": BtdAdapter,
    "costas": CostasAdapter,
    "covering": CoveringAdapter,
    "dts": DtsAdapter,
    "pmd": PmdAdapter,
    "epa": EpaAdapter,
    "fr": FlorentineAdapter,
    "cfr": FlorentineAdapter,
    "tuscan2": Tuscan2Adapter,
    "cs": CsAdapter,
    "jcc": JccAdapter,
    "unsqs": UnsqsAdapter,
    "ca3": Ca3Adapter,
    "capset": CapsetAdapter,
    "dc": DcAdapter,
}


def make_adapter(params: ProblemParams) -> SearchAdapter:
    try:
        cls = _ADAPTERS[params.type_key]
    except KeyError:
        raise AdapterError(f"no search adapter for type {params.type_key!r}")
    return cls(params)
