"""Shared fixtures: golden solutions, dev witnesses, random grid and
mutation generators used for verifier/oracle cross-testing."""

from __future__ import annotations

import random
from pathlib import Path

from combdesign.catalog import ProblemParams, get_type, register_builtin_types
from combdesign.grids import load_grid, transpose
from combdesign.oracle import oracle_valid
from combdesign.verify import ShapeError, verify

register_builtin_types()

FIXTURES = Path(__file__).parent / "fixtures"

# (params string, fixture file, stored transposed?)
GOLDENS = [
    ("symmw 22 16", "symmw_22_16.txt", False),
    ("brd 15 42 14 5 4", "brd_15_42_14_5_4_transpose.txt", True),
    ("btd 16 22 9 1 11 8 5", "btd_16_22_9_1_11_8_5.txt", False),
    ("cs 9 1 71", "cs_9_1_71.txt", False),
    ("jcc 13 4 105", "jcc_13_4_105.txt", False),
    ("unsqs 14 91", "unsqs_14_91.txt", False),
    ("dc 12 2 36", "dc_12_2_36.txt", False),
]


def golden_cases():
    for text, fname, transposed in GOLDENS:
        params = ProblemParams.parse(text)
        grid = load_grid(FIXTURES / fname)
        if transposed:
            grid = transpose(grid)
        yield params, grid


def dev_cases():
    """Oracle-confirmed witnesses for every dev instance."""
    for path in sorted((FIXTURES / "dev").glob("*.txt")):
        header = path.read_text().splitlines()[0].lstrip("# ").strip()
        yield ProblemParams.parse(header), load_grid(path)


def verifier_verdict(params, grid) -> bool:
    try:
        return verify(params, grid).valid
    except ShapeError:
        return False


def oracle_verdict(params, grid) -> bool:
    try:
        return oracle_valid(params, grid)
    except ShapeError:
        return False


def random_grid(params: ProblemParams, rng: random.Random):
    """Shape-correct grid with independently random in-domain cells."""
    key, vals = params.type_key, params.values
    ptype = get_type(key)
    if key == "jcc":
        N, k, C = vals
        rows = []
        for _ in range(C):
            typ = rng.randrange(2)
            size = k - 1 if typ == 0 else k + 1
            rows.append([typ] + [rng.randrange(1, N + 1) for _ in range(size)])
        return rows
    n_rows, n_cols = ptype.shape(vals)
    dom = list(ptype.domain(vals))
    return [[rng.choice(dom) for _ in range(n_cols)] for _ in range(n_rows)]


def mutate(params: ProblemParams, grid, rng: random.Random):
    """One random single-cell in-domain mutation (shape preserved)."""
    g = [row.copy() for row in grid]
    key = params.type_key
    if key == "jcc":
        N = params.values[0]
        i = rng.randrange(len(g))
        slot = rng.randrange(1, len(g[i]))
        g[i][slot] = rng.choice([x for x in range(1, N + 1) if x != g[i][slot]])
        return g
    dom = list(get_type(key).domain(params.values))
    i = rng.randrange(len(g))
    j = rng.randrange(len(g[i]))
    choices = [x for x in dom if x != g[i][j]]
    g[i][j] = rng.choice(choices or dom)
    return g
