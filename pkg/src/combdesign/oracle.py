"""Brute-force reference checkers and enumerators.

Everything here re-derives validity straight from the definitions with naive
enumeration and no shortcuts.  These are the ground truth the optimized
verifiers are tested against, and the source of the curated dev-instance
fixtures.  They are deliberately slow; ``SIZE_CAPS`` bounds the instance
sizes they accept.
"""

from __future__ import annotations

import itertools
from collections import Counter

from .catalog import ProblemParams, get_type, validate_params
from .grids import Grid

# Rough per-type limits under which the naive checks stay fast enough for
# randomized cross-testing.  Keyed by the dominating parameter(s).
SIZE_CAPS = {
    "bibd": {"v": 10, "b": 60},
    "sbibd": {"v": 10, "b": 60},
    "pa": {"N": 40, "k": 12},
    "oa": {"N": 40, "k": 8},
    "symmw": {"n": 24},
    "skeww": {"n": 24},
    "brd": {"v": 16, "b": 60},
    "btd": {"V": 20, "B": 30},
    "costas": {"n": 20},
    "covering": {"v": 12, "n": 40},
    "dts": {"n": 6, "s": 60},
    "pmd": {"v": 10},
    "epa": {"n": 16, "m": 25},
    "fr": {"r": 8, "n": 30},
    "cfr": {"r": 8, "n": 30},
    "tuscan2": {"n": 10},
    "cs": {"n": 12, "L": 300},
    "jcc": {"N": 14, "C": 300},
    "unsqs": {"v": 14},
    "ca3": {"N": 80, "k": 8, "v": 4},
    "capset": {"n": 5, "s": 50},
    "dc": {"n": 14, "m": 60},
}


class OracleCapError(ValueError):
    """Instance is too large for naive enumeration."""


def check_caps(params: ProblemParams) -> None:
    caps = SIZE_CAPS[params.type_key]
    ptype = get_type(params.type_key)
    named = dict(zip(ptype.param_names, params.values))
    for name, cap in caps.items():
        if named[name] > cap:
            raise OracleCapError(
                f"{params.format()}: {name}={named[name]} exceeds oracle cap {cap}")


def oracle_valid(params: ProblemParams, rows: Grid) -> bool:
    """Naive validity verdict, checking every definitional constraint by
    direct enumeration.  Assumes the grid already passed shape checks."""
    validate_params(params)
    check_caps(params)
    fn = _ORACLES[params.type_key]
    return fn(params.values, rows)


# ---------------------------------------------------------------------------

def _o_bibd(vals, rows, supersimple=False):
    v, b, r, k, L = vals
    for i in range(v):
        if sum(rows[i][j] for j in range(b)) != r:
            return False
    for j in range(b):
        if sum(rows[i][j] for i in range(v)) != k:
            return False
    for y in range(v):
        for z in range(v):
            if y == z:
                continue
            if sum(1 for j in range(b) if rows[y][j] == 1 and rows[z][j] == 1) != L:
                return False
    if supersimple:
        for g in range(b):
            for h in range(g + 1, b):
                if sum(1 for i in range(v)
                       if rows[i][g] == 1 and rows[i][h] == 1) > 2:
                    return False
    return True


def _o_pa(vals, rows):
    N, k, v = vals
    for c1 in range(k):
        for c2 in range(k):
            if c1 == c2:
                continue
            for a in range(v):
                for bb in range(v):
                    hits = sum(1 for i in range(N)
                               if rows[i][c1] == a and rows[i][c2] == bb)
                    if hits > 1:
                        return False
    return True


def _o_oa(vals, rows):
    N, k, s, lam = vals
    for r1 in range(k):
        for r2 in range(r1 + 1, k):
            for a in range(s):
                for bb in range(s):
                    hits = sum(1 for c in range(N)
                               if rows[r1][c] == a and rows[r2][c] == bb)
                    if hits != lam:
                        return False
    return True


def _matmul_t(rows):
    n = len(rows)
    return [[sum(rows[i][t] * rows[j][t] for t in range(n)) for j in range(n)]
            for i in range(n)]


def _o_symmw(vals, rows):
    n, w = vals
    G = _matmul_t(rows)
    for i in range(n):
        for j in range(n):
            if G[i][j] != (w if i == j else 0):
                return False
            if rows[i][j] != rows[j][i]:
                return False
    return True


def _o_skeww(vals, rows):
    n, w = vals
    G = _matmul_t(rows)
    for i in range(n):
        for j in range(n):
            if G[i][j] != (w if i == j else 0):
                return False
            if rows[j][i] != -rows[i][j]:
                return False
    return True


def _o_brd(vals, rows):
    v, b, r, k, L = vals
    for i in range(v):
        if sum(1 for j in range(b) if rows[i][j] != 0) != r:
            return False
    for j in range(b):
        if sum(1 for i in range(v) if rows[i][j] != 0) != k:
            return False
    for f in range(v):
        for g in range(f + 1, v):
            prods = Counter(rows[f][j] * rows[g][j] for j in range(b))
            if prods[-1] != L // 2 or prods[1] != L // 2 or prods[0] != b - L:
                return False
    return True


def _o_btd(vals, rows):
    V, B, p1, p2, R, K, L = vals
    for i in range(V):
        c = Counter(rows[i])
        if c[1] != p1 or c[2] != p2 or sum(rows[i]) != R:
            return False
    for j in range(B):
        if sum(rows[i][j] for i in range(V)) != K:
            return False
    for x in range(V):
        for y in range(x + 1, V):
            if sum(rows[x][j] * rows[y][j] for j in range(B)) != L:
                return False
    return True


def _is_perm(row, n):
    return sorted(row) == list(range(n))


def _o_costas(vals, rows):
    (n,) = vals
    perm = rows[0]
    if not _is_perm(perm, n):
        return False
    vecs = [(j - i, perm[j] - perm[i])
            for i in range(n) for j in range(i + 1, n)]
    return len(vecs) == len(set(vecs))


def _o_covering(vals, rows):
    t, v, k, n = vals
    blocks = [{j for j in range(v) if row[j] == 1} for row in rows]
    if any(len(b) != k for b in blocks):
        return False
    for sub in itertools.combinations(range(v), t):
        if not any(set(sub) <= blk for blk in blocks):
            return False
    return True


def _o_dts(vals, rows):
    n, k, s = vals
    seen = set()
    for row in rows:
        if row[0] != 0 or any(row[j] >= row[j + 1] for j in range(k)):
            return False
        if row[k] > s:
            return False
        for j in range(k + 1):
            for l in range(k + 1):
                if j == l:
                    continue
                d = row[l] - row[j]
                if d > 0:
                    if d in seen:
                        return False
                    seen.add(d)
    return True


def _o_pmd(vals, rows):
    v, k, b = vals
    for blk in rows:
        if len(set(blk)) != k:
            return False
    for x in range(v):
        for y in range(v):
            if x == y:
                continue
            for t in range(1, k):
                hits = 0
                for blk in rows:
                    for pos in range(k):
                        if blk[pos] == x and blk[(pos + t) % k] == y:
                            hits += 1
                if hits != 1:
                    return False
    return True


def _o_epa(vals, rows):
    n, d, m = vals
    if any(not _is_perm(r, n) for r in rows):
        return False
    for a in range(m):
        for b in range(a + 1, m):
            if sum(1 for t in range(n) if rows[a][t] != rows[b][t]) != d:
                return False
    return True


def _o_florentine(vals, rows, circular):
    r, n = vals
    if any(not _is_perm(row, n) for row in rows):
        return False
    for a in range(n):
        for b in range(n):
            if a == b:
                continue
            for m in range(1, n):
                hits = 0
                for row in rows:
                    pos_a = row.index(a)
                    if circular:
                        if row[(pos_a + m) % n] == b:
                            hits += 1
                    else:
                        if pos_a + m < n and row[pos_a + m] == b:
                            hits += 1
                if hits > 1:
                    return False
    return True


def _o_tuscan2(vals, rows):
    (n,) = vals
    if any(not _is_perm(row, n) for row in rows):
        return False
    for a in range(n):
        for b in range(n):
            if a == b:
                continue
            adj = sum(1 for row in rows for pos in range(n - 1)
                      if row[pos] == a and row[pos + 1] == b)
            if adj != 1:
                return False
            two = sum(1 for row in rows for pos in range(n - 2)
                      if row[pos] == a and row[pos + 2] == b)
            if two > 1:
                return False
    return True


def _o_cs(vals, rows):
    n, R, L = vals
    seq = rows[0]
    for word in itertools.product((0, 1), repeat=n):
        covered = False
        for j in range(L):
            dist = sum(1 for t in range(n) if seq[(j + t) % L] != word[t])
            if dist <= R:
                covered = True
                break
        if not covered:
            return False
    return True


def _o_jcc(vals, cliques):
    N, k, C = vals
    if len(cliques) != C:
        return False
    for cl in cliques:
        if not cl or cl[0] not in (0, 1):
            return False
        want = k - 1 if cl[0] == 0 else k + 1
        els = set(cl[1:])
        if len(cl) - 1 != want or len(els) != want:
            return False
        if any(not (1 <= e <= N) for e in els):
            return False
    for vert in itertools.combinations(range(1, N + 1), k):
        vs = set(vert)
        hit = False
        for cl in cliques:
            typ, els = cl[0], set(cl[1:])
            if typ == 0:
                # covers S + {x}: vertex must contain all of S
                if len(cl) - 1 == k - 1 and els <= vs:
                    hit = True
            else:
                # covers S - {x}: vertex must be inside S
                if len(cl) - 1 == k + 1 and vs <= els:
                    hit = True
            if hit:
                break
        if not hit:
            return False
    return True


def _o_unsqs(vals, blocks):
    v, p = vals
    if len(blocks) != v * (v - 1) * (v - 2) // 24:
        return False
    for blk in blocks:
        if len(set(blk)) != 4:
            return False
    for t in itertools.combinations(range(v), 3):
        hits = sum(1 for blk in blocks if set(t) <= set(blk))
        if hits != 1:
            return False
    nd = Counter()
    for blk in blocks:
        nd[frozenset(blk[:2])] += 1
        nd[frozenset(blk[2:])] += 1
    if len(nd) != p:
        return False
    target = v * (v - 1) * (v - 2) // (12 * p)
    return all(c == target for c in nd.values())


def _o_ca3(vals, rows):
    N, k, v = vals
    for cols in itertools.combinations(range(k), 3):
        for trio in itertools.product(range(v), repeat=3):
            if not any((row[cols[0]], row[cols[1]], row[cols[2]]) == trio
                       for row in rows):
                return False
    return True


def _o_capset(vals, rows):
    n, s = vals
    pts = [tuple(r) for r in rows]
    if len(pts) < s or len(set(pts)) != len(pts):
        return False
    for x, y, z in itertools.combinations(pts, 3):
        if all((x[t] + y[t] + z[t]) % 3 == 0 for t in range(n)):
            return False
    return True


def _deletions(word, s):
    out = set()
    for pos in itertools.combinations(range(len(word)), s):
        out.add(tuple(word[t] for t in range(len(word)) if t not in pos))
    return out


def _o_dc(vals, rows):
    n, s, m = vals
    words = [tuple(r) for r in rows]
    if len(set(words)) != m:
        return False
    dels = [_deletions(w, s) for w in words]
    for i in range(m):
        for j in range(i + 1, m):
            if dels[i] & dels[j]:
                return False
    return True


_ORACLES = {
    "bibd": _o_bibd,
    "sbibd": lambda vals, rows: _o_bibd(vals, rows, supersimple=True),
    "pa": _o_pa,
    "oa": _o_oa,
    "symmw": _o_symmw,
    "skeww": _o_skeww,
    "brd": _o_brd,
    "btd": _o_btd,
    "costas": _o_costas,
    "covering": _o_covering,
    "dts": _o_dts,
    "pmd": _o_pmd,
    "epa": _o_epa,
    "fr": lambda vals, rows: _o_florentine(vals, rows, False),
    "cfr": lambda vals, rows: _o_florentine(vals, rows, True),
    "tuscan2": _o_tuscan2,
    "cs": _o_cs,
    "jcc": _o_jcc,
    "unsqs": _o_unsqs,
    "ca3": _o_ca3,
    "capset": _o_capset,
    "dc": _o_dc,
}


# ---------------------------------------------------------------------------
# Enumerators used for fixture generation and self-checks.

def enumerate_costas(n: int, order: str = "ascending"):
    """All Costas arrays of order n by depth-first search.  `order` fixes the
    value ordering tried at each column so two runs can cross-check."""
    values = list(range(n))
    if order == "descending":
        values = values[::-1]
    elif order != "ascending":
        raise ValueError(f"unknown order {order!r}")
    results: list[list[int]] = []
    perm: list[int] = []
    used = [False] * n
    vecs: set[tuple[int, int]] = set()

    def place(col):
        if col == n:
            results.append(perm.copy())
            return
        for val in values:
            if used[val]:
                continue
            new = [(col - i, val - perm[i]) for i in range(col)]
            if any(vc in vecs for vc in new):
                continue
            used[val] = True
            perm.append(val)
            vecs.update(new)
            place(col + 1)
            vecs.difference_update(new)
            perm.pop()
            used[val] = False

    place(0)
    return results


def exact_cover_brute(columns: list[set[int]], n_cols: int):
    """Subset enumeration over rows; returns one exact cover or None.
    Only sensible for small row counts."""
    n_rows = len(columns)
    target = frozenset(range(n_cols))
    for rbits in range(1 << n_rows):
        chosen = [i for i in range(n_rows) if rbits >> i & 1]
        seen: set[int] = set()
        ok = True
        for i in chosen:
            if seen & columns[i]:
                ok = False
                break
            seen |= columns[i]
        if ok and seen == target:
            return chosen
    return None
