"""Exact validity checkers for all 22 design types.

Every checker is a pure function over immutable inputs and uses only integer
arithmetic.  A checker first rejects malformed input (bad parameters, wrong
shape, out-of-domain cells) by raising an error; it then evaluates every
definitional constraint and reports failures as itemized violations.  A
solution is valid exactly when the violation list is empty.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field

from .catalog import ProblemParams, get_type, validate_params
from .grids import Grid


class ShapeError(ValueError):
    """Solution grid is malformed for the given parameters."""


@dataclass(frozen=True)
class Violation:
    constraint: str
    location: str
    detail: str


@dataclass
class VerifyResult:
    valid: bool
    violations: list[Violation] = field(default_factory=list)
    stats: dict = field(default_factory=dict)


def _result(violations: list[Violation], checked: int) -> VerifyResult:
    return VerifyResult(valid=not violations, violations=violations,
                        stats={"constraints_checked": checked})


def _check_shape(rows: Grid, shape: tuple[int, int], domain, *,
                 rows_flexible: bool = False) -> None:
    nrows, ncols = shape
    if rows_flexible:
        if len(rows) < nrows:
            raise ShapeError(f"expected at least {nrows} rows, got {len(rows)}")
    elif len(rows) != nrows:
        raise ShapeError(f"expected {nrows} rows, got {len(rows)}")
    dom = set(domain)
    for i, row in enumerate(rows):
        if ncols != 0 and len(row) != ncols:
            raise ShapeError(f"row {i}: expected {ncols} cells, got {len(row)}")
        for j, cell in enumerate(row):
            if cell not in dom:
                raise ShapeError(f"cell ({i},{j}) value {cell} outside domain")


def _prepare(params: ProblemParams, rows: Grid, *, ragged_domain_skip: bool = False):
    """Shared precondition: valid params, well-shaped grid, in-domain cells."""
    validate_params(params)
    ptype = get_type(params.type_key)
    if ragged_domain_skip:
        return ptype
    _check_shape(rows, ptype.shape(params.values), ptype.domain(params.values),
                 rows_flexible=ptype.rows_flexible)
    return ptype


# ---------------------------------------------------------------------------
# Block designs and arrays

def verify_bibd(v, b, r, k, L, rows: Grid, supersimple: bool = False) -> VerifyResult:
    key = "sbibd" if supersimple else "bibd"
    _prepare(ProblemParams(key, (v, b, r, k, L)), rows)
    viol, checked = [], 0
    for i, row in enumerate(rows):
        checked += 1
        if sum(row) != r:
            viol.append(Violation("row-sum", f"row {i}", f"{sum(row)} != {r}"))
    for j in range(b):
        checked += 1
        col = sum(rows[i][j] for i in range(v))
        if col != k:
            viol.append(Violation("col-sum", f"col {j}", f"{col} != {k}"))
    for y, z in itertools.combinations(range(v), 2):
        checked += 1
        inner = sum(rows[y][j] * rows[z][j] for j in range(b))
        if inner != L:
            viol.append(Violation("pair-balance", f"rows {y},{z}", f"{inner} != {L}"))
    if supersimple:
        for g, h in itertools.combinations(range(b), 2):
            checked += 1
            shared = sum(rows[i][g] * rows[i][h] for i in range(v))
            if shared > 2:
                viol.append(Violation("supersimple", f"cols {g},{h}", f"{shared} > 2"))
    return _result(viol, checked)


def verify_pa(N, k, v, rows: Grid) -> VerifyResult:
    _prepare(ProblemParams("pa", (N, k, v)), rows)
    viol, checked = [], 0
    for c1, c2 in itertools.permutations(range(k), 2):
        checked += 1
        seen = Counter((rows[i][c1], rows[i][c2]) for i in range(N))
        for pair, count in seen.items():
            if count > 1:
                viol.append(Violation("pair-once", f"cols {c1},{c2}",
                                      f"symbol pair {pair} occurs {count} times"))
    return _result(viol, checked)


def verify_oa(N, k, s, lam, rows: Grid) -> VerifyResult:
    _prepare(ProblemParams("oa", (N, k, s, lam)), rows)
    viol, checked = [], 0
    for r1, r2 in itertools.combinations(range(k), 2):
        seen = Counter((rows[r1][c], rows[r2][c]) for c in range(N))
        for a in range(s):
            for b in range(s):
                checked += 1
                if seen[(a, b)] != lam:
                    viol.append(Violation("index", f"rows {r1},{r2}",
                                          f"pair ({a},{b}) occurs {seen[(a, b)]} != {lam}"))
    return _result(viol, checked)


def verify_weighing(n, w, kind: str, rows: Grid) -> VerifyResult:
    if kind not in ("symmetric", "skew"):
        raise ShapeError(f"unknown weighing kind {kind!r}")
    key = "symmw" if kind == "symmetric" else "skeww"
    _prepare(ProblemParams(key, (n, w)), rows)
    viol, checked = [], 0
    for i in range(n):
        for j in range(i, n):
            checked += 1
            dot = sum(rows[i][t] * rows[j][t] for t in range(n))
            want = w if i == j else 0
            if dot != want:
                viol.append(Violation("orthogonality", f"rows {i},{j}",
                                      f"dot {dot} != {want}"))
    for i in range(n):
        for j in range(i, n):
            checked += 1
            if kind == "symmetric":
                if rows[i][j] != rows[j][i]:
                    viol.append(Violation("symmetry", f"cell ({i},{j})",
                                          f"{rows[i][j]} != {rows[j][i]}"))
            else:
                if rows[j][i] != -rows[i][j]:
                    viol.append(Violation("skew", f"cell ({i},{j})",
                                          f"{rows[j][i]} != -{rows[i][j]}"))
    return _result(viol, checked)


def verify_brd(v, b, r, k, L, rows: Grid) -> VerifyResult:
    _prepare(ProblemParams("brd", (v, b, r, k, L)), rows)
    viol, checked = [], 0
    for i, row in enumerate(rows):
        checked += 1
        nz = sum(1 for x in row if x != 0)
        if nz != r:
            viol.append(Violation("row-nonzeros", f"row {i}", f"{nz} != {r}"))
    for j in range(b):
        checked += 1
        nz = sum(1 for i in range(v) if rows[i][j] != 0)
        if nz != k:
            viol.append(Violation("col-nonzeros", f"col {j}", f"{nz} != {k}"))
    for f, g in itertools.combinations(range(v), 2):
        checked += 1
        prods = [rows[f][j] * rows[g][j] for j in range(b)]
        neg, pos = prods.count(-1), prods.count(1)
        if neg != L // 2 or pos != L // 2:
            viol.append(Violation("product-balance", f"rows {f},{g}",
                                  f"-1 x{neg}, +1 x{pos}, want {L // 2} each"))
    return _result(viol, checked)


def verify_btd(V, B, p1, p2, R, K, L, rows: Grid) -> VerifyResult:
    _prepare(ProblemParams("btd", (V, B, p1, p2, R, K, L)), rows)
    viol, checked = [], 0
    for i, row in enumerate(rows):
        checked += 1
        c1, c2 = row.count(1), row.count(2)
        if c1 != p1 or c2 != p2:
            viol.append(Violation("row-multiplicity", f"row {i}",
                                  f"ones {c1} != {p1} or twos {c2} != {p2}"))
    for j in range(B):
        checked += 1
        col = sum(rows[i][j] for i in range(V))
        if col != K:
            viol.append(Violation("col-sum", f"col {j}", f"{col} != {K}"))
    for x, y in itertools.combinations(range(V), 2):
        checked += 1
        inner = sum(rows[x][j] * rows[y][j] for j in range(B))
        if inner != L:
            viol.append(Violation("pair-balance", f"rows {x},{y}", f"{inner} != {L}"))
    return _result(viol, checked)


# ---------------------------------------------------------------------------
# Permutation-structured designs

def _check_permutation_row(row, n, i, viol) -> bool:
    if sorted(row) != list(range(n)):
        viol.append(Violation("permutation", f"row {i}",
                              "row is not a permutation of 0..n-1"))
        return False
    return True


def verify_costas(n, perm_rows: Grid) -> VerifyResult:
    _prepare(ProblemParams("costas", (n,)), perm_rows)
    perm = perm_rows[0]
    viol, checked = [], 1
    if not _check_permutation_row(perm, n, 0, viol):
        return _result(viol, checked)
    seen: dict[tuple[int, int], tuple[int, int]] = {}
    for i, j in itertools.combinations(range(n), 2):
        checked += 1
        vec = (j - i, perm[j] - perm[i])
        if vec in seen:
            viol.append(Violation("distinct-vectors", f"pairs {seen[vec]} and {(i, j)}",
                                  f"displacement {vec} repeats"))
        else:
            seen[vec] = (i, j)
    return _result(viol, checked)


def verify_epa(n, d, m, rows: Grid) -> VerifyResult:
    _prepare(ProblemParams("epa", (n, d, m)), rows)
    viol, checked = [], 0
    ok = all(_check_permutation_row(rows[i], n, i, viol) for i in range(m))
    checked += m
    if not ok:
        return _result(viol, checked)
    for a, b in itertools.combinations(range(m), 2):
        checked += 1
        dist = sum(1 for t in range(n) if rows[a][t] != rows[b][t])
        if dist != d:
            viol.append(Violation("pair-distance", f"rows {a},{b}", f"{dist} != {d}"))
    return _result(viol, checked)


def verify_florentine(r, n, rows: Grid, circular: bool = False) -> VerifyResult:
    key = "cfr" if circular else "fr"
    _prepare(ProblemParams(key, (r, n)), rows)
    viol, checked = [], 0
    ok = all(_check_permutation_row(rows[i], n, i, viol) for i in range(r))
    checked += r
    if not ok:
        return _result(viol, checked)
    seen: dict[tuple[int, int, int], int] = {}
    for i, row in enumerate(rows):
        for pos in range(n):
            top = n if circular else n - pos
            for step in range(1, top):
                checked += 1
                a = row[pos]
                b = row[(pos + step) % n]
                trio = (a, b, step)
                if trio in seen:
                    viol.append(Violation("step-pair", f"rows {seen[trio]},{i}",
                                          f"{b} is {step} right of {a} in both"))
                else:
                    seen[trio] = i
    return _result(viol, checked)


def verify_tuscan2(n, rows: Grid) -> VerifyResult:
    _prepare(ProblemParams("tuscan2", (n,)), rows)
    viol, checked = [], 0
    ok = all(_check_permutation_row(rows[i], n, i, viol) for i in range(n))
    checked += n
    if not ok:
        return _result(viol, checked)
    adj = Counter()
    two = Counter()
    for row in rows:
        for pos in range(n - 1):
            adj[(row[pos], row[pos + 1])] += 1
        for pos in range(n - 2):
            two[(row[pos], row[pos + 2])] += 1
    for a, b in itertools.permutations(range(n), 2):
        checked += 2
        if adj[(a, b)] != 1:
            viol.append(Violation("adjacent-once", f"pair ({a},{b})",
                                  f"adjacent in {adj[(a, b)]} rows, want 1"))
        if two[(a, b)] > 1:
            viol.append(Violation("distance-two", f"pair ({a},{b})",
                                  f"at distance 2 in {two[(a, b)]} rows, want <= 1"))
    return _result(viol, checked)


# ---------------------------------------------------------------------------
# Sequences, covers, codes

def hamming_ball_masks(n: int, radius: int) -> list[int]:
    """XOR masks reaching every word within the given Hamming radius."""
    masks = []
    for dist in range(radius + 1):
        for bits in itertools.combinations(range(n), dist):
            m = 0
            for t in bits:
                m |= 1 << t
            masks.append(m)
    return masks


def verify_cs(n, R, L, rows: Grid) -> VerifyResult:
    _prepare(ProblemParams("cs", (n, R, L)), rows)
    seq = rows[0]
    checked = 2 ** n
    if R >= n:
        return _result([], checked)
    # Ball marking: each of the L cyclic windows marks all words within
    # Hamming radius R; the sequence covers iff every n-bit word gets marked.
    masks = hamming_ball_masks(n, R)
    covered = bytearray(2 ** n)
    win = 0
    for t in range(n):
        win = (win << 1) | seq[t]
    full = (1 << n) - 1
    for j in range(L):
        for m in masks:
            covered[win ^ m] = 1
        win = ((win << 1) & full) | seq[(j + n) % L]
    viol = []
    marked = covered.count(1)
    if marked != 2 ** n:
        first = covered.index(0)
        word = format(first, f"0{n}b")
        viol.append(Violation("coverage", f"word {word}",
                              f"{2 ** n - marked} words uncovered"))
    return VerifyResult(valid=not viol, violations=viol,
                        stats={"constraints_checked": checked,
                               "windows": L, "marks": L * len(masks)})


def expand_clique(N: int, k: int, clique: list[int]) -> list[frozenset[int]]:
    """Vertices of J(N,k) covered by one encoded clique line."""
    if not clique:
        raise ShapeError("empty clique line")
    typ, els = clique[0], clique[1:]
    if typ not in (0, 1):
        raise ShapeError(f"clique type must be 0 or 1, got {typ}")
    want = k - 1 if typ == 0 else k + 1
    if len(els) != want:
        raise ShapeError(f"type-{typ} clique must list {want} elements, got {len(els)}")
    if any(not (1 <= e <= N) for e in els):
        raise ShapeError("clique element outside 1..N")
    S = set(els)
    if len(S) != len(els):
        return []  # repeated element: covers nothing, reported as a violation
    if typ == 0:
        return [frozenset(S | {x}) for x in range(1, N + 1) if x not in S]
    return [frozenset(S - {x}) for x in S]


def verify_jcc(N, k, C, cliques: Grid) -> VerifyResult:
    params = ProblemParams("jcc", (N, k, C))
    validate_params(params)
    if len(cliques) != C:
        raise ShapeError(f"expected {C} cliques, got {len(cliques)}")
    viol, checked = [], 0
    covered: set[frozenset[int]] = set()
    for i, cl in enumerate(cliques):
        checked += 1
        if len(set(cl[1:])) != len(cl[1:]):
            viol.append(Violation("clique-distinct", f"clique {i}",
                                  "repeated element in clique"))
            continue
        covered.update(expand_clique(N, k, cl))
    for vert in itertools.combinations(range(1, N + 1), k):
        checked += 1
        if frozenset(vert) not in covered:
            viol.append(Violation("coverage", f"vertex {set(vert)}",
                                  "k-subset not covered by any clique"))
    return _result(viol, checked)


def verify_unsqs(v, p, blocks: Grid) -> VerifyResult:
    _prepare(ProblemParams("unsqs", (v, p)), blocks)
    viol, checked = [], 0
    triple_count: Counter = Counter()
    nd: Counter = Counter()
    for i, blk in enumerate(blocks):
        checked += 1
        if len(set(blk)) != 4:
            viol.append(Violation("block-distinct", f"block {i}",
                                  "repeated element in block"))
            continue
        for t in itertools.combinations(sorted(blk), 3):
            triple_count[t] += 1
        nd[frozenset(blk[:2])] += 1
        nd[frozenset(blk[2:])] += 1
    for t in itertools.combinations(range(v), 3):
        checked += 1
        if triple_count[t] != 1:
            viol.append(Violation("triple-once", f"triple {t}",
                                  f"in {triple_count[t]} blocks, want 1"))
    checked += 2
    if len(nd) != p:
        viol.append(Violation("nd-pair-count", "design",
                              f"{len(nd)} distinct ND-pairs, want {p}"))
    target = v * (v - 1) * (v - 2) // (12 * p)
    bad = {tuple(sorted(pair)): c for pair, c in nd.items() if c != target}
    if bad:
        pair, c = next(iter(bad.items()))
        viol.append(Violation("nd-pair-uniform", f"pair {pair}",
                              f"appears {c} times, want {target} "
                              f"({len(bad)} pairs off target)"))
    return _result(viol, checked)


def verify_covering(t, v, k, n, rows: Grid) -> VerifyResult:
    _prepare(ProblemParams("covering", (t, v, k, n)), rows)
    viol, checked = [], 0
    blocks = []
    for i, row in enumerate(rows):
        checked += 1
        ones = [j for j in range(v) if row[j] == 1]
        if len(ones) != k:
            viol.append(Violation("block-size", f"row {i}", f"{len(ones)} ones, want {k}"))
        blocks.append(set(ones))
    for sub in itertools.combinations(range(v), t):
        checked += 1
        need = set(sub)
        if not any(need <= blk for blk in blocks):
            viol.append(Violation("coverage", f"t-subset {sub}", "not in any block"))
    return _result(viol, checked)


def verify_dts(n, k, s, rows: Grid) -> VerifyResult:
    _prepare(ProblemParams("dts", (n, k, s)), rows)
    viol, checked = [], 0
    diffs: Counter = Counter()
    for i, row in enumerate(rows):
        checked += 1
        if row[0] != 0:
            viol.append(Violation("row-start", f"row {i}", f"first entry {row[0]} != 0"))
        if any(row[j] >= row[j + 1] for j in range(k)):
            viol.append(Violation("row-increasing", f"row {i}",
                                  "entries not strictly increasing"))
            continue
        for j, l in itertools.combinations(range(k + 1), 2):
            diffs[row[l] - row[j]] += 1
    for diff, count in sorted(diffs.items()):
        checked += 1
        if count > 1:
            viol.append(Violation("distinct-differences", f"difference {diff}",
                                  f"occurs {count} times"))
    return _result(viol, checked)


def verify_pmd(v, k, b, rows: Grid) -> VerifyResult:
    _prepare(ProblemParams("pmd", (v, k, b)), rows)
    viol, checked = [], 0
    apart: Counter = Counter()
    for i, blk in enumerate(rows):
        checked += 1
        if len(set(blk)) != k:
            viol.append(Violation("block-distinct", f"block {i}",
                                  "repeated element in block"))
            continue
        for t in range(1, k):
            for pos in range(k):
                apart[(blk[pos], blk[(pos + t) % k], t)] += 1
    for x, y in itertools.permutations(range(v), 2):
        for t in range(1, k):
            checked += 1
            c = apart[(x, y, t)]
            if c != 1:
                viol.append(Violation("apart-once", f"pair ({x},{y}) t={t}",
                                      f"{t}-apart in {c} blocks, want 1"))
    return _result(viol, checked)


def verify_ca3(N, k, v, rows: Grid) -> VerifyResult:
    _prepare(ProblemParams("ca3", (N, k, v)), rows)
    viol, checked = [], 0
    for cols in itertools.combinations(range(k), 3):
        checked += 1
        seen = set()
        for row in rows:
            seen.add((row[cols[0]], row[cols[1]], row[cols[2]]))
        if len(seen) != v ** 3:
            missing = next(t for t in itertools.product(range(v), repeat=3)
                           if t not in seen)
            viol.append(Violation("triple-coverage", f"cols {cols}",
                                  f"missing symbol triple {missing} "
                                  f"({v ** 3 - len(seen)} total)"))
    return _result(viol, checked)


def verify_capset(n, s, rows: Grid) -> VerifyResult:
    _prepare(ProblemParams("capset", (n, s)), rows)
    pts = [tuple(r) for r in rows]
    if len(set(pts)) != len(pts):
        raise ShapeError("cap set points must be distinct")
    viol, checked = [], 0
    index = {pt: i for i, pt in enumerate(pts)}
    for i, j in itertools.combinations(range(len(pts)), 2):
        checked += 1
        third = tuple((-pts[i][t] - pts[j][t]) % 3 for t in range(n))
        kk = index.get(third)
        if kk is not None and kk != i and kk != j:
            if kk > j:  # report each triple once
                viol.append(Violation("no-zero-sum", f"points {i},{j},{kk}",
                                      "three distinct points sum to zero"))
    return _result(viol, checked)


def deletion_set(word: tuple[int, ...], s: int) -> frozenset[tuple[int, ...]]:
    n = len(word)
    out = set()
    for pos in itertools.combinations(range(n), s):
        drop = set(pos)
        out.add(tuple(b for t, b in enumerate(word) if t not in drop))
    return frozenset(out)


def verify_dc(n, s, m, rows: Grid) -> VerifyResult:
    _prepare(ProblemParams("dc", (n, s, m)), rows)
    viol, checked = [], 0
    words = [tuple(r) for r in rows]
    checked += 1
    if len(set(words)) != len(words):
        viol.append(Violation("distinct-words", "code", "repeated codeword"))
    dsets = [deletion_set(w, s) for w in words]
    for i, j in itertools.combinations(range(m), 2):
        checked += 1
        common = dsets[i] & dsets[j]
        if common:
            viol.append(Violation("deletion-disjoint", f"words {i},{j}",
                                  f"{len(common)} shared subsequences"))
    return _result(viol, checked)


# ---------------------------------------------------------------------------
# Dispatcher

def verify(params: ProblemParams, rows: Grid) -> VerifyResult:
    validate_params(params)
    key, vals = params.type_key, params.values
    if key == "bibd":
        return verify_bibd(*vals, rows)
    if key == "sbibd":
        return verify_bibd(*vals, rows, supersimple=True)
    if key == "pa":
        return verify_pa(*vals, rows)
    if key == "oa":
        return verify_oa(*vals, rows)
    if key == "symmw":
        return verify_weighing(*vals, "symmetric", rows)
    if key == "skeww":
        return verify_weighing(*vals, "skew", rows)
    if key == "brd":
        return verify_brd(*vals, rows)
    if key == "btd":
        return verify_btd(*vals, rows)
    if key == "costas":
        return verify_costas(*vals, rows)
    if key == "covering":
        return verify_covering(*vals, rows)
    if key == "dts":
        return verify_dts(*vals, rows)
    if key == "pmd":
        return verify_pmd(*vals, rows)
    if key == "epa":
        return verify_epa(*vals, rows)
    if key == "fr":
        return verify_florentine(*vals, rows)
    if key == "cfr":
        return verify_florentine(*vals, rows, circular=True)
    if key == "tuscan2":
        return verify_tuscan2(*vals, rows)
    if key == "cs":
        return verify_cs(*vals, rows)
    if key == "jcc":
        return verify_jcc(*vals, rows)
    if key == "unsqs":
        return verify_unsqs(*vals, rows)
    if key == "ca3":
        return verify_ca3(*vals, rows)
    if key == "capset":
        return verify_capset(*vals, rows)
    if key == "dc":
        return verify_dc(*vals, rows)
    raise AssertionError(f"no verifier bound for {key}")
