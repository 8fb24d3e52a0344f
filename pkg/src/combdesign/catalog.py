"""Registry of design-problem types: parameter schemas, solution shapes,
value domains, and the development / solved-instance lists.

Each type's shape rule gives the canonical (rows, cols) of a solution grid;
cols == 0 marks a ragged type (rows of unequal length), and ``rows_flexible``
marks types where a solution may carry more rows than the minimum (cap sets).

Necessary arithmetic conditions on parameters (e.g. vr == bk for block
designs) are checked here so infeasible parameter tuples are rejected before
any search or verification runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable


class CatalogError(ValueError):
    pass


class UnknownTypeError(CatalogError):
    pass


class ParameterError(CatalogError):
    pass


@dataclass(frozen=True)
class ProblemType:
    key: str
    param_names: tuple[str, ...]
    shape_rule: Callable[..., tuple[int, int]]
    value_domain: Callable[..., range | tuple[int, ...]]
    description: str
    check_params: Callable[..., list[str]] = field(default=lambda *v: [])
    rows_flexible: bool = False

    def shape(self, values) -> tuple[int, int]:
        return self.shape_rule(*values)

    def domain(self, values):
        return self.value_domain(*values)


@dataclass(frozen=True)
class ProblemParams:
    type_key: str
    values: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))

    def format(self) -> str:
        return " ".join([self.type_key] + [str(v) for v in self.values])

    @staticmethod
    def parse(text: str) -> "ProblemParams":
        toks = text.split()
        if not toks:
            raise ParameterError("empty parameter string")
        return ProblemParams(toks[0], tuple(int(t) for t in toks[1:]))


@dataclass(frozen=True)
class InstanceRecord:
    params: ProblemParams
    status: str  # dev | open | solved-by-paper
    provenance: str = ""

    STATUSES = ("dev", "open", "solved-by-paper")

    def __post_init__(self):
        if self.status not in self.STATUSES:
            raise CatalogError(f"bad status {self.status!r}")


PM = (-1, 0, 1)


def _sym(values):  # {0..v-1} domains
    v = values
    return range(v)


# ---------------------------------------------------------------------------
# Parameter checks.  Each returns a list of human-readable problems; an empty
# list means the tuple passes every necessary arithmetic condition we test.

def _check_bibd(v, b, r, k, L):
    errs = []
    if v < 2 or k < 2 or k > v or b < 1 or r < 1:
        errs.append("need v >= 2, 2 <= k <= v, b >= 1, r >= 1")
        return errs
    if v * r != b * k:
        errs.append(f"vr != bk ({v * r} != {b * k})")
    if L * (v - 1) != r * (k - 1):
        errs.append(f"L(v-1) != r(k-1) ({L * (v - 1)} != {r * (k - 1)})")
    return errs


def _check_pa(N, k, v):
    if N < 1 or k < 1 or v < 1:
        return ["need N, k, v >= 1"]
    return []


def _check_oa(N, k, s, lam):
    errs = []
    if N < 1 or k < 2 or s < 1:
        errs.append("need N >= 1, k >= 2, s >= 1")
        return errs
    if N % (s * s) != 0:
        errs.append(f"index N/s^2 = {N}/{s * s} is not an integer")
    elif lam != N // (s * s):
        errs.append(f"lambda != N/s^2 ({lam} != {N // (s * s)})")
    return errs


def _check_weighing(n, w):
    if n < 1 or w < 1 or w > n:
        return ["need 1 <= w <= n"]
    return []


def _check_brd(v, b, r, k, L):
    errs = _check_bibd(v, b, r, k, L)
    if L % 2 != 0:
        errs.append(f"L must be even (got {L})")
    return errs


def _check_btd(V, B, p1, p2, R, K, L):
    errs = []
    if V < 2 or B < 1 or K < 1 or K > V or p1 < 0 or p2 < 0:
        errs.append("need V >= 2, B >= 1, 1 <= K <= V, p1, p2 >= 0")
        return errs
    if R != p1 + 2 * p2:
        errs.append(f"R != p1 + 2*p2 ({R} != {p1 + 2 * p2})")
    if V * R != B * K:
        errs.append(f"VR != BK ({V * R} != {B * K})")
    if R * K - (p1 + 4 * p2) != L * (V - 1):
        errs.append("RK - (p1 + 4 p2) != L(V-1)")
    return errs


def _check_costas(n):
    return [] if n >= 1 else ["need n >= 1"]


def _check_covering(t, v, k, n):
    errs = []
    if not (0 < t < k <= v) or n < 1:
        errs.append("need 0 < t < k <= v and n >= 1")
    return errs


def _check_dts(n, k, s):
    return [] if n >= 1 and k >= 1 and s >= 1 else ["need n, k, s >= 1"]


def _check_pmd(v, k, b):
    errs = []
    if v < 2 or k < 2 or k > v:
        errs.append("need 2 <= k <= v")
        return errs
    if v * (v - 1) % k != 0:
        errs.append(f"v(v-1)/k = {v * (v - 1)}/{k} is not an integer")
    elif b != v * (v - 1) // k:
        errs.append(f"b != v(v-1)/k ({b} != {v * (v - 1) // k})")
    return errs


def _check_epa(n, d, m):
    errs = []
    if n < 1 or m < 1 or d < 0 or d > n:
        errs.append("need n, m >= 1 and 0 <= d <= n")
    elif d == 1:
        errs.append("two permutations cannot differ in exactly 1 position")
    return errs


def _check_fr(r, n):
    return [] if 1 <= r and n >= 1 else ["need r, n >= 1"]


def _check_tuscan2(n):
    return [] if n >= 1 else ["need n >= 1"]


def _check_cs(n, R, L):
    return [] if n >= 1 and R >= 0 and L >= 1 else ["need n >= 1, R >= 0, L >= 1"]


def _check_jcc(N, k, C):
    errs = []
    if N < 1 or k < 1 or C < 1:
        errs.append("need N, k, C >= 1")
        return errs
    if 2 * k > N:
        errs.append("need k <= N/2")
    return errs


def _check_unsqs(v, p):
    errs = []
    if v < 4 or p < 1:
        errs.append("need v >= 4, p >= 1")
        return errs
    total_blocks = v * (v - 1) * (v - 2)
    if total_blocks % 24 != 0:
        errs.append(f"block count v(v-1)(v-2)/24 = {total_blocks}/24 is not an integer")
    if total_blocks % (12 * p) != 0:
        errs.append(f"per-pair count v(v-1)(v-2)/(12p) is not an integer for p={p}")
    return errs


def _check_ca3(N, k, v):
    errs = []
    if N < 1 or k < 3 or v < 1:
        errs.append("need N >= 1, k >= 3, v >= 1")
    elif N < v ** 3:
        errs.append(f"need N >= v^3 rows to cover all triples ({N} < {v ** 3})")
    return errs


def _check_capset(n, s):
    return [] if n >= 1 and s >= 1 else ["need n, s >= 1"]


def _check_dc(n, s, m):
    return [] if 1 <= s < n and m >= 1 else ["need 1 <= s < n, m >= 1"]


# ---------------------------------------------------------------------------
# Definitions (used verbatim as generation-prompt text by the harness).

_DESCRIPTIONS = {
    "bibd": (
        "A balanced incomplete block design BIBD(v,b,r,k,L) arranges v elements "
        "into b blocks of k distinct elements so that each element lies in exactly "
        "r blocks and each pair of distinct elements lies in exactly L blocks. "
        "Represent it as a v by b incidence matrix over {0,1}: row sums are r, "
        "column sums are k, and the inner product of any two distinct rows is L."
    ),
    "sbibd": (
        "A supersimple BIBD(v,b,r,k,L) is a BIBD (v by b incidence matrix over "
        "{0,1} with row sums r, column sums k, and pairwise row inner products L) "
        "with the extra condition that any two distinct blocks (columns) share at "
        "most two common elements."
    ),
    "pa": (
        "A packing array PA(N,k,v) is an N by k array over {0,...,v-1} such that "
        "for every pair of distinct columns, each ordered pair of symbols occurs "
        "in at most one row."
    ),
    "oa": (
        "An orthogonal array OA(N,k,s) of index lambda = N/s^2 is a k by N array "
        "over {0,...,s-1} such that for every pair of distinct rows, each ordered "
        "pair of symbols occurs in exactly lambda of the N columns."
    ),
    "symmw": (
        "A symmetric weighing matrix W(n,w) is an n by n matrix over {-1,0,1} "
        "with W W^T = wI and W = W^T: each row has w nonzero entries and any two "
        "distinct rows are orthogonal."
    ),
    "skeww": (
        "A skew weighing matrix W(n,w) is an n by n matrix over {-1,0,1} with "
        "W W^T = wI and W^T = -W (so the diagonal is zero): each row has w "
        "nonzero entries and any two distinct rows are orthogonal."
    ),
    "brd": (
        "A Bhaskar Rao design BRD(v,b,r,k,L) is a v by b array over {-1,0,1} "
        "where every row has r nonzero entries, every column has k nonzero "
        "entries, and for any two distinct rows the entrywise products contain "
        "-1 exactly L/2 times and +1 exactly L/2 times."
    ),
    "btd": (
        "A balanced ternary design BTD(V,B;p1,p2,R;K,L) is a V by B matrix over "
        "{0,1,2} (multiplicities of elements in blocks) where every row contains "
        "the value 1 exactly p1 times and the value 2 exactly p2 times (so row "
        "sums are R = p1 + 2 p2), every column sums to K, and for any two "
        "distinct rows x and y, sum_b m[x][b]*m[y][b] = L."
    ),
    "costas": (
        "A Costas array of order n is a permutation CA of {0,...,n-1} such that "
        "the displacement vectors (j-i, CA[j]-CA[i]) are pairwise distinct over "
        "all i < j."
    ),
    "covering": (
        "A covering design Cov(t,v,k,n) is an n by v incidence matrix over {0,1} "
        "with exactly k ones per row (blocks of size k over v elements, t < k) "
        "such that every t-subset of the v elements is contained in at least one "
        "block."
    ),
    "dts": (
        "An (n,k) difference triangle set with scope s consists of n rows "
        "0 = a[i][0] < a[i][1] < ... < a[i][k] <= s such that all differences "
        "a[i][l] - a[i][j] (l != j), taken over all rows, are distinct and "
        "nonzero."
    ),
    "pmd": (
        "A perfect Mendelsohn design (v,k)-PMD is a b by k array (b = v(v-1)/k "
        "blocks) of distinct elements from {0,...,v-1} such that for every "
        "t in 1..k-1, each ordered pair of distinct elements (x,y) has y exactly "
        "t cyclic steps after x in exactly one block."
    ),
    "epa": (
        "An equidistant permutation array EPA(n,d,m) is an m by n array whose "
        "rows are permutations of {0,...,n-1} such that every two distinct rows "
        "differ in exactly d positions."
    ),
    "fr": (
        "A Florentine rectangle FR(r,n) is an r by n array whose rows are "
        "permutations of {0,...,n-1} such that for any distinct symbols a, b and "
        "any m in 1..n-1, at most one row has b exactly m positions to the right "
        "of a."
    ),
    "cfr": (
        "A circular Florentine rectangle CFR(r,n) is an r by n array whose rows "
        "are permutations of {0,...,n-1} such that for any distinct symbols a, b "
        "and any m in 1..n-1, at most one row has b exactly m positions to the "
        "right of a, with positions taken circularly (mod n)."
    ),
    "tuscan2": (
        "A Tuscan-2 square T2(n) is an n by n array whose rows are permutations "
        "of {0,...,n-1} such that every ordered pair of distinct symbols is "
        "adjacent (b directly right of a) in exactly one row, and at distance "
        "two (one symbol between) in at most one row."
    ),
    "cs": (
        "An (n,R) covering sequence of length L is a cyclic binary sequence "
        "x[0..L-1] such that every n-bit binary word is within Hamming distance "
        "R of some cyclic window x[j], x[(j+1) mod L], ..., x[(j+n-1) mod L]."
    ),
    "jcc": (
        "A Johnson clique cover JCC(N,k,C) is a set of C maximal cliques of the "
        "Johnson graph J(N,k) whose union contains every k-subset of {1,...,N}. "
        "A type-0 clique lists k-1 distinct elements S and covers every vertex "
        "S + {x} for x outside S; a type-1 clique lists k+1 distinct elements S "
        "and covers every vertex S - {x} for x in S.  Each clique line starts "
        "with its type digit (0 or 1)."
    ),
    "unsqs": (
        "A uniform nested Steiner quadruple system UNSQS(v,p) is a Steiner "
        "quadruple system on {0,...,v-1} (v(v-1)(v-2)/24 blocks of 4 distinct "
        "elements, every 3-subset in exactly one block) where each block is "
        "split into two ND-pairs (the first two and last two elements listed), "
        "exactly p distinct ND-pairs occur, and each occurs the same number "
        "v(v-1)(v-2)/(12p) of times."
    ),
    "ca3": (
        "A strength-3 covering array CA3(N,k,v) is an N by k array over "
        "{0,...,v-1} such that for every triple of distinct columns, every "
        "ordered triple of symbols occurs in at least one row."
    ),
    "capset": (
        "A cap set CS(n,s) is a set of at least s distinct points of Z_3^n "
        "(rows of n values in {0,1,2}) containing no three distinct points "
        "x, y, z with x + y + z = 0 componentwise mod 3."
    ),
    "dc": (
        "A deletion code DC(n,s,m) is a set of m distinct binary words of "
        "length n such that for any two distinct words x and y, the sets of "
        "(n-s)-bit subsequences obtained by deleting s bits are disjoint."
    ),
}


def _types() -> list[ProblemType]:
    T = ProblemType
    return [
        T("bibd", ("v", "b", "r", "k", "L"),
          lambda v, b, r, k, L: (v, b), lambda *p: (0, 1),
          _DESCRIPTIONS["bibd"], _check_bibd),
        T("sbibd", ("v", "b", "r", "k", "L"),
          lambda v, b, r, k, L: (v, b), lambda *p: (0, 1),
          _DESCRIPTIONS["sbibd"], _check_bibd),
        T("pa", ("N", "k", "v"),
          lambda N, k, v: (N, k), lambda N, k, v: range(v),
          _DESCRIPTIONS["pa"], _check_pa),
        T("oa", ("N", "k", "s", "lambda"),
          lambda N, k, s, lam: (k, N), lambda N, k, s, lam: range(s),
          _DESCRIPTIONS["oa"], _check_oa),
        T("symmw", ("n", "w"),
          lambda n, w: (n, n), lambda n, w: PM,
          _DESCRIPTIONS["symmw"], _check_weighing),
        T("skeww", ("n", "w"),
          lambda n, w: (n, n), lambda n, w: PM,
          _DESCRIPTIONS["skeww"], _check_weighing),
        T("brd", ("v", "b", "r", "k", "L"),
          lambda v, b, r, k, L: (v, b), lambda *p: PM,
          _DESCRIPTIONS["brd"], _check_brd),
        T("btd", ("V", "B", "p1", "p2", "R", "K", "L"),
          lambda V, B, p1, p2, R, K, L: (V, B), lambda *p: (0, 1, 2),
          _DESCRIPTIONS["btd"], _check_btd),
        T("costas", ("n",),
          lambda n: (1, n), lambda n: range(n),
          _DESCRIPTIONS["costas"], _check_costas),
        T("covering", ("t", "v", "k", "n"),
          lambda t, v, k, n: (n, v), lambda *p: (0, 1),
          _DESCRIPTIONS["covering"], _check_covering),
        T("dts", ("n", "k", "s"),
          lambda n, k, s: (n, k + 1), lambda n, k, s: range(s + 1),
          _DESCRIPTIONS["dts"], _check_dts),
        T("pmd", ("v", "k", "b"),
          lambda v, k, b: (v * (v - 1) // k, k), lambda v, k, b: range(v),
          _DESCRIPTIONS["pmd"], _check_pmd),
        T("epa", ("n", "d", "m"),
          lambda n, d, m: (m, n), lambda n, d, m: range(n),
          _DESCRIPTIONS["epa"], _check_epa),
        T("fr", ("r", "n"),
          lambda r, n: (r, n), lambda r, n: range(n),
          _DESCRIPTIONS["fr"], _check_fr),
        T("cfr", ("r", "n"),
          lambda r, n: (r, n), lambda r, n: range(n),
          _DESCRIPTIONS["cfr"], _check_fr),
        T("tuscan2", ("n",),
          lambda n: (n, n), lambda n: range(n),
          _DESCRIPTIONS["tuscan2"], _check_tuscan2),
        T("cs", ("n", "R", "L"),
          lambda n, R, L: (1, L), lambda *p: (0, 1),
          _DESCRIPTIONS["cs"], _check_cs),
        T("jcc", ("N", "k", "C"),
          lambda N, k, C: (C, 0), lambda N, k, C: range(N + 1),
          _DESCRIPTIONS["jcc"], _check_jcc),
        T("unsqs", ("v", "p"),
          lambda v, p: (v * (v - 1) * (v - 2) // 24, 4), lambda v, p: range(v),
          _DESCRIPTIONS["unsqs"], _check_unsqs),
        T("ca3", ("N", "k", "v"),
          lambda N, k, v: (N, k), lambda N, k, v: range(v),
          _DESCRIPTIONS["ca3"], _check_ca3),
        T("capset", ("n", "s"),
          lambda n, s: (s, n), lambda n, s: (0, 1, 2),
          _DESCRIPTIONS["capset"], _check_capset, rows_flexible=True),
        T("dc", ("n", "s", "m"),
          lambda n, s, m: (m, n), lambda *p: (0, 1),
          _DESCRIPTIONS["dc"], _check_dc),
    ]


_REGISTRY: dict[str, ProblemType] = {t.key: t for t in _types()}


def register_builtin_types() -> list[ProblemType]:
    return list(_REGISTRY.values())


def all_types() -> list[str]:
    return sorted(_REGISTRY)


def get_type(key: str) -> ProblemType:
    try:
        return _REGISTRY[key]
    except KeyError:
        raise UnknownTypeError(f"unknown problem type {key!r}") from None


def validate_params(params: ProblemParams) -> None:
    """Raise ParameterError if the tuple is malformed or arithmetically infeasible."""
    ptype = get_type(params.type_key)
    if len(params.values) != len(ptype.param_names):
        raise ParameterError(
            f"{params.type_key} expects {len(ptype.param_names)} parameters "
            f"({', '.join(ptype.param_names)}), got {len(params.values)}")
    if any(v < 0 for v in params.values):
        raise ParameterError("parameters must be non-negative")
    errs = ptype.check_params(*params.values)
    if errs:
        raise ParameterError(f"{params.format()}: " + "; ".join(errs))


# ---------------------------------------------------------------------------
# Instance lists.
#
# solved-by-paper: tuples reported solved (Table 1 of the source work).
# dev: small instances known to exist; each was confirmed with the brute-force
# oracles in combdesign.oracle (see tests/test_catalog.py).

_SOLVED = {
    "pa": [(24, 7, 6), (18, 8, 6), (28, 10, 8), (24, 11, 8),
           (32, 11, 9), (28, 12, 9), (21, 14, 9), (19, 15, 9)],
    "symmw": [(19, 9), (21, 9), (22, 16)],
    "skeww": [(18, 9)],
    "brd": [(15, 42, 14, 5, 4), (15, 126, 42, 5, 12), (16, 48, 15, 5, 4)],
    "btd": [(17, 17, 8, 2, 12, 12, 8), (14, 21, 6, 3, 12, 8, 6),
            (12, 16, 4, 4, 12, 9, 8), (16, 16, 7, 3, 13, 13, 10),
            (12, 21, 4, 5, 14, 8, 8), (16, 22, 9, 1, 11, 8, 5),
            (21, 21, 12, 1, 14, 14, 9)],
    "epa": [(12, 8, 21)],
    "fr": [(7, 20), (7, 24), (7, 25), (7, 26), (7, 27)],
    "cs": [(9, 1, 71), (10, 1, 138), (11, 1, 224), (11, 2, 64), (12, 2, 127),
           (12, 3, 36), (13, 2, 276), (13, 3, 61), (14, 3, 122), (15, 3, 230),
           (16, 3, 426), (17, 2, 3938), (17, 3, 795), (18, 1, 52390),
           (18, 2, 7605), (18, 3, 1481), (19, 1, 104498), (19, 2, 14797),
           (19, 3, 2734), (20, 1, 207000), (20, 2, 28901), (20, 3, 5102)],
    "jcc": [(13, 4, 105), (13, 6, 248), (14, 4, 138), (14, 6, 410), (15, 4, 177)],
    "unsqs": [(14, 91)],
    "dc": [(12, 2, 36), (13, 2, 55), (14, 2, 85), (15, 2, 132), (16, 2, 208),
           (13, 3, 16), (14, 3, 21), (15, 3, 29), (16, 3, 42)],
}

# open: instances with no known solution at the time of writing; these are
# the targets the search pipeline's final stage attacks.
_OPEN = {
    "costas": [(32,), (33,)],
    "capset": [(7, 289)],
    "cs": [(21, 3, 9435)],
}

_DEV = {
    "bibd": [(7, 7, 3, 3, 1), (6, 10, 5, 3, 2), (9, 12, 4, 3, 1)],
    "sbibd": [(7, 7, 3, 3, 1), (4, 4, 3, 3, 2)],
    "pa": [(3, 3, 3), (4, 3, 2), (6, 3, 3)],
    "oa": [(4, 3, 2, 1), (9, 4, 3, 1), (8, 4, 2, 2)],
    "symmw": [(1, 1), (2, 1), (4, 4)],
    "skeww": [(2, 1), (4, 1)],
    "brd": [(3, 6, 4, 2, 2), (4, 12, 6, 2, 2)],
    "btd": [(3, 6, 2, 2, 6, 3, 4), (5, 10, 2, 2, 6, 3, 2)],
    "costas": [(4,), (5,), (6,)],
    "covering": [(2, 4, 3, 3), (2, 6, 3, 6), (1, 5, 2, 3)],
    "dts": [(1, 2, 3), (2, 2, 7)],
    "pmd": [(3, 2, 3), (4, 3, 4)],
    "epa": [(4, 3, 2), (5, 4, 3)],
    "fr": [(1, 3), (2, 3), (3, 4)],
    "cfr": [(1, 4), (2, 5)],
    "tuscan2": [(1,), (2,), (4,)],
    "cs": [(3, 1, 4), (4, 1, 8), (5, 1, 14)],
    "jcc": [(5, 2, 5), (6, 2, 4)],
    "unsqs": [(8, 28)],
    "ca3": [(8, 3, 2), (8, 4, 2)],
    "capset": [(1, 2), (2, 4), (3, 9)],
    "dc": [(4, 1, 2), (6, 2, 2), (7, 2, 4)],
}


def builtin_instances(type_key: str) -> list[InstanceRecord]:
    get_type(type_key)
    out = []
    for tup in _DEV.get(type_key, []):
        out.append(InstanceRecord(ProblemParams(type_key, tup), "dev",
                                  "curated small instance, oracle-confirmed"))
    for tup in _SOLVED.get(type_key, []):
        out.append(InstanceRecord(ProblemParams(type_key, tup), "solved-by-paper",
                                  "reported solved open instance"))
    for tup in _OPEN.get(type_key, []):
        out.append(InstanceRecord(ProblemParams(type_key, tup), "open",
                                  "no solution known"))
    return out


def all_instances() -> list[InstanceRecord]:
    return [rec for key in _REGISTRY for rec in builtin_instances(key)]


# ---------------------------------------------------------------------------
# Line-oriented instance catalog files: "<type_key> <status> <p1> <p2> ..."

def format_instances(records: list[InstanceRecord]) -> str:
    lines = [f"{r.params.type_key} {r.status} " +
             " ".join(str(v) for v in r.params.values) for r in records]
    return "\n".join(lines) + "\n"


def parse_instances(text: str) -> list[InstanceRecord]:
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        if len(toks) < 3:
            raise CatalogError(f"line {lineno}: expected '<type> <status> <params...>'")
        params = ProblemParams(toks[0], tuple(int(t) for t in toks[2:]))
        validate_params(params)
        out.append(InstanceRecord(params, toks[1]))
    return out


def load_instances(path) -> list[InstanceRecord]:
    with open(path, encoding="utf-8") as fh:
        return parse_instances(fh.read())


def save_instances(path, records: list[InstanceRecord]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_instances(records))
