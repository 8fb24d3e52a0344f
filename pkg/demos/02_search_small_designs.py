"""Search for small designs with several strategies.

Every solver returns a SolveResult whose solution, when present, has
already been re-checked by the exact verifier; a cost-0 state that the
verifier rejects raises instead of returning.
"""

from combdesign.catalog import ProblemParams, register_builtin_types
from combdesign.solvers import (Budget, Hyperparams, TABU_RANGES,
                                dfs_backtrack, solve, two_phase_brd)

register_builtin_types()

# 1. One easy instance, three metaheuristics.
params = ProblemParams.parse("bibd 7 7 3 3 1")
for strategy in ("tabu", "anneal:cool", "genetic"):
    res = solve(params, strategy, Budget(seconds=5.0), seed=0)
    print(f"{strategy:12s} {res.status:8s} cost={res.cost} "
          f"evals={res.evaluations} wall={res.wall:.3f}s")

# 2. Hyperparameters are plain name->value maps validated against the
#    strategy's declared ranges.
h = Hyperparams(TABU_RANGES, tenure=25, width=40)
res = solve(params, "tabu", Budget(seconds=5.0), h=h, seed=1)
print(f"tabu(tenure=25) {res.status} in {res.wall:.3f}s")

# 3. Exhaustive backtracking enumerates complete spaces and proves
#    emptiness: both search orders must agree.
for n in (4, 5, 6):
    asc = dfs_backtrack(ProblemParams.parse(f"costas {n}"), None,
                        Budget(seconds=60), order="ascending",
                        enumerate_all=True)
    print(f"costas {n}: {len(asc.solutions)} arrays ({asc.status})")

# 4. Structured two-phase search: solve the unsigned incidence first,
#    then locally adjust the signs.
params = ProblemParams.parse("brd 3 6 4 2 2")
res = two_phase_brd(params, None, Budget(seconds=20), seed=0)
print(f"{params.format()}: {res.status}")
for row in res.solution:
    print("  " + " ".join(f"{x:2d}" for x in row))
