import random

import pytest

from combdesign.adapters import make_adapter
from combdesign.catalog import ProblemParams
from combdesign.solvers import (STRATEGIES, Budget, Hyperparams, SolverError,
                                algorithm_x, dfs_backtrack, solve, sqs_blocks,
                                two_phase_brd, two_phase_unsqs)
from combdesign.verify import verify


def _check_solved(res, params):
    assert res.solved, (params.format(), res.status, res.cost)
    assert verify(params, res.solution).valid
    assert res.cost == 0


# every metaheuristic must crack an easy instance quickly and deterministically
EASY = {
    "anneal:const": "bibd 7 7 3 3 1",
    "anneal:cool": "bibd 7 7 3 3 1",
    "anneal:reset": "pa 3 3 3",
    "tabu": "bibd 7 7 3 3 1",
    "genetic": "bibd 7 7 3 3 1",
    "grasp": "covering 2 6 3 6",
    "rg": "bibd 7 7 3 3 1",
    "two-phase-brd": "brd 3 6 4 2 2",
    "two-phase-unsqs": "unsqs 8 28",
}


@pytest.mark.parametrize("strategy", sorted(EASY))
def test_each_strategy_solves_easy_instance(strategy):
    params = ProblemParams.parse(EASY[strategy])
    res = solve(params, strategy, Budget(seconds=10.0), seed=1)
    _check_solved(res, params)


def test_registry_matches_easy_table():
    assert set(STRATEGIES) == set(EASY) | {"dfs"}


def test_seed_determinism():
    params = ProblemParams.parse("bibd 6 10 5 3 2")
    budget = Budget(evaluations=20_000)
    a = solve(params, "tabu", budget, seed=7)
    b = solve(params, "tabu", budget, seed=7)
    assert (a.status, a.cost, a.solution, a.evaluations) == \
           (b.status, b.cost, b.solution, b.evaluations)
    c = solve(params, "anneal:cool", budget, seed=7)
    d = solve(params, "anneal:cool", budget, seed=7)
    assert (c.status, c.cost, c.solution) == (d.status, d.cost, d.solution)


def test_budget_monotonicity_fixed_seed():
    # the trajectory is deterministic, so a longer evaluation budget can
    # only see states the shorter run saw, plus more
    params = ProblemParams.parse("bibd 7 7 3 3 1")
    costs = []
    for evals in (50, 500, 5_000, 50_000):
        res = solve(params, "anneal:cool", Budget(evaluations=evals), seed=3)
        costs.append(0 if res.solved else res.cost)
    assert costs == sorted(costs, reverse=True) or costs[-1] == 0


def test_solver_never_returns_invalid_solution():
    for strategy, text in EASY.items():
        params = ProblemParams.parse(text)
        res = solve(params, strategy, Budget(evaluations=2_000), seed=0)
        if res.solved:
            assert verify(params, res.solution).valid


def test_timeout_status_on_hopeless_budget():
    params = ProblemParams.parse("bibd 9 12 4 3 1")
    res = solve(params, "tabu", Budget(evaluations=10), seed=0)
    assert res.status == "timeout"
    assert res.solution is None
    assert res.evaluations <= 10 + 64


# -- exhaustive search -------------------------------------------------------

def test_dfs_costas_orders_agree():
    for n in range(1, 7):
        asc = dfs_backtrack(ProblemParams.parse(f"costas {n}"), None,
                            Budget(seconds=30), order="ascending",
                            enumerate_all=True)
        desc = dfs_backtrack(ProblemParams.parse(f"costas {n}"), None,
                             Budget(seconds=30), order="descending",
                             enumerate_all=True)
        assert asc.status == desc.status
        assert asc.status == ("solved" if asc.solutions else "exhausted")
        assert sorted(map(tuple, (s[0] for s in asc.solutions))) == \
               sorted(map(tuple, (s[0] for s in desc.solutions)))


def test_dfs_exhausts_unsatisfiable_weighing():
    # no weighing matrix W(2,2) exists; DFS must prove it
    res = dfs_backtrack(ProblemParams.parse("skeww 2 2"), None,
                        Budget(seconds=30))
    assert res.status == "exhausted"
    assert res.solution is None


def test_dfs_times_out_gracefully():
    res = dfs_backtrack(ProblemParams.parse("costas 18"), None,
                        Budget(seconds=0.2))
    assert res.status == "timeout"


# -- exact cover --------------------------------------------------------------

def test_algorithm_x_identity_and_unsat():
    assert algorithm_x([[1, 0], [0, 1]]) == [0, 1]
    assert algorithm_x([[1, 1], [1, 1]], seed=0) in ([0], [1])
    assert algorithm_x([[1, 0], [1, 0]]) is None


def test_sqs_blocks():
    blocks = sqs_blocks(8, seed=0)
    assert len(blocks) == 14  # 8*7*6 / 24
    triples = set()
    for b in blocks:
        assert len(set(b)) == 4
        for t in __import__("itertools").combinations(sorted(b), 3):
            assert t not in triples
            triples.add(t)
    from math import comb
    assert len(triples) == comb(8, 3)


# -- two-phase solvers ---------------------------------------------------------

def test_two_phase_brd_solves():
    params = ProblemParams.parse("brd 3 6 4 2 2")
    res = two_phase_brd(params, None, Budget(seconds=20), seed=2)
    _check_solved(res, params)


def test_two_phase_unsqs_solves():
    params = ProblemParams.parse("unsqs 8 28")
    res = two_phase_unsqs(params, None, Budget(seconds=30), seed=2)
    _check_solved(res, params)


def test_two_phase_rejects_infeasible():
    with pytest.raises(Exception):
        two_phase_brd(ProblemParams.parse("brd 3 6 4 2 3"), None,
                      Budget(seconds=1), seed=0)


def test_hyperparams_validation():
    from combdesign.solvers import TABU_RANGES, HyperRange
    h = Hyperparams(TABU_RANGES, tenure=20)
    assert h["tenure"] == 20
    with pytest.raises(SolverError):
        Hyperparams(TABU_RANGES, bogus=3)
    with pytest.raises(SolverError):
        HyperRange("x", 5, 1, 3)  # lo > hi
    with pytest.raises(SolverError):
        Budget()


def test_hyperparameters_change_behaviour():
    params = ProblemParams.parse("bibd 6 10 5 3 2")
    from combdesign.solvers import ANNEAL_RANGES
    cold = solve(params, "anneal:const", Budget(evaluations=3_000),
                 h=Hyperparams(ANNEAL_RANGES, temperature=0.0), seed=5)
    hot = solve(params, "anneal:const", Budget(evaluations=3_000),
                h=Hyperparams(ANNEAL_RANGES, temperature=20.0), seed=5)
    # a boiling-hot walk is a random walk: it must not match cold descent
    assert (cold.cost, cold.solution) != (hot.cost, hot.solution)
