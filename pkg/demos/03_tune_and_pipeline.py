"""Hyperparameter tuning and the candidate-program pipeline.

The tuner runs a shrinking grid ladder: many settings at a short time
limit, the survivors again at a longer one.  The pipeline compiles
externally generated C programs, tunes them on dev instances, and lets
the finalists attack open instances; here a canned mock transcript
stands in for the text-generation service, so the run is deterministic.
"""

import os
import tempfile
from pathlib import Path

from combdesign.catalog import ProblemParams, register_builtin_types
from combdesign.harness import PipelineConfig, RunLedger, run_pipeline
from combdesign.solvers import TABU_RANGES
from combdesign.tuner import LadderConfig, hypertune, strategy_runner

register_builtin_types()
ROOT = Path(__file__).resolve().parent.parent

# 1. Tune the built-in tabu strategy on one dev instance with a desk-size
#    ladder (production ladders are 1000 x 0.5s -> 100 x 5s -> 10 x 50s).
ladder = LadderConfig(sizes=(8, 3, 1), limits=(0.2, 0.4, 0.8))
out = hypertune(strategy_runner("tabu", TABU_RANGES, seed=0), TABU_RANGES,
                [ProblemParams.parse("bibd 7 7 3 3 1")], ladder, max_points=8)
print("tuned settings:", {k: round(v, 3) for k, v in out.best.items()})
print("score (solves, -residual, -ttfs):", out.best_score)

# 2. Run the full pipeline against the bundled mock transcript.
workdir = tempfile.mkdtemp(prefix="demo-pipeline-")
os.chdir(workdir)
cfg = PipelineConfig(
    problem="bibd",
    dev_instances=(ProblemParams.parse("bibd 7 7 3 3 1"),),
    open_instances=(ProblemParams.parse("bibd 7 7 3 3 1"),),
    transcript=str(ROOT / "tests" / "fixtures" / "transcripts"
                   / "bibd_pipeline.txt"),
    reps=1, n_per_rep=2, rounds=1, fanout=1,
    ladder_sizes=(4, 2), ladder_limits=(0.5, 1.0),
    final_dev_seconds=5.0, open_seconds=5.0,
    workdir="work", ledger_path="work/ledger.txt",
)
report = run_pipeline(cfg)
for name, detail in report.stages:
    print(f"stage {name}: {detail}")
for inst, cand, path in report.dev_solved + report.open_solved:
    print(f"solved {inst} by {cand} -> {path}")

# 3. The ledger records every attempt; solution files must still verify.
ledger = RunLedger("work/ledger.txt")
print("ledger records:", len(ledger.records()),
      "| replay verifies:", ledger.replay_verifies())
