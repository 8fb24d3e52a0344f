import os
from pathlib import Path

import pytest

from combdesign.catalog import ProblemParams
from combdesign.harness import (Attempt, HarnessError, MockClient,
                                PipelineConfig, RunLedger, ToolchainConfig,
                                compile_candidate, generate_candidates,
                                last_complete_grid, much_better,
                                parse_candidate, run_candidate, run_pipeline)
from combdesign.solvers import HyperRange

FIXTURES = Path(__file__).parent / "fixtures"
TRANSCRIPT = FIXTURES / "transcripts" / "bibd_small.txt"
PIPE_TRANSCRIPT = FIXTURES / "transcripts" / "bibd_pipeline.txt"
CSRC = FIXTURES / "c"

pytestmark = pytest.mark.skipif(not ToolchainConfig().available(),
                                reason="no C compiler")


def _compile(path, tmp_path, ranges=()):
    cand = parse_candidate("```c\n" + Path(path).read_text() + "```\n" +
                           "".join(f"RANGE {r.name} {r.lo} {r.hi} {r.default}\n"
                                   for r in ranges) +
                           ("RANGE dummy 0 1 0\n" if not ranges else ""),
                           Path(path).stem, "fixture")
    return compile_candidate(cand, ToolchainConfig(workdir=str(tmp_path)))


# -- mock client & candidate parsing -----------------------------------------

def test_mock_client_replays_blocks_in_order():
    client = MockClient("a\n-----\nb\n-----\nc\n")
    assert [client.send([]) for _ in range(3)] == ["a", "b", "c"]
    with pytest.raises(HarnessError):
        client.send([])


def test_parse_candidate_extracts_last_fence_and_ranges():
    text = ("notes\n```c\nint old;\n```\nmore\n"
            "RANGE steps 1 50 10 int\nRANGE temp 0.1 2.0 0.5\n"
            "```c\nint main(void){return 0;}\n```\n")
    cand = parse_candidate(text, "x", "t")
    assert cand.rejected is None
    assert "int main" in cand.source and "int old" not in cand.source
    assert [r.name for r in cand.ranges] == ["steps", "temp"]
    assert cand.ranges[0].integer and not cand.ranges[1].integer


def test_parse_candidate_rejects_missing_parts():
    assert parse_candidate("no code here", "x", "t").rejected
    assert parse_candidate("```c\nint main;\n```", "x", "t").rejected  # no RANGE


def test_generation_from_transcript():
    client = MockClient.from_file(TRANSCRIPT)
    ledger_sink = []

    class L:
        def append(self, **kw):
            ledger_sink.append(kw)

    cands = generate_candidates(client, "definition", reps=1, n_per_rep=2,
                                ledger=L())
    assert len(cands) == 2
    usable = [c for c in cands if c.rejected is None]
    assert len(usable) == 1
    assert "Fano" in usable[0].source
    rejected = [c for c in cands if c.rejected]
    assert rejected and "RANGE" in rejected[0].rejected


# -- compile & run -------------------------------------------------------------

def test_compile_and_run_solver(tmp_path):
    cand = _compile(CSRC / "fano.c", tmp_path)
    assert cand.usable, cand.diagnostic
    att = run_candidate(cand.executable, ProblemParams.parse("bibd 7 7 3 3 1"),
                        {}, 5.0, ranges=cand.ranges)
    assert att.outcome == "solved"
    assert att.wall < 5.0


def test_compile_failure_keeps_diagnostic(tmp_path):
    cand = _compile(CSRC / "broken.c", tmp_path)
    assert cand.rejected == "compile failure"
    assert cand.diagnostic


def test_runaway_process_is_killed(tmp_path):
    cand = _compile(CSRC / "loop.c", tmp_path)
    assert cand.usable
    att = run_candidate(cand.executable, ProblemParams.parse("bibd 7 7 3 3 1"),
                        {}, 0.5, ranges=cand.ranges)
    assert att.outcome == "timeout"
    assert att.wall < 2.0


def test_invalid_output_judged(tmp_path):
    cand = _compile(CSRC / "fano.c", tmp_path)
    # complement parameters: right shape, wrong block size and pairing
    att = run_candidate(cand.executable, ProblemParams.parse("bibd 7 7 4 4 2"),
                        {}, 5.0, ranges=cand.ranges)
    assert att.outcome == "invalid"
    assert att.cost > 0


def test_last_complete_grid_picks_final_chunk():
    text = "progress 1 2\njunk x\n\n0 1\n1 0\n\ncost=3\n\n1 1\n1 1\n"
    assert last_complete_grid(text) == [[1, 1], [1, 1]]
    assert last_complete_grid("nothing numeric\n") is None


def test_much_better_rule():
    assert much_better((2, 0, -1.0), (1, 0, -1.0))        # more solves
    assert not much_better((1, 0, -0.9), (1, 0, -1.0))    # only 10% faster
    assert much_better((1, 0, -0.7), (1, 0, -1.0))        # 30% faster
    assert not much_better((1, -1.0, -0.1), (1, 0.0, -1.0))  # worse residual


# -- ledger ---------------------------------------------------------------------

def test_ledger_roundtrip_and_comparable(tmp_path):
    led = RunLedger(tmp_path / "ledger.txt")
    led.append(stage="compile", outcome="ok", detail="two words")
    led.append(stage="run", outcome="solved", wall="1.234")
    recs = led.records()
    assert recs[0]["detail"] == "two words"
    comp = led.comparable()
    assert all("ts" not in r and "wall" not in r for r in comp)


# -- full pipeline ----------------------------------------------------------------

def _pipeline_config(tmp_path):
    cfg = PipelineConfig(
        problem="bibd",
        dev_instances=(ProblemParams.parse("bibd 7 7 3 3 1"),),
        open_instances=(ProblemParams.parse("bibd 7 7 3 3 1"),),
        transcript=str(PIPE_TRANSCRIPT),
        reps=1, n_per_rep=2, rounds=1, fanout=1,
        ladder_sizes=(4, 2), ladder_limits=(0.5, 1.0),
        final_dev_seconds=5.0, open_seconds=5.0,
        workdir=str(tmp_path / "work"),
        ledger_path=str(tmp_path / "work" / "ledger.txt"),
    )
    return cfg


def test_pipeline_end_to_end(tmp_path):
    report = run_pipeline(_pipeline_config(tmp_path))
    assert not report.empty, report.reason
    names = [s[0] for s in report.stages]
    assert names == ["generate", "compile", "tune", "top5", "optimize",
                     "top2"]
    assert report.dev_solved and report.open_solved
    led = RunLedger(tmp_path / "work" / "ledger.txt")
    assert led.replay_verifies()
    outcomes = {r.get("outcome") for r in led.records()}
    assert "solved" in outcomes and "complete" in outcomes


def test_pipeline_ablations(tmp_path):
    base = [s[0] for s in
            run_pipeline(_pipeline_config(tmp_path / "b")).stages]

    cfg = _pipeline_config(tmp_path / "r")
    cfg.reduce_runtime = True
    reduced = run_pipeline(cfg)
    assert [s[0] for s in reduced.stages] == base  # same stages, less time

    cfg = _pipeline_config(tmp_path / "t")
    cfg.no_hyper_tuning = True
    rep = run_pipeline(cfg)
    assert ("tune", "defaults") in rep.stages

    cfg = _pipeline_config(tmp_path / "o")
    cfg.no_optimization = True
    rep = run_pipeline(cfg)
    assert "optimize" not in [s[0] for s in rep.stages]

    cfg = _pipeline_config(tmp_path / "f")
    cfg.no_final_dev_test = True
    rep = run_pipeline(cfg)
    assert not rep.dev_solved
    assert rep.open_solved  # open stage still runs


def test_pipeline_config_file(tmp_path):
    text = (
        "problem = bibd\n"
        "dev_instances = bibd 7 7 3 3 1; bibd 6 10 5 3 2\n"
        "open_instances = bibd 9 12 4 3 1\n"
        "transcript = t.txt\n"
        "reps = 2\n"
        "ladder_sizes = 10, 4\n"
        "ladder_limits = 0.5, 1.5\n"
        "reduce_runtime = true\n"
    )
    path = tmp_path / "cfg.txt"
    path.write_text(text)
    cfg = PipelineConfig.load(path)
    assert cfg.problem == "bibd"
    assert len(cfg.dev_instances) == 2
    assert cfg.reps == 2
    assert cfg.ladder_sizes == (10, 4)
    assert cfg.reduce_runtime
    bad = tmp_path / "bad.txt"
    bad.write_text("unknown_key = 1\n")
    with pytest.raises(HarnessError):
        PipelineConfig.load(bad)
