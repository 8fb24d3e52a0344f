"""Candidate-program evaluation pipeline.

Candidates are standalone C programs produced by a text-generation client
(a transcript-replaying mock in tests, an HTTP client in live use).  The
pipeline compiles them, tunes their declared settings on dev instances
through the grid ladder, keeps the top five, runs optimization rewrite
rounds, re-tests on dev, keeps the top two, and finally runs them on open
instances.  Every execution is recorded in an append-only run ledger whose
"solved" entries point at solution files that re-verify.

Candidate I/O contract: argv carries the instance parameters in catalog
order followed by the tunable settings in declared order; the program prints
the solution as whitespace-separated integers on stdout and may reprint it;
the last complete printout is scored.
"""

from __future__ import annotations

import json
import os
import re
import shlex
import subprocess
import tempfile
import time
import urllib.request
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .catalog import ProblemParams
from .grids import SolutionFormatError, format_grid, parse_grid
from .solvers import HyperRange
from .tuner import LadderConfig, hypertune
from .verify import ShapeError, verify


class HarnessError(ValueError):
    pass


SENTINEL = "-----"  # transcript block delimiter, alone on a line


def load_prompt(name: str) -> str:
    return (resources.files("combdesign") / "data" / "prompts"
            / f"{name}.txt").read_text()


# ---------------------------------------------------------------------------
# Generation clients

class GenerationClient:
    def send(self, conversation: list[tuple[str, str]]) -> str:
        raise NotImplementedError


class MockClient(GenerationClient):
    """Replays canned response blocks in order, byte for byte."""

    def __init__(self, transcript: str):
        blocks, cur = [], []
        for line in transcript.splitlines():
            if line.strip() == SENTINEL:
                blocks.append("\n".join(cur))
                cur = []
            else:
                cur.append(line)
        if any(l.strip() for l in cur):
            blocks.append("\n".join(cur))
        self.blocks = blocks
        self.cursor = 0

    @classmethod
    def from_file(cls, path):
        return cls(Path(path).read_text())

    def send(self, conversation):
        if self.cursor >= len(self.blocks):
            raise HarnessError("mock transcript exhausted")
        out = self.blocks[self.cursor]
        self.cursor += 1
        return out


class LiveClient(GenerationClient):
    """Chat-endpoint client selected purely by configuration; tests never
    exercise it."""

    def __init__(self, base_url: str, model: str, auth_env: str = "API_TOKEN",
                 timeout: float = 120.0):
        self.base_url = base_url.rstrip("/")
        self.model = model
        self.auth_env = auth_env
        self.timeout = timeout

    def send(self, conversation):
        token = os.environ.get(self.auth_env, "")
        body = json.dumps({
            "model": self.model,
            "messages": [{"role": role, "content": text}
                         for role, text in conversation],
        }).encode()
        req = urllib.request.Request(
            self.base_url + "/chat/completions", data=body,
            headers={"Content-Type": "application/json",
                     "Authorization": f"Bearer {token}"})
        with urllib.request.urlopen(req, timeout=self.timeout) as resp:
            payload = json.loads(resp.read())
        return payload["choices"][0]["message"]["content"]


# ---------------------------------------------------------------------------
# Candidates

@dataclass
class Candidate:
    id: str
    source: str = ""
    ranges: tuple[HyperRange, ...] = ()
    executable: str | None = None
    score_history: list = field(default_factory=list)  # (stage, score) in order
    provenance: str = ""
    rejected: str | None = None   # reason, when the response failed to parse
    diagnostic: str = ""          # compiler output on failure
    settings: dict = field(default_factory=dict)  # best tuned settings

    @property
    def usable(self):
        return self.rejected is None and self.executable is not None


_CODE_FENCE = re.compile(r"```(?:[cC])?\s*\n(.*?)```", re.DOTALL)
_RANGE_LINE = re.compile(
    r"^\s*RANGE\s+(\w+)\s+(-?[\d.]+)\s+(-?[\d.]+)\s+(-?[\d.]+)(\s+int)?\s*$",
    re.MULTILINE)


def parse_candidate(text: str, cand_id: str, provenance: str) -> Candidate:
    """Extract source and declared ranges; malformed text yields a rejected
    candidate rather than an error."""
    m = list(_CODE_FENCE.finditer(text))
    if not m:
        return Candidate(cand_id, rejected="no code block in response",
                         provenance=provenance)
    source = m[-1].group(1)
    ranges = []
    for name, lo, hi, default, integer in _RANGE_LINE.findall(text):
        try:
            ranges.append(HyperRange(name, float(lo), float(hi),
                                     float(default), integer=bool(integer)))
        except Exception as exc:
            return Candidate(cand_id, rejected=f"bad range line: {exc}",
                             provenance=provenance)
    if not ranges:
        return Candidate(cand_id, rejected="no RANGE declarations in response",
                         provenance=provenance)
    return Candidate(cand_id, source=source, ranges=tuple(ranges),
                     provenance=provenance)


def generate_candidates(client: GenerationClient, definition_text: str,
                        reps: int = 50, n_per_rep: int = 20,
                        retries: int = 2, ledger=None) -> list[Candidate]:
    """Algorithm-1-shaped conversation: one strategy-list prompt per rep,
    then a details prompt and an implementation prompt per strategy in the
    same conversation."""
    suggest = load_prompt("suggest")
    details = load_prompt("details")
    implement = load_prompt("implement")
    out: list[Candidate] = []
    for rep in range(reps):
        convo = [("user", suggest.format(n=n_per_rep,
                                         definition=definition_text))]
        listing = _send_with_retry(client, convo, retries, ledger,
                                   f"rep{rep}/list")
        if listing is None:
            continue
        convo.append(("assistant", listing))
        strategies = [l.strip() for l in listing.splitlines() if l.strip()]
        for si, strat in enumerate(strategies[:n_per_rep]):
            cand_id = f"rep{rep}-s{si}"
            convo.append(("user", details.format(strategy=strat)))
            detail = _send_with_retry(client, convo, retries, ledger,
                                      f"{cand_id}/details")
            if detail is None:
                convo.pop()
                continue
            convo.append(("assistant", detail))
            convo.append(("user", implement))
            impl = _send_with_retry(client, convo, retries, ledger,
                                    f"{cand_id}/implement")
            if impl is None:
                convo.pop()
                continue
            convo.append(("assistant", impl))
            cand = parse_candidate(impl, cand_id, provenance=f"rep{rep}:{strat}")
            if cand.rejected and ledger is not None:
                ledger.append(candidate=cand.id, outcome="rejected",
                              detail=cand.rejected)
            out.append(cand)
    return out


def _send_with_retry(client, convo, retries, ledger, label):
    for attempt in range(retries + 1):
        try:
            return client.send(convo)
        except Exception as exc:
            last = exc
    if ledger is not None:
        ledger.append(candidate=label, outcome="transport-failure",
                      detail=str(last))
    return None


# ---------------------------------------------------------------------------
# Compilation and sandboxed execution

@dataclass(frozen=True)
class ToolchainConfig:
    command: str = "cc"
    flags: tuple[str, ...] = ("-O2", "-lm")
    workdir: str | None = None

    def available(self):
        from shutil import which
        return which(self.command) is not None


def compile_candidate(candidate: Candidate,
                      toolchain: ToolchainConfig | None = None) -> Candidate:
    toolchain = toolchain or ToolchainConfig()
    if not toolchain.available():
        raise HarnessError(f"compiler {toolchain.command!r} not found")
    if candidate.rejected:
        return candidate
    workdir = toolchain.workdir or tempfile.mkdtemp(prefix="cand-")
    os.makedirs(workdir, exist_ok=True)
    src = Path(workdir) / f"{candidate.id}.c"
    exe = Path(workdir) / candidate.id
    src.write_text(candidate.source)
    proc = subprocess.run(
        [toolchain.command, str(src), "-o", str(exe), *toolchain.flags],
        capture_output=True, text=True)
    if proc.returncode != 0:
        candidate.diagnostic = proc.stderr[-4000:]
        candidate.rejected = "compile failure"
        return candidate
    candidate.executable = str(exe)
    return candidate


@dataclass
class Attempt:
    outcome: str                  # solved | invalid | timeout | crash
    solution: list | None = None
    cost: int = 0                 # violation count for invalid outcomes
    wall: float = 0.0
    excerpt: str = ""

    @property
    def solved(self):
        return self.outcome == "solved"

    @property
    def status(self):
        return self.outcome


_MEM_CAP = 8 * 1024 ** 3


def _limit_resources():
    import resource
    resource.setrlimit(resource.RLIMIT_AS, (_MEM_CAP, _MEM_CAP))


def last_complete_grid(text: str):
    """Last blank-line-separated chunk of stdout that parses as a grid."""
    chunks = re.split(r"\n\s*\n", text)
    for chunk in reversed(chunks):
        if not chunk.strip():
            continue
        try:
            grid = parse_grid(chunk)
        except SolutionFormatError:
            continue
        if grid:
            return grid
    return None


def run_candidate(executable: str, instance: ProblemParams,
                  settings: dict | None, time_limit: float,
                  ranges: tuple[HyperRange, ...] = ()) -> Attempt:
    """One sandboxed run: instance params then declared settings as argv,
    hard kill at the limit, verifier-checked output."""
    argv = [executable] + [str(v) for v in instance.values]
    settings = settings or {}
    for r in ranges:
        val = settings.get(r.name, r.default)
        argv.append(str(int(round(val)) if r.integer else val))
    t0 = time.monotonic()
    try:
        proc = subprocess.run(argv, capture_output=True, text=True,
                              timeout=time_limit, preexec_fn=_limit_resources)
    except subprocess.TimeoutExpired as exc:
        out = exc.stdout or b""
        text = out.decode(errors="replace") if isinstance(out, bytes) else out
        wall = time.monotonic() - t0
        att = _judge_output(instance, text, wall)
        if att.outcome == "solved":
            return att  # a printed-then-looping solution still counts
        return Attempt("timeout", wall=wall, excerpt=text[-500:])
    except OSError as exc:
        return Attempt("crash", wall=time.monotonic() - t0, excerpt=str(exc))
    wall = time.monotonic() - t0
    if proc.returncode != 0:
        return Attempt("crash", wall=wall,
                       excerpt=(proc.stderr or proc.stdout or "")[-500:])
    return _judge_output(instance, proc.stdout or "", wall)


def _judge_output(instance, stdout, wall):
    grid = last_complete_grid(stdout)
    if grid is None:
        return Attempt("invalid", wall=wall, cost=10 ** 6,
                       excerpt=stdout[-500:])
    try:
        res = verify(instance, grid)
    except ShapeError as exc:
        return Attempt("invalid", wall=wall, cost=10 ** 6, excerpt=str(exc))
    if res.valid:
        return Attempt("solved", solution=grid, wall=wall)
    return Attempt("invalid", solution=grid, cost=len(res.violations),
                   wall=wall, excerpt=str(res.violations[0]))


# ---------------------------------------------------------------------------
# Run ledger

class RunLedger:
    """Append-only key=value record log."""

    TIME_FIELDS = ("ts", "wall", "wall_ms", "ttfs")

    def __init__(self, path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)

    def append(self, **fields):
        fields.setdefault("ts", f"{time.time():.3f}")
        line = " ".join(f"{k}={shlex.quote(str(v))}" for k, v in fields.items())
        with open(self.path, "a") as fh:
            fh.write(line + "\n")

    def records(self):
        if not self.path.exists():
            return []
        out = []
        for line in self.path.read_text().splitlines():
            rec = {}
            for tok in shlex.split(line):
                k, _, v = tok.partition("=")
                rec[k] = v
            out.append(rec)
        return out

    def comparable(self):
        """Records with timing fields stripped, for determinism checks."""
        return [{k: v for k, v in rec.items() if k not in self.TIME_FIELDS}
                for rec in self.records()]

    def replay_verifies(self):
        """Every solved record's solution file must still verify."""
        from .grids import load_grid
        for rec in self.records():
            if rec.get("outcome") == "solved" and "solution" in rec:
                params = ProblemParams.parse(rec["instance"])
                grid = load_grid(rec["solution"])
                if not verify(params, grid).valid:
                    return False
        return True


# ---------------------------------------------------------------------------
# Optimization rounds

def much_better(new_score, old_score, ratio: float = 0.25) -> bool:
    """Strictly more solves, or equal solves at >= `ratio` faster
    time-to-first-solve."""
    if new_score[0] != old_score[0]:
        return new_score[0] > old_score[0]
    if new_score[1] != old_score[1]:
        return new_score[1] > old_score[1]
    old_t, new_t = -old_score[2], -new_score[2]
    return old_t > 0 and new_t <= (1.0 - ratio) * old_t


def optimize_candidates(client, top_candidates, tune_fn, rounds: int = 5,
                        fanout: int = 50, toolchain=None, ledger=None,
                        ratio: float = 0.25):
    """Rewrite prompts per candidate per round; a rewrite replaces its
    parent only when much better; stop early on a no-improvement round."""
    template = load_prompt("optimize")
    current = list(top_candidates)
    for rnd in range(rounds):
        improved = False
        for idx, cand in enumerate(current):
            if not cand.usable:
                continue
            base_score = cand.score_history[-1][1] if cand.score_history \
                else (-1, float("-inf"), float("-inf"))
            summary = f"score {base_score}"
            for fi in range(fanout):
                prompt = template.format(source=cand.source, summary=summary)
                text = _send_with_retry(client, [("user", prompt)], 1, ledger,
                                        f"{cand.id}/opt{rnd}.{fi}")
                if text is None:
                    continue
                new = parse_candidate(text, f"{cand.id}-r{rnd}f{fi}",
                                      provenance=f"optimize:{cand.id}")
                if new.rejected:
                    continue
                if new.source.strip() == cand.source.strip():
                    continue  # identical rewrite can never be much better
                new = compile_candidate(new, toolchain)
                if not new.usable:
                    continue
                new_score = tune_fn(new)
                new.score_history.append(("optimize", new_score))
                if much_better(new_score, base_score, ratio):
                    if ledger is not None:
                        ledger.append(candidate=new.id, outcome="replacement",
                                      replaces=cand.id)
                    current[idx] = new
                    cand = new
                    base_score = new_score
                    improved = True
        if not improved:
            break
    return current


# ---------------------------------------------------------------------------
# Pipeline

@dataclass
class PipelineConfig:
    problem: str = "bibd"
    dev_instances: tuple = ()
    open_instances: tuple = ()
    client_kind: str = "mock"
    transcript: str = ""
    live_url: str = ""
    live_model: str = ""
    reps: int = 50
    n_per_rep: int = 20
    rounds: int = 5
    fanout: int = 50
    ladder_scale: float = 1.0
    ladder_sizes: tuple = ()      # override stage sizes for desk runs
    ladder_limits: tuple = ()     # override stage limits for desk runs
    final_dev_seconds: float = 7200.0
    open_seconds: float = 172800.0
    subset_size: int = 0          # > 0: scaled-down run on a candidate subset
    subset_seed: int = 0
    toolchain_command: str = "cc"
    workdir: str = "pipeline-work"
    ledger_path: str = "pipeline-work/ledger.txt"
    # ablation switches
    reduce_runtime: bool = False
    no_final_dev_test: bool = False
    no_optimization: bool = False
    no_hyper_tuning: bool = False

    @classmethod
    def load(cls, path) -> "PipelineConfig":
        cfg = cls()
        for ln, raw in enumerate(Path(path).read_text().splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise HarnessError(f"{path}:{ln}: expected key=value")
            key, value = key.strip(), value.strip()
            if key in ("dev_instances", "open_instances"):
                insts = tuple(ProblemParams.parse(part.strip())
                              for part in value.split(";") if part.strip())
                setattr(cfg, key, insts)
            elif key == "ladder_sizes":
                cfg.ladder_sizes = tuple(int(x) for x in value.split(","))
            elif key == "ladder_limits":
                cfg.ladder_limits = tuple(float(x) for x in value.split(","))
            elif not hasattr(cfg, key):
                raise HarnessError(f"{path}:{ln}: unknown key {key!r}")
            else:
                cur = getattr(cfg, key)
                if isinstance(cur, bool):
                    setattr(cfg, key, value.lower() in ("1", "true", "yes"))
                elif isinstance(cur, int):
                    setattr(cfg, key, int(value))
                elif isinstance(cur, float):
                    setattr(cfg, key, float(value))
                else:
                    setattr(cfg, key, value)
        return cfg


@dataclass
class PipelineReport:
    stages: list = field(default_factory=list)     # (name, detail)
    survivors: list = field(default_factory=list)  # candidate ids still alive
    dev_solved: list = field(default_factory=list)
    open_solved: list = field(default_factory=list)
    empty: bool = False
    reason: str = ""


def _make_client(cfg: PipelineConfig):
    if cfg.client_kind == "mock":
        if not cfg.transcript:
            raise HarnessError("mock client needs transcript=")
        return MockClient.from_file(cfg.transcript)
    if cfg.client_kind == "live":
        return LiveClient(cfg.live_url, cfg.live_model)
    raise HarnessError(f"unknown client kind {cfg.client_kind!r}")


def run_pipeline(cfg: PipelineConfig, definition_text: str | None = None) -> PipelineReport:
    from .catalog import get_type
    report = PipelineReport()
    ledger = RunLedger(cfg.ledger_path)
    toolchain = ToolchainConfig(command=cfg.toolchain_command,
                                workdir=str(Path(cfg.workdir) / "build"))
    client = _make_client(cfg)
    definition = definition_text or get_type(cfg.problem).description
    outdir = Path(cfg.workdir) / "solutions"
    outdir.mkdir(parents=True, exist_ok=True)

    def empty(reason):
        report.empty = True
        report.reason = reason
        report.stages.append(("aborted", reason))
        ledger.append(stage="pipeline", outcome="empty", detail=reason)
        return report

    # 1. generation
    cands = generate_candidates(client, definition, reps=cfg.reps,
                                n_per_rep=cfg.n_per_rep, ledger=ledger)
    report.stages.append(("generate", f"{len(cands)} candidates"))
    if cfg.subset_size and len(cands) > cfg.subset_size:
        import random as _random
        cands = _random.Random(cfg.subset_seed).sample(cands, cfg.subset_size)
        report.stages.append(("subset", f"{len(cands)} candidates"))
    # 2. compile
    cands = [compile_candidate(c, toolchain) for c in cands]
    for c in cands:
        ledger.append(candidate=c.id, stage="compile",
                      outcome="ok" if c.usable else (c.rejected or "rejected"))
    usable = [c for c in cands if c.usable]
    report.stages.append(("compile", f"{len(usable)} usable"))
    if not usable:
        return empty("no candidate compiled")

    # 3. hyperparameter tuning on dev instances
    if cfg.ladder_sizes:
        ladder = LadderConfig(sizes=cfg.ladder_sizes, limits=cfg.ladder_limits,
                              scale=cfg.ladder_scale)
    else:
        ladder = LadderConfig(scale=cfg.ladder_scale)

    def tune_candidate(cand: Candidate):
        def runner(settings, instance, limit):
            return run_candidate(cand.executable, instance, settings, limit,
                                 ranges=cand.ranges)
        if cfg.no_hyper_tuning:
            limit = ladder.scaled_limits()[-1]
            atts = [runner({}, inst, limit) for inst in cfg.dev_instances]
            from .tuner import _score_attempts
            score = _score_attempts(atts)
            cand.settings = {r.name: r.default for r in cand.ranges}
            return score
        out = hypertune(runner, cand.ranges, cfg.dev_instances, ladder)
        cand.settings = out.best
        return out.best_score

    for c in usable:
        score = tune_candidate(c)
        c.score_history.append(("tune", score))
        # time-to-first-solve is wall-clock derived, so it lives in its
        # own timing field rather than the comparable score
        ledger.append(candidate=c.id, stage="tune", outcome="scored",
                      score=f"{score[0]}:{-score[1]:.4f}",
                      ttfs=f"{-score[2]:.3f}")
    usable.sort(key=lambda c: c.score_history[-1][1], reverse=True)
    report.stages.append(("tune",
                          "defaults" if cfg.no_hyper_tuning else "ladder"))

    # 4. truncate to top 5
    top = usable[:min(5, len(usable))]
    report.stages.append(("top5", ",".join(c.id for c in top)))
    if not top:
        return empty("no candidate survived tuning")

    # 5. optimization rounds
    if not cfg.no_optimization:
        top = optimize_candidates(client, top, tune_candidate,
                                  rounds=cfg.rounds, fanout=cfg.fanout,
                                  toolchain=toolchain, ledger=ledger)
        report.stages.append(("optimize", ",".join(c.id for c in top)))

    # 6. final dev test
    if not cfg.no_final_dev_test:
        budget = cfg.final_dev_seconds
        if cfg.reduce_runtime:
            budget /= 10.0
        for c in top:
            atts = [run_candidate(c.executable, inst, c.settings,
                                  budget / max(1, len(cfg.dev_instances)),
                                  ranges=c.ranges)
                    for inst in cfg.dev_instances]
            solved = sum(a.solved for a in atts)
            c.score_history.append(("final-dev", (solved,
                                                  -sum(0 if a.solved else 1 for a in atts),
                                                  -sum(a.wall for a in atts if a.solved))))
            for inst, att in zip(cfg.dev_instances, atts):
                _ledger_attempt(ledger, c, inst, att, outdir, "final-dev",
                                report.dev_solved)
        top.sort(key=lambda c: c.score_history[-1][1], reverse=True)

    # 7. truncate to top 2
    finalists = top[:min(2, len(top))]
    report.stages.append(("top2", ",".join(c.id for c in finalists)))
    if not finalists:
        return empty("no finalist")

    # 8. open runs
    budget = cfg.open_seconds
    if cfg.reduce_runtime:
        budget /= 10.0
    for c in finalists:
        for inst in cfg.open_instances:
            att = run_candidate(c.executable, inst, c.settings,
                                budget / max(1, len(cfg.open_instances)),
                                ranges=c.ranges)
            _ledger_attempt(ledger, c, inst, att, outdir, "open",
                            report.open_solved)
    report.survivors = [c.id for c in finalists]
    ledger.append(stage="pipeline", outcome="complete",
                  survivors=",".join(report.survivors))
    return report


def _ledger_attempt(ledger, cand, inst, att, outdir, stage, solved_sink):
    fields = dict(candidate=cand.id, stage=stage, instance=inst.format(),
                  settings=json.dumps(cand.settings, sort_keys=True),
                  outcome=att.outcome, wall=f"{att.wall:.3f}")
    if att.solved:
        name = f"{inst.format().replace(' ', '_')}-{cand.id}.txt"
        path = outdir / name
        path.write_text(f"# {inst.format()}\n" + format_grid(att.solution))
        fields["solution"] = str(path)
        solved_sink.append((inst.format(), cand.id, str(path)))
    ledger.append(**fields)
