"""Experiment orchestration: sweeps, closure and elimination suites, audits.

Every run in here is a pure function of its seed arguments.  Per-trial seeds
derive from ``(base_seed, n, trial_index)`` through numpy's SeedSequence, so
any single trial can be reproduced in isolation and trials can execute in
any order or process without changing the merged results.
"""
from __future__ import annotations

import csv
import enum
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import analysis
from .core.params import ProtocolParams, make_params
from .core.scheduler import SchedulerStream
from .core.sim import run
from .core.state import AgentState, Configuration, random_configuration
from .orientation import (
    OrientationTrial,
    generate_two_hop_coloring,
    oriented_configuration,
    run_orientation,
)
from .transition import interact_inplace

DEFAULT_MULTIPLIER = 1e4
CLOSURE_STEPS = 100_000


class Protocol(enum.Enum):
    PPL = "ppl"
    POR = "por"
    LOTTERY = "lottery"


@dataclass(frozen=True)
class ExperimentSpec:
    protocol: Protocol
    n_values: tuple[int, ...]
    trials_per_n: int
    base_seed: int
    max_steps_multiplier: float = DEFAULT_MULTIPLIER
    kappa_max_override: int | None = None
    instrument: frozenset[str] = frozenset()
    workers: int = 1

    def __post_init__(self) -> None:
        if self.trials_per_n < 1:
            raise ValueError("trials_per_n must be >= 1")
        if self.max_steps_multiplier <= 0:
            raise ValueError("max_steps_multiplier must be > 0")


@dataclass(frozen=True)
class TrialRecord:
    protocol: str
    n: int
    psi: int | None
    kappa_max: int | None
    seed: int
    steps: int
    converged: bool
    final_leader_count: int | None
    violations: int


def trial_seed(base_seed: int, n: int, trial_index: int) -> int:
    """Stable per-trial seed; two related streams hang off it (seed, seed+1)."""
    ss = np.random.SeedSequence([base_seed, n, trial_index])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def step_cutoff(n: int, multiplier: float) -> int:
    return math.ceil(multiplier * n * n * math.log2(n))


# --------------------------------------------------------------------------
# convergence sweep
# --------------------------------------------------------------------------

def _ppl_trial(
    n: int,
    seed: int,
    multiplier: float,
    kappa_override: int | None,
    instrument: frozenset[str],
) -> TrialRecord:
    params = make_params(n, kappa_override)
    config = random_configuration(params, seed)
    cutoff = step_cutoff(n, multiplier)
    violations = 0
    if "range" in instrument:
        final, steps, stopped, violations = _run_range_checked(
            config, seed + 1, cutoff
        )
    else:
        scheduler = SchedulerStream(n, seed + 1)
        final, steps, stopped = run(config, scheduler, cutoff, analysis.in_S_PL)
    return TrialRecord(
        protocol=Protocol.PPL.value,
        n=n,
        psi=params.psi,
        kappa_max=params.kappa_max,
        seed=seed,
        steps=steps,
        converged=stopped,
        final_leader_count=analysis.leader_count(final),
        violations=violations,
    )


def _run_range_checked(config: Configuration, sched_seed: int, cutoff: int):
    """Slow run variant validating both touched agents after every step."""
    work = config.copy()
    p = work.params
    n = p.n
    scheduler = SchedulerStream(n, sched_seed)
    agents = work.agents
    violations = 0
    done = 0
    if analysis.in_S_PL(work):
        return work, 0, True, 0
    while done < cutoff:
        block = min(n, cutoff - done)
        for i in scheduler.draw(block):
            j = (i + 1) % n
            interact_inplace(agents[i], agents[j], p.psi, p.two_psi, p.kappa_max)
            try:
                agents[i].validate(p)
                agents[j].validate(p)
            except ValueError:
                violations += 1
        done += block
        if analysis.in_S_PL(work):
            return work, done, True, violations
    return work, cutoff, False, violations


def _por_trial(n: int, seed: int, multiplier: float) -> TrialRecord:
    coloring = generate_two_hop_coloring(n, seed)
    trial = run_orientation(coloring, seed + 1, step_cutoff(n, multiplier))
    return TrialRecord(
        protocol=Protocol.POR.value,
        n=n,
        psi=None,
        kappa_max=None,
        seed=seed,
        steps=trial.steps_to_oriented
        if trial.steps_to_oriented is not None
        else step_cutoff(n, multiplier),
        converged=trial.converged,
        final_leader_count=None,
        violations=trial.monotone_violations,
    )


def _orientation_task(args) -> OrientationTrial:
    n, seed, cutoff, post_steps = args
    coloring = generate_two_hop_coloring(n, seed)
    return run_orientation(coloring, seed + 1, cutoff, post_steps=post_steps)


def run_orientation_sweep(
    n_values: tuple[int, ...],
    trials: int,
    seed: int,
    multiplier: float = DEFAULT_MULTIPLIER,
    post_steps: int = 0,
    workers: int = 1,
) -> list[OrientationTrial]:
    """Instrumented orientation trials over several ring sizes."""
    tasks = [
        (n, trial_seed(seed, n, t), step_cutoff(n, multiplier), post_steps)
        for n in n_values
        for t in range(trials)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_orientation_task, tasks, chunksize=1))
    return [_orientation_task(t) for t in tasks]


def _sweep_task(args) -> TrialRecord:
    protocol, n, seed, multiplier, kappa_override, instrument = args
    if protocol is Protocol.PPL:
        return _ppl_trial(n, seed, multiplier, kappa_override, instrument)
    return _por_trial(n, seed, multiplier)


def run_convergence_sweep(spec: ExperimentSpec) -> list[TrialRecord]:
    """Run every (n, trial) cell of the spec; deterministic in the spec."""
    if spec.protocol is Protocol.LOTTERY:
        raise ValueError(
            "the sweep measures ring convergence; use the lottery module "
            "or the 'lottery' CLI command for lottery statistics"
        )
    tasks = [
        (
            spec.protocol,
            n,
            trial_seed(spec.base_seed, n, t),
            spec.max_steps_multiplier,
            spec.kappa_max_override,
            spec.instrument,
        )
        for n in spec.n_values
        for t in range(spec.trials_per_n)
    ]
    if spec.workers > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            records = list(pool.map(_sweep_task, tasks, chunksize=1))
    else:
        records = [_sweep_task(t) for t in tasks]
    return records


# --------------------------------------------------------------------------
# closure suite
# --------------------------------------------------------------------------

@dataclass
class ClosureReport:
    protocol: str
    n: int
    trials: int
    steps_per_trial: int
    violations: list[str] = field(default_factory=list)
    rejected_trials: list[int] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def _ppl_closure_task(args) -> tuple[int, list[str], bool]:
    n, seed, steps, snapshot = args
    if snapshot is not None:
        config = Configuration.from_snapshot(snapshot)
    else:
        config = analysis.construct_S_PL(make_params(n), seed)
    if not analysis.in_S_PL(config):
        return seed, [], True  # rejected by the precheck, not a violation
    violations: list[str] = []
    p = config.params
    work = config.copy()
    agents = work.agents
    leader_home = next(i for i, a in enumerate(agents) if a.leader)
    scheduler = SchedulerStream(p.n, seed + 1)
    done = 0
    while done < steps and len(violations) < 10:
        for i in scheduler.draw(p.n):
            interact_inplace(
                agents[i], agents[(i + 1) % p.n], p.psi, p.two_psi, p.kappa_max
            )
        done += p.n
        if not analysis.in_S_PL(work):
            violations.append(f"seed={seed} step={done}: left the safe set")
        if not agents[leader_home].leader:
            violations.append(f"seed={seed} step={done}: leader moved or died")
    return seed, violations, False


def run_closure_suite(
    protocol: Protocol,
    n: int,
    trials: int,
    seed: int,
    steps: int = CLOSURE_STEPS,
    initial_configs: list[Configuration] | None = None,
    workers: int = 1,
) -> ClosureReport:
    """Start from safe configurations and verify safety never degrades.

    PPL trials assert membership in the safe set and a fixed leader identity
    at every check interval; POR trials assert the direction vector never
    changes after orientation.  Supplied ``initial_configs`` (PPL only) that
    fail the safe-set precheck are reported as rejected, not as violations.
    """
    report = ClosureReport(
        protocol=protocol.value, n=n, trials=trials, steps_per_trial=steps
    )
    if protocol is Protocol.PPL:
        tasks = []
        for t in range(trials):
            tseed = trial_seed(seed, n, t)
            snapshot = None
            if initial_configs is not None:
                snapshot = initial_configs[t % len(initial_configs)].to_snapshot()
            tasks.append((n, tseed, steps, snapshot))
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(_ppl_closure_task, tasks, chunksize=1))
        else:
            results = [_ppl_closure_task(t) for t in tasks]
        for tseed, violations, rejected in results:
            report.violations.extend(violations)
            if rejected:
                report.rejected_trials.append(tseed)
    elif protocol is Protocol.POR:
        for t in range(trials):
            tseed = trial_seed(seed, n, t)
            config = oriented_configuration(n, tseed)
            trial = run_orientation(config, tseed + 1, max_steps=0, post_steps=steps)
            if trial.post_dir_changes:
                report.violations.append(
                    f"seed={tseed}: {trial.post_dir_changes} direction changes "
                    "after orientation"
                )
            if trial.monotone_violations:
                report.violations.append(
                    f"seed={tseed}: segment count increased"
                )
    else:
        raise ValueError("closure suite supports PPL and POR only")
    return report


# --------------------------------------------------------------------------
# elimination suite
# --------------------------------------------------------------------------

@dataclass
class EliminationReport:
    n: int
    initial_leaders: int
    trials: int
    steps: list[int] = field(default_factory=list)
    converged: list[bool] = field(default_factory=list)
    zero_leader_events: int = 0

    @property
    def passed(self) -> bool:
        return self.zero_leader_events == 0 and all(self.converged)

    @property
    def median_steps(self) -> float:
        return float(np.median(self.steps)) if self.steps else math.nan


def multi_leader_configuration(
    params: ProtocolParams, leaders: int, seed: int
) -> Configuration:
    """Evenly spaced shielded leaders, consistent distance chain, no bullets
    or signals; every live-bullet condition is vacuous, so the configuration
    sits in the peaceful-bullet set by construction."""
    n = params.n
    if not 1 <= leaders <= n:
        raise ValueError(f"need 1 <= leaders <= {n}, got {leaders}")
    rng = np.random.Generator(np.random.PCG64(seed))
    positions = {(j * n) // leaders for j in range(leaders)}
    agents = [
        AgentState(
            leader=1 if i in positions else 0,
            b=int(rng.integers(0, 2)),
            shield=1 if i in positions else 0,
        )
        for i in range(n)
    ]
    first = min(positions)
    d = 0
    for i in range(first, first + n):
        idx = i % n
        d = 0 if agents[idx].leader else (d + 1) % params.two_psi
        agents[idx].dist = d
    config = Configuration(params, agents)
    # mark the segment sitting immediately left of each leader
    for seg in analysis.segments(config):
        if agents[(seg.start + seg.length) % n].leader:
            for j in range(seg.length):
                agents[(seg.start + j) % n].last = 1
    return config


def _elimination_task(args) -> tuple[int, bool, int]:
    n, leaders, tseed, cutoff = args
    params = make_params(n)
    config = multi_leader_configuration(params, leaders, tseed)
    scheduler = SchedulerStream(n, tseed + 1)
    work = config.copy()
    agents = work.agents
    zero_events = 0
    done = 0
    converged = False
    while done < cutoff:
        count = sum(a.leader for a in agents)
        if count == 0:
            zero_events += 1
            break
        if count == 1:
            converged = True
            break
        for i in scheduler.draw(n):
            interact_inplace(
                agents[i], agents[(i + 1) % n], params.psi, params.two_psi,
                params.kappa_max,
            )
        done += n
    else:
        count = sum(a.leader for a in agents)
        if count == 1:
            converged = True
        elif count == 0:
            zero_events += 1
    return done, converged, zero_events


def run_elimination_suite(
    n: int,
    initial_leaders: int,
    trials: int,
    seed: int,
    multiplier: float = DEFAULT_MULTIPLIER,
    workers: int = 1,
) -> EliminationReport:
    """From peaceful multi-leader starts, run until exactly one leader.

    The leader count is asserted at every check interval; observing zero
    leaders is recorded as a hard failure (it would contradict closure of
    the peaceful-bullet set)."""
    if not 1 <= initial_leaders <= n:
        raise ValueError("need 1 <= initial_leaders <= n")
    report = EliminationReport(n=n, initial_leaders=initial_leaders, trials=trials)
    cutoff = step_cutoff(n, multiplier)
    tasks = [
        (n, initial_leaders, trial_seed(seed, n, t), cutoff) for t in range(trials)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_elimination_task, tasks, chunksize=1))
    else:
        results = [_elimination_task(t) for t in tasks]
    for done, converged, zero_events in results:
        report.steps.append(done)
        report.converged.append(converged)
        report.zero_leader_events += zero_events
    return report


# --------------------------------------------------------------------------
# instrumented audits
# --------------------------------------------------------------------------

@dataclass
class TokenAuditReport:
    steps: int
    births: int
    moves_bound: int
    max_moves_seen: int
    violations: int
    invalid_moves: int

    @property
    def passed(self) -> bool:
        return self.violations == 0 and self.invalid_moves == 0


def run_token_audit(config: Configuration, seed: int, steps: int) -> TokenAuditReport:
    """Track every token born at a border and count its moves.

    Requires a start whose distance chain stays settled (a safe-set start
    qualifies); each tracked token must stay on its trajectory and must not
    move more than ``2*psi**2 - 2*psi + 1`` times before disappearing.
    """
    p = config.params
    n, psi, two_psi = p.n, p.psi, p.two_psi
    bound = 2 * psi * psi - 2 * psi + 1
    work = config.copy()
    agents = work.agents
    scheduler = SchedulerStream(n, seed)
    tracked: dict[tuple[str, int], int] = {}
    births = 0
    max_moves = 0
    violations = 0
    invalid_moves = 0
    trace: list = []
    for _ in range(steps):
        i = scheduler.next_index()
        j = (i + 1) % n
        trace.clear()
        interact_inplace(agents[i], agents[j], psi, two_psi, p.kappa_max, trace)
        for ev in trace:
            kind = ev[0]
            if kind == "tgen":
                tracked[(ev[1], i)] = 0
                births += 1
            elif kind == "tdel":
                tracked.pop((ev[1], i if ev[2] == "l" else j), None)
            elif kind == "tmove":
                color = ev[1]
                src, dst = (i, j) if ev[2] == "lr" else (j, i)
                moves = tracked.pop((color, src), None)
                if moves is None:
                    continue  # token predates the audit
                moves += 1
                if moves > bound:
                    violations += 1
                if moves > max_moves:
                    max_moves = moves
                tracked[(color, dst)] = moves
                holder = agents[dst]
                token = holder.token_b if color == "B" else holder.token_w
                if token is not None and not analysis._valid(
                    holder.dist, token.offset, 0 if color == "B" else psi, psi, two_psi
                ):
                    invalid_moves += 1
    return TokenAuditReport(
        steps=steps,
        births=births,
        moves_bound=bound,
        max_moves_seen=max_moves,
        violations=violations,
        invalid_moves=invalid_moves,
    )


@dataclass
class PeacefulAuditReport:
    steps: int
    bullets_tracked: int
    violations: int

    @property
    def passed(self) -> bool:
        return self.violations == 0


def run_peaceful_audit(
    config: Configuration, seed: int, steps: int
) -> PeacefulAuditReport:
    """Check that live bullets, once peaceful, stay peaceful until they die."""
    p = config.params
    n = p.n
    work = config.copy()
    agents = work.agents
    scheduler = SchedulerStream(n, seed)
    live: dict[int, bool] = {}  # position -> has been seen peaceful
    for pos, a in enumerate(agents):
        if a.bullet == 2:
            live[pos] = analysis.is_peaceful(work, pos)
    tracked_total = len(live)
    violations = 0
    trace: list = []
    for _ in range(steps):
        i = scheduler.next_index()
        j = (i + 1) % n
        trace.clear()
        interact_inplace(agents[i], agents[j], p.psi, p.two_psi, p.kappa_max, trace)
        moved: list[tuple[int, int]] = []
        for ev in trace:
            kind = ev[0]
            if kind == "bfire":
                pos = i if ev[1] == "l" else j
                if ev[2] == 2:
                    live[pos] = False
                    tracked_total += 1
                else:
                    live.pop(pos, None)
            elif kind == "bdel":
                live.pop(i if ev[1] == "l" else j, None)
            elif kind == "bhit":
                live.pop(i, None)
            elif kind == "bmove":
                if i in live:
                    moved.append((i, j))
        for src, dst in moved:
            live[dst] = live.pop(src)
        for pos in list(live):
            peaceful_now = analysis.is_peaceful(work, pos)
            if live[pos] and not peaceful_now:
                violations += 1
            live[pos] = live[pos] or peaceful_now
    return PeacefulAuditReport(
        steps=steps, bullets_tracked=tracked_total, violations=violations
    )


# --------------------------------------------------------------------------
# CSV / snapshot I/O
# --------------------------------------------------------------------------

CSV_COLUMNS = (
    "protocol",
    "n",
    "psi",
    "kappa_max",
    "seed",
    "steps",
    "converged",
    "final_leader_count",
    "violations",
)


def export_csv(records: list[TrialRecord], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for r in records:
            writer.writerow(
                [
                    r.protocol,
                    r.n,
                    "" if r.psi is None else r.psi,
                    "" if r.kappa_max is None else r.kappa_max,
                    r.seed,
                    r.steps,
                    int(r.converged),
                    "" if r.final_leader_count is None else r.final_leader_count,
                    r.violations,
                ]
            )


class ConfigFormatError(ValueError):
    """A snapshot file failed to parse or validate."""


def dump_config(config: Configuration, path: str | Path) -> None:
    with open(path, "w") as fh:
        json.dump(config.to_snapshot(), fh, indent=1)
        fh.write("\n")


def load_config(path: str | Path) -> Configuration:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigFormatError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}")
    try:
        return Configuration.from_snapshot(data)
    except ValueError as exc:
        raise ConfigFormatError(f"{path}: {exc}") from None
