"""Acceptance suite.

Each test exercises one acceptance criterion at its full stated size and
tolerance and prints a single PASS line on success (failures surface as
ordinary assertion errors).  The heavy criteria parallelize across two
worker processes; every result is still a pure function of the seeds.
"""
import math
import time

import numpy as np
import pytest

from ringleader import analysis, lottery
from ringleader.analysis import construct_S_PL, is_perfect
from ringleader.core.params import make_params
from ringleader.core.state import AgentState, Configuration
from ringleader.harness import (
    ExperimentSpec,
    Protocol,
    run_closure_suite,
    run_convergence_sweep,
    run_elimination_suite,
    run_orientation_sweep,
    run_token_audit,
)
from ringleader.transition import interact_chained, interact_ppl

from conftest import random_state_pairs

WORKERS = 2


def _report(line: str) -> None:
    print(f"\n[acceptance] {line}: PASS")


# --------------------------------------------------------------------------
# 1. leaderless consistent rings are never perfect (exhaustive oracle)
# --------------------------------------------------------------------------

def test_c1_leaderless_imperfection_exhaustive():
    t0 = time.perf_counter()
    params = make_params(4)  # psi=2
    cases = 0
    for phase in range(2):
        for bits in range(16):
            agents = [
                AgentState(dist=(i + phase) % 4, b=(bits >> i) & 1)
                for i in range(4)
            ]
            assert not is_perfect(Configuration(params, agents))
            cases += 1
    elapsed = time.perf_counter() - t0
    assert cases == 32
    assert elapsed < 1.0
    _report(f"C1 leaderless imperfection, {cases} cases in {elapsed:.3f}s")


# --------------------------------------------------------------------------
# 2. the safe set is closed and the leader identity is stable
# --------------------------------------------------------------------------

@pytest.mark.parametrize("n", [8, 16, 32])
def test_c2_safe_set_closure(n):
    report = run_closure_suite(
        Protocol.PPL, n=n, trials=100, seed=20_000 + n, steps=100_000,
        workers=WORKERS,
    )
    assert report.violations == [], report.violations[:5]
    assert not report.rejected_trials
    _report(f"C2 safe-set closure n={n}, 100 seeds x 100k steps, 0 violations")


# --------------------------------------------------------------------------
# 3. elimination reaches exactly one leader and never zero
# --------------------------------------------------------------------------

@pytest.mark.parametrize("leaders", [2, 4, 8])
def test_c3_elimination_never_zero(leaders):
    report = run_elimination_suite(
        n=32, initial_leaders=leaders, trials=100, seed=30_000 + leaders,
        workers=WORKERS,
    )
    assert report.zero_leader_events == 0
    assert all(report.converged)
    _report(
        f"C3 elimination n=32 leaders={leaders}, 100 trials, "
        f"median {report.median_steps:.0f} steps, never zero"
    )


# --------------------------------------------------------------------------
# 4. convergence from arbitrary configurations, with the scaling band
# --------------------------------------------------------------------------

def test_c4_convergence_and_scaling():
    spec = ExperimentSpec(
        protocol=Protocol.PPL,
        n_values=(8, 16, 32, 64),
        trials_per_n=100,
        base_seed=40_000,
        max_steps_multiplier=1e4,
        workers=WORKERS,
    )
    records = run_convergence_sweep(spec)
    assert all(r.converged for r in records)
    assert all(r.final_leader_count == 1 for r in records)
    ratios = {}
    for n in spec.n_values:
        steps = [r.steps for r in records if r.n == n]
        assert len(steps) == 100
        ratios[n] = float(np.median(steps)) / (n * n * math.log2(n))
    spread = max(ratios.values()) / min(ratios.values())
    assert spread <= 10.0, ratios
    _report(
        "C4 convergence 4x100 random starts, 100%, normalized medians "
        + ", ".join(f"n={n}:{r:.2f}" for n, r in ratios.items())
        + f", spread {spread:.2f}x"
    )


# --------------------------------------------------------------------------
# 5. lottery-game bounds and per-round win rates
# --------------------------------------------------------------------------

def test_c5_lottery_bounds():
    ceiling = lottery.bound_probability(4, 1) + 0.03
    upper = lottery.estimate_bound(4, 1, lottery.Bound.UPPER, 10_000, 50_001)
    assert upper <= ceiling, upper
    lower = lottery.estimate_bound(4, 1, lottery.Bound.LOWER, 10_000, 50_002)
    assert lower <= ceiling, lower
    rates = []
    for k in (2, 3, 4, 5):
        out = lottery.play_lottery(k, 300_000, 50_010 + k)
        assert out.rounds_played >= 100_000
        p = 2.0**-k
        sigma = math.sqrt(p * (1 - p) / out.rounds_played)
        rate = out.rounds_won / out.rounds_played
        assert abs(rate - p) < 3 * sigma, (k, rate)
        rates.append(f"k={k}:{rate:.4f}")
    _report(
        f"C5 lottery: upper {upper:.4f} lower {lower:.4f} <= {ceiling:.4f}; "
        "round rates " + " ".join(rates)
    )


# --------------------------------------------------------------------------
# 6. token trajectories never exceed their stated length
# --------------------------------------------------------------------------

def test_c6_token_trajectory_bound():
    params = make_params(16)
    bound = 2 * params.psi**2 - 2 * params.psi + 1
    total_steps = 0
    total_births = 0
    max_seen = 0
    # half the budget in the settled safe set, half rebuilding a scrambled
    # ID chain (distance chain settled in both, so every birth qualifies)
    safe = construct_S_PL(params, 60_001)
    report = run_token_audit(safe, seed=60_002, steps=500_000)
    assert report.passed, (report.violations, report.invalid_moves)
    total_steps += report.steps
    total_births += report.births
    max_seen = max(max_seen, report.max_moves_seen)

    scrambled = construct_S_PL(params, 60_003)
    for i in range(params.psi, 3 * params.psi):  # break S_1 and S_2 IDs
        scrambled.agents[i].b ^= 1
    report = run_token_audit(scrambled, seed=60_004, steps=500_000)
    assert report.passed, (report.violations, report.invalid_moves)
    total_steps += report.steps
    total_births += report.births
    max_seen = max(max_seen, report.max_moves_seen)

    assert total_steps == 1_000_000
    assert total_births > 1000
    assert max_seen <= bound
    _report(
        f"C6 token trajectories n=16: {total_births} births over 1e6 steps, "
        f"max {max_seen} <= {bound} moves, 0 violations"
    )


# --------------------------------------------------------------------------
# 7. ring orientation: convergence, monotonicity, stability
# --------------------------------------------------------------------------

def test_c7_orientation():
    trials = run_orientation_sweep(
        n_values=(8, 16, 32, 64),
        trials=100,
        seed=70_000,
        multiplier=1e4,
        post_steps=100_000,
        workers=WORKERS,
    )
    assert all(t.converged for t in trials)
    assert all(t.monotone_violations == 0 for t in trials)
    assert all(t.post_dir_changes == 0 for t in trials)
    assert all(t.final_segment_count == 1 for t in trials)
    by_n = {}
    for t in trials:
        by_n.setdefault(t.n, []).append(t.steps_to_oriented)
    meds = ", ".join(f"n={n}:{int(np.median(v))}" for n, v in sorted(by_n.items()))
    _report(
        f"C7 orientation 4x100 seeds, 100% oriented (medians {meds}), "
        "segment count monotone, directions frozen after"
    )


# --------------------------------------------------------------------------
# 8. the fused transition equals the chained blocks bit-exactly
# --------------------------------------------------------------------------

def test_c8_fused_equals_chained_100k():
    checked = 0
    for n in (8, 16, 32, 64):
        params = make_params(n)
        for l, r in random_state_pairs(
            80_000 + n, 25_000, params.psi, params.kappa_max
        ):
            assert interact_ppl(l, r, params) == interact_chained(l, r, params)
            checked += 1
    assert checked == 100_000
    _report("C8 fused vs chained transition, 100000 random pairs bit-exact")
