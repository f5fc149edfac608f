"""Step application and the run loop."""
from __future__ import annotations

from typing import Callable

from ..transition import interact_inplace
from .scheduler import SchedulerStream
from .state import Configuration


def step(config: Configuration, index: int) -> Configuration:
    """Apply one interaction on arc (u_index, u_index+1); pure.

    All agents other than the two participants are returned unchanged.
    """
    n = config.params.n
    if not 0 <= index < n:
        raise ValueError(f"index {index} out of range [0, {n})")
    new = config.copy()
    p = config.params
    interact_inplace(
        new.agents[index], new.agents[(index + 1) % n], p.psi, p.two_psi, p.kappa_max
    )
    return new


def run(
    config: Configuration,
    scheduler: SchedulerStream,
    max_steps: int,
    stop: Callable[[Configuration], bool],
    check_interval: int | None = None,
) -> tuple[Configuration, int, bool]:
    """Drive the ring with scheduler-drawn interactions until ``stop`` or cutoff.

    ``stop`` is evaluated on the initial configuration and then once every
    ``check_interval`` steps (default: every n steps, so the check amortizes
    to constant work per step).  The reported step count is therefore the
    first checked multiple at which ``stop`` held -- an overcount of less
    than one interval.  The input configuration is not mutated.
    """
    if max_steps < 0:
        raise ValueError("max_steps must be >= 0")
    n = config.params.n
    if scheduler.n != n:
        raise ValueError(f"scheduler built for n={scheduler.n}, ring has n={n}")
    if check_interval is None:
        check_interval = n
    if check_interval < 1:
        raise ValueError("check_interval must be >= 1")

    work = config.copy()
    if stop(work):
        return work, 0, True

    p = config.params
    psi, two_psi, kmax = p.psi, p.two_psi, p.kappa_max
    agents = work.agents
    nxt = [(i + 1) % n for i in range(n)]

    done = 0
    while done < max_steps:
        block = min(check_interval, max_steps - done)
        for i in scheduler.draw(block):
            interact_inplace(agents[i], agents[nxt[i]], psi, two_psi, kmax)
        done += block
        if stop(work):
            return work, done, True
    return work, max_steps, False
