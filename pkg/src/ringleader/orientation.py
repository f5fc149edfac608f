"""Self-stabilizing ring orientation on undirected rings.

Agents carry a fixed two-hop coloring (distance-2 agents never share a
color, so every agent can tell its two neighbors apart) and an orientation
guess: ``dir`` holds the color of the neighbor the agent points at.  Heads
of oppositely-directed runs fight where they meet; the winner absorbs the
loser's head, so directed runs merge until one direction rules the ring.
The ``strong`` flag gives the side that just won momentum.

The coloring itself is supplied by a generator here (the upstream coloring
protocol is out of scope); orientation never writes ``color``/``c1``/``c2``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core.params import InvalidSizeError

XI = 5  # colors used by the generator; plenty for any ring size >= 3


class OrientAgentState:
    """One agent: own color, memorized neighbor colors, direction, strength."""

    __slots__ = ("color", "c1", "c2", "dir", "strong")

    def __init__(self, color: int, c1: int | None, c2: int | None, dir: int, strong: int):
        self.color = color
        self.c1 = c1
        self.c2 = c2
        self.dir = dir
        self.strong = strong

    def copy(self) -> "OrientAgentState":
        return OrientAgentState(self.color, self.c1, self.c2, self.dir, self.strong)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OrientAgentState):
            return NotImplemented
        return (
            self.color == other.color
            and self.c1 == other.c1
            and self.c2 == other.c2
            and self.dir == other.dir
            and self.strong == other.strong
        )

    def __hash__(self):
        return id(self)

    def __repr__(self) -> str:
        return (
            f"OrientAgentState(color={self.color}, c1={self.c1}, c2={self.c2}, "
            f"dir={self.dir}, strong={self.strong})"
        )


class OrientConfiguration:
    """Undirected ring of orientation agents."""

    __slots__ = ("xi", "agents")

    def __init__(self, xi: int, agents):
        self.xi = xi
        self.agents = list(agents)
        if len(self.agents) < 3:
            raise InvalidSizeError("orientation needs a ring of at least 3 agents")

    def __len__(self) -> int:
        return len(self.agents)

    def copy(self) -> "OrientConfiguration":
        return OrientConfiguration(self.xi, [a.copy() for a in self.agents])

    def check_two_hop(self) -> None:
        n = len(self.agents)
        for i in range(n):
            if self.agents[i].color == self.agents[(i + 2) % n].color:
                raise ValueError(f"two-hop violation at agents {i} and {(i + 2) % n}")


def generate_two_hop_coloring(n: int, seed: int) -> OrientConfiguration:
    """Greedy seeded two-hop coloring with 5 colors plus adversarial dir/strong.

    Colors and the memorized neighbor colors (c1 = left, c2 = right) satisfy
    the generator's postcondition exactly; ``dir`` points at a uniformly
    random neighbor and ``strong`` is a uniform bit.  Directions must point
    at an actual neighbor: the transition redirects an agent only when the
    agent and a neighbor point at each other, so a direction value naming
    neither neighbor could never be corrected.
    """
    if n < 3:
        raise InvalidSizeError(f"need n >= 3 for a two-hop coloring, got n={n}")
    rng = np.random.Generator(np.random.PCG64(seed))
    colors: list[int | None] = [None] * n
    for i in range(n):
        banned = set()
        for j in (i - 2, i + 2):
            c = colors[j % n]
            if c is not None:
                banned.add(c)
        choices = [c for c in range(XI) if c not in banned]
        colors[i] = int(choices[rng.integers(0, len(choices))])
    agents = []
    for i in range(n):
        left = colors[(i - 1) % n]
        right = colors[(i + 1) % n]
        agents.append(
            OrientAgentState(
                color=colors[i],
                c1=left,
                c2=right,
                dir=right if rng.integers(0, 2) else left,
                strong=int(rng.integers(0, 2)),
            )
        )
    config = OrientConfiguration(XI, agents)
    config.check_two_hop()
    return config


def oriented_configuration(n: int, seed: int, clockwise: bool = True) -> OrientConfiguration:
    """A coloring with every agent already pointing the same way."""
    config = generate_two_hop_coloring(n, seed)
    agents = config.agents
    for i, a in enumerate(agents):
        a.dir = agents[(i + 1) % n].color if clockwise else agents[(i - 1) % n].color
    return config


def _interact_or_inplace(u: OrientAgentState, v: OrientAgentState) -> None:
    if u.dir == v.color:
        if v.dir == u.color:
            # two heads point at each other; the loser is redirected and
            # marked strong, carrying the winning front forward
            if u.strong == 0 and v.strong == 1:
                u.dir = u.c1 if u.c1 != v.color else u.c2
                u.strong = 1
                v.strong = 0
            else:
                v.dir = v.c1 if v.c1 != u.color else v.c2
                u.strong = 0
                v.strong = 1
        else:
            u.strong = 0  # one-sided pointing demotes a stray strong flag
    elif v.dir == u.color:
        v.strong = 0


def interact_or(
    u: OrientAgentState, v: OrientAgentState
) -> tuple[OrientAgentState, OrientAgentState]:
    """Transition for one interaction, initiator ``u``; pure."""
    u2, v2 = u.copy(), v.copy()
    _interact_or_inplace(u2, v2)
    return u2, v2


def _directions(config: OrientConfiguration) -> list[int]:
    """+1 per agent pointing at its right neighbor, -1 at its left."""
    agents = config.agents
    n = len(agents)
    dirs = []
    for i, a in enumerate(agents):
        if a.dir == agents[(i + 1) % n].color:
            dirs.append(1)
        elif a.dir == agents[(i - 1) % n].color:
            dirs.append(-1)
        else:
            raise ValueError(f"agent {i} points at neither neighbor")
    return dirs


def is_oriented(config: OrientConfiguration) -> bool:
    """True iff all agents point clockwise or all point counter-clockwise."""
    dirs = _directions(config)
    return all(d == 1 for d in dirs) or all(d == -1 for d in dirs)


def segment_count(config: OrientConfiguration) -> int:
    """Number of maximal same-direction runs; 1 exactly when oriented."""
    dirs = _directions(config)
    n = len(dirs)
    boundaries = sum(1 for i in range(n) if dirs[i] != dirs[(i + 1) % n])
    return 1 if boundaries == 0 else boundaries


@dataclass
class OrientationTrial:
    """Outcome of one instrumented orientation run."""

    seed: int
    n: int
    steps_to_oriented: int | None
    converged: bool
    monotone_violations: int
    post_dir_changes: int
    final_segment_count: int
    initial_segment_count: int = field(default=0)


def run_orientation(
    config: OrientConfiguration,
    seed: int,
    max_steps: int,
    post_steps: int = 0,
) -> OrientationTrial:
    """Drive one ring until oriented (or cutoff), checking every step.

    The scheduler draws uniformly among the 2n ordered arcs.  The directed
    segment count is maintained incrementally and asserted non-increasing at
    every step; after orientation, ``post_steps`` further interactions are
    applied and any change to any ``dir`` is counted.  The input
    configuration is not mutated.
    """
    work = config.copy()
    agents = work.agents
    n = len(agents)
    rng = np.random.Generator(np.random.PCG64(seed))
    dirs = _directions(work)
    boundaries = sum(1 for i in range(n) if dirs[i] != dirs[(i + 1) % n])
    initial_count = 1 if boundaries == 0 else boundaries

    monotone_violations = 0
    steps_to_oriented: int | None = 0 if boundaries == 0 else None

    def local_boundaries(j: int) -> int:
        return (1 if dirs[(j - 1) % n] != dirs[j] else 0) + (
            1 if dirs[j] != dirs[(j + 1) % n] else 0
        )

    step_no = 0
    chunk = 4096
    while steps_to_oriented is None and step_no < max_steps:
        draws = rng.integers(0, 2 * n, size=min(chunk, max_steps - step_no)).tolist()
        for t in draws:
            i = t >> 1
            if t & 1:
                u_idx, v_idx = (i + 1) % n, i
            else:
                u_idx, v_idx = i, (i + 1) % n
            u, v = agents[u_idx], agents[v_idx]
            old_u, old_v = u.dir, v.dir
            _interact_or_inplace(u, v)
            step_no += 1
            changed = u_idx if u.dir != old_u else (v_idx if v.dir != old_v else None)
            if changed is not None:
                before = local_boundaries(changed)
                dirs[changed] = -dirs[changed]
                after = local_boundaries(changed)
                if after > before:
                    monotone_violations += 1
                boundaries += after - before
                if boundaries == 0:
                    steps_to_oriented = step_no
                    break

    converged = steps_to_oriented is not None
    post_dir_changes = 0
    if converged and post_steps > 0:
        frozen = [a.dir for a in agents]
        draws = rng.integers(0, 2 * n, size=post_steps).tolist()
        for t in draws:
            i = t >> 1
            if t & 1:
                _interact_or_inplace(agents[(i + 1) % n], agents[i])
            else:
                _interact_or_inplace(agents[i], agents[(i + 1) % n])
        post_dir_changes = sum(
            1 for a, d in zip(agents, frozen) if a.dir != d
        )

    final_count = segment_count(work)
    if converged and final_count != 1:
        monotone_violations += 1  # incremental counter disagreed with recount
    return OrientationTrial(
        seed=seed,
        n=n,
        steps_to_oriented=steps_to_oriented,
        converged=converged,
        monotone_violations=monotone_violations,
        post_dir_changes=post_dir_changes,
        final_segment_count=final_count,
        initial_segment_count=initial_count,
    )


# --- optional start mode: blank neighbor memories, learn them on the fly ---

def blank_memories(config: OrientConfiguration) -> OrientConfiguration:
    """Copy of ``config`` with all memorized neighbor colors forgotten."""
    out = config.copy()
    for a in out.agents:
        a.c1 = None
        a.c2 = None
    return out


def _observe(agent: OrientAgentState, color: int) -> None:
    # keep the two most recently seen distinct colors, newest in c1
    if agent.c1 is None:
        agent.c1 = color
    elif color != agent.c1:
        agent.c2 = agent.c1
        agent.c1 = color


def run_orientation_amnesiac(
    config: OrientConfiguration, seed: int, max_steps: int
) -> tuple[OrientConfiguration, int | None]:
    """Orientation run that first relearns neighbor colors from observations.

    Each interaction both participants memorize the partner's color; the
    orientation rules apply only once both participants know two distinct
    neighbor colors.  Returns the final ring and the step at which it was
    first seen oriented (checked every n steps), or None.
    """
    work = config.copy()
    agents = work.agents
    n = len(agents)
    rng = np.random.Generator(np.random.PCG64(seed))
    done = 0
    while done < max_steps:
        block = min(n, max_steps - done)
        for t in rng.integers(0, 2 * n, size=block).tolist():
            i = t >> 1
            if t & 1:
                u, v = agents[(i + 1) % n], agents[i]
            else:
                u, v = agents[i], agents[(i + 1) % n]
            _observe(u, v.color)
            _observe(v, u.color)
            if u.c2 is not None and v.c2 is not None:
                _interact_or_inplace(u, v)
        done += block
        if all(a.c2 is not None for a in agents):
            try:
                if is_oriented(work):
                    return work, done
            except ValueError:
                pass  # some direction still names a forgotten color
    return work, None
