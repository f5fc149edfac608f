"""Agent state, tokens and ring configurations.

An agent carries thirteen variables.  ``leader`` is the output bit.  The
``b``/``dist``/``last`` trio plus the two token slots implement the segment-ID
chain; ``mode``/``clock``/``hits``/``signal_r`` implement leader-absence
detection; ``bullet``/``shield``/``signal_b`` implement leader elimination.

States are plain mutable objects so the simulation loop can update them in
place; every public operation that promises purity copies first.
"""
from __future__ import annotations

from typing import Iterable, NamedTuple

import numpy as np

from .params import ProtocolParams

# mode values; an agent is in detection mode exactly when its clock is full,
# except transiently in adversarial initial states (repaired on first contact)
CONSTRUCT = 0
DETECT = 1

MODE_NAMES = {CONSTRUCT: "Construct", DETECT: "Detect"}
MODE_VALUES = {v: k for k, v in MODE_NAMES.items()}


class Token(NamedTuple):
    """A segment-ID relay token: signed target offset plus two payload bits.

    ``offset`` is the relative index of the agent the token is moving toward
    (positive = rightward, negative = leftward, never 0 and never ``-psi``).
    ``value_bit`` is the ID bit being carried to the target; ``carry_bit`` is
    the running carry of the +1 addition.
    """

    offset: int
    value_bit: int
    carry_bit: int


class AgentState:
    """One agent's full variable block."""

    __slots__ = (
        "leader",
        "b",
        "dist",
        "last",
        "token_b",
        "token_w",
        "mode",
        "clock",
        "hits",
        "signal_r",
        "bullet",
        "shield",
        "signal_b",
    )

    def __init__(
        self,
        leader: int = 0,
        b: int = 0,
        dist: int = 0,
        last: int = 0,
        token_b: Token | None = None,
        token_w: Token | None = None,
        mode: int = CONSTRUCT,
        clock: int = 0,
        hits: int = 0,
        signal_r: int = 0,
        bullet: int = 0,
        shield: int = 0,
        signal_b: int = 0,
    ):
        self.leader = leader
        self.b = b
        self.dist = dist
        self.last = last
        self.token_b = token_b
        self.token_w = token_w
        self.mode = mode
        self.clock = clock
        self.hits = hits
        self.signal_r = signal_r
        self.bullet = bullet
        self.shield = shield
        self.signal_b = signal_b

    def copy(self) -> "AgentState":
        new = AgentState.__new__(AgentState)
        new.leader = self.leader
        new.b = self.b
        new.dist = self.dist
        new.last = self.last
        new.token_b = self.token_b
        new.token_w = self.token_w
        new.mode = self.mode
        new.clock = self.clock
        new.hits = self.hits
        new.signal_r = self.signal_r
        new.bullet = self.bullet
        new.shield = self.shield
        new.signal_b = self.signal_b
        return new

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AgentState):
            return NotImplemented
        return all(
            getattr(self, f) == getattr(other, f) for f in AgentState.__slots__
        )

    def __hash__(self):  # mutable; identity hashing only
        return id(self)

    def __repr__(self) -> str:
        fields = ", ".join(f"{f}={getattr(self, f)!r}" for f in AgentState.__slots__)
        return f"AgentState({fields})"

    def validate(self, params: ProtocolParams) -> None:
        """Raise ValueError if any field is outside its declared range."""
        psi, kmax = params.psi, params.kappa_max
        _check_bit("leader", self.leader)
        _check_bit("b", self.b)
        _check_range("dist", self.dist, 0, 2 * psi - 1)
        _check_bit("last", self.last)
        _check_token("token_b", self.token_b, psi)
        _check_token("token_w", self.token_w, psi)
        if self.mode not in (CONSTRUCT, DETECT):
            raise ValueError(f"mode: {self.mode!r} is not a valid mode")
        _check_range("clock", self.clock, 0, kmax)
        _check_range("hits", self.hits, 0, psi)
        _check_range("signal_r", self.signal_r, 0, kmax)
        _check_range("bullet", self.bullet, 0, 2)
        _check_bit("shield", self.shield)
        _check_bit("signal_b", self.signal_b)


def _check_bit(name: str, value: int) -> None:
    if value not in (0, 1):
        raise ValueError(f"{name}: {value!r} is not a bit")


def _check_range(name: str, value: int, lo: int, hi: int) -> None:
    if not isinstance(value, int) or not lo <= value <= hi:
        raise ValueError(f"{name}: {value!r} out of range [{lo}, {hi}]")


def _check_token(name: str, token: Token | None, psi: int) -> None:
    if token is None:
        return
    off, val, car = token
    if off == 0 or off < -psi + 1 or off > psi:
        raise ValueError(
            f"{name}: offset {off} outside [-psi+1,-1] U [1,psi] for psi={psi}"
        )
    _check_bit(f"{name}.value_bit", val)
    _check_bit(f"{name}.carry_bit", car)


class Configuration:
    """The ring: a cyclic sequence of agent states plus its parameters.

    Index ``i``'s left neighbor is ``i-1 mod n`` and right neighbor
    ``i+1 mod n``; interactions run left-to-right (clockwise).
    """

    __slots__ = ("params", "agents")

    def __init__(self, params: ProtocolParams, agents: Iterable[AgentState]):
        self.params = params
        self.agents = list(agents)
        if len(self.agents) != params.n:
            raise ValueError(
                f"expected {params.n} agents, got {len(self.agents)}"
            )

    def copy(self) -> "Configuration":
        clone = Configuration.__new__(Configuration)
        clone.params = self.params
        clone.agents = [a.copy() for a in self.agents]
        return clone

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Configuration):
            return NotImplemented
        return self.params == other.params and self.agents == other.agents

    def __len__(self) -> int:
        return self.params.n

    def validate(self) -> None:
        for i, agent in enumerate(self.agents):
            try:
                agent.validate(self.params)
            except ValueError as exc:
                raise ValueError(f"agents[{i}].{exc}") from None

    # --- snapshot format: plain dicts, JSON-ready ------------------------

    def to_snapshot(self) -> dict:
        return {
            "n": self.params.n,
            "psi": self.params.psi,
            "kappa_max": self.params.kappa_max,
            "agents": [_agent_to_dict(a) for a in self.agents],
        }

    @classmethod
    def from_snapshot(cls, data: dict) -> "Configuration":
        from .params import ProtocolParams  # local to avoid cycle at import time

        for key in ("n", "psi", "kappa_max", "agents"):
            if key not in data:
                raise ValueError(f"snapshot missing field {key!r}")
        n, psi, kmax = data["n"], data["psi"], data["kappa_max"]
        params = ProtocolParams(n=n, psi=psi, kappa_max=kmax, zeta=-(-n // psi))
        raw_agents = data["agents"]
        if not isinstance(raw_agents, list) or len(raw_agents) != n:
            raise ValueError(f"agents: expected a list of {n} entries")
        agents = []
        for i, entry in enumerate(raw_agents):
            try:
                agents.append(_agent_from_dict(entry))
            except (ValueError, KeyError, TypeError) as exc:
                raise ValueError(f"agents[{i}]: {exc}") from None
        config = cls(params, agents)
        config.validate()
        return config


def _agent_to_dict(a: AgentState) -> dict:
    return {
        "leader": a.leader,
        "b": a.b,
        "dist": a.dist,
        "last": a.last,
        "token_b": None if a.token_b is None else list(a.token_b),
        "token_w": None if a.token_w is None else list(a.token_w),
        "mode": MODE_NAMES[a.mode],
        "clock": a.clock,
        "hits": a.hits,
        "signal_r": a.signal_r,
        "bullet": a.bullet,
        "shield": a.shield,
        "signal_b": a.signal_b,
    }


def _agent_from_dict(entry: dict) -> AgentState:
    if not isinstance(entry, dict):
        raise ValueError("agent entry is not an object")
    mode = entry["mode"]
    if mode not in MODE_VALUES:
        raise ValueError(f"mode: unknown value {mode!r}")

    def token(name: str) -> Token | None:
        raw = entry[name]
        if raw is None:
            return None
        if not isinstance(raw, (list, tuple)) or len(raw) != 3:
            raise ValueError(f"{name}: expected null or [offset, value, carry]")
        return Token(int(raw[0]), int(raw[1]), int(raw[2]))

    return AgentState(
        leader=int(entry["leader"]),
        b=int(entry["b"]),
        dist=int(entry["dist"]),
        last=int(entry["last"]),
        token_b=token("token_b"),
        token_w=token("token_w"),
        mode=MODE_VALUES[mode],
        clock=int(entry["clock"]),
        hits=int(entry["hits"]),
        signal_r=int(entry["signal_r"]),
        bullet=int(entry["bullet"]),
        shield=int(entry["shield"]),
        signal_b=int(entry["signal_b"]),
    )


def random_configuration(params: ProtocolParams, seed: int) -> Configuration:
    """Draw every field of every agent uniformly from its declared range.

    This is the adversary: the draw includes inconsistent combinations
    (no leader, many leaders, stray tokens and signals, clocks out of step
    with modes).  Deterministic in ``seed``.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    n, psi, kmax = params.n, params.psi, params.kappa_max
    token_choices = 1 + (2 * psi - 1) * 4  # bottom + offsets x value x carry

    def draw_token() -> Token | None:
        pick = int(rng.integers(0, token_choices))
        if pick == 0:
            return None
        pick -= 1
        idx, payload = divmod(pick, 4)
        offset = idx - (psi - 1) if idx < psi - 1 else idx - psi + 2
        return Token(offset, payload >> 1, payload & 1)

    agents = []
    for _ in range(n):
        agents.append(
            AgentState(
                leader=int(rng.integers(0, 2)),
                b=int(rng.integers(0, 2)),
                dist=int(rng.integers(0, 2 * psi)),
                last=int(rng.integers(0, 2)),
                token_b=draw_token(),
                token_w=draw_token(),
                mode=int(rng.integers(0, 2)),
                clock=int(rng.integers(0, kmax + 1)),
                hits=int(rng.integers(0, psi + 1)),
                signal_r=int(rng.integers(0, kmax + 1)),
                bullet=int(rng.integers(0, 3)),
                shield=int(rng.integers(0, 2)),
                signal_b=int(rng.integers(0, 2)),
            )
        )
    return Configuration(params, agents)
