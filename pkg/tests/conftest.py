import numpy as np
import pytest

from ringleader.core.params import make_params
from ringleader.core.state import AgentState, Token


@pytest.fixture
def params16():
    return make_params(16)


@pytest.fixture
def params8():
    return make_params(8)


def random_agent(rng: np.random.Generator, psi: int, kappa_max: int) -> AgentState:
    """One agent with every field drawn uniformly from its declared range."""

    def token():
        pick = int(rng.integers(0, 1 + (2 * psi - 1) * 4))
        if pick == 0:
            return None
        pick -= 1
        idx, payload = divmod(pick, 4)
        offset = idx - (psi - 1) if idx < psi - 1 else idx - psi + 2
        return Token(offset, payload >> 1, payload & 1)

    return AgentState(
        leader=int(rng.integers(0, 2)),
        b=int(rng.integers(0, 2)),
        dist=int(rng.integers(0, 2 * psi)),
        last=int(rng.integers(0, 2)),
        token_b=token(),
        token_w=token(),
        mode=int(rng.integers(0, 2)),
        clock=int(rng.integers(0, kappa_max + 1)),
        hits=int(rng.integers(0, psi + 1)),
        signal_r=int(rng.integers(0, kappa_max + 1)),
        bullet=int(rng.integers(0, 3)),
        shield=int(rng.integers(0, 2)),
        signal_b=int(rng.integers(0, 2)),
    )


def random_state_pairs(seed: int, count: int, psi: int, kappa_max: int):
    rng = np.random.Generator(np.random.PCG64(seed))
    for _ in range(count):
        yield random_agent(rng, psi, kappa_max), random_agent(rng, psi, kappa_max)
