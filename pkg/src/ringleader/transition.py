"""The pairwise transition function for the leader-election protocol.

``interact_ppl`` maps (initiator state, responder state) to successor states.
It runs five blocks in a fixed order, and later statements observe earlier
statements' writes:

1. mode determination -- resetting-signal and clock bookkeeping,
2. the distance-chain block -- dist/last maintenance, leader creation on a
   distance mismatch in detection mode,
3. black token relay, 4. white token relay -- segment-ID construction and
   checking, leader creation on an ID-bit mismatch in detection mode,
5. leader elimination -- bullets, shields and bullet-absence signals.

The block order is load-bearing (e.g. a freshly created leader has its
bullet-absence signal cleared before the elimination block runs) and must not
be rearranged.

Two implementations exist: the five standalone blocks below, and a fused
``interact_ppl`` used by the simulation loop, which short-circuits the token
blocks when no token activity is possible.  The acceptance suite asserts they
are bit-identical on random state pairs.
"""
from __future__ import annotations

import enum

from .core.params import ProtocolParams
from .core.state import CONSTRUCT, DETECT, AgentState, Token


class TokenColor(enum.Enum):
    BLACK = "black"
    WHITE = "white"


# --------------------------------------------------------------------------
# block 1: mode determination
# --------------------------------------------------------------------------

def _determine_mode_inplace(l: AgentState, r: AgentState, psi: int, kappa_max: int) -> None:
    # a leader seeds a fresh resetting signal; it cascades to r below
    if l.leader:
        l.signal_r = kappa_max
    # hits counts consecutive interactions as responder, capped at psi
    l.hits = 0
    rh = r.hits + 1
    if rh > psi:
        rh = psi
    ls = l.signal_r
    rs = r.signal_r
    if ls > 0 or rs > 0:
        # any signal on the pair keeps both clocks at zero
        l.clock = 0
        r.clock = 0
        if rs > 0 and ls >= rs:
            # the left signal absorbs the right one; the merged signal's
            # hit counter restarts
            rh = 0
        merged = ls if ls > rs else rs
        l.signal_r = 0
        if rh == psi:
            # a full hit counter costs the signal one TTL unit
            r.signal_r = merged - 1
            rh = 0
        else:
            r.signal_r = merged
    elif rh == psi:
        # no signal in sight: a full hit counter advances the clock
        if r.clock < kappa_max:
            r.clock = r.clock + 1
        rh = 0
    r.hits = rh
    l.mode = DETECT if l.clock == kappa_max else CONSTRUCT
    r.mode = DETECT if r.clock == kappa_max else CONSTRUCT


# --------------------------------------------------------------------------
# block 2: distance chain, last flag, mismatch-triggered leader creation
# --------------------------------------------------------------------------

def _dist_last_inplace(l: AgentState, r: AgentState, psi: int, two_psi: int) -> None:
    tmp = 0 if r.leader else (l.dist + 1) % two_psi
    if r.mode == DETECT:
        if tmp != r.dist:
            # the embedded distance chain is broken: r becomes a leader,
            # shielded and holding a live bullet
            r.leader = 1
            r.bullet = 2
            r.shield = 1
            r.signal_b = 0
    else:
        r.dist = tmp
    # l learns whether it sits in the segment that precedes a leader
    if r.leader:
        l.last = 1
    elif r.dist == 0 or r.dist == psi:
        l.last = 0
    else:
        l.last = r.last


# --------------------------------------------------------------------------
# blocks 3-4: token relay
# --------------------------------------------------------------------------

def _off_track(dist: int, offset: int, d: int, two_psi: int, psi: int) -> bool:
    """True when a token has left its legal shuttle trajectory.

    ``(dist + offset + d) mod 2*psi`` is the target's position relative to
    the token's home border.  Rightward tokens must target the next segment
    (relative positions ``[psi, 2*psi-1]``); leftward tokens must target the
    interior of their home segment (``[1, psi-1]``).  Anything else --
    including the turn-around produced at the final target -- is destroyed
    by the sweep.
    """
    target_rel = (dist + offset + d) % two_psi
    if offset > 0:
        return target_rel < psi
    return target_rel == 0 or target_rel >= psi


def _relay_inplace(l, r, lt, rt, d, psi, two_psi, trace, color):
    """One color's token block.  Returns the pair's new token fields.

    ``lt``/``rt`` are the current token values of this color at l and r;
    other agent fields are read and written through ``l``/``r`` directly.
    """
    # an idle border (not in the final segment) arms a fresh token carrying
    # the first bit of its segment ID plus one: value 1-b, carry b
    if lt is None and l.dist == d and l.last == 0:
        lt = Token(psi, 1 - l.b, l.b)
        if trace is not None:
            trace.append(("tgen", color))
    # a token never moves onto an occupied agent or into the final segment;
    # the left token is destroyed instead
    if lt is not None and (rt is not None or r.last == 1):
        lt = None
        if trace is not None:
            trace.append(("tdel", color, "l"))
    if lt is not None and lt.offset == 1:
        # rightward arrival: construction writes the carried bit, detection
        # checks it and creates a leader on mismatch; then the token turns
        # around toward the matching agent of its home segment
        if r.mode == DETECT:
            if lt.value_bit != r.b:
                if trace is not None and r.bullet > 0:
                    trace.append(("bdel", "r"))
                r.leader = 1
                r.bullet = 2
                r.shield = 1
                r.signal_b = 0
                if trace is not None:
                    trace.append(("bfire", "r", 2))
        else:
            r.b = lt.value_bit
        rt = Token(1 - psi, lt.value_bit, lt.carry_bit)
        lt = None
        if trace is not None:
            trace.append(("tmove", color, "lr"))
    elif lt is not None and lt.offset >= 2:
        rt = Token(lt.offset - 1, lt.value_bit, lt.carry_bit)
        lt = None
        if trace is not None:
            trace.append(("tmove", color, "lr"))
    elif rt is not None and rt.offset == -1:
        # leftward arrival: fold l's bit into the running +1 addition and
        # re-arm for the next round
        if rt.carry_bit == 1:
            lt = Token(psi, 1 - l.b, l.b)
        else:
            lt = Token(psi, l.b, 0)
        rt = None
        if trace is not None:
            trace.append(("tmove", color, "rl"))
    elif rt is not None and rt.offset <= -2:
        lt = Token(rt.offset + 1, rt.value_bit, rt.carry_bit)
        rt = None
        if trace is not None:
            trace.append(("tmove", color, "rl"))
    # sweep: final-segment residents and off-track tokens are destroyed
    if lt is not None and (l.last == 1 or _off_track(l.dist, lt.offset, d, two_psi, psi)):
        lt = None
        if trace is not None:
            trace.append(("tdel", color, "l"))
    if rt is not None and (r.last == 1 or _off_track(r.dist, rt.offset, d, two_psi, psi)):
        rt = None
        if trace is not None:
            trace.append(("tdel", color, "r"))
    return lt, rt


# --------------------------------------------------------------------------
# block 5: leader elimination
# --------------------------------------------------------------------------

def _eliminate_inplace(l: AgentState, r: AgentState, trace=None) -> None:
    # a leader that has learned its previous bullet is gone fires again;
    # firing as initiator means live + shield up, firing as responder means
    # dummy + shield down (the scheduler supplies the coin flip)
    if l.leader and l.signal_b:
        if trace is not None and l.bullet > 0:
            trace.append(("bdel", "l"))
        l.bullet = 2
        l.shield = 1
        l.signal_b = 0
        if trace is not None:
            trace.append(("bfire", "l", 2))
    if r.leader and r.signal_b:
        if trace is not None and r.bullet > 0:
            trace.append(("bdel", "r"))
        r.bullet = 1
        r.shield = 0
        r.signal_b = 0
        if trace is not None:
            trace.append(("bfire", "r", 1))
    lb = l.bullet
    if lb > 0:
        if r.leader:
            # a bullet reaching a leader vanishes; it kills iff it is live
            # and the leader is unshielded
            killed = lb == 2 and r.shield == 0
            if killed:
                r.leader = 0
            l.bullet = 0
            if trace is not None:
                trace.append(("bhit", killed))
        else:
            # advance onto an empty follower, disappear against an occupied
            # one; either way the follower's bullet-absence signal dies
            if r.bullet == 0:
                r.bullet = lb
                if trace is not None:
                    trace.append(("bmove",))
            elif trace is not None:
                trace.append(("bdel", "l"))
            l.bullet = 0
            r.signal_b = 0
    # the bullet-absence signal spreads right to left, sourced at leaders
    sb = l.signal_b
    if r.signal_b > sb:
        sb = r.signal_b
    if r.leader > sb:
        sb = r.leader
    l.signal_b = sb


# --------------------------------------------------------------------------
# fused hot-path transition
# --------------------------------------------------------------------------

def interact_inplace(
    l: AgentState,
    r: AgentState,
    psi: int,
    two_psi: int,
    kappa_max: int,
    trace=None,
) -> None:
    """Apply the full transition to ``l`` and ``r`` in place.

    Semantically identical to running the five blocks in order; the token
    blocks are skipped outright when neither agent holds a token of that
    color and the initiator cannot arm one.
    """
    # mode determination
    if l.leader:
        l.signal_r = kappa_max
    l.hits = 0
    rh = r.hits + 1
    if rh > psi:
        rh = psi
    ls = l.signal_r
    rs = r.signal_r
    if ls > 0 or rs > 0:
        l.clock = 0
        r.clock = 0
        if rs > 0 and ls >= rs:
            rh = 0
        merged = ls if ls > rs else rs
        l.signal_r = 0
        if rh == psi:
            r.signal_r = merged - 1
            rh = 0
        else:
            r.signal_r = merged
    elif rh == psi:
        if r.clock < kappa_max:
            r.clock = r.clock + 1
        rh = 0
    r.hits = rh
    l.mode = DETECT if l.clock == kappa_max else CONSTRUCT
    rmode = DETECT if r.clock == kappa_max else CONSTRUCT
    r.mode = rmode

    # distance chain
    tmp = 0 if r.leader else (l.dist + 1) % two_psi
    if rmode == DETECT:
        if tmp != r.dist:
            r.leader = 1
            r.bullet = 2
            r.shield = 1
            r.signal_b = 0
    else:
        r.dist = tmp
    if r.leader:
        l.last = 1
    elif r.dist == 0 or r.dist == psi:
        l.last = 0
    else:
        l.last = r.last

    # token relays, black (home border at relative 0) then white (at psi)
    lt = l.token_b
    rt = r.token_b
    if lt is not None or rt is not None or (l.dist == 0 and l.last == 0):
        l.token_b, r.token_b = _relay_inplace(
            l, r, lt, rt, 0, psi, two_psi, trace, "B"
        )
    lt = l.token_w
    rt = r.token_w
    if lt is not None or rt is not None or (l.dist == psi and l.last == 0):
        l.token_w, r.token_w = _relay_inplace(
            l, r, lt, rt, psi, psi, two_psi, trace, "W"
        )

    # leader elimination
    if l.leader and l.signal_b:
        if trace is not None and l.bullet > 0:
            trace.append(("bdel", "l"))
        l.bullet = 2
        l.shield = 1
        l.signal_b = 0
        if trace is not None:
            trace.append(("bfire", "l", 2))
    if r.leader and r.signal_b:
        if trace is not None and r.bullet > 0:
            trace.append(("bdel", "r"))
        r.bullet = 1
        r.shield = 0
        r.signal_b = 0
        if trace is not None:
            trace.append(("bfire", "r", 1))
    lb = l.bullet
    if lb > 0:
        if r.leader:
            killed = lb == 2 and r.shield == 0
            if killed:
                r.leader = 0
            l.bullet = 0
            if trace is not None:
                trace.append(("bhit", killed))
        else:
            if r.bullet == 0:
                r.bullet = lb
                if trace is not None:
                    trace.append(("bmove",))
            elif trace is not None:
                trace.append(("bdel", "l"))
            l.bullet = 0
            r.signal_b = 0
    sb = l.signal_b
    if r.signal_b > sb:
        sb = r.signal_b
    if r.leader > sb:
        sb = r.leader
    l.signal_b = sb


# --------------------------------------------------------------------------
# public pure operations
# --------------------------------------------------------------------------

def interact_ppl(
    l: AgentState, r: AgentState, params: ProtocolParams
) -> tuple[AgentState, AgentState]:
    """Full transition as a pure function: returns successor states."""
    l2, r2 = l.copy(), r.copy()
    interact_inplace(l2, r2, params.psi, params.two_psi, params.kappa_max)
    return l2, r2


def determine_mode(
    l: AgentState, r: AgentState, params: ProtocolParams
) -> tuple[AgentState, AgentState]:
    """Mode-determination block alone (signals, hits, clocks, modes)."""
    l2, r2 = l.copy(), r.copy()
    _determine_mode_inplace(l2, r2, params.psi, params.kappa_max)
    return l2, r2


def create_leader_diststep(
    l: AgentState, r: AgentState, params: ProtocolParams
) -> tuple[AgentState, AgentState]:
    """Distance-chain block alone; assumes mode determination already ran."""
    l2, r2 = l.copy(), r.copy()
    _dist_last_inplace(l2, r2, params.psi, params.two_psi)
    return l2, r2


def move_token(
    l: AgentState, r: AgentState, which: TokenColor, params: ProtocolParams
) -> tuple[AgentState, AgentState]:
    """One color's token-relay block alone."""
    l2, r2 = l.copy(), r.copy()
    psi = params.psi
    if which is TokenColor.BLACK:
        l2.token_b, r2.token_b = _relay_inplace(
            l2, r2, l2.token_b, r2.token_b, 0, psi, params.two_psi, None, "B"
        )
    else:
        l2.token_w, r2.token_w = _relay_inplace(
            l2, r2, l2.token_w, r2.token_w, psi, psi, params.two_psi, None, "W"
        )
    return l2, r2


def eliminate_leaders(
    l: AgentState, r: AgentState
) -> tuple[AgentState, AgentState]:
    """Leader-elimination block alone."""
    l2, r2 = l.copy(), r.copy()
    _eliminate_inplace(l2, r2)
    return l2, r2


def interact_chained(
    l: AgentState, r: AgentState, params: ProtocolParams
) -> tuple[AgentState, AgentState]:
    """The five public blocks composed in order; reference for the fused op."""
    l, r = determine_mode(l, r, params)
    l, r = create_leader_diststep(l, r, params)
    l, r = move_token(l, r, TokenColor.BLACK, params)
    l, r = move_token(l, r, TokenColor.WHITE, params)
    return eliminate_leaders(l, r)
