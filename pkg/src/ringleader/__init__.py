"""Simulation engine and verification suite for self-stabilizing leader
election and ring orientation population protocols on directed rings."""

from .analysis import (
    Segment,
    construct_S_PL,
    in_C_DL,
    in_C_PB,
    in_S_PL,
    is_peaceful,
    is_perfect,
    leader_count,
    nearest_leader_distances,
    segment_id,
    segments,
    sequence_occurs,
    token_is_correct,
    token_is_valid,
)
from .core import (
    AgentState,
    Configuration,
    InvalidSizeError,
    ProtocolParams,
    SchedulerStream,
    Token,
    make_params,
    random_configuration,
    run,
    step,
)
from .harness import (
    ExperimentSpec,
    Protocol,
    TrialRecord,
    run_closure_suite,
    run_convergence_sweep,
    run_elimination_suite,
)
from .lottery import Bound, LotteryOutcome, estimate_bound, play_lottery
from .orientation import (
    OrientAgentState,
    OrientConfiguration,
    generate_two_hop_coloring,
    interact_or,
    is_oriented,
    segment_count,
)
from .transition import (
    TokenColor,
    create_leader_diststep,
    determine_mode,
    eliminate_leaders,
    interact_ppl,
    move_token,
)

__version__ = "0.1.0"
