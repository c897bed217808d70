"""Selecting-announcement QKD: protocol simulation and attack analysis.

The protocol interpolates between BB84-style and SARG-style sifting through a
selecting parameter a. This package simulates the sifting phases, analyzes
the two photon-number-splitting attacks (storage and intercept-resend with
unambiguous discrimination), and locates the distances at which each policy
loses all secrecy.
"""

from .analysis import (
    CurvePoint,
    FixedA,
    LimitReport,
    OptimalA,
    TheoremReport,
    optimize_a,
    sweep,
    ultimate_limit,
    verify_theorem,
)
from .attacks import (
    STORAGE_BASE_INFO,
    AttackKind,
    AttackResult,
    best_attack_info,
    binary_entropy,
    irud_attack,
    monte_carlo_irud,
    monte_carlo_storage,
    peres_info,
    storage_attack,
    storage_info_factor,
)
from .channel import (
    ChannelPoint,
    PulseStats,
    mu_for_a,
    poisson_pmf,
    pulse_stats,
    raw_rate,
    sifted_rate,
    transmission,
)
from .protocol import (
    Announcement,
    Branch,
    ProtocolParams,
    SessionStats,
    SiftOutcome,
    alice_prepare,
    announce,
    bob_measure,
    run_session,
    select_branch,
    sift,
)
from .qstates import (
    FourState,
    MeasBasis,
    StateVector,
    construct_irud_measurement,
    embed,
    inner,
    overlap,
    tensor_power,
)

__version__ = "0.1.0"

__all__ = [
    "Announcement",
    "AttackKind",
    "AttackResult",
    "Branch",
    "ChannelPoint",
    "CurvePoint",
    "FixedA",
    "FourState",
    "LimitReport",
    "MeasBasis",
    "OptimalA",
    "ProtocolParams",
    "PulseStats",
    "STORAGE_BASE_INFO",
    "SessionStats",
    "SiftOutcome",
    "StateVector",
    "TheoremReport",
    "alice_prepare",
    "announce",
    "best_attack_info",
    "binary_entropy",
    "bob_measure",
    "construct_irud_measurement",
    "embed",
    "inner",
    "irud_attack",
    "monte_carlo_irud",
    "monte_carlo_storage",
    "mu_for_a",
    "optimize_a",
    "overlap",
    "peres_info",
    "poisson_pmf",
    "pulse_stats",
    "raw_rate",
    "run_session",
    "select_branch",
    "sift",
    "sifted_rate",
    "storage_attack",
    "storage_info_factor",
    "sweep",
    "tensor_power",
    "transmission",
    "ultimate_limit",
    "verify_theorem",
]
