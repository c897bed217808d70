"""The selecting-announcement protocol.

Alice sends one of four states. After Bob's measurement she draws a branch:
with probability a she announces the orthogonal pair containing her state
(BB84-style sifting), otherwise one of the two nonorthogonal pairs at overlap
1/sqrt(2) (SARG-style sifting). Bob keeps orthogonal-branch outcomes that fall
inside the announced pair and nonorthogonal-branch outcomes that fall outside
it. a=1 reproduces BB84 sifting, a=0 reproduces SARG sifting, and the expected
accepted fraction on an ideal link is (1+a)/4 with zero errors.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .channel import transmission
from .qstates import SQRT_HALF, FourState, MeasBasis, overlap


class Branch(Enum):
    ORTHOGONAL = 0
    NONORTHOGONAL = 1


@dataclass(frozen=True)
class ProtocolParams:
    """Session parameters: selecting probability, source and link settings."""

    a: float
    mu: float = 0.1
    alpha_db_per_km: float = 0.25
    length_km: float = 0.0
    eta_d: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.a <= 1.0:
            raise ValueError("selecting parameter a must be in [0, 1]")
        if self.mu <= 0:
            raise ValueError("mu must be > 0")
        if self.alpha_db_per_km < 0:
            raise ValueError("attenuation must be >= 0 dB/km")
        if self.length_km < 0:
            raise ValueError("fiber length must be >= 0 km")
        if not 0.0 < self.eta_d <= 1.0:
            raise ValueError("eta_d must be in (0, 1]")


@dataclass(frozen=True)
class Announcement:
    """Alice's public pair announcement for one detected pulse."""

    pair: frozenset[FourState]
    branch: Branch

    def __post_init__(self) -> None:
        if len(self.pair) != 2:
            raise ValueError("announced pair must contain exactly two states")
        s1, s2 = sorted(self.pair, key=lambda s: s.value)
        expected = 0.0 if self.branch is Branch.ORTHOGONAL else SQRT_HALF
        if abs(overlap(s1, s2) - expected) > 1e-12:
            raise ValueError(f"pair overlap does not match branch {self.branch.name}")


@dataclass(frozen=True)
class SiftOutcome:
    accepted: bool
    alice_bit: int | None
    bob_bit: int | None

    def __post_init__(self) -> None:
        bits = (self.alice_bit, self.bob_bit)
        if self.accepted:
            if any(b not in (0, 1) for b in bits):
                raise ValueError("accepted outcomes carry bits in {0, 1}")
        elif bits != (None, None):
            raise ValueError("rejected outcomes carry no bits")


@dataclass(frozen=True)
class SessionStats:
    """Tallies of one session. Addition merges tallies from partitioned runs."""

    pulses_sent: int
    detections: int
    sifted: int
    errors: int
    eve_known: int = 0

    def __post_init__(self) -> None:
        counts = (self.pulses_sent, self.detections, self.sifted, self.errors, self.eve_known)
        if any(c < 0 for c in counts):
            raise ValueError("tallies must be nonnegative")
        if not self.errors <= self.sifted <= self.detections <= self.pulses_sent:
            raise ValueError("tallies must satisfy errors <= sifted <= detections <= pulses_sent")

    def __add__(self, other: "SessionStats") -> "SessionStats":
        return SessionStats(
            self.pulses_sent + other.pulses_sent,
            self.detections + other.detections,
            self.sifted + other.sifted,
            self.errors + other.errors,
            self.eve_known + other.eve_known,
        )

    @property
    def sifted_fraction(self) -> float:
        return self.sifted / self.pulses_sent if self.pulses_sent else 0.0


def alice_prepare(rng: np.random.Generator) -> FourState:
    """Draw one of the four signal states uniformly."""
    return FourState(int(rng.integers(4)))


def bob_measure(sent: FourState, basis: MeasBasis, rng: np.random.Generator) -> FourState:
    """Projective measurement of the incoming state in the chosen basis.

    Same-basis measurements reproduce the sent state; cross-basis outcomes are
    an even coin over the two basis states (overlap magnitude 1/sqrt(2)).
    """
    if sent.basis is basis:
        return sent
    return FourState((basis.value << 1) | int(rng.integers(2)))


def select_branch(a: float, rng: np.random.Generator) -> Branch:
    """Alice's branch draw: ORTHOGONAL with probability a."""
    if not 0.0 <= a <= 1.0:
        raise ValueError("selecting parameter a must be in [0, 1]")
    return Branch.ORTHOGONAL if rng.random() < a else Branch.NONORTHOGONAL


def announce(sent: FourState, branch: Branch, rng: np.random.Generator) -> Announcement:
    """Build the public pair for the drawn branch.

    The orthogonal branch announces the basis pair of the sent state. The
    nonorthogonal branch picks one of the two opposite-basis partners evenly.
    """
    if branch is Branch.ORTHOGONAL:
        partner = sent.orthogonal_partner()
    else:
        partner = sent.nonorthogonal_partners()[int(rng.integers(2))]
    return Announcement(frozenset((sent, partner)), branch)


def sift(announcement: Announcement, bob_state: FourState, sent: FourState) -> SiftOutcome:
    """Bob's acceptance rule and both parties' bit assignments.

    Orthogonal branch: accept iff Bob's outcome lies in the pair; bits follow
    the sign convention (+ -> 0, - -> 1). Nonorthogonal branch: accept iff the
    outcome lies outside the pair; Bob infers the unique pair member at
    overlap 1/sqrt(2) from his outcome and both decode by basis (x -> 0,
    z -> 1).
    """
    if sent not in announcement.pair:
        raise ValueError("sent state must belong to the announced pair")
    if announcement.branch is Branch.ORTHOGONAL:
        if bob_state not in announcement.pair:
            return SiftOutcome(False, None, None)
        return SiftOutcome(True, sent.sign, bob_state.sign)

    if bob_state in announcement.pair:
        return SiftOutcome(False, None, None)
    (partner,) = announcement.pair - {sent}
    inferred = partner if bob_state.basis is sent.basis else sent
    return SiftOutcome(True, sent.basis.value, inferred.basis.value)


def run_session(params: ProtocolParams, n_pulses: int, rng: np.random.Generator) -> SessionStats:
    """Run single-photon pulses through the lossy link and sift.

    Each pulse survives with probability eta_d * eta_rho; announcements are
    made only for detected pulses. With the default lossless settings the
    accepted fraction converges to (1+a)/4 and errors stay at zero.
    """
    if n_pulses < 0:
        raise ValueError("n_pulses must be >= 0")
    survival = params.eta_d * transmission(params.alpha_db_per_km, params.length_km).eta_rho

    total = SessionStats(0, 0, 0, 0, 0)
    chunk = 1 << 20
    for start in range(0, n_pulses, chunk):
        n = min(chunk, n_pulses - start)
        total = total + _session_chunk(params.a, survival, n, rng)
    return total


def _session_chunk(a: float, survival: float, n: int, rng: np.random.Generator) -> SessionStats:
    sent = rng.integers(0, 4, n)
    detected = rng.random(n) < survival

    basis = rng.integers(0, 2, n)
    cross_sign = rng.integers(0, 2, n)
    same_basis = basis == (sent >> 1)
    bob = np.where(same_basis, sent, (basis << 1) | cross_sign)

    orth = rng.random(n) < a
    partner_pick = rng.integers(0, 2, n)
    partner = (((sent >> 1) ^ 1) << 1) | partner_pick

    in_pair_orth = (bob >> 1) == (sent >> 1)
    accepted_orth = detected & orth & in_pair_orth
    errors_orth = accepted_orth & ((bob & 1) != (sent & 1))

    outside_pair = (bob != sent) & (bob != partner)
    accepted_non = detected & ~orth & outside_pair
    inferred = np.where((bob >> 1) == (sent >> 1), partner, sent)
    errors_non = accepted_non & ((inferred >> 1) != (sent >> 1))

    sifted = int(accepted_orth.sum() + accepted_non.sum())
    errors = int(errors_orth.sum() + errors_non.sum())
    return SessionStats(n, int(detected.sum()), sifted, errors, 0)
