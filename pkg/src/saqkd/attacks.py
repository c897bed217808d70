"""Photon-number-splitting attacks against the selecting-announcement protocol.

Two eavesdropping strategies are analyzed for a Poisson source over a lossy
fiber, both rate-camouflaged (Eve owns a lossless link and tunes her attack
probability q so Bob's detection rate is unchanged):

* storage attack: multiphoton pulses lose one photon to Eve's quantum memory;
  after the announcement she measures it, learning orthogonal-branch bits
  exactly and nonorthogonal-branch bits at the two-state discrimination bound.
* IRUD attack (intercept-resend with unambiguous discrimination): pulses with
  at least three photons are measured collectively; a conclusive result (which
  identifies the state without error and happens with probability 1/2) is
  resent as a fresh photon that Eve knows completely.

Closed forms keep the leading p2/p3 photon-number terms. The Monte-Carlo
counterparts simulate the exact per-pulse physics and are used to validate
the closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .channel import mu_for_a, poisson_pmf
from .qstates import SQRT_HALF, irud_outcome_probabilities

_CHUNK = 1 << 20


class AttackKind(Enum):
    STORAGE = "storage"
    IRUD = "irud"


@dataclass(frozen=True)
class AttackResult:
    """Outcome of one attack evaluation, analytic or simulated."""

    attack: AttackKind
    q: float
    delivered_rate: float
    eve_info: float
    saturated: bool

    def __post_init__(self) -> None:
        if not 0.0 <= self.q <= 1.0:
            raise ValueError("attack probability q must be in [0, 1]")
        if not 0.0 <= self.eve_info <= 1.0 + 1e-12:
            raise ValueError("eve_info must be in [0, 1]")
        if self.delivered_rate < 0.0:
            raise ValueError("delivered_rate must be >= 0")


def binary_entropy(x: float) -> float:
    """Shannon entropy of a bit with bias x, in bits."""
    if not 0.0 <= x <= 1.0:
        raise ValueError("binary_entropy argument must be in [0, 1]")
    if x in (0.0, 1.0):
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def peres_info(chi: float) -> float:
    """Accessible information about a bit carried by two equiprobable pure
    states with overlap magnitude chi: 1 - H(P) at the optimal-measurement
    success probability P = (1 + sqrt(1 - chi^2)) / 2."""
    if not 0.0 <= chi <= 1.0:
        raise ValueError("overlap chi must be in [0, 1]")
    p = 0.5 * (1.0 + math.sqrt(1.0 - chi * chi))
    return 1.0 - binary_entropy(p)


# Success probability of optimally distinguishing an announced nonorthogonal
# pair, and the information it leaks per stored photon.
PAIR_DISCRIMINATION_PROB = 0.5 * (1.0 + SQRT_HALF)
STORAGE_BASE_INFO = peres_info(SQRT_HALF)


def storage_info_factor(a: float) -> float:
    """Eve's information per stored photon once the branch mix is a:
    orthogonal announcements leak the full bit, nonorthogonal ones leak
    peres_info(1/sqrt(2))."""
    if not 0.0 <= a <= 1.0:
        raise ValueError("selecting parameter a must be in [0, 1]")
    return a + (1.0 - a) * STORAGE_BASE_INFO


def _validate_attack_args(eta_rho: float, mu: float) -> None:
    if not 0.0 < eta_rho <= 1.0:
        raise ValueError("eta_rho must be in (0, 1]")
    if mu <= 0:
        raise ValueError("mu must be > 0")


def storage_attack(a: float, eta_rho: float, mu: float) -> AttackResult:
    """First-order storage-attack analysis at fixed branch mix a.

    Eve's attack probability solves the rate match mu*eta_rho = (1-q)*mu +
    q*p2 and clamps to 1 on long fibers. Unsaturated, her information per
    sifted bit is (1/eta_rho - 1) * storage_info_factor(a) / (2/(e^-mu mu)-1);
    once saturated every sifted bit comes from a stored photon, so the factor
    itself is reached. Bob's delivered rate stays at eta_rho*mu either way
    (surplus deliveries are discarded in saturation).
    """
    _validate_attack_args(eta_rho, mu)
    info_cap = storage_info_factor(a)
    p2 = poisson_pmf(2, mu)
    q = mu * (1.0 - eta_rho) / (mu - p2)
    if q >= 1.0:
        return AttackResult(AttackKind.STORAGE, 1.0, eta_rho * mu, info_cap, True)
    info = (1.0 / eta_rho - 1.0) * info_cap / (2.0 / (math.exp(-mu) * mu) - 1.0)
    return AttackResult(AttackKind.STORAGE, q, eta_rho * mu, info, False)


def irud_attack(eta_rho: float, mu: float) -> AttackResult:
    """First-order IRUD-attack analysis.

    Rate matching gives q = mu*(1-eta_rho)/(mu - p3/2); unsaturated
    information per sifted bit is (1/eta_rho - 1)/(12/(e^-mu mu^2) - 1), and
    the clamp at q=1 coincides with full information since every delivered
    bit then originates from a conclusively identified pulse.
    """
    _validate_attack_args(eta_rho, mu)
    attacked_rate = 0.5 * poisson_pmf(3, mu)
    q = mu * (1.0 - eta_rho) / (mu - attacked_rate)
    if q >= 1.0:
        return AttackResult(AttackKind.IRUD, 1.0, eta_rho * mu, 1.0, True)
    info = (1.0 / eta_rho - 1.0) / (12.0 / (math.exp(-mu) * mu * mu) - 1.0)
    return AttackResult(AttackKind.IRUD, q, eta_rho * mu, info, False)


def best_attack_info(a: float, eta_rho: float, mu_b: float) -> float:
    """Eve's information per sifted bit under the stronger of the two attacks,
    with the source intensity equalized to 2*mu_b/(1+a)."""
    mu = mu_for_a(a, mu_b)
    return max(storage_attack(a, eta_rho, mu).eve_info, irud_attack(eta_rho, mu).eve_info)


# --- exact photon-number sums used by the simulated eavesdroppers ---------


def lossless_delivered_exact(mu: float, eta_d: float = 1.0) -> float:
    """Detection probability of an unattacked pulse forwarded losslessly:
    sum_n p_n (1 - (1-eta_d)^n) = 1 - e^(-eta_d mu)."""
    return -math.expm1(-eta_d * mu)


def storage_delivered_exact(mu: float, eta_d: float = 1.0) -> float:
    """Detection probability of a storage-attacked pulse,
    sum_{n>=2} p_n (1 - (1-eta_d)^(n-1))."""
    t = 1.0 - eta_d
    p2plus = 1.0 - math.exp(-mu) * (1.0 + mu)
    if t == 0.0:
        return p2plus
    return p2plus - math.exp(-mu) * (math.exp(mu * t) - 1.0 - mu * t) / t


def irud_delivered_exact(mu: float, eta_d: float = 1.0, p_ok: float = 0.5) -> float:
    """Detection probability of an IRUD-attacked pulse: a conclusive
    measurement on an n>=3 pulse resends one photon."""
    p3plus = 1.0 - math.exp(-mu) * (1.0 + mu + 0.5 * mu * mu)
    return p_ok * eta_d * p3plus


def _matched_q(r_lossless: float, r_attacked: float, r_raw: float) -> tuple[float, float]:
    """Attack probability that keeps Bob's exact detection rate at r_raw,
    plus the thinning factor applied to attacked deliveries when q clamps."""
    if r_raw >= r_lossless:
        return 0.0, 1.0
    q = (r_lossless - r_raw) / (r_lossless - r_attacked)
    if q >= 1.0:
        return 1.0, min(1.0, r_raw / r_attacked)
    return q, 1.0


# --- Monte-Carlo eavesdroppers ---------------------------------------------


@dataclass(frozen=True)
class StorageSimOutcome:
    """Tallies of a simulated storage attack."""

    result: AttackResult
    pulses: int
    detections: int
    sifted: int
    orth_attacked: int
    orth_correct: int
    nonorth_attacked: int
    nonorth_correct: int


@dataclass(frozen=True)
class IrudSimOutcome:
    """Tallies of a simulated IRUD attack."""

    result: AttackResult
    pulses: int
    detections: int
    sifted: int
    attacked_sifted: int
    eve_correct: int
    measured: int
    conclusive: int
    misidentified: int


def sample_irud_outcomes(states: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Draw a measurement outcome for each three-photon pulse state.

    states holds FourState codes; the return value holds 0..3 for a
    conclusive identification and 4 for the inconclusive result, with
    probabilities taken from the constructed POVM, not hard-coded.
    """
    cum = np.cumsum(irud_outcome_probabilities(), axis=1)
    cum[:, -1] = 1.0  # guards float rounding in the last bin
    u = rng.random(np.asarray(states).size)
    return (u[:, None] >= cum[np.asarray(states)]).sum(axis=1)


def monte_carlo_storage(
    a: float,
    eta_rho: float,
    mu: float,
    n_pulses: int,
    rng: np.random.Generator,
    eta_d: float = 1.0,
    q: float | None = None,
) -> StorageSimOutcome:
    """Per-pulse simulation of the storage attack.

    Eve intercepts a fraction q of pulses at the source: single photons are
    blocked, multiphoton pulses forward n-1 photons over her lossless link,
    and unattacked pulses are forwarded losslessly in full. Unless q is
    forced, it is solved against the exact photon-number sums so Bob's rate
    matches the honest fiber. After sifting Eve reads orthogonal-branch bits
    exactly and guesses nonorthogonal-branch bits with the discrimination
    probability (1 + 1/sqrt(2))/2. The information estimate applies
    1 - H2(empirical correct fraction) per branch, weighted by the branch's
    share of the sifted key.
    """
    _validate_attack_args(eta_rho, mu)
    if not 0.0 <= a <= 1.0:
        raise ValueError("selecting parameter a must be in [0, 1]")
    if not 0.0 < eta_d <= 1.0:
        raise ValueError("eta_d must be in (0, 1]")
    if n_pulses < 0:
        raise ValueError("n_pulses must be >= 0")

    r_raw = lossless_delivered_exact(eta_rho * mu, eta_d)
    matched_q, thin = _matched_q(
        lossless_delivered_exact(mu, eta_d), storage_delivered_exact(mu, eta_d), r_raw
    )
    if q is None:
        q = matched_q
    elif not 0.0 <= q <= 1.0:
        raise ValueError("forced q must be in [0, 1]")
    else:
        thin = 1.0

    detections = sifted = 0
    orth_att = orth_corr = non_att = non_corr = 0
    for start in range(0, n_pulses, _CHUNK):
        n = min(_CHUNK, n_pulses - start)
        sent = rng.integers(0, 4, n)
        photons = rng.poisson(mu, n)
        attacked = rng.random(n) < q

        kept_exponent = np.clip(photons - 1, 0, None)
        p_detect = np.where(
            attacked,
            np.where(photons >= 2, 1.0 - (1.0 - eta_d) ** kept_exponent, 0.0),
            1.0 - (1.0 - eta_d) ** photons,
        )
        delivered = rng.random(n) < p_detect
        if thin < 1.0:
            delivered &= ~attacked | (rng.random(n) < thin)

        basis = rng.integers(0, 2, n)
        cross_sign = rng.integers(0, 2, n)
        bob = np.where(basis == (sent >> 1), sent, (basis << 1) | cross_sign)
        orth = rng.random(n) < a
        partner = (((sent >> 1) ^ 1) << 1) | rng.integers(0, 2, n)

        accepted_orth = delivered & orth & ((bob >> 1) == (sent >> 1))
        accepted_non = delivered & ~orth & (bob != sent) & (bob != partner)
        guessed = rng.random(n) < PAIR_DISCRIMINATION_PROB

        detections += int(delivered.sum())
        sifted += int(accepted_orth.sum() + accepted_non.sum())
        branch_orth = accepted_orth & attacked
        branch_non = accepted_non & attacked
        orth_att += int(branch_orth.sum())
        orth_corr += int(branch_orth.sum())  # announced basis reveals the bit
        non_att += int(branch_non.sum())
        non_corr += int((branch_non & guessed).sum())

    info = _branch_mixed_info(sifted, ((orth_att, orth_corr), (non_att, non_corr)))
    rate = detections / n_pulses if n_pulses else 0.0
    result = AttackResult(AttackKind.STORAGE, q, rate, info, q >= 1.0)
    return StorageSimOutcome(result, n_pulses, detections, sifted, orth_att, orth_corr, non_att, non_corr)


def monte_carlo_irud(
    a: float,
    eta_rho: float,
    mu: float,
    n_pulses: int,
    rng: np.random.Generator,
    eta_d: float = 1.0,
    q: float | None = None,
) -> IrudSimOutcome:
    """Per-pulse simulation of the IRUD attack.

    Eve measures attacked pulses carrying at least three photons with the
    constructed POVM; conclusive outcomes are resent as one fresh photon in
    the identified state and everything else is discarded. Unattacked pulses
    travel her lossless link in full. Eve knows resent states completely, so
    her information per attacked sifted bit is 1 up to the (empirically
    absent) misidentification rate.
    """
    _validate_attack_args(eta_rho, mu)
    if not 0.0 <= a <= 1.0:
        raise ValueError("selecting parameter a must be in [0, 1]")
    if not 0.0 < eta_d <= 1.0:
        raise ValueError("eta_d must be in (0, 1]")
    if n_pulses < 0:
        raise ValueError("n_pulses must be >= 0")

    table = irud_outcome_probabilities()
    p_ok = float(table[:, :4].sum(axis=1).mean())
    r_raw = lossless_delivered_exact(eta_rho * mu, eta_d)
    matched_q, thin = _matched_q(
        lossless_delivered_exact(mu, eta_d), irud_delivered_exact(mu, eta_d, p_ok), r_raw
    )
    if q is None:
        q = matched_q
    elif not 0.0 <= q <= 1.0:
        raise ValueError("forced q must be in [0, 1]")
    else:
        thin = 1.0

    detections = sifted = att_sifted = eve_correct = 0
    measured_total = conclusive_total = misidentified = 0
    for start in range(0, n_pulses, _CHUNK):
        n = min(_CHUNK, n_pulses - start)
        sent = rng.integers(0, 4, n)
        photons = rng.poisson(mu, n)
        attacked = rng.random(n) < q

        measured_idx = np.flatnonzero(attacked & (photons >= 3))
        outcomes = sample_irud_outcomes(sent[measured_idx], rng)
        conclusive = outcomes < 4
        resent_idx = measured_idx[conclusive]
        identified = outcomes[conclusive]
        measured_total += int(measured_idx.size)
        conclusive_total += int(conclusive.sum())
        misidentified += int((identified != sent[resent_idx]).sum())

        p_detect = np.where(attacked, 0.0, 1.0 - (1.0 - eta_d) ** photons)
        p_detect[resent_idx] = eta_d
        delivered = rng.random(n) < p_detect
        if thin < 1.0:
            delivered &= ~attacked | (rng.random(n) < thin)

        arriving = sent.copy()
        arriving[resent_idx] = identified
        known = np.zeros(n, dtype=bool)
        known[resent_idx] = identified == sent[resent_idx]

        basis = rng.integers(0, 2, n)
        cross_sign = rng.integers(0, 2, n)
        bob = np.where(basis == (arriving >> 1), arriving, (basis << 1) | cross_sign)
        orth = rng.random(n) < a
        partner = (((sent >> 1) ^ 1) << 1) | rng.integers(0, 2, n)

        accepted = delivered & (
            (orth & ((bob >> 1) == (sent >> 1)))
            | (~orth & (bob != sent) & (bob != partner))
        )
        attacked_accepted = accepted & attacked

        detections += int(delivered.sum())
        sifted += int(accepted.sum())
        att_sifted += int(attacked_accepted.sum())
        eve_correct += int((attacked_accepted & known).sum())

    info = _branch_mixed_info(sifted, ((att_sifted, eve_correct),))
    rate = detections / n_pulses if n_pulses else 0.0
    result = AttackResult(AttackKind.IRUD, q, rate, info, q >= 1.0)
    return IrudSimOutcome(
        result, n_pulses, detections, sifted, att_sifted, eve_correct,
        measured_total, conclusive_total, misidentified,
    )


def _branch_mixed_info(sifted: int, branches: tuple[tuple[int, int], ...]) -> float:
    if sifted == 0:
        return 0.0
    info = 0.0
    for count, correct in branches:
        if count:
            info += count / sifted * (1.0 - binary_entropy(correct / count))
    return min(info, 1.0)
