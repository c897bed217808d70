import math

import numpy as np
import pytest

from saqkd.protocol import (
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
from saqkd.qstates import FourState, MeasBasis

# df=3 chi-square critical value at the 99.9th percentile
CHI2_CRITICAL = 16.266


def honest_outcomes(sent: FourState, basis: MeasBasis) -> list[tuple[FourState, float]]:
    if sent.basis is basis:
        return [(sent, 1.0)]
    return [(FourState((basis.value << 1) | s), 0.5) for s in (0, 1)]


def enumerate_sift(a: float) -> tuple[float, float]:
    """Exact acceptance and error mass over every (state, basis, branch, pair) path."""
    accepted = errors = 0.0
    for sent in FourState:
        for basis in MeasBasis:
            for bob, p_bob in honest_outcomes(sent, basis):
                branches = [
                    (Branch.ORTHOGONAL, a, [(sent.orthogonal_partner(), 1.0)]),
                    (
                        Branch.NONORTHOGONAL,
                        1.0 - a,
                        [(p, 0.5) for p in sent.nonorthogonal_partners()],
                    ),
                ]
                for branch, p_branch, partners in branches:
                    for partner, p_partner in partners:
                        outcome = sift(
                            Announcement(frozenset((sent, partner)), branch), bob, sent
                        )
                        weight = 0.25 * 0.5 * p_bob * p_branch * p_partner
                        if outcome.accepted:
                            accepted += weight
                            if outcome.alice_bit != outcome.bob_bit:
                                errors += weight
    return accepted, errors


class TestAlicePrepare:
    def test_uniform_over_four_states(self):
        rng = np.random.default_rng(11)
        counts = np.zeros(4)
        for _ in range(40_000):
            counts[alice_prepare(rng).value] += 1
        expected = counts.sum() / 4.0
        chi2 = float(((counts - expected) ** 2 / expected).sum())
        assert chi2 < CHI2_CRITICAL


class TestBobMeasure:
    def test_same_basis_is_deterministic(self):
        rng = np.random.default_rng(0)
        for sent in FourState:
            for _ in range(50):
                assert bob_measure(sent, sent.basis, rng) is sent

    def test_outcome_lies_in_measured_basis(self):
        rng = np.random.default_rng(1)
        for sent in FourState:
            for basis in MeasBasis:
                for _ in range(20):
                    assert bob_measure(sent, basis, rng).basis is basis

    def test_cross_basis_is_balanced(self):
        rng = np.random.default_rng(2)
        n = 100_000
        plus = sum(
            bob_measure(FourState.PLUS_Z, MeasBasis.X, rng).sign == 0 for _ in range(n)
        )
        sigma = math.sqrt(0.25 / n)
        assert abs(plus / n - 0.5) < 3 * sigma


class TestSelectBranch:
    def test_degenerate_probabilities(self):
        rng = np.random.default_rng(3)
        assert all(select_branch(0.0, rng) is Branch.NONORTHOGONAL for _ in range(10_000))
        assert all(select_branch(1.0, rng) is Branch.ORTHOGONAL for _ in range(10_000))

    def test_intermediate_probability(self):
        rng = np.random.default_rng(4)
        n = 1_000_000
        orth = sum(select_branch(0.5, rng) is Branch.ORTHOGONAL for _ in range(n))
        assert abs(orth / n - 0.5) < 3 * math.sqrt(0.25 / n)

    def test_rejects_out_of_range(self):
        rng = np.random.default_rng(5)
        with pytest.raises(ValueError):
            select_branch(1.2, rng)


class TestAnnounce:
    def test_orthogonal_pair_is_the_basis_pair(self):
        rng = np.random.default_rng(6)
        for sent in FourState:
            ann = announce(sent, Branch.ORTHOGONAL, rng)
            assert ann.pair == frozenset((sent, sent.orthogonal_partner()))

    def test_nonorthogonal_pair_covers_both_choices(self):
        rng = np.random.default_rng(7)
        for sent in FourState:
            candidates = {
                frozenset((sent, p)) for p in sent.nonorthogonal_partners()
            }
            seen = {announce(sent, Branch.NONORTHOGONAL, rng).pair for _ in range(200)}
            assert seen == candidates

    def test_announcement_validates_pair_against_branch(self):
        with pytest.raises(ValueError):
            Announcement(
                frozenset((FourState.PLUS_X, FourState.MINUS_X)), Branch.NONORTHOGONAL
            )
        with pytest.raises(ValueError):
            Announcement(
                frozenset((FourState.PLUS_X, FourState.PLUS_Z)), Branch.ORTHOGONAL
            )
        with pytest.raises(ValueError):
            Announcement(frozenset((FourState.PLUS_X,)), Branch.ORTHOGONAL)


class TestSift:
    def test_orthogonal_match(self):
        ann = Announcement(frozenset((FourState.PLUS_X, FourState.MINUS_X)), Branch.ORTHOGONAL)
        outcome = sift(ann, FourState.PLUS_X, FourState.PLUS_X)
        assert outcome == SiftOutcome(True, 0, 0)

    def test_orthogonal_flip_shows_as_error(self):
        ann = Announcement(frozenset((FourState.PLUS_X, FourState.MINUS_X)), Branch.ORTHOGONAL)
        outcome = sift(ann, FourState.MINUS_X, FourState.PLUS_X)
        assert outcome == SiftOutcome(True, 0, 1)

    def test_orthogonal_rejects_outside_pair(self):
        ann = Announcement(frozenset((FourState.PLUS_X, FourState.MINUS_X)), Branch.ORTHOGONAL)
        assert not sift(ann, FourState.PLUS_Z, FourState.PLUS_X).accepted

    def test_nonorthogonal_accepts_outside_pair(self):
        ann = Announcement(frozenset((FourState.PLUS_X, FourState.PLUS_Z)), Branch.NONORTHOGONAL)
        outcome = sift(ann, FourState.MINUS_Z, FourState.PLUS_X)
        assert outcome == SiftOutcome(True, 0, 0)
        outcome = sift(ann, FourState.MINUS_X, FourState.PLUS_Z)
        assert outcome == SiftOutcome(True, 1, 1)

    def test_nonorthogonal_rejects_inside_pair(self):
        ann = Announcement(frozenset((FourState.PLUS_X, FourState.PLUS_Z)), Branch.NONORTHOGONAL)
        assert not sift(ann, FourState.PLUS_X, FourState.PLUS_X).accepted
        assert not sift(ann, FourState.PLUS_Z, FourState.PLUS_X).accepted

    def test_sent_state_must_belong_to_pair(self):
        ann = Announcement(frozenset((FourState.PLUS_X, FourState.PLUS_Z)), Branch.NONORTHOGONAL)
        with pytest.raises(ValueError):
            sift(ann, FourState.MINUS_Z, FourState.MINUS_X)

    @pytest.mark.parametrize("a", [0.0, 0.3, 0.5, 0.77, 1.0])
    def test_exhaustive_acceptance_matches_closed_form(self, a):
        accepted, errors = enumerate_sift(a)
        assert accepted == pytest.approx((1.0 + a) / 4.0, abs=1e-12)
        assert errors == 0.0


class TestSiftOutcomeInvariants:
    def test_accepted_requires_bits(self):
        with pytest.raises(ValueError):
            SiftOutcome(True, None, None)

    def test_rejected_forbids_bits(self):
        with pytest.raises(ValueError):
            SiftOutcome(False, 0, 1)


class TestSessionStats:
    def test_addition_merges_tallies(self):
        total = SessionStats(10, 8, 4, 1, 2) + SessionStats(5, 5, 3, 0, 1)
        assert total == SessionStats(15, 13, 7, 1, 3)

    def test_ordering_invariant(self):
        with pytest.raises(ValueError):
            SessionStats(pulses_sent=5, detections=6, sifted=0, errors=0)
        with pytest.raises(ValueError):
            SessionStats(pulses_sent=5, detections=3, sifted=4, errors=0)
        with pytest.raises(ValueError):
            SessionStats(pulses_sent=5, detections=3, sifted=2, errors=3)
        with pytest.raises(ValueError):
            SessionStats(pulses_sent=-1, detections=0, sifted=0, errors=0)

    def test_sifted_fraction(self):
        assert SessionStats(8, 8, 2, 0).sifted_fraction == 0.25
        assert SessionStats(0, 0, 0, 0).sifted_fraction == 0.0


class TestRunSession:
    @pytest.mark.parametrize("a", [0.0, 0.5, 1.0])
    def test_ideal_link_acceptance(self, a):
        n = 400_000
        stats = run_session(ProtocolParams(a=a), n, np.random.default_rng(42))
        assert stats.pulses_sent == n
        assert stats.detections == n
        assert stats.errors == 0
        p = (1.0 + a) / 4.0
        sigma = math.sqrt(p * (1.0 - p) / n)
        assert abs(stats.sifted_fraction - p) < 3 * sigma

    def test_zero_errors_across_a_grid(self):
        for a in (0.0, 0.25, 0.5, 0.75, 1.0):
            stats = run_session(ProtocolParams(a=a), 100_000, np.random.default_rng(9))
            assert stats.errors == 0

    def test_lossy_link_detection_rate(self):
        params = ProtocolParams(a=0.5, length_km=40.0, eta_d=0.8)
        n = 400_000
        stats = run_session(params, n, np.random.default_rng(10))
        survival = 0.8 * 0.1
        sigma = math.sqrt(survival * (1.0 - survival) / n)
        assert abs(stats.detections / n - survival) < 3 * sigma
        assert stats.errors == 0

    def test_deterministic_for_fixed_seed(self):
        params = ProtocolParams(a=0.3, length_km=20.0)
        first = run_session(params, 50_000, np.random.default_rng(77))
        second = run_session(params, 50_000, np.random.default_rng(77))
        assert first == second

    def test_zero_pulses(self):
        stats = run_session(ProtocolParams(a=0.5), 0, np.random.default_rng(0))
        assert stats == SessionStats(0, 0, 0, 0, 0)

    def test_rejects_negative_count(self):
        with pytest.raises(ValueError):
            run_session(ProtocolParams(a=0.5), -1, np.random.default_rng(0))


class TestProtocolParams:
    def test_rejects_bad_values(self):
        with pytest.raises(ValueError):
            ProtocolParams(a=1.2)
        with pytest.raises(ValueError):
            ProtocolParams(a=0.5, mu=0.0)
        with pytest.raises(ValueError):
            ProtocolParams(a=0.5, eta_d=0.0)
        with pytest.raises(ValueError):
            ProtocolParams(a=0.5, length_km=-1.0)
