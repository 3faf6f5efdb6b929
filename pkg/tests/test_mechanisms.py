import math

import pytest
from hypothesis import given, settings, strategies as st

from dpselect import (
    MECHANISMS,
    RngState,
    argmax_with_gap,
    em_exact_distribution,
    chi_square_gof,
    empirical_counts,
    intermediate_a,
    intermediate_b,
    permute_and_flip,
    pf_exact_distribution,
    report_noisy_max,
    report_noisy_max_with_gap,
    rnm_exact_quadrature,
)
from dpselect.core import ProbabilityTable
from dpselect.errors import EmptySequence, NeedAtLeastTwoOutcomes

from helpers import instances, make_instance

MECHANISM_NAMES = sorted(MECHANISMS)


def permuted_table(table, perm):
    return ProbabilityTable(
        tuple(table.labels[j] for j in perm),
        tuple(table.probabilities[j] for j in perm),
        table.provenance,
    )


class TestSingleOutcome:
    @pytest.mark.parametrize("name", MECHANISM_NAMES)
    def test_only_choice_wins(self, name):
        inst = make_instance([3.5], epsilon=0.4)
        for seed in range(5):
            result = MECHANISMS[name](inst, RngState(seed))
            assert result.index == 0
            assert result.label == "o0"

    def test_permute_and_flip_uses_one_probability_one_coin(self):
        trace = {}
        permute_and_flip(make_instance([3.5]), RngState(0), trace)
        assert trace["flips_used"] == 1
        assert trace["coin_probabilities"] == [1.0]


class TestSymmetry:
    @pytest.mark.parametrize("name", MECHANISM_NAMES)
    def test_equal_scores_uniform(self, name):
        inst = make_instance([0.0, 0.0, 0.0], epsilon=1.7)
        counts = empirical_counts(name, inst, 30_000, seed=2024)
        expected = ProbabilityTable(
            inst.quality.labels, (1 / 3, 1 / 3, 1 / 3), "exact-closed-form"
        )
        assert chi_square_gof(counts, expected, 0.001).passed

    def test_two_tied_best_coins_split_evenly(self):
        inst = make_instance([5.0, 5.0], epsilon=2.0)
        counts = empirical_counts("pf", inst, 30_000, seed=11)
        expected = ProbabilityTable(inst.quality.labels, (0.5, 0.5), "exact-closed-form")
        assert chi_square_gof(counts, expected, 0.001).passed


class TestDeterminism:
    @pytest.mark.parametrize("name", MECHANISM_NAMES)
    def test_same_seed_same_result(self, name):
        inst = make_instance([1.3, -0.7, 0.2, 0.9], epsilon=1.1)
        for seed in (0, 7, 12345):
            first = MECHANISMS[name](inst, RngState(seed))
            second = MECHANISMS[name](inst, RngState(seed))
            assert first == second


class TestShiftInvariance:
    @pytest.mark.parametrize("name", MECHANISM_NAMES)
    @pytest.mark.parametrize("shift", [-1000.0, 0.5, 1000.0])
    def test_same_seed_same_index_after_shift(self, name, shift):
        scores = [1.3, -0.7, 0.2, 0.9]
        inst = make_instance(scores, epsilon=1.1)
        shifted = make_instance([s + shift for s in scores], epsilon=1.1)
        for seed in range(20):
            assert (
                MECHANISMS[name](inst, RngState(seed)).index
                == MECHANISMS[name](shifted, RngState(seed)).index
            )


class TestDistributionalExamples:
    def test_rnm_exponential_two_point(self):
        # winner probability 1 - exp(-1)/2 from the closed-form oracle
        inst = make_instance([1.0, 0.0], epsilon=2.0, sensitivity=1.0)
        counts = empirical_counts("rnm-expo", inst, 200_000, seed=31)
        p_hat = counts[0] / sum(counts)
        target = 1.0 - math.exp(-1.0) / 2.0
        stderr = math.sqrt(target * (1.0 - target) / sum(counts))
        assert abs(p_hat - target) <= 3.0 * stderr

    def test_permute_and_flip_two_point(self):
        # runner-up wins iff its coin (probability 1/e) comes first (1/2) and heads
        inst = make_instance([1.0, 0.0], epsilon=2.0, sensitivity=1.0)
        counts = empirical_counts("pf", inst, 200_000, seed=32)
        p_hat = counts[1] / sum(counts)
        target = math.exp(-1.0) / 2.0
        stderr = math.sqrt(target * (1.0 - target) / sum(counts))
        assert abs(p_hat - target) <= 3.0 * stderr

    @pytest.mark.parametrize("name", ["alg-a", "alg-b"])
    def test_intermediates_match_permute_and_flip(self, name):
        inst = make_instance([1.0, 0.0], epsilon=2.0, sensitivity=1.0)
        counts = empirical_counts(name, inst, 200_000, seed=33)
        assert chi_square_gof(counts, pf_exact_distribution(inst), 0.001).passed

    def test_exponential_mechanism_two_point(self):
        inst = make_instance([1.0, 0.0], epsilon=2.0, sensitivity=1.0)
        counts = empirical_counts("em", inst, 200_000, seed=34)
        assert chi_square_gof(counts, em_exact_distribution(inst), 0.001).passed

    def test_exponential_mechanism_huge_scores_no_overflow(self):
        inst = make_instance([1_000_000.0, 999_999.0], epsilon=2.0, sensitivity=1.0)
        counts = empirical_counts("em", inst, 50_000, seed=35)
        reference = em_exact_distribution(
            make_instance([1.0, 0.0], epsilon=2.0, sensitivity=1.0)
        )
        reference = ProbabilityTable(
            inst.quality.labels, reference.probabilities, reference.provenance
        )
        assert chi_square_gof(counts, reference, 0.001).passed


class TestPermutationEquivariance:
    # exact-oracle mechanisms are covered in test_oracle; the samplers
    # without exact oracles get a chi-square check against a permuted
    # reference table here
    @pytest.mark.parametrize(
        "name,reference",
        [
            ("alg-a", pf_exact_distribution),
            ("alg-b", pf_exact_distribution),
            ("rnm-gumbel", em_exact_distribution),
            ("rnm-laplace", lambda inst: rnm_exact_quadrature(inst, "laplace")),
        ],
    )
    def test_sampler_follows_relabeled_reference(self, name, reference):
        scores = [0.8, -0.3, 0.1]
        perm = [2, 0, 1]
        inst = make_instance(scores, epsilon=1.5)
        relabeled = make_instance([scores[j] for j in perm], epsilon=1.5)
        counts = empirical_counts(name, relabeled, 60_000, seed=77)
        expected = permuted_table(reference(inst), perm)
        expected = ProbabilityTable(
            relabeled.quality.labels, expected.probabilities, expected.provenance
        )
        assert chi_square_gof(counts, expected, 0.001).passed


class TestTraces:
    def test_intermediate_a_candidates_reach_best_score(self):
        inst = make_instance([1.0, 0.4, -2.0], epsilon=1.0)
        trace = {}
        intermediate_a(inst, RngState(44), trace)
        best = inst.quality.best_score
        for i in trace["candidate_set"]:
            assert trace["noisy_scores"][i] >= best

    def test_intermediate_b_draws_tiebreak_noise_for_every_outcome(self):
        inst = make_instance([1.0, 0.4, -2.0, 0.9], epsilon=1.0)
        trace = {}
        intermediate_b(inst, RngState(45), trace)
        assert len(trace["tiebreak_noise"]) == len(inst.quality)
        assert len(trace["capped_scores"]) == len(inst.quality)
        assert max(trace["capped_scores"]) == inst.quality.best_score
        assert trace["candidate_set"]

    def test_permute_and_flip_trace_has_permutation(self):
        inst = make_instance([0.3, 0.1, 0.2], epsilon=1.0)
        trace = {}
        permute_and_flip(inst, RngState(46), trace)
        assert sorted(trace["permutation"]) == [0, 1, 2]
        assert trace["flips_used"] <= 3


class TestArgmaxWithGap:
    def test_plain_maximum(self):
        assert argmax_with_gap([3.2, 1.5, 0.7]) == (0, pytest.approx(1.7))

    def test_tie_breaks_to_smallest_index(self):
        assert argmax_with_gap([1.0, 1.0]) == (0, 0.0)

    def test_permuted_input(self):
        assert argmax_with_gap([0.7, 1.5, 3.2]) == (2, pytest.approx(1.7))

    def test_empty_rejected(self):
        with pytest.raises(EmptySequence):
            argmax_with_gap([])

    def test_single_value_flagged(self):
        with pytest.warns(UserWarning, match="degenerate"):
            assert argmax_with_gap([4.2]) == (0, 0.0)


class TestGapRelease:
    def test_needs_two_outcomes(self):
        with pytest.raises(NeedAtLeastTwoOutcomes):
            report_noisy_max_with_gap(make_instance([1.0]), "exponential", RngState(0))

    @pytest.mark.parametrize("kind", ["exponential", "laplace", "gumbel"])
    def test_index_marginal_matches_report_noisy_max(self, kind):
        inst = make_instance([1.0, 0.0, 0.4], epsilon=2.0)
        for seed in range(200):
            plain = report_noisy_max(inst, kind, RngState(seed))
            gapped = report_noisy_max_with_gap(inst, kind, RngState(seed))
            assert gapped.index == plain.index
            assert gapped.label == plain.label

    def test_reproducible_bitwise(self):
        inst = make_instance([0.0, 0.0], epsilon=1.0)
        a = report_noisy_max_with_gap(inst, "exponential", RngState(9))
        b = report_noisy_max_with_gap(inst, "exponential", RngState(9))
        assert (a.index, a.gap) == (b.index, b.gap)

    def test_gap_positive_with_continuous_noise(self):
        inst = make_instance([0.0, 0.0], epsilon=1.0)
        results = [
            report_noisy_max_with_gap(inst, "gumbel", RngState(seed))
            for seed in range(2000)
        ]
        assert all(r.gap > 0.0 for r in results)
        counts = [sum(1 for r in results if r.index == i) for i in range(2)]
        assert abs(counts[0] - 1000) < 150  # roughly even index marginal


class TestOutputContract:
    @given(inst=instances(), name=st.sampled_from(MECHANISM_NAMES), seed=st.integers(0, 2**32))
    @settings(max_examples=60, deadline=None)
    def test_index_in_range_and_label_consistent(self, inst, name, seed):
        result = MECHANISMS[name](inst, RngState(seed))
        assert 0 <= result.index < len(inst.quality)
        assert result.label == inst.quality.labels[result.index]
