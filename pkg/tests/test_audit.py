import math

import pytest
from hypothesis import given, settings

from dpselect import (
    NeighborPair,
    PrivacyParams,
    QualityVector,
    dominance_check,
    em_exact_distribution,
    expected_error,
    perturbed_neighbor_pairs,
    pf_exact_distribution,
    privacy_ratio_audit,
    random_instances,
)
from dpselect.core import ProbabilityTable
from dpselect.errors import (
    EmptyPairList,
    LabelMismatch,
    PairExceedsSensitivity,
    UnsupportedOracle,
)

from helpers import instances, make_instance


def pair(a, b):
    labels = tuple(f"o{i}" for i in range(len(a)))
    return NeighborPair(QualityVector(labels, a), QualityVector(labels, b))


class TestPrivacyRatioAudit:
    def test_em_swap_pair(self):
        report = privacy_ratio_audit(
            "em", [pair((1.0, 0.0), (0.0, 1.0))], PrivacyParams(2.0, 1.0)
        )
        assert report.worst_ratio == pytest.approx(math.e, rel=1e-9)
        assert report.bound == pytest.approx(math.exp(2.0), rel=1e-12)
        assert report.passed

    @pytest.mark.parametrize("oracle", ["pf", "rnm-expo", "em"])
    def test_identical_pair_ratio_one(self, oracle):
        report = privacy_ratio_audit(
            oracle, [pair((1.0, 0.5, 0.0), (1.0, 0.5, 0.0))], PrivacyParams(1.0, 1.0)
        )
        assert report.worst_ratio == 1.0
        assert report.passed

    @pytest.mark.parametrize("oracle", ["pf", "rnm-expo", "em"])
    @pytest.mark.parametrize("epsilon", [0.5, 2.0])
    def test_random_pairs_within_bound(self, oracle, epsilon):
        pairs = perturbed_neighbor_pairs(30, 1.0, k_min=2, k_max=8, seed=4)
        report = privacy_ratio_audit(pairs=pairs, oracle=oracle, params=PrivacyParams(epsilon, 1.0))
        assert report.passed
        assert report.worst_ratio <= math.exp(epsilon) * (1 + 1e-9)
        assert len(report.per_pair) == 30
        assert report.worst_ratio == max(r.ratio for r in report.per_pair)

    def test_direction_symmetric(self):
        p = pair((1.0, 0.2, -0.4), (0.3, 0.9, -0.1))
        params = PrivacyParams(1.5, 1.0)
        forward = privacy_ratio_audit("pf", [p], params)
        backward = privacy_ratio_audit("pf", [NeighborPair(p.q2, p.q1)], params)
        assert forward.worst_ratio == pytest.approx(backward.worst_ratio, rel=1e-12)

    def test_pair_exceeding_sensitivity_rejected(self):
        with pytest.raises(PairExceedsSensitivity):
            privacy_ratio_audit(
                "em", [pair((2.0, 0.0), (0.0, 0.0))], PrivacyParams(1.0, 1.0)
            )

    def test_mechanism_without_exact_oracle_rejected(self):
        with pytest.raises(UnsupportedOracle):
            privacy_ratio_audit(
                "rnm-laplace", [pair((0.0,), (0.0,))], PrivacyParams(1.0, 1.0)
            )

    def test_empty_pair_list_rejected(self):
        with pytest.raises(EmptyPairList):
            privacy_ratio_audit("em", [], PrivacyParams(1.0, 1.0))


class TestExpectedError:
    def test_em_two_point(self):
        inst = make_instance([1.0, 0.0], epsilon=2.0)
        value = expected_error(inst, em_exact_distribution(inst))
        assert value == pytest.approx(0.268941, abs=1e-6)

    def test_pf_two_point(self):
        inst = make_instance([1.0, 0.0], epsilon=2.0)
        value = expected_error(inst, pf_exact_distribution(inst))
        assert value == pytest.approx(0.183940, abs=1e-6)

    def test_one_hot_on_best_is_zero(self):
        inst = make_instance([1.0, 3.0, 0.0], epsilon=1.0)
        one_hot = ProbabilityTable(inst.quality.labels, (0.0, 1.0, 0.0), "exact-closed-form")
        assert expected_error(inst, one_hot) == 0.0

    def test_label_mismatch_rejected(self):
        inst = make_instance([1.0, 0.0], epsilon=1.0)
        other = ProbabilityTable(("x", "y"), (0.5, 0.5), "exact-closed-form")
        with pytest.raises(LabelMismatch):
            expected_error(inst, other)

    @given(inst=instances(k_min=1, k_max=6))
    @settings(max_examples=40, deadline=None)
    def test_nonnegative(self, inst):
        assert expected_error(inst, pf_exact_distribution(inst)) >= 0.0

    @pytest.mark.parametrize("shift", [-250.0, 250.0])
    def test_shift_invariant(self, shift):
        scores = [1.3, -0.7, 0.2]
        inst = make_instance(scores, epsilon=1.3)
        moved = make_instance([s + shift for s in scores], epsilon=1.3)
        base = expected_error(inst, pf_exact_distribution(inst))
        after = expected_error(moved, pf_exact_distribution(moved))
        assert after == pytest.approx(base, abs=1e-9)


class TestDominance:
    def test_two_point_values(self):
        report = dominance_check([make_instance([1.0, 0.0], epsilon=2.0)])
        record = report.per_instance[0]
        assert record.expected_error_pf == pytest.approx(0.183940, abs=1e-6)
        assert record.expected_error_em == pytest.approx(0.268941, abs=1e-6)
        assert report.dominance_violations == 0

    def test_constant_scores_zero_error_for_both(self):
        report = dominance_check([make_instance([4.0, 4.0, 4.0], epsilon=1.0)])
        record = report.per_instance[0]
        assert record.expected_error_pf == pytest.approx(0.0, abs=1e-12)
        assert record.expected_error_em == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("epsilon", [0.1, 1.0, 4.0])
    def test_no_violations_on_random_suite(self, epsilon):
        report = dominance_check(
            random_instances(100, epsilon, 1.0, k_min=2, k_max=10, seed=9)
        )
        assert report.dominance_violations == 0

    def test_strict_dominance_unless_degenerate(self):
        # separated scores: pf strictly better; constant scores or k=1: equal
        for inst in random_instances(20, 1.0, 1.0, k_min=2, k_max=6, seed=10):
            record = dominance_check([inst]).per_instance[0]
            assert record.expected_error_em - record.expected_error_pf > 1e-9
        for degenerate in (make_instance([2.0]), make_instance([1.0, 1.0, 1.0])):
            record = dominance_check([degenerate]).per_instance[0]
            assert abs(record.expected_error_em - record.expected_error_pf) <= 1e-9


class TestSuiteGenerators:
    def test_random_instances_deterministic(self):
        a = random_instances(5, 1.0, 1.0, seed=77)
        b = random_instances(5, 1.0, 1.0, seed=77)
        assert [i.quality for i in a] == [i.quality for i in b]

    def test_perturbed_pairs_stay_within_sensitivity(self):
        for p in perturbed_neighbor_pairs(50, 0.75, seed=13):
            deviation = max(abs(x - y) for x, y in zip(p.q1.scores, p.q2.scores))
            assert deviation <= 0.75
