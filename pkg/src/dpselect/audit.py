"""Executable verification of the privacy guarantee and the utility
dominance claim, built on the exact oracles.

Privacy auditing works only through exact output distributions: Monte
Carlo estimates of per-outcome probability ratios produce false alarms at
any realistic sample size, so mechanisms without an exact oracle are
rejected rather than audited approximately. The audit maximizes the
probability ratio over all outcomes and both directions for each supplied
neighbor pair; it checks the supplied evidence, it does not quantify over
all neighboring datasets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import (
    NeighborPair,
    PrivacyParams,
    ProbabilityTable,
    QualityVector,
    ValidatedInstance,
    validate_instance,
)
from .errors import (
    EmptyPairList,
    LabelMismatch,
    PairExceedsSensitivity,
    UnsupportedOracle,
)
from .oracle import EXACT_ORACLES, em_exact_distribution, pf_exact_distribution

# multiplicative slack on the e^eps bound, absorbing oracle round-off
RATIO_SLACK = 1e-9
# slack for pf <= em comparisons of expected error
DOMINANCE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class PairAudit:
    """Worst per-outcome probability ratio observed for one neighbor pair."""

    pair_index: int
    worst_outcome_label: str
    ratio: float


@dataclass(frozen=True)
class AuditReport:
    """Outcome of a privacy-ratio audit over a batch of neighbor pairs."""

    per_pair: tuple[PairAudit, ...]
    worst_ratio: float
    bound: float
    passed: bool


@dataclass(frozen=True)
class UtilityRecord:
    instance_id: int
    expected_error_pf: float
    expected_error_em: float


@dataclass(frozen=True)
class UtilityReport:
    """Expected selection error of permute-and-flip vs the exponential
    mechanism across a suite of instances."""

    per_instance: tuple[UtilityRecord, ...]
    dominance_violations: int


def _directional_ratio(a: float, b: float) -> float:
    # 0/0 means the outcome is unreachable under both datasets: ratio 1.
    # Positive mass against zero mass can never satisfy a finite bound.
    if a == 0.0 and b == 0.0:
        return 1.0
    if a == 0.0 or b == 0.0:
        return math.inf
    return max(a / b, b / a)


def privacy_ratio_audit(
    oracle: str,
    pairs: Sequence[NeighborPair],
    params: PrivacyParams,
) -> AuditReport:
    """Check the per-outcome probability ratios of a mechanism's exact
    output distributions against the e^eps bound, over the given pairs.

    oracle names a mechanism with an exact oracle: one of "pf", "rnm-expo",
    "em". Every pair must stay within the declared sensitivity per
    outcome; a violating pair is rejected, not silently skipped. The check
    is direction-symmetric and the report lists pairs in input order.
    """
    try:
        exact = EXACT_ORACLES[oracle]
    except (KeyError, TypeError):
        raise UnsupportedOracle(
            f"{oracle!r} has no exact output-distribution oracle; "
            f"expected one of {sorted(EXACT_ORACLES)}"
        ) from None
    pairs = list(pairs)
    if not pairs:
        raise EmptyPairList("need at least one neighbor pair to audit")

    per_pair = []
    for pair_index, pair in enumerate(pairs):
        deviation = max(
            abs(a - b) for a, b in zip(pair.q1.scores, pair.q2.scores)
        )
        # tiny relative slack so a pair constructed as q + u with |u| <= delta
        # is not rejected over the last-ulp rounding of q + u
        if deviation > params.sensitivity * (1.0 + 1e-12):
            raise PairExceedsSensitivity(
                f"pair {pair_index} deviates by {deviation!r}, "
                f"declared sensitivity is {params.sensitivity!r}"
            )
        table1 = exact(validate_instance(pair.q1, params))
        table2 = exact(validate_instance(pair.q2, params))
        worst = 0.0
        worst_label = pair.q1.labels[0]
        for label, p1, p2 in zip(
            pair.q1.labels, table1.probabilities, table2.probabilities
        ):
            ratio = _directional_ratio(p1, p2)
            if ratio > worst:
                worst = ratio
                worst_label = label
        per_pair.append(PairAudit(pair_index, worst_label, worst))

    worst_ratio = max(record.ratio for record in per_pair)
    bound = math.exp(params.epsilon)
    return AuditReport(
        per_pair=tuple(per_pair),
        worst_ratio=worst_ratio,
        bound=bound,
        passed=worst_ratio <= bound * (1.0 + RATIO_SLACK),
    )


def expected_error(inst: ValidatedInstance, dist: ProbabilityTable) -> float:
    """Expected suboptimality of a selection distribution on an instance:
    sum_i P(i) * (max q - q_i). Nonnegative, and invariant under shifting
    every score by the same constant."""
    if dist.labels != inst.quality.labels:
        raise LabelMismatch(
            f"distribution covers {dist.labels!r}, instance has "
            f"{inst.quality.labels!r}"
        )
    best = inst.quality.best_score
    return float(
        math.fsum(
            p * (best - s) for p, s in zip(dist.probabilities, inst.quality.scores)
        )
    )


def dominance_check(instances: Sequence[ValidatedInstance]) -> UtilityReport:
    """Compare exact expected errors of permute-and-flip and the
    exponential mechanism per instance; count instances where
    permute-and-flip comes out worse beyond the 1e-9 slack."""
    records = []
    violations = 0
    for instance_id, inst in enumerate(instances):
        error_pf = expected_error(inst, pf_exact_distribution(inst))
        error_em = expected_error(inst, em_exact_distribution(inst))
        if error_pf > error_em + DOMINANCE_TOLERANCE:
            violations += 1
        records.append(UtilityRecord(instance_id, error_pf, error_em))
    return UtilityReport(per_instance=tuple(records), dominance_violations=violations)


def random_instances(
    count: int,
    epsilon: float,
    sensitivity: float,
    k_min: int = 2,
    k_max: int = 10,
    score_low: float = -5.0,
    score_high: float = 5.0,
    seed: int = 0,
) -> list[ValidatedInstance]:
    """Deterministic suite of random instances: outcome count uniform in
    [k_min, k_max], scores i.i.d. uniform in [score_low, score_high]."""
    gen = np.random.default_rng(seed)
    params = PrivacyParams(epsilon, sensitivity)
    out = []
    for _ in range(count):
        k = int(gen.integers(k_min, k_max + 1))
        scores = gen.uniform(score_low, score_high, size=k)
        labels = tuple(f"o{i}" for i in range(k))
        out.append(validate_instance(QualityVector(labels, tuple(scores)), params))
    return out


def perturbed_neighbor_pairs(
    count: int,
    sensitivity: float,
    k_min: int = 2,
    k_max: int = 10,
    score_low: float = -5.0,
    score_high: float = 5.0,
    seed: int = 0,
) -> list[NeighborPair]:
    """Deterministic suite of neighbor pairs: a random base vector and a
    copy with every coordinate perturbed by a uniform draw within the
    sensitivity (with a one-part-in-1e9 margin against rounding)."""
    gen = np.random.default_rng(seed)
    reach = float(sensitivity) * (1.0 - 1e-9)
    out = []
    for _ in range(count):
        k = int(gen.integers(k_min, k_max + 1))
        labels = tuple(f"o{i}" for i in range(k))
        base = gen.uniform(score_low, score_high, size=k)
        shifted = base + gen.uniform(-reach, reach, size=k)
        out.append(
            NeighborPair(
                QualityVector(labels, tuple(base)),
                QualityVector(labels, tuple(shifted)),
            )
        )
    return out
