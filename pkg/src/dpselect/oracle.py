"""Exact and empirical output-distribution computation, plus the
statistical machinery that turns the equivalence claims into executable
checks.

Three independent routes produce the same numbers for the same mechanism
and must keep agreeing:

* closed forms (softmax for the exponential mechanism, an
  inclusion-exclusion sum for report-noisy-max with exponential noise),
* brute-force enumeration over coin-outcome subsets for permute-and-flip,
* adaptive quadrature of the generic win-probability integral.

The two enumeration-style oracles are deliberately written as separate
loops with no shared subset walk, so a bug in one cannot hide in the
other. Summation order per index is fixed, making results reproducible
bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import integrate
from scipy.stats import chi2

from .core import ProbabilityTable, ValidatedInstance
from .errors import (
    AllCategoriesMerged,
    LabelMismatch,
    QuadratureNonConvergence,
    TooManyOutcomesForEnumeration,
)
from .mechanisms import MECHANISMS, SelectionResult
from .noise import NOISE_FAMILIES, Exponential, RngState, cdf, from_params, pdf, quantile

# 2^20 enumeration terms with magnitudes <= 1 keep the floating-point error
# of the alternating sum near 1e-10, comfortably inside the 1e-8 tolerance
# the equivalence checks use.
ENUMERATION_LIMIT = 20
QUADRATURE_LIMIT = 64
QUADRATURE_TARGET = 1e-9
# truncate the integration domain where every factor's tail mass is below this
_TAIL_MASS = 1e-12

MIN_EXPECTED_COUNT = 5.0


@dataclass(frozen=True)
class GofResult:
    """Pearson goodness-of-fit outcome at a caller-supplied significance."""

    statistic: float
    degrees_of_freedom: int
    p_value: float
    passed: bool


def em_exact_distribution(inst: ValidatedInstance) -> ProbabilityTable:
    """Closed-form output distribution of the exponential mechanism:
    P(i) proportional to exp(rate * q_i), evaluated in shifted form."""
    scores = np.asarray(inst.quality.scores)
    weights = np.exp(inst.params.rate * (scores - inst.quality.best_score))
    return ProbabilityTable(
        inst.quality.labels, (weights / weights.sum()).tolist(), "exact-closed-form"
    )


def pf_exact_distribution(inst: ValidatedInstance) -> ProbabilityTable:
    """Exact permute-and-flip output distribution by subset enumeration.

    Permute-and-flip is distributed like the coin game that independently
    keeps each outcome j with probability p_j = exp(rate * (q_j - max q))
    and returns a uniform pick among the kept ones. Enumerating, for each
    outcome i, every keep-pattern T of the other outcomes:

        P(i) = sum over T of  p_i * prod_{j in T} p_j
                                  * prod_{j not in T} (1 - p_j) / (|T| + 1)

    Cost is k * 2^(k-1) terms, hence the outcome limit.
    """
    k = len(inst.quality)
    if k > ENUMERATION_LIMIT:
        raise TooManyOutcomesForEnumeration(
            f"enumeration supports at most {ENUMERATION_LIMIT} outcomes, got {k}"
        )
    scores = np.asarray(inst.quality.scores)
    keep_probs = np.exp(inst.params.rate * (scores - inst.quality.best_score))
    out = np.empty(k)
    for i in range(k):
        others = np.delete(keep_probs, i)
        pattern_weight = np.ones(1)
        pattern_size = np.zeros(1, dtype=np.int64)
        for p_j in others:
            pattern_weight = np.concatenate(
                [pattern_weight * (1.0 - p_j), pattern_weight * p_j]
            )
            pattern_size = np.concatenate([pattern_size, pattern_size + 1])
        out[i] = keep_probs[i] * float(
            np.sum(pattern_weight / (pattern_size + 1.0))
        )
    return ProbabilityTable(inst.quality.labels, out.tolist(), "exact-enumeration")


def rnm_expo_exact_distribution(inst: ValidatedInstance) -> ProbabilityTable:
    """Exact output distribution of report-noisy-max with exponential noise.

    Expanding the win-probability integral of index i by
    inclusion-exclusion over the other outcomes gives, with
    e_j = exp(rate * (q_j - max q)):

        P(i) = sum over subsets T of the others of
               (-1)^|T| * e_i * prod_{j in T} e_j / (|T| + 1)

    Every exponent is <= 0, so each term lies in [-1, 1] and the
    alternating sum stays well-conditioned.
    """
    k = len(inst.quality)
    if k > ENUMERATION_LIMIT:
        raise TooManyOutcomesForEnumeration(
            f"enumeration supports at most {ENUMERATION_LIMIT} outcomes, got {k}"
        )
    scores = np.asarray(inst.quality.scores)
    shifted = np.exp(inst.params.rate * (scores - inst.quality.best_score))
    out = np.empty(k)
    for i in range(k):
        others = np.delete(shifted, i)
        signed_product = np.ones(1)
        subset_size = np.zeros(1, dtype=np.int64)
        for e_j in others:
            signed_product = np.concatenate([signed_product, signed_product * (-e_j)])
            subset_size = np.concatenate([subset_size, subset_size + 1])
        out[i] = shifted[i] * float(np.sum(signed_product / (subset_size + 1.0)))
    return ProbabilityTable(inst.quality.labels, out.tolist(), "exact-closed-form")


def rnm_exact_quadrature(inst: ValidatedInstance, kind: str) -> ProbabilityTable:
    """Win probabilities of report-noisy-max under any noise family, by
    adaptive quadrature of P(i) = integral of f_i(v) * prod_{j != i} F_j(v).

    The domain is truncated where every factor's tail mass drops below
    1e-12 (analytic bounds per family), the score locations are passed to
    the integrator as known kink points, and the result is renormalized.
    Raises QuadratureNonConvergence if any entry misses the 1e-9 absolute
    error target.
    """
    k = len(inst.quality)
    if k > QUADRATURE_LIMIT:
        raise TooManyOutcomesForEnumeration(
            f"quadrature supports at most {QUADRATURE_LIMIT} outcomes, got {k}"
        )
    if kind not in NOISE_FAMILIES:
        raise ValueError(f"unknown noise family {kind!r}; expected one of {NOISE_FAMILIES}")
    noise = from_params(kind, inst.params)
    scores = inst.quality.scores
    best = inst.quality.best_score
    if isinstance(noise, Exponential):
        lo = best  # some CDF factor is exactly 0 below the best score
    else:
        lo = min(scores) + quantile(noise, _TAIL_MASS)
    hi = best + quantile(noise, 1.0 - _TAIL_MASS)
    kinks = sorted({s for s in scores if lo < s < hi})

    def win_integrand(v: float, i: int) -> float:
        value = pdf(noise, v - scores[i])
        for j in range(k):
            if j != i:
                value *= cdf(noise, v - scores[j])
        return value

    raw = np.empty(k)
    for i in range(k):
        value, abs_error, *_ = integrate.quad(
            win_integrand,
            lo,
            hi,
            args=(i,),
            points=kinks or None,
            epsabs=QUADRATURE_TARGET / 10.0,
            epsrel=0.0,
            limit=400,
            full_output=1,
        )
        if abs_error > QUADRATURE_TARGET:
            raise QuadratureNonConvergence(
                f"entry {i} reached absolute error {abs_error:.3e} "
                f"(target {QUADRATURE_TARGET:.0e})",
                achieved_error=float(abs_error),
            )
        raw[i] = value
    return ProbabilityTable(
        inst.quality.labels, (raw / raw.sum()).tolist(), "quadrature"
    )


def _resolve_mechanism(mechanism) -> Callable[..., SelectionResult]:
    if callable(mechanism):
        return mechanism
    try:
        return MECHANISMS[mechanism]
    except KeyError:
        raise ValueError(
            f"unknown mechanism {mechanism!r}; expected one of {sorted(MECHANISMS)}"
        ) from None


def empirical_counts(
    mechanism, inst: ValidatedInstance, n: int, seed: int
) -> list[int]:
    """Outcome counts of n independent runs of a mechanism (a name from
    MECHANISMS or a callable of (instance, rng)) under one seeded stream."""
    if n < 1:
        raise ValueError(f"need at least one run, got n={n}")
    run = _resolve_mechanism(mechanism)
    rng = RngState(seed)
    counts = [0] * len(inst.quality)
    for _ in range(n):
        counts[run(inst, rng).index] += 1
    return counts


def empirical_distribution(
    mechanism, inst: ValidatedInstance, n: int, seed: int
) -> ProbabilityTable:
    """Frequency table of n independent mechanism runs; reproducible for a
    fixed seed."""
    counts = empirical_counts(mechanism, inst, n, seed)
    return ProbabilityTable(
        inst.quality.labels,
        [c / n for c in counts],
        f"empirical(n={n},seed={seed})",
    )


def tv_distance(p: ProbabilityTable, q: ProbabilityTable) -> float:
    """Total variation distance, half the L1 distance between the tables."""
    if p.labels != q.labels:
        raise LabelMismatch(
            f"tables cover different outcomes: {p.labels!r} vs {q.labels!r}"
        )
    return 0.5 * math.fsum(abs(a - b) for a, b in zip(p.probabilities, q.probabilities))


def chi_square_gof(
    observed_counts: Sequence[int],
    expected: ProbabilityTable,
    significance: float,
) -> GofResult:
    """Pearson goodness-of-fit of observed counts against an expected table.

    Categories whose expected count falls below 5 are pooled into one tail
    category before computing the statistic. A single category after
    pooling that covers the whole table is a vacuous pass (dof 0); if every
    category needed pooling the test is impossible and AllCategoriesMerged
    is raised. Observed mass on a zero-probability outcome fails outright.
    """
    counts = [int(c) for c in observed_counts]
    if len(counts) != len(expected):
        raise LabelMismatch(
            f"{len(counts)} counts for {len(expected)} expected categories"
        )
    if any(c < 0 for c in counts):
        raise ValueError("counts must be nonnegative")
    total = sum(counts)
    if total < 1:
        raise ValueError("need at least one observation")

    impossible = any(
        c > 0 and p == 0.0 for c, p in zip(counts, expected.probabilities)
    )
    cells = [
        (c, p * total)
        for c, p in zip(counts, expected.probabilities)
        if p > 0.0
    ]
    if impossible:
        return GofResult(math.inf, max(len(cells) - 1, 0), 0.0, False)

    kept = [(c, e) for c, e in cells if e >= MIN_EXPECTED_COUNT]
    pooled = [(c, e) for c, e in cells if e < MIN_EXPECTED_COUNT]
    if not kept:
        raise AllCategoriesMerged(
            f"every expected count is below {MIN_EXPECTED_COUNT} at "
            f"{total} observations"
        )
    if pooled:
        kept.append((sum(c for c, _ in pooled), sum(e for _, e in pooled)))
    if len(kept) == 1:
        return GofResult(0.0, 0, 1.0, True)

    statistic = math.fsum((c - e) ** 2 / e for c, e in kept)
    dof = len(kept) - 1
    p_value = float(chi2.sf(statistic, dof))
    return GofResult(statistic, dof, p_value, p_value >= significance)


EXACT_ORACLES: dict[str, Callable[[ValidatedInstance], ProbabilityTable]] = {
    "pf": pf_exact_distribution,
    "rnm-expo": rnm_expo_exact_distribution,
    "em": em_exact_distribution,
}

# mechanism name -> noise family for the quadrature route
QUADRATURE_FAMILIES: dict[str, str] = {
    "rnm-expo": "exponential",
    "rnm-laplace": "laplace",
    "rnm-gumbel": "gumbel",
}
