"""Shared test fixtures: instance factory and hypothesis strategies."""

from __future__ import annotations

import hypothesis.strategies as st

from dpselect import PrivacyParams, QualityVector, validate_instance


def make_instance(scores, epsilon=1.0, sensitivity=1.0, labels=None):
    scores = tuple(float(s) for s in scores)
    if labels is None:
        labels = tuple(f"o{i}" for i in range(len(scores)))
    return validate_instance(
        QualityVector(tuple(labels), scores), PrivacyParams(epsilon, sensitivity)
    )


score_lists = st.lists(
    st.floats(min_value=-20.0, max_value=20.0, allow_nan=False, allow_infinity=False),
    min_size=1,
    max_size=8,
)


@st.composite
def instances(draw, k_min=1, k_max=8):
    k = draw(st.integers(k_min, k_max))
    scores = draw(
        st.lists(
            st.floats(min_value=-20.0, max_value=20.0),
            min_size=k,
            max_size=k,
        )
    )
    epsilon = draw(st.sampled_from([0.1, 0.5, 1.0, 2.0, 4.0]))
    sensitivity = draw(st.sampled_from([0.5, 1.0, 2.0]))
    return make_instance(scores, epsilon, sensitivity)
