from fractions import Fraction

import pytest
from hypothesis import strategies as st

from harmbounds import (
    EvidenceSet,
    JointDistribution,
    demo_joint,
    observables_from_joint,
)


@pytest.fixture
def demo():
    return demo_joint()


@pytest.fixture
def demo_evidence(demo):
    p0, p1 = observables_from_joint(demo)
    return EvidenceSet(p0, p1)


@pytest.fixture
def demo_p0_only(demo):
    p0, _ = observables_from_joint(demo)
    return EvidenceSet(p0)


@st.composite
def joints(draw, grid=30):
    """Random 8-atom joints with exact rational atoms."""
    weights = draw(
        st.lists(st.integers(0, grid), min_size=8, max_size=8).filter(any)
    )
    total = sum(weights)
    return JointDistribution(tuple(Fraction(w, total) for w in weights))
