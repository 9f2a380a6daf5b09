"""Sharp bounds on harm/benefit probabilities and treatment effects.

Experimental-only bounds use the classical closed forms; everything the
closed forms claim is pinned to the LP oracle by the test suite.  Fused
marginal bounds are computed by the oracle directly, and fused conditional
bounds reduce to two-marginal (Frechet) bounds because both within-stratum
potential-outcome risks are point identified.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import lp_oracle
from .errors import IncompatibleEvidence, MissingObservational, NullStratum
from .identification import compatibility_check, identify_cate, identify_stratum_risks
from .model import ExperimentalParams, ObservationalParams, ONE, ZERO


@dataclass(frozen=True)
class Interval:
    """A lower/upper bound pair; sharpness is a contract, not a field."""

    lower: Fraction
    upper: Fraction

    def __post_init__(self) -> None:
        lower, upper = Fraction(self.lower), Fraction(self.upper)
        if lower > upper:
            raise ValueError(f"lower {lower} exceeds upper {upper}")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    def __contains__(self, value: object) -> bool:
        return self.lower <= value <= self.upper  # type: ignore[operator]


@dataclass(frozen=True)
class EvidenceSet:
    """Experimental parameters, optionally fused with natural-choice data."""

    p0: ExperimentalParams
    p1: Optional[ObservationalParams] = None


def is_point_identified(interval: Interval) -> bool:
    return interval.lower == interval.upper


def _require_compatible(evidence: EvidenceSet) -> None:
    if evidence.p1 is not None:
        report = compatibility_check(evidence.p0, evidence.p1)
        if not report.compatible:
            raise IncompatibleEvidence("; ".join(report.violations))


def harm_bounds(evidence: EvidenceSet) -> Interval:
    """Sharp bounds on P(Y^{a=1}=1, Y^{a=0}=0)."""
    _require_compatible(evidence)
    p0 = evidence.p0
    if evidence.p1 is None:
        return Interval(
            max(ZERO, p0.p_do1 - p0.p_do0), min(p0.p_do1, 1 - p0.p_do0)
        )
    return lp_oracle.sharp_interval(evidence, "harm")


def benefit_bounds(evidence: EvidenceSet) -> Interval:
    """Sharp bounds on P(Y^{a=1}=0, Y^{a=0}=1)."""
    _require_compatible(evidence)
    p0 = evidence.p0
    if evidence.p1 is None:
        return Interval(
            max(ZERO, p0.p_do0 - p0.p_do1), min(p0.p_do0, 1 - p0.p_do1)
        )
    return lp_oracle.sharp_interval(evidence, "benefit")


def _stratum_risks(evidence: EvidenceSet, astar: int) -> tuple[Fraction, Fraction]:
    if evidence.p1 is None:
        raise MissingObservational("conditional bounds require natural-choice data")
    return identify_stratum_risks(evidence.p0, evidence.p1, astar)


def conditional_harm_bounds(evidence: EvidenceSet, astar: int) -> Interval:
    """Sharp bounds on P(harm | A*=astar): Frechet bounds on identified risks."""
    risk1, risk0 = _stratum_risks(evidence, astar)
    return Interval(max(ZERO, risk1 - risk0), min(risk1, 1 - risk0))


def conditional_benefit_bounds(evidence: EvidenceSet, astar: int) -> Interval:
    """Sharp bounds on P(benefit | A*=astar)."""
    risk1, risk0 = _stratum_risks(evidence, astar)
    return Interval(max(ZERO, risk0 - risk1), min(risk0, 1 - risk1))


def ate_bounds(evidence: EvidenceSet) -> Interval:
    """The marginal ATE is identified by the experiment; the interval is a point."""
    _require_compatible(evidence)
    ate = evidence.p0.p_do1 - evidence.p0.p_do0
    return Interval(ate, ate)


def cate_bounds(evidence: EvidenceSet, astar: int) -> Interval:
    """Conditional ATE given A*: vacuous without natural-choice data, a point with it.

    The experimental data carry no information about A*, so the
    experimental-only interval is the closure [-1, 1].
    """
    if astar not in (0, 1):
        raise ValueError(f"astar must be 0 or 1, got {astar!r}")
    if evidence.p1 is None:
        return Interval(-ONE, ONE)
    cate = identify_cate(evidence.p0, evidence.p1, astar)
    return Interval(cate, cate)
