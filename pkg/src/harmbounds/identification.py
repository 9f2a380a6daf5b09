"""Fusion compatibility and point identification of conditional effects.

With both data sources in hand, the within-stratum risk of the arm a
patient would naturally take is observed directly, and the cross-world
risk (the other arm's risk in the same stratum) is pinned down by a
one-line linear solve against the experimental marginal.  Compatibility
of the two sources is exactly the requirement that both derived
cross-world risks are probabilities.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

from .errors import IncompatibleEvidence, NullStratum
from .model import ExperimentalParams, ObservationalParams


@dataclass(frozen=True)
class FusionReport:
    """Outcome of checking that P0 and P1 can coexist under one joint."""

    compatible: bool
    violations: tuple[str, ...]
    derived_cross_risks: Mapping[int, Fraction]  # astar -> P(Y^{1-astar}=1 | A*=astar)


def _cross_risks(
    p0: ExperimentalParams, p1: ObservationalParams
) -> dict[int, Fraction]:
    """Raw cross-world risks; values may fall outside [0,1] if incompatible.

    P(Y^1=1) = pi1*q1 + (1-pi1)*P(Y^1=1 | A*=0) and symmetrically for arm 0,
    so each cross risk is determined by a single linear equation.
    """
    risks: dict[int, Fraction] = {}
    if p1.pi1 < 1:
        risks[0] = (p0.p_do1 - p1.pi1 * (p1.q1 if p1.q1 is not None else 0)) / (1 - p1.pi1)
    if p1.pi1 > 0:
        risks[1] = (p0.p_do0 - (1 - p1.pi1) * (p1.q0 if p1.q0 is not None else 0)) / p1.pi1
    return risks


def compatibility_check(
    p0: ExperimentalParams, p1: ObservationalParams
) -> FusionReport:
    """Check the fusion inequalities; incompatibility is a report, not an error."""
    violations: list[str] = []
    if p1.q1 is not None:
        lo, hi = p1.pi1 * p1.q1, p1.pi1 * p1.q1 + (1 - p1.pi1)
        if not lo <= p0.p_do1 <= hi:
            violations.append(
                f"P(Y=1|do(A=1)) = {p0.p_do1} outside [{lo}, {hi}] "
                f"implied by P(A*=1) = {p1.pi1}, P(Y=1|A*=1) = {p1.q1}"
            )
    if p1.q0 is not None:
        lo, hi = (1 - p1.pi1) * p1.q0, (1 - p1.pi1) * p1.q0 + p1.pi1
        if not lo <= p0.p_do0 <= hi:
            violations.append(
                f"P(Y=1|do(A=0)) = {p0.p_do0} outside [{lo}, {hi}] "
                f"implied by P(A*=0) = {1 - p1.pi1}, P(Y=1|A*=0) = {p1.q0}"
            )
    return FusionReport(
        compatible=not violations,
        violations=tuple(violations),
        derived_cross_risks=_cross_risks(p0, p1),
    )


def identify_stratum_risks(
    p0: ExperimentalParams, p1: ObservationalParams, astar: int
) -> tuple[Fraction, Fraction]:
    """Both potential-outcome death risks within the A*=astar stratum.

    Returns (P(Y^{a=1}=1 | A*=astar), P(Y^{a=0}=1 | A*=astar)).
    """
    if astar not in (0, 1):
        raise ValueError(f"astar must be 0 or 1, got {astar!r}")
    mass = p1.pi1 if astar == 1 else 1 - p1.pi1
    if mass == 0:
        raise NullStratum(f"P(A*={astar}) = 0")
    report = compatibility_check(p0, p1)
    if not report.compatible:
        raise IncompatibleEvidence("; ".join(report.violations))
    cross = report.derived_cross_risks[astar]
    if astar == 1:
        assert p1.q1 is not None
        return p1.q1, cross
    assert p1.q0 is not None
    return cross, p1.q0


def identify_cate(
    p0: ExperimentalParams, p1: ObservationalParams, astar: int
) -> Fraction:
    """Point-identified conditional ATE given the natural treatment value."""
    risk1, risk0 = identify_stratum_risks(p0, p1, astar)
    return risk1 - risk0
