"""Harm verdicts for both analytic schools and mechanical theorem checks.

The checkers falsify: each takes a ground-truth joint, derives the
observable evidence, and tests one of the concordance/degeneracy
biconditionals.  On correct bounds code every checker returns None for
every valid joint; a non-None result is a counterexample and therefore an
implementation bug.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from . import bounds as bounds_mod
from .identification import identify_cate, identify_stratum_risks
from .model import (
    JointDistribution,
    demo_joint,
    degenerate_grid,
    observables_from_joint,
    sample_joint,
)

PROPOSITIONS = ("P1", "P2", "P3", "P4")


@dataclass(frozen=True)
class Verdict:
    """Harm detection outcome of one analytic school."""

    school: str  # "interventionist" | "counterfactual"
    detected: bool
    witness: Optional[str] = None  # subgroup / bound that triggered detection
    value: Optional[Fraction] = None  # the strictly positive sharp lower bound


@dataclass(frozen=True)
class PropositionReport:
    proposition: str
    instances_checked: int
    counterexamples: tuple[tuple[JointDistribution, str], ...]


def _non_null_strata(evidence: bounds_mod.EvidenceSet) -> list[int]:
    assert evidence.p1 is not None
    strata = []
    if evidence.p1.pi1 < 1:
        strata.append(0)
    if evidence.p1.pi1 > 0:
        strata.append(1)
    return strata


def interventionist_verdict(evidence: bounds_mod.EvidenceSet) -> Verdict:
    """Detected iff some measurable group has a strictly positive sharp ATE lower bound.

    With experimental data alone no feature is measured, so the only group
    is the whole population; with natural-choice data the groups are the
    A* strata and their ATEs are point identified.
    """
    if evidence.p1 is None:
        ate = evidence.p0.p_do1 - evidence.p0.p_do0
        if ate > 0:
            return Verdict("interventionist", True, "marginal ATE", ate)
        return Verdict("interventionist", False)
    for astar in _non_null_strata(evidence):
        cate = identify_cate(evidence.p0, evidence.p1, astar)
        if cate > 0:
            return Verdict("interventionist", True, f"ATE | A*={astar}", cate)
    return Verdict("interventionist", False)


def counterfactual_verdict(evidence: bounds_mod.EvidenceSet) -> Verdict:
    """Detected iff the sharp lower bound on P(harm) is strictly positive."""
    lower = bounds_mod.harm_bounds(evidence).lower
    if lower > 0:
        label = "sharp lower bound on P(harm)"
        if evidence.p1 is not None:
            label += " (fused)"
        return Verdict("counterfactual", True, label, lower)
    return Verdict("counterfactual", False)


def _evidence_levels(
    joint: JointDistribution,
) -> tuple[bounds_mod.EvidenceSet, bounds_mod.EvidenceSet]:
    p0, p1 = observables_from_joint(joint)
    return bounds_mod.EvidenceSet(p0), bounds_mod.EvidenceSet(p0, p1)


def check_prop1(joint: JointDistribution) -> Optional[str]:
    """Counterfactual and interventionist detection agree at both evidence levels."""
    ev0, ev1 = _evidence_levels(joint)
    for label, evidence in (("experimental-only", ev0), ("fused", ev1)):
        counterfactual = counterfactual_verdict(evidence).detected
        interventionist = interventionist_verdict(evidence).detected
        if counterfactual != interventionist:
            return (
                f"{label}: counterfactual detected={counterfactual} but "
                f"interventionist detected={interventionist}"
            )
    return None


def check_prop2(joint: JointDistribution) -> Optional[str]:
    """Point identification of P(harm) happens exactly at deterministic risks."""
    ev0, ev1 = _evidence_levels(joint)
    p0 = ev0.p0

    point0 = bounds_mod.is_point_identified(bounds_mod.harm_bounds(ev0))
    degenerate0 = p0.p_do1 in (0, 1) or p0.p_do0 in (0, 1)
    if point0 != degenerate0:
        return (
            f"experimental-only: point identification {point0} but "
            f"marginal degeneracy {degenerate0}"
        )

    point1 = bounds_mod.is_point_identified(bounds_mod.harm_bounds(ev1))
    degenerate1 = True
    for astar in _non_null_strata(ev1):
        risk1, risk0 = identify_stratum_risks(ev1.p0, ev1.p1, astar)
        if risk1 not in (0, 1) and risk0 not in (0, 1):
            degenerate1 = False
    if point1 != degenerate1:
        return (
            f"fused: point identification {point1} but "
            f"stratum degeneracy {degenerate1}"
        )
    return None


def check_prop3(joint: JointDistribution) -> Optional[str]:
    """Point-identified positive P(harm) splits the strata: per stratum, either
    conditional benefit or conditional harm is identified to be exactly 0."""
    ev0, ev1 = _evidence_levels(joint)
    fused = bounds_mod.harm_bounds(ev1)
    experimental = bounds_mod.harm_bounds(ev0)
    premise = (
        bounds_mod.is_point_identified(fused) and fused.lower > 0
    ) or (
        bounds_mod.is_point_identified(experimental) and experimental.lower > 0
    )
    if not premise:
        return None
    for astar in _non_null_strata(ev1):
        benefit = bounds_mod.conditional_benefit_bounds(ev1, astar)
        harm = bounds_mod.conditional_harm_bounds(ev1, astar)
        zero = bounds_mod.Interval(0, 0)
        if benefit != zero and harm != zero:
            return (
                f"A*={astar}: conditional benefit {benefit.lower}..{benefit.upper} "
                f"and conditional harm {harm.lower}..{harm.upper}, neither pinned to 0"
            )
    return None


def check_prop4(joint: JointDistribution) -> Optional[str]:
    """The fused harm lower bound strictly improves iff the stratum ATEs have
    strictly opposite signs.  Vacuous when a stratum is empty."""
    ev0, ev1 = _evidence_levels(joint)
    assert ev1.p1 is not None
    if ev1.p1.pi1 in (0, 1):
        return None
    improved = bounds_mod.harm_bounds(ev1).lower > bounds_mod.harm_bounds(ev0).lower
    cate0 = identify_cate(ev1.p0, ev1.p1, 0)
    cate1 = identify_cate(ev1.p0, ev1.p1, 1)
    opposite = (cate0 > 0 > cate1) or (cate1 > 0 > cate0)
    if improved != opposite:
        return (
            f"lower bound improved={improved} but opposite-sign stratum ATEs="
            f"{opposite} (ATE|A*=0 is {cate0}, ATE|A*=1 is {cate1})"
        )
    return None


_CHECKERS: dict[str, Callable[[JointDistribution], Optional[str]]] = {
    "P1": check_prop1,
    "P2": check_prop2,
    "P3": check_prop3,
    "P4": check_prop4,
}


def run_harness(n: int, seed: int) -> list[PropositionReport]:
    """Run all checkers on n sampled joints plus the constructed instances.

    Deterministic in (n, seed).  Counterexamples carry the offending joint so
    a reported violation can always be re-verified.
    """
    if n < 1:
        raise ValueError(f"need at least one sampled instance, got {n}")
    instances = [demo_joint()] + degenerate_grid() + [
        sample_joint(seed + i) for i in range(n)
    ]
    counterexamples: dict[str, list[tuple[JointDistribution, str]]] = {
        name: [] for name in PROPOSITIONS
    }
    # instances outer, checkers inner: the oracle's vertex cache is keyed by
    # the evidence constraints, so all four checks on one joint share one
    # vertex enumeration
    for joint in instances:
        for name in PROPOSITIONS:
            details = _CHECKERS[name](joint)
            if details is not None:
                counterexamples[name].append((joint, details))
    return [
        PropositionReport(
            proposition=name,
            instances_checked=len(instances),
            counterexamples=tuple(counterexamples[name]),
        )
        for name in PROPOSITIONS
    ]
