"""Command-line front end.

Subcommands:
  analyze --input <path> [--format json|text]   analyze a study file
  example [--format json|text]                  analyze the bundled demo study
  verify --samples <n> --seed <s>               run the proposition harness

Input counts become exact rational proportions; every number in a report
carries its rational form, and decimals are exact renderings whenever the
rational terminates (otherwise marked approximate).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from importlib import resources
from typing import Optional

from . import bounds as bounds_mod
from . import propositions
from .errors import (
    HarmboundsError,
    IncompatibleEvidence,
    ParseError,
    ValidationError,
)
from .identification import FusionReport, compatibility_check
from .model import (
    ATOM_KEYS,
    ExperimentalParams,
    ObservationalParams,
    as_prob,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_ALL_INCOMPATIBLE = 2
EXIT_COUNTEREXAMPLE = 3

_CSV_HEADER = [
    "labels",
    "exp_t_events",
    "exp_t_total",
    "exp_c_events",
    "exp_c_total",
    "obs_t_events",
    "obs_t_total",
    "obs_c_events",
    "obs_c_total",
]


# ---------------------------------------------------------------------------
# rational rendering

def rational_str(x: Fraction) -> str:
    return str(Fraction(x))


def parse_rational(text: str) -> Fraction:
    """Accepts 'p/q' and decimal strings; both parse to exact rationals."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not a rational number: {text!r}") from exc


def decimal_str(x: Fraction) -> tuple[str, bool]:
    """Decimal rendering plus an exactness flag.

    Terminating decimals (denominator 2^a 5^b) of reasonable length render
    exactly; everything else is rounded to 6 significant digits.
    """
    x = Fraction(x)
    sign = "-" if x < 0 else ""
    num, den = abs(x.numerator), x.denominator
    d = den
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d == 1:
        k = max(twos, fives)
        scaled = num * 10**k // den
        if k == 0:
            return sign + str(scaled), True
        digits = str(scaled).rjust(k + 1, "0")
        frac = digits[-k:].rstrip("0")
        if len(frac) <= 12:
            text = sign + digits[:-k] + ("." + frac if frac else "")
            return text, True
    with localcontext() as ctx:
        ctx.prec = 6
        approx = Decimal(x.numerator) / Decimal(x.denominator)
    return str(approx), False


def _rat_json(x: Optional[Fraction]) -> Optional[dict]:
    if x is None:
        return None
    decimal, exact = decimal_str(x)
    return {"rational": rational_str(x), "decimal": decimal, "exact": exact}


def _interval_json(interval: Optional[bounds_mod.Interval]) -> Optional[dict]:
    if interval is None:
        return None
    return {
        "lower": _rat_json(interval.lower),
        "upper": _rat_json(interval.upper),
        "point": bounds_mod.is_point_identified(interval),
    }


def _verdict_json(verdict: Optional[propositions.Verdict]) -> Optional[dict]:
    if verdict is None:
        return None
    return {
        "school": verdict.school,
        "detected": verdict.detected,
        "witness": verdict.witness,
        "value": _rat_json(verdict.value),
    }


# ---------------------------------------------------------------------------
# input model

@dataclass(frozen=True)
class StratumInput:
    labels: tuple[tuple[str, str], ...]
    evidence: bounds_mod.EvidenceSet

    @property
    def name(self) -> str:
        return ";".join(f"{k}={v}" for k, v in self.labels) or "(unlabeled)"


@dataclass(frozen=True)
class StudyInput:
    strata: tuple[StratumInput, ...]

    def __post_init__(self) -> None:
        names = [s.name for s in self.strata]
        if len(set(names)) != len(names):
            raise ValidationError("duplicate stratum labels")
        if not self.strata:
            raise ValidationError("study contains no strata")


def _cell(raw: dict, where: str) -> tuple[int, int]:
    try:
        events, total = int(raw["events"]), int(raw["total"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{where}: expected events/total counts") from exc
    if total <= 0:
        raise ValidationError(f"{where}: total must be positive, got {total}")
    if events < 0 or events > total:
        raise ValidationError(f"{where}: events {events} outside [0, {total}]")
    return events, total


def _stratum_from_counts(
    labels: tuple[tuple[str, str], ...],
    experimental: dict,
    observational: Optional[dict],
    where: str,
) -> StratumInput:
    t_events, t_total = _cell(experimental["treated"], f"{where}, experimental.treated")
    c_events, c_total = _cell(experimental["untreated"], f"{where}, experimental.untreated")
    p0 = ExperimentalParams(Fraction(t_events, t_total), Fraction(c_events, c_total))
    p1 = None
    if observational is not None:
        ot_events, ot_total = _cell(observational["treated"], f"{where}, observational.treated")
        oc_events, oc_total = _cell(observational["untreated"], f"{where}, observational.untreated")
        p1 = ObservationalParams(
            Fraction(ot_total, ot_total + oc_total),
            Fraction(ot_events, ot_total),
            Fraction(oc_events, oc_total),
        )
    return StratumInput(labels, bounds_mod.EvidenceSet(p0, p1))


def _stratum_from_parameters(
    labels: tuple[tuple[str, str], ...], params: dict, where: str
) -> StratumInput:
    def prob(key: str, required: bool = True) -> Optional[Fraction]:
        if key not in params or params[key] is None:
            if required:
                raise ParseError(f"{where}: missing parameter {key!r}")
            return None
        try:
            return as_prob(parse_rational(str(params[key])))
        except ValueError as exc:
            raise ValidationError(f"{where}, parameter {key!r}: {exc}") from exc

    p0 = ExperimentalParams(prob("p_do1"), prob("p_do0"))
    p1 = None
    pi1 = prob("pi1", required=False)
    if pi1 is not None:
        try:
            p1 = ObservationalParams(
                pi1, prob("q1", required=False), prob("q0", required=False)
            )
        except ValueError as exc:
            raise ValidationError(f"{where}: {exc}") from exc
    return StratumInput(labels, bounds_mod.EvidenceSet(p0, p1))


def _labels_from_mapping(raw: dict, where: str) -> tuple[tuple[str, str], ...]:
    if not isinstance(raw, dict):
        raise ParseError(f"{where}: labels must be a string-to-string mapping")
    return tuple((str(k), str(v)) for k, v in raw.items())


def _parse_json_input(path: str) -> StudyInput:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(data, dict) or not isinstance(data.get("strata"), list):
        raise ParseError(f"{path}: expected a top-level object with a 'strata' list")
    strata = []
    for i, raw in enumerate(data["strata"]):
        where = f"{path}, stratum {i}"
        labels = _labels_from_mapping(raw.get("labels", {}), where)
        if "parameters" in raw:
            strata.append(_stratum_from_parameters(labels, raw["parameters"], where))
        elif "experimental" in raw:
            strata.append(
                _stratum_from_counts(labels, raw["experimental"], raw.get("observational"), where)
            )
        else:
            raise ParseError(f"{where}: needs 'experimental' counts or 'parameters'")
    return StudyInput(tuple(strata))


def _parse_csv_input(path: str) -> StudyInput:
    strata = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty file") from None
        if header != _CSV_HEADER:
            raise ParseError(
                f"{path}: bad header; expected {','.join(_CSV_HEADER)}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not field.strip() for field in row):
                continue
            where = f"{path}, line {lineno}"
            if len(row) != len(_CSV_HEADER):
                raise ParseError(f"{where}: expected {len(_CSV_HEADER)} fields")
            labels = tuple(
                tuple(part.split("=", 1))
                for part in row[0].split(";")
                if "=" in part
            )
            experimental = {
                "treated": {"events": row[1], "total": row[2]},
                "untreated": {"events": row[3], "total": row[4]},
            }
            obs_fields = [field.strip() for field in row[5:9]]
            observational = None
            if any(obs_fields):
                if not all(obs_fields):
                    raise ParseError(f"{where}: partial observational counts")
                observational = {
                    "treated": {"events": row[5], "total": row[6]},
                    "untreated": {"events": row[7], "total": row[8]},
                }
            strata.append(
                _stratum_from_counts(labels, experimental, observational, where)  # type: ignore[arg-type]
            )
    return StudyInput(tuple(strata))


def parse_input(path: str, format: str) -> StudyInput:
    if not os.path.exists(path):
        raise ParseError(f"no such file: {path}")
    if format == "json":
        return _parse_json_input(path)
    if format == "csv":
        return _parse_csv_input(path)
    raise ValueError(f"unknown input format {format!r}")


def _infer_format(path: str) -> str:
    return "csv" if path.lower().endswith(".csv") else "json"


# ---------------------------------------------------------------------------
# analysis

@dataclass(frozen=True)
class StratumReport:
    stratum: StratumInput
    fusion: Optional[FusionReport]
    p0_bounds: dict[str, bounds_mod.Interval]
    fused_bounds: Optional[dict[str, Optional[bounds_mod.Interval]]]
    verdicts_p0: dict[str, propositions.Verdict]
    verdicts_fused: Optional[dict[str, propositions.Verdict]]

    @property
    def incompatible(self) -> bool:
        return self.fusion is not None and not self.fusion.compatible


@dataclass(frozen=True)
class AnalysisReport:
    strata: tuple[StratumReport, ...]

    @property
    def all_incompatible(self) -> bool:
        return all(s.incompatible for s in self.strata)


def _analyze_stratum(stratum: StratumInput) -> StratumReport:
    evidence = stratum.evidence
    p0_only = bounds_mod.EvidenceSet(evidence.p0)
    p0_bounds = {
        "harm": bounds_mod.harm_bounds(p0_only),
        "benefit": bounds_mod.benefit_bounds(p0_only),
        "ate": bounds_mod.ate_bounds(p0_only),
        "cate0": bounds_mod.cate_bounds(p0_only, 0),
        "cate1": bounds_mod.cate_bounds(p0_only, 1),
    }
    verdicts_p0 = {
        "interventionist": propositions.interventionist_verdict(p0_only),
        "counterfactual": propositions.counterfactual_verdict(p0_only),
    }
    if evidence.p1 is None:
        return StratumReport(stratum, None, p0_bounds, None, verdicts_p0, None)

    fusion = compatibility_check(evidence.p0, evidence.p1)
    if not fusion.compatible:
        return StratumReport(stratum, fusion, p0_bounds, None, verdicts_p0, None)

    def maybe(fn, *args):
        try:
            return fn(*args)
        except HarmboundsError:
            return None

    fused_bounds = {
        "harm": bounds_mod.harm_bounds(evidence),
        "benefit": bounds_mod.benefit_bounds(evidence),
        "ate": bounds_mod.ate_bounds(evidence),
        "cate0": maybe(bounds_mod.cate_bounds, evidence, 0),
        "cate1": maybe(bounds_mod.cate_bounds, evidence, 1),
        "harm_given0": maybe(bounds_mod.conditional_harm_bounds, evidence, 0),
        "harm_given1": maybe(bounds_mod.conditional_harm_bounds, evidence, 1),
        "benefit_given0": maybe(bounds_mod.conditional_benefit_bounds, evidence, 0),
        "benefit_given1": maybe(bounds_mod.conditional_benefit_bounds, evidence, 1),
    }
    verdicts_fused = {
        "interventionist": propositions.interventionist_verdict(evidence),
        "counterfactual": propositions.counterfactual_verdict(evidence),
    }
    return StratumReport(stratum, fusion, p0_bounds, fused_bounds, verdicts_p0, verdicts_fused)


def analyze(study: StudyInput) -> AnalysisReport:
    return AnalysisReport(tuple(_analyze_stratum(s) for s in study.strata))


# ---------------------------------------------------------------------------
# rendering

def report_to_json(report: AnalysisReport) -> dict:
    strata = []
    for sr in report.strata:
        p1 = sr.stratum.evidence.p1
        entry: dict = {
            "labels": dict(sr.stratum.labels),
            "p0": {
                "p_do1": _rat_json(sr.stratum.evidence.p0.p_do1),
                "p_do0": _rat_json(sr.stratum.evidence.p0.p_do0),
            },
            "p1": None
            if p1 is None
            else {
                "pi1": _rat_json(p1.pi1),
                "q1": _rat_json(p1.q1),
                "q0": _rat_json(p1.q0),
            },
            "fusion": None
            if sr.fusion is None
            else {
                "compatible": sr.fusion.compatible,
                "violations": list(sr.fusion.violations),
                "cross_risks": {
                    str(astar): _rat_json(risk)
                    for astar, risk in sorted(sr.fusion.derived_cross_risks.items())
                },
            },
            "bounds": {
                "p0_only": {k: _interval_json(v) for k, v in sr.p0_bounds.items()},
                "fused": None
                if sr.fused_bounds is None
                else {k: _interval_json(v) for k, v in sr.fused_bounds.items()},
            },
            "verdicts": {
                "p0_only": {k: _verdict_json(v) for k, v in sr.verdicts_p0.items()},
                "fused": None
                if sr.verdicts_fused is None
                else {k: _verdict_json(v) for k, v in sr.verdicts_fused.items()},
            },
            "incompatible": sr.incompatible,
        }
        strata.append(entry)
    return {"strata": strata}


def _use_color(stream) -> bool:
    mode = os.environ.get("HARMBOUNDS_COLOR", "auto")
    if mode == "never":
        return False
    return bool(getattr(stream, "isatty", lambda: False)())


def _fmt_value(x: Fraction) -> str:
    decimal, exact = decimal_str(x)
    return decimal if exact else "~" + decimal


def _fmt_interval(interval: Optional[bounds_mod.Interval], bold: bool) -> str:
    if interval is None:
        return "-"
    text = f"[{_fmt_value(interval.lower)}, {_fmt_value(interval.upper)}]"
    if bold and interval.lower > 0:
        text = f"\x1b[1m{text}\x1b[0m"
    return text


def _fmt_verdict(verdict: propositions.Verdict) -> str:
    if not verdict.detected:
        return "No"
    return f"Yes ({verdict.witness} = {_fmt_value(verdict.value)})"


_TEXT_ROWS = (
    ("P(harm)", "harm", True),
    ("P(benefit)", "benefit", False),
    ("ATE", "ate", True),
    ("ATE | A*=1", "cate1", True),
    ("ATE | A*=0", "cate0", True),
    ("P(harm | A*=1)", "harm_given1", True),
    ("P(harm | A*=0)", "harm_given0", True),
    ("P(benefit | A*=1)", "benefit_given1", False),
    ("P(benefit | A*=0)", "benefit_given0", False),
)


def render_text(report: AnalysisReport, color: bool = False) -> str:
    lines: list[str] = []
    for sr in report.strata:
        p0 = sr.stratum.evidence.p0
        p1 = sr.stratum.evidence.p1
        lines.append(f"Stratum {sr.stratum.name}")
        lines.append(
            f"  Experimental risks:   P(Y=1|do(A=1)) = {_fmt_value(p0.p_do1)} "
            f"[{rational_str(p0.p_do1)}]   P(Y=1|do(A=0)) = {_fmt_value(p0.p_do0)} "
            f"[{rational_str(p0.p_do0)}]"
        )
        if p1 is not None:
            q1 = "undefined" if p1.q1 is None else f"{_fmt_value(p1.q1)} [{rational_str(p1.q1)}]"
            q0 = "undefined" if p1.q0 is None else f"{_fmt_value(p1.q0)} [{rational_str(p1.q0)}]"
            lines.append(
                f"  Natural-choice data:  P(A*=1) = {_fmt_value(p1.pi1)} "
                f"[{rational_str(p1.pi1)}]   P(Y=1|A*=1) = {q1}   P(Y=1|A*=0) = {q0}"
            )
        if sr.incompatible:
            assert sr.fusion is not None
            lines.append("  Fusion: INCOMPATIBLE — stratum not analyzed further")
            for violation in sr.fusion.violations:
                lines.append(f"    {violation}")
            lines.append("")
            continue
        if sr.fusion is not None:
            lines.append("  Fusion: compatible")
        lines.append("  Sharp bounds [lower, upper]:")
        left = "experimental only"
        right = "with natural-choice data"
        lines.append(f"    {'estimand':<22}{left:<24}{right}")
        for label, key, bold in _TEXT_ROWS:
            p0_cell = _fmt_interval(sr.p0_bounds.get(key), False)
            fused_cell = (
                _fmt_interval(sr.fused_bounds.get(key), bold and color)
                if sr.fused_bounds is not None
                else "-"
            )
            if key not in sr.p0_bounds and sr.fused_bounds is None:
                continue
            lines.append(f"    {label:<22}{p0_cell:<24}{fused_cell}")
        lines.append("  Harm detected?")
        for school in ("interventionist", "counterfactual"):
            p0_part = _fmt_verdict(sr.verdicts_p0[school])
            fused_part = (
                _fmt_verdict(sr.verdicts_fused[school])
                if sr.verdicts_fused is not None
                else "-"
            )
            lines.append(
                f"    {school + ':':<17}experimental only: {p0_part}   fused: {fused_part}"
            )
        lines.append("")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# commands

def _demo_study() -> StudyInput:
    path = resources.files("harmbounds").joinpath("data/example_study.json")
    with resources.as_file(path) as real_path:
        return parse_input(str(real_path), "json")


def command_example() -> AnalysisReport:
    """Analyze the bundled demo study."""
    return analyze(_demo_study())


def command_verify(n: int, seed: int) -> tuple[int, list[propositions.PropositionReport]]:
    reports = propositions.run_harness(n, seed)
    failed = any(r.counterexamples for r in reports)
    return (EXIT_COUNTEREXAMPLE if failed else EXIT_OK), reports


def _emit_report(report: AnalysisReport, fmt: str, stream) -> None:
    if fmt == "json":
        json.dump(report_to_json(report), stream, indent=2)
        stream.write("\n")
    else:
        stream.write(render_text(report, color=_use_color(stream)))


def _counterexample_json(report: propositions.PropositionReport) -> dict:
    return {
        "proposition": report.proposition,
        "instances_checked": report.instances_checked,
        "counterexamples": [
            {
                "atoms": {
                    "/".join(map(str, key)): rational_str(p)
                    for key, p in zip(ATOM_KEYS, joint.atoms)
                },
                "details": details,
            }
            for joint, details in report.counterexamples
        ],
    }


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # noqa: A003 - argparse API
        raise ParseError(message)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="harmbounds", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_analyze = sub.add_parser("analyze", help="analyze a study file")
    p_analyze.add_argument("--input", required=True, help="path to a JSON or CSV study file")
    p_analyze.add_argument("--format", choices=("text", "json"), default="text")

    p_example = sub.add_parser("example", help="analyze the bundled demo study")
    p_example.add_argument("--format", choices=("text", "json"), default="text")

    p_verify = sub.add_parser("verify", help="run the proposition harness")
    p_verify.add_argument("--samples", type=int, required=True)
    p_verify.add_argument("--seed", type=int, default=0)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "analyze":
            study = parse_input(args.input, _infer_format(args.input))
            report = analyze(study)
            _emit_report(report, args.format, sys.stdout)
            return EXIT_ALL_INCOMPATIBLE if report.all_incompatible else EXIT_OK
        if args.command == "example":
            report = command_example()
            _emit_report(report, args.format, sys.stdout)
            return EXIT_OK
        if args.command == "verify":
            if args.samples < 1:
                raise ParseError("--samples must be at least 1")
            status, reports = command_verify(args.samples, args.seed)
            for rep in reports:
                outcome = "ok" if not rep.counterexamples else f"{len(rep.counterexamples)} counterexample(s)"
                print(
                    f"proposition {rep.proposition}: {rep.instances_checked} instances, {outcome}"
                )
            if status != EXIT_OK:
                json.dump(
                    [_counterexample_json(r) for r in reports if r.counterexamples],
                    sys.stdout,
                    indent=2,
                )
                print()
            return status
        raise AssertionError(f"unhandled command {args.command!r}")
    except (ParseError, ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except IncompatibleEvidence as exc:
        print(f"error: incompatible evidence: {exc}", file=sys.stderr)
        return EXIT_ALL_INCOMPATIBLE


if __name__ == "__main__":
    sys.exit(main())
