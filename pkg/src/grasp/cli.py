"""Command-line interface binding corpus ingestion, grading, reporting, and
statistics into operator workflows.

Standard output carries only data; warnings and errors go to stderr. Exit
codes: 0 success (including needs-review results, which warn on stderr),
1 validation or grading error, 2 usage error, 3 internal invariant breach.
Output is byte-identical for identical inputs and flags unless ``--stamp``
injects a timestamp.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone
from enum import IntEnum
from pathlib import Path
from typing import Optional, Sequence

from . import corpus as corpus_io
from . import stats
from .engine import (
    AppraisalPolicy,
    MatchingRule,
    PolicyOverrides,
    QualityRule,
    TieFallback,
    appraise_study,
    assign_grade,
    compute_indices,
)
from .errors import GraspError
from .model import GradeResult, ToolProfile
from .report import ReportFormat, render_detailed_report, render_evidence_summary


class ExitStatus(IntEnum):
    OK = 0
    DATA_ERROR = 1
    USAGE = 2
    INTERNAL = 3


_LAYOUTS = {
    "table4": ReportFormat.MARKDOWN_TABLE4,
    "table3": ReportFormat.MARKDOWN_TABLE3_LEGACY,
    "structured": ReportFormat.STRUCTURED,
}

_DIRECTION_TOKENS = {
    "positive": "Positive",
    "negative": "Negative",
    "mixed_positive": "MixedPositive",
    "mixed_negative": "MixedNegative",
}


def _warn(message: str) -> None:
    print(f"warning: {message}", file=sys.stderr)


def _read(path: str) -> bytes:
    return Path(path).read_bytes()


def _add_strictness(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument(
        "--strict", dest="strict", action="store_true", default=True,
        help="reject unknown fields (default)",
    )
    group.add_argument(
        "--lenient", dest="strict", action="store_false",
        help="warn about unknown fields instead of rejecting them",
    )


def _add_policy_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--matching-rule", choices=[m.value for m in MatchingRule],
        help="override the matching resolution rule",
    )
    parser.add_argument(
        "--quality-rule", choices=[m.value for m in QualityRule],
        help="override the quality resolution rule",
    )
    parser.add_argument(
        "--tie-fallback", choices=[m.value for m in TieFallback],
        help="override the full-tie fallback of the mixed evidence protocol",
    )


def _add_stamp(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--stamp", action="store_true",
        help="include a generation timestamp (output is otherwise reproducible)",
    )


def _resolve_policy(args: argparse.Namespace, embedded: Optional[PolicyOverrides]) -> AppraisalPolicy:
    # Precedence: flag > corpus-embedded > default.
    policy = AppraisalPolicy()
    if embedded is not None:
        policy = embedded.apply(policy)
    flags = PolicyOverrides(
        matching_rule=MatchingRule(args.matching_rule) if args.matching_rule else None,
        quality_rule=QualityRule(args.quality_rule) if args.quality_rule else None,
        tie_fallback=TieFallback(args.tie_fallback) if args.tie_fallback else None,
    )
    return flags.apply(policy)


def _load_corpus(args: argparse.Namespace) -> corpus_io.Corpus:
    return corpus_io.parse_corpus(
        _read(args.corpus), strict=args.strict, on_warning=_warn
    )


def _select_tools(corpus: corpus_io.Corpus, tool_id: Optional[str]) -> list[ToolProfile]:
    if tool_id is None:
        return list(corpus.tools)
    return [corpus.tool(tool_id)]


def _reference_year(args: argparse.Namespace, corpus: corpus_io.Corpus, tool: ToolProfile) -> int:
    if args.reference_year is not None:
        return args.reference_year
    years = [tool.year] + [s.year for s in corpus.studies_for(tool.id)]
    return max(years)


def _stamp_value(args: argparse.Namespace) -> Optional[str]:
    if not args.stamp:
        return None
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _grade_line(result: GradeResult) -> str:
    label = f'"{result.tool_label}"' if result.tool_label else "-"
    line = (
        f"{result.tool_id} {result.final_grade.value}"
        f" {_DIRECTION_TOKENS[result.direction.value]} {label}"
    )
    if result.needs_review:
        line += " [review]"
    return line


def _structured_grade(result: GradeResult) -> dict:
    return {
        "tool_id": result.tool_id,
        "final_grade": result.final_grade.value,
        "direction": result.direction.value,
        "tool_label": result.tool_label,
        "needs_review": result.needs_review,
        "justification": result.justification,
    }


def _write_reports(
    args: argparse.Namespace,
    corpus: corpus_io.Corpus,
    graded: list[tuple[ToolProfile, GradeResult]],
    out_dir: str,
    layout: ReportFormat,
) -> None:
    directory = Path(out_dir)
    directory.mkdir(parents=True, exist_ok=True)
    stamp = _stamp_value(args)
    for tool, result in graded:
        indices = compute_indices(tool, _reference_year(args, corpus, tool))
        report = render_detailed_report(tool, result, indices, layout, generated_at=stamp)
        if layout is ReportFormat.STRUCTURED:
            path = directory / f"{tool.id}.json"
            path.write_text(json.dumps(report.body, indent=2, ensure_ascii=False) + "\n")
        else:
            path = directory / f"{tool.id}.md"
            path.write_text(str(report.body))


def _cmd_grade(args: argparse.Namespace) -> int:
    corpus = _load_corpus(args)
    policy = _resolve_policy(args, corpus.policy)
    graded = [
        (tool, assign_grade(tool, corpus.studies_for(tool.id), policy))
        for tool in _select_tools(corpus, args.tool)
    ]
    if args.format == "structured":
        print(json.dumps([_structured_grade(r) for _, r in graded], indent=2))
    else:
        for _, result in graded:
            print(_grade_line(result))
    for _, result in graded:
        if result.needs_review:
            _warn(f"{result.tool_id}: grade needs review ({result.justification})")
    if args.report:
        _write_reports(args, corpus, graded, args.report, _LAYOUTS[args.layout])
    return ExitStatus.OK


def _cmd_report(args: argparse.Namespace) -> int:
    corpus = _load_corpus(args)
    policy = _resolve_policy(args, corpus.policy)
    layout = _LAYOUTS[args.layout]
    graded = [
        (tool, assign_grade(tool, corpus.studies_for(tool.id), policy))
        for tool in _select_tools(corpus, args.tool)
    ]
    if args.out:
        _write_reports(args, corpus, graded, args.out, layout)
        return ExitStatus.OK
    stamp = _stamp_value(args)
    bodies = []
    for tool, result in graded:
        indices = compute_indices(tool, _reference_year(args, corpus, tool))
        report = render_detailed_report(tool, result, indices, layout, generated_at=stamp)
        if args.summary:
            records = [s for s in corpus.studies_for(tool.id) if s.is_gradable]
            appraisals = {s.id: appraise_study(s, tool, policy) for s in records}
            summary = render_evidence_summary(
                records, appraisals, layout,
                generated_at=stamp, engine_policy=policy.fingerprint(),
            )
            if layout is ReportFormat.STRUCTURED:
                bodies.append({"report": report.body, "evidence_summary": summary.body})
            else:
                bodies.append(str(report.body) + "\n" + str(summary.body))
        else:
            bodies.append(report.body)
    if layout is ReportFormat.STRUCTURED:
        print(json.dumps(bodies if args.tool is None else bodies[0], indent=2))
    else:
        print("\n".join(str(b) for b in bodies), end="")
    return ExitStatus.OK


def _format_p(p_value: float) -> str:
    return "p<0.001" if p_value < 0.001 else f"p={p_value:.3f}"


def _cmd_raters(args: argparse.Namespace) -> int:
    sheet_a = corpus_io.parse_rater_sheet(_read(args.sheet_a), name=Path(args.sheet_a).stem)
    sheet_b = corpus_io.parse_rater_sheet(_read(args.sheet_b), name=Path(args.sheet_b).stem)
    if set(sheet_a.grades) != set(sheet_b.grades):
        only_a = sorted(set(sheet_a.grades) - set(sheet_b.grades))
        only_b = sorted(set(sheet_b.grades) - set(sheet_a.grades))
        print(
            f"error: rater sheets cover different tools"
            f" (only in {sheet_a.name}: {only_a or '-'}; only in {sheet_b.name}: {only_b or '-'})",
            file=sys.stderr,
        )
        return ExitStatus.DATA_ERROR
    tool_ids = sorted(sheet_a.grades)
    comparison = stats.compare_raters(
        sheet_a.name,
        sheet_b.name,
        tool_ids,
        [sheet_a.grades[t] for t in tool_ids],
        [sheet_b.grades[t] for t in tool_ids],
    )
    n = len(tool_ids)
    if args.format == "structured":
        print(json.dumps({
            "rater_a": comparison.rater_a_name,
            "rater_b": comparison.rater_b_name,
            "n": n,
            "rho": comparison.rho,
            "p_value": comparison.p_value,
            "exact_agreement": comparison.exact_agreement,
        }, indent=2))
    else:
        print(
            f"rho={comparison.rho:.3f}"
            f" agreement={comparison.exact_agreement}/{n}"
            f" {_format_p(comparison.p_value)}"
        )
    return ExitStatus.OK


def _cmd_survey(args: argparse.Namespace) -> int:
    responses = corpus_io.parse_survey_sheet(_read(args.responses))
    summaries = stats.summarize_survey(responses) + [stats.overall_summary(responses)]
    if args.format == "structured":
        print(json.dumps([
            {
                "question_id": s.question_id,
                "mean_score": s.mean_score,
                "n": s.n,
                "label": s.label.display,
            }
            for s in summaries
        ], indent=2))
    else:
        for summary in summaries:
            print(f"{summary.question_id}\t{summary.mean_score:.2f}\t{summary.label.display}")
    return ExitStatus.OK


def _cmd_validate(args: argparse.Namespace) -> int:
    corpus, errors, warnings = corpus_io.load_corpus(_read(args.corpus), strict=args.strict)
    for message in warnings:
        _warn(message)
    if errors:
        for error in errors:
            print(f"{type(error).__name__}: {error}", file=sys.stderr)
        return ExitStatus.DATA_ERROR
    assert corpus is not None
    print(f"OK: {len(corpus.tools)} tools, {len(corpus.studies)} studies")
    return ExitStatus.OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grasp",
        description="Grade clinical predictive tools from structured records of their published evidence.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    grade = sub.add_parser("grade", help="grade every tool in a corpus")
    grade.add_argument("corpus", help="corpus JSON file")
    grade.add_argument("--tool", help="grade only this tool id")
    grade.add_argument("--format", choices=["text", "structured"], default="text")
    grade.add_argument("--report", metavar="DIR", help="also write detailed reports to DIR")
    grade.add_argument("--layout", choices=sorted(_LAYOUTS), default="table4")
    grade.add_argument("--reference-year", type=int,
                       help="reference year for bibliometric indices (default: newest record year)")
    _add_strictness(grade)
    _add_policy_flags(grade)
    _add_stamp(grade)
    grade.set_defaults(func=_cmd_grade)

    report = sub.add_parser("report", help="render detailed reports")
    report.add_argument("corpus", help="corpus JSON file")
    report.add_argument("--tool", help="report only this tool id")
    report.add_argument("--out", metavar="DIR", help="write reports to DIR instead of stdout")
    report.add_argument("--layout", choices=sorted(_LAYOUTS), default="table4")
    report.add_argument("--summary", action="store_true", help="append the evidence summary")
    report.add_argument("--reference-year", type=int,
                        help="reference year for bibliometric indices (default: newest record year)")
    _add_strictness(report)
    _add_policy_flags(report)
    _add_stamp(report)
    report.set_defaults(func=_cmd_report)

    raters = sub.add_parser("raters", help="compare two rater grade sheets")
    raters.add_argument("sheet_a", help="first rater sheet (CSV: tool_id,grade)")
    raters.add_argument("sheet_b", help="second rater sheet")
    raters.add_argument("--format", choices=["text", "structured"], default="text")
    raters.set_defaults(func=_cmd_raters)

    survey = sub.add_parser("survey", help="summarize Likert survey responses")
    survey.add_argument("responses", help="survey sheet (CSV: question_id,response)")
    survey.add_argument("--format", choices=["text", "structured"], default="text")
    survey.set_defaults(func=_cmd_survey)

    validate = sub.add_parser("validate", help="validate a corpus file")
    validate.add_argument("corpus", help="corpus JSON file")
    _add_strictness(validate)
    validate.set_defaults(func=_cmd_validate)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return int(args.func(args))
    except GraspError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ExitStatus.DATA_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ExitStatus.DATA_ERROR
    except KeyError as exc:
        print(f"error: unknown tool id {exc}", file=sys.stderr)
        return ExitStatus.DATA_ERROR
    except Exception as exc:  # pragma: no cover - invariant breach
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return ExitStatus.INTERNAL


if __name__ == "__main__":
    sys.exit(main())
