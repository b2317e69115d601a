"""Decision procedures that turn study records into a tool grade.

The pipeline is: resolve each study's matching and quality, aggregate the
studies of every grade level into a bucket with a direction, resolve mixed
buckets through the class-based adjudication cascade, derive the joint B1
bucket when both B2 and B3 qualify, and finally scan the ladder from A1
downwards for the first bucket whose direction supports a positive
conclusion.

Everything here is a pure function over immutable inputs; grading many
tools in parallel needs no coordination.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable, Optional, Sequence

from .errors import (
    AdjudicationRequired,
    EmptyBucket,
    InvalidReferenceYear,
    NoGradableEvidence,
    UnresolvableMatching,
    UnresolvableQuality,
)
from .model import (
    GRADE_SCAN_ORDER,
    MATCHING_FIELD_KEYS,
    BucketDirection,
    EvidenceBucket,
    EvidenceClass,
    GradeLevel,
    GradeResult,
    MatchingVerdict,
    OutcomeLabel,
    QualityVerdict,
    StrengthVerdict,
    StudyDirection,
    StudyRecord,
    StudyType,
    ToolProfile,
    ordinal_rank,
)


class MatchingRule(Enum):
    """How per-field matching flags resolve to a verdict."""

    STRICT_ALL = "strict_all"
    IGNORE_MISSING = "ignore_missing"


class QualityRule(Enum):
    """How a quality verdict is obtained when no override is recorded."""

    OVERRIDE_ONLY = "override_only"
    MAJORITY_OF_FLAGS = "majority_of_flags"


class TieFallback(Enum):
    """Behaviour when the adjudication cascade ties at every step."""

    CONSERVATIVE_NEGATIVE = "conservative_negative"
    FAIL_WITH_REVIEW_FLAG = "fail_with_review_flag"


#: Equivocal conclusions always count on the negative side of every tally.
EQUIVOCAL_COUNTS_AS = StudyDirection.NEGATIVE


@dataclass(frozen=True)
class AppraisalPolicy:
    """Settings that parameterise one grading run.

    The policy is fixed for a run and its fingerprint is recorded in every
    grade justification.
    """

    matching_rule: MatchingRule = MatchingRule.STRICT_ALL
    quality_rule: QualityRule = QualityRule.OVERRIDE_ONLY
    tie_fallback: TieFallback = TieFallback.CONSERVATIVE_NEGATIVE

    def fingerprint(self) -> str:
        return (
            f"matching={self.matching_rule.value}"
            f" quality={self.quality_rule.value}"
            f" equivocal={EQUIVOCAL_COUNTS_AS.value}"
            f" tie_fallback={self.tie_fallback.value}"
        )


@dataclass(frozen=True)
class PolicyOverrides:
    """Partial policy, e.g. embedded in a corpus or given as CLI flags."""

    matching_rule: Optional[MatchingRule] = None
    quality_rule: Optional[QualityRule] = None
    tie_fallback: Optional[TieFallback] = None

    def apply(self, base: AppraisalPolicy) -> AppraisalPolicy:
        return AppraisalPolicy(
            matching_rule=self.matching_rule or base.matching_rule,
            quality_rule=self.quality_rule or base.quality_rule,
            tie_fallback=self.tie_fallback or base.tie_fallback,
        )


def resolve_matching(
    record: StudyRecord, tool: ToolProfile, policy: AppraisalPolicy
) -> MatchingVerdict:
    """Decide whether the study conditions match the tool's specification.

    An explicit override wins. Otherwise, under STRICT_ALL the study matches
    only if all seven condition flags are present and true; under
    IGNORE_MISSING absent flags are skipped and every present flag must be
    true. With no override and no flags at all the verdict is unresolvable.
    """
    if record.matching_override is not None:
        return record.matching_override
    flags = {k: v for k, v in record.matching_fields.items() if k in MATCHING_FIELD_KEYS}
    if not flags:
        raise UnresolvableMatching(
            f"study '{record.id}': no matching override and no matching fields"
        )
    if policy.matching_rule is MatchingRule.STRICT_ALL:
        complete = len(flags) == len(MATCHING_FIELD_KEYS)
        verdict = complete and all(flags.values())
    else:
        verdict = all(flags.values())
    return MatchingVerdict.MATCHING if verdict else MatchingVerdict.NON_MATCHING


def resolve_quality(record: StudyRecord, policy: AppraisalPolicy) -> QualityVerdict:
    """Decide the study's quality verdict.

    An explicit override wins. OVERRIDE_ONLY treats quality as appraiser
    judgement and fails without one; MAJORITY_OF_FLAGS derives High only from
    a strict majority of true flags (ties and no flags give Low).
    """
    if record.quality_override is not None:
        return record.quality_override
    if policy.quality_rule is QualityRule.OVERRIDE_ONLY:
        raise UnresolvableQuality(
            f"study '{record.id}': no quality override and policy is override_only"
        )
    trues = sum(bool(v) for v in record.quality_fields.values())
    falses = sum(not v for v in record.quality_fields.values())
    return QualityVerdict.HIGH if trues > falses else QualityVerdict.LOW


_STRENGTH_TABLE = {
    (MatchingVerdict.MATCHING, QualityVerdict.HIGH): StrengthVerdict.STRONG,
    (MatchingVerdict.MATCHING, QualityVerdict.LOW): StrengthVerdict.MEDIUM,
    (MatchingVerdict.NON_MATCHING, QualityVerdict.HIGH): StrengthVerdict.MEDIUM,
    (MatchingVerdict.NON_MATCHING, QualityVerdict.LOW): StrengthVerdict.WEAK,
}

_CLASS_TABLE = {
    (MatchingVerdict.MATCHING, QualityVerdict.HIGH): EvidenceClass.A,
    (MatchingVerdict.MATCHING, QualityVerdict.LOW): EvidenceClass.B,
    (MatchingVerdict.NON_MATCHING, QualityVerdict.HIGH): EvidenceClass.B,
    (MatchingVerdict.NON_MATCHING, QualityVerdict.LOW): EvidenceClass.C,
}


def classify_strength(matching: MatchingVerdict, quality: QualityVerdict) -> StrengthVerdict:
    """Strong for matching high-quality evidence, weak for non-matching low-quality, medium between."""
    return _STRENGTH_TABLE[(matching, quality)]


def classify_evidence_class(matching: MatchingVerdict, quality: QualityVerdict) -> EvidenceClass:
    """Adjudication class: the same table as strength with A/B/C in place of strong/medium/weak."""
    return _CLASS_TABLE[(matching, quality)]


@dataclass(frozen=True)
class StudyAppraisal:
    """Resolved verdicts for one study under a policy."""

    matching: MatchingVerdict
    quality: QualityVerdict
    strength: StrengthVerdict
    evidence_class: EvidenceClass


def appraise_study(
    record: StudyRecord, tool: ToolProfile, policy: AppraisalPolicy
) -> StudyAppraisal:
    matching = resolve_matching(record, tool, policy)
    quality = resolve_quality(record, policy)
    return StudyAppraisal(
        matching=matching,
        quality=quality,
        strength=classify_strength(matching, quality),
        evidence_class=classify_evidence_class(matching, quality),
    )


def _is_positive(direction: StudyDirection) -> bool:
    return direction is StudyDirection.POSITIVE


def mixed_protocol(
    studies: Sequence[StudyRecord], tool: ToolProfile, policy: AppraisalPolicy
) -> tuple[BucketDirection, bool, tuple[str, ...]]:
    """Adjudicate a bucket holding both positive and non-positive conclusions.

    Studies are partitioned into classes A/B/C by matching and quality. The
    count of positive versus negative-or-equivocal conclusions is compared
    within class A first, then widened to A+B, then to all classes; the first
    strict majority decides. A single class-A study therefore outweighs any
    number of conflicting class-B/C studies. A tie across all classes falls
    back to the policy: conservative mixed-negative with a review flag, or an
    AdjudicationRequired error.

    Returns (direction, needs_review, trace); the trace records every step.
    """
    positives = [s for s in studies if _is_positive(s.direction)]
    if not positives or len(positives) == len(studies):
        raise ValueError("mixed_protocol requires both positive and non-positive studies")

    tally: dict[EvidenceClass, list[int]] = {c: [0, 0] for c in EvidenceClass}
    for record in studies:
        cls = classify_evidence_class(
            resolve_matching(record, tool, policy), resolve_quality(record, policy)
        )
        tally[cls][0 if _is_positive(record.direction) else 1] += 1

    trace = [
        "mixed evidence: "
        + ", ".join(
            f"class {c.value}: {tally[c][0]} positive / {tally[c][1]} negative-or-equivocal"
            for c in EvidenceClass
        )
    ]
    widenings = (
        ((EvidenceClass.A,), "class A"),
        ((EvidenceClass.A, EvidenceClass.B), "classes A+B"),
        (tuple(EvidenceClass), "all classes"),
    )
    for group, label in widenings:
        pos = sum(tally[c][0] for c in group)
        neg = sum(tally[c][1] for c in group)
        if pos + neg == 0 or pos == neg:
            trace.append(f"{label}: tied or empty ({pos} vs {neg}); widening")
            continue
        direction = (
            BucketDirection.MIXED_POSITIVE if pos > neg else BucketDirection.MIXED_NEGATIVE
        )
        trace.append(f"{label}: majority decides {direction.value} ({pos} vs {neg})")
        return direction, False, tuple(trace)

    if policy.tie_fallback is TieFallback.FAIL_WITH_REVIEW_FLAG:
        raise AdjudicationRequired(
            f"tool '{tool.id}': mixed evidence tied at every step; manual adjudication required"
        )
    trace.append("full tie: conservative fallback to mixed_negative, flagged for review")
    return BucketDirection.MIXED_NEGATIVE, True, tuple(trace)


def aggregate_bucket(
    studies: Sequence[StudyRecord],
    tool: ToolProfile,
    policy: AppraisalPolicy,
    level: Optional[GradeLevel] = None,
) -> EvidenceBucket:
    """Fold the studies of one grade level into a bucket with one direction.

    Positive when every study is positive; negative when every study is
    negative or equivocal; otherwise the mixed evidence protocol decides.
    """
    if not studies:
        raise EmptyBucket(f"tool '{tool.id}': cannot aggregate an empty study list")
    if level is None:
        level = studies[0].level
    assert level is not None
    ordered = tuple(sorted(studies, key=lambda s: s.id))

    n_pos = sum(_is_positive(s.direction) for s in ordered)
    if n_pos == len(ordered):
        direction, needs_review = BucketDirection.POSITIVE, False
        trace: tuple[str, ...] = (f"all {len(ordered)} studies positive",)
    elif n_pos == 0:
        direction, needs_review = BucketDirection.NEGATIVE, False
        trace = (f"all {len(ordered)} studies negative or equivocal",)
    else:
        direction, needs_review, trace = mixed_protocol(ordered, tool, policy)

    return EvidenceBucket(
        tool_id=tool.id,
        level=level,
        studies=ordered,
        direction=direction,
        needs_review=needs_review,
        adjudication_trace=trace,
    )


def derive_b1(
    b2: Optional[EvidenceBucket], b3: Optional[EvidenceBucket]
) -> Optional[EvidenceBucket]:
    """Combine qualifying B2 and B3 buckets into the joint B1 level.

    B1 exists only when potential-effect and usability evidence are both
    present and both qualify; it is positive only when both constituents are,
    and never upgrades a mixed-positive constituent.
    """
    if b2 is None or b3 is None:
        return None
    if not (b2.qualifies and b3.qualifies):
        return None
    both_positive = (
        b2.direction is BucketDirection.POSITIVE and b3.direction is BucketDirection.POSITIVE
    )
    direction = BucketDirection.POSITIVE if both_positive else BucketDirection.MIXED_POSITIVE
    return EvidenceBucket(
        tool_id=b2.tool_id,
        level=GradeLevel.B1,
        studies=(),
        direction=direction,
        needs_review=b2.needs_review or b3.needs_review,
        adjudication_trace=(
            f"derived from B2 ({b2.direction.value}) and B3 ({b3.direction.value})",
        ),
        sources=(b2, b3),
    )


def build_buckets(
    tool: ToolProfile, studies: Iterable[StudyRecord], policy: AppraisalPolicy
) -> dict[GradeLevel, EvidenceBucket]:
    """Group gradable studies into level buckets and derive B1.

    External validations are pooled and re-levelled by multiplicity: two or
    more distinct studies make the C1 bucket, a single one the C2 bucket.
    Metadata-only development records are skipped.
    """
    by_level: dict[GradeLevel, list[StudyRecord]] = {}
    external: list[StudyRecord] = []
    for record in studies:
        if not record.is_gradable:
            continue
        if record.study_type is StudyType.EXTERNAL_VALIDATION:
            external.append(record)
        else:
            assert record.level is not None
            by_level.setdefault(record.level, []).append(record)
    if external:
        distinct = {s.id for s in external}
        level = GradeLevel.C1 if len(distinct) >= 2 else GradeLevel.C2
        by_level.setdefault(level, []).extend(external)

    buckets = {
        level: aggregate_bucket(group, tool, policy, level=level)
        for level, group in by_level.items()
    }
    b1 = derive_b1(buckets.get(GradeLevel.B2), buckets.get(GradeLevel.B3))
    if b1 is not None:
        buckets[GradeLevel.B1] = b1
    return buckets


def _justification(
    policy: AppraisalPolicy,
    final: GradeLevel,
    supporting: Optional[EvidenceBucket],
    ordered: Sequence[EvidenceBucket],
) -> str:
    parts = []
    if supporting is not None:
        parts.append(
            f"final grade {final.value}: {supporting.direction.value} evidence at"
            f" {supporting.level.value} ({supporting.level.descriptor.lower()})"
        )
        failed = [b for b in ordered if ordinal_rank(b.level) > ordinal_rank(final)]
        if failed:
            parts.append(
                "higher levels not qualifying: "
                + ", ".join(f"{b.level.value} {b.direction.value}" for b in failed)
            )
    else:
        parts.append("final grade C0: no level holds positive or mixed-positive evidence")
        parts.append(
            "not qualifying: "
            + ", ".join(f"{b.level.value} {b.direction.value}" for b in ordered)
        )
    parts.append(f"policy[{policy.fingerprint()}]")
    return "; ".join(parts)


def assign_grade(
    tool: ToolProfile,
    studies: Sequence[StudyRecord],
    policy: Optional[AppraisalPolicy] = None,
) -> GradeResult:
    """Grade a tool from its study records.

    The final grade is the highest level whose bucket direction is positive
    or mixed-positive; C0 when no bucket qualifies. The result's
    justification names the supporting bucket, its direction, every higher
    bucket that failed to qualify, and the active policy.
    """
    policy = policy or AppraisalPolicy()
    foreign = [s.id for s in studies if s.tool_id != tool.id]
    if foreign:
        raise ValueError(f"studies {foreign} do not belong to tool '{tool.id}'")

    buckets = build_buckets(tool, studies, policy)
    if not buckets:
        raise NoGradableEvidence(f"tool '{tool.id}': no gradable study records")

    ordered = tuple(
        sorted(buckets.values(), key=lambda b: ordinal_rank(b.level), reverse=True)
    )
    supporting = next(
        (buckets[level] for level in GRADE_SCAN_ORDER if level in buckets and buckets[level].qualifies),
        None,
    )
    final = supporting.level if supporting is not None else GradeLevel.C0
    direction = supporting.direction if supporting is not None else ordered[0].direction

    result = GradeResult(
        tool_id=tool.id,
        final_grade=final,
        direction=direction,
        justification=_justification(policy, final, supporting, ordered),
        needs_review=any(b.needs_review for b in ordered),
        all_buckets=ordered,
        supporting_bucket=supporting,
    )
    return replace(result, tool_label=tool_label(result))


#: Fixed tie-break order for the tool label word.
LABEL_TIE_ORDER = (
    OutcomeLabel.EFFECTIVENESS,
    OutcomeLabel.SAFETY,
    OutcomeLabel.EFFICIENCY,
    OutcomeLabel.WORKFLOW,
    OutcomeLabel.PROCESSES,
)


def tool_label(result: GradeResult) -> Optional[str]:
    """One-word label of the most prominent positive finding, e.g. "Grade A2 - Efficiency".

    The word is the most frequent outcome tag among positive studies of the
    supporting bucket (for B1, of its source buckets); frequency ties break
    by the fixed order effectiveness > safety > efficiency > workflow >
    processes. C0 results and unlabelled buckets yield no label.
    """
    bucket = result.supporting_bucket
    if result.final_grade is GradeLevel.C0 or bucket is None:
        return None
    studies = bucket.studies if bucket.studies else tuple(
        s for source in bucket.sources for s in source.studies
    )
    counts = Counter(
        label
        for record in studies
        if _is_positive(record.direction)
        for label in record.labels
    )
    if not counts:
        return None
    word = max(counts, key=lambda lab: (counts[lab], -LABEL_TIE_ORDER.index(lab)))
    return f"Grade {result.final_grade.value} - {word.display}"


@dataclass(frozen=True)
class ToolIndices:
    """Bibliometric indices of a tool at a reference year."""

    citation_index: float
    publication_index: float
    literature_index: int


def compute_indices(tool: ToolProfile, reference_year: int) -> ToolIndices:
    """Citation, publication, and literature indices.

    Age counts the publication year itself (a tool published in the
    reference year is one year old), so the averages are always defined.
    """
    if reference_year < tool.year:
        raise InvalidReferenceYear(
            f"reference year {reference_year} precedes tool year {tool.year}"
        )
    age = reference_year - tool.year + 1
    return ToolIndices(
        citation_index=tool.tool_citations / age,
        publication_index=tool.studies_count / age,
        literature_index=tool.tool_citations * tool.studies_count,
    )
