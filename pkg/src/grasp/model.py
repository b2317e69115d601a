"""Domain model of the GRASP grading framework.

Grades combine three dimensions: the phase of evaluation (before
implementation, planning for implementation, after implementation), the
level of evidence within that phase, and the direction of the collected
evidence. The types here are shared by the appraisal engine, corpus I/O,
statistics, and report rendering.

All values are immutable after construction and safe to share between
concurrent tasks without coordination.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Optional


class Phase(Enum):
    """Lifecycle stage of the published evidence on a tool."""

    BEFORE_IMPLEMENTATION = "before_implementation"
    PLANNING_FOR_IMPLEMENTATION = "planning_for_implementation"
    AFTER_IMPLEMENTATION = "after_implementation"

    @property
    def letter(self) -> str:
        return _PHASE_LETTER[self]

    @property
    def display(self) -> str:
        return _PHASE_DISPLAY[self]


_PHASE_LETTER = {
    Phase.BEFORE_IMPLEMENTATION: "C",
    Phase.PLANNING_FOR_IMPLEMENTATION: "B",
    Phase.AFTER_IMPLEMENTATION: "A",
}

_PHASE_DISPLAY = {
    Phase.BEFORE_IMPLEMENTATION: "Before Implementation",
    Phase.PLANNING_FOR_IMPLEMENTATION: "Planning for Implementation",
    Phase.AFTER_IMPLEMENTATION: "After Implementation",
}


class GradeLevel(Enum):
    """One rung of the grade ladder, ordered C0 < C3 < C2 < C1 < B3 < B2 < B1 < A3 < A2 < A1.

    C0 and B1 are outcome-only levels: C0 marks a tool whose evidence never
    qualifies, B1 is derived from jointly positive B2 and B3 buckets. Neither
    may appear as the level of a raw study record.
    """

    C0 = "C0"
    C3 = "C3"
    C2 = "C2"
    C1 = "C1"
    B3 = "B3"
    B2 = "B2"
    B1 = "B1"
    A3 = "A3"
    A2 = "A2"
    A1 = "A1"

    @property
    def rank(self) -> int:
        return _RANK[self]

    @property
    def phase(self) -> Phase:
        return _LEVEL_PHASE[self]

    @property
    def descriptor(self) -> str:
        return _DESCRIPTOR[self]

    @property
    def evidence_label(self) -> str:
        """Phase-C evidence label ("High Evidence" etc.); empty elsewhere."""
        return _EVIDENCE_LABEL.get(self, "")


_RANK = {
    GradeLevel.C0: 0,
    GradeLevel.C3: 1,
    GradeLevel.C2: 2,
    GradeLevel.C1: 3,
    GradeLevel.B3: 4,
    GradeLevel.B2: 5,
    GradeLevel.B1: 6,
    GradeLevel.A3: 7,
    GradeLevel.A2: 8,
    GradeLevel.A1: 9,
}

_LEVEL_PHASE = {
    GradeLevel.C0: Phase.BEFORE_IMPLEMENTATION,
    GradeLevel.C3: Phase.BEFORE_IMPLEMENTATION,
    GradeLevel.C2: Phase.BEFORE_IMPLEMENTATION,
    GradeLevel.C1: Phase.BEFORE_IMPLEMENTATION,
    GradeLevel.B3: Phase.PLANNING_FOR_IMPLEMENTATION,
    GradeLevel.B2: Phase.PLANNING_FOR_IMPLEMENTATION,
    GradeLevel.B1: Phase.PLANNING_FOR_IMPLEMENTATION,
    GradeLevel.A3: Phase.AFTER_IMPLEMENTATION,
    GradeLevel.A2: Phase.AFTER_IMPLEMENTATION,
    GradeLevel.A1: Phase.AFTER_IMPLEMENTATION,
}

_DESCRIPTOR = {
    GradeLevel.C0: "Insufficient internal validity",
    GradeLevel.C3: "Internal validation only",
    GradeLevel.C2: "External validation once",
    GradeLevel.C1: "External validation multiple times",
    GradeLevel.B3: "Usability testing reported",
    GradeLevel.B2: "Potential effect reported",
    GradeLevel.B1: "Potential effect and usability both reported",
    GradeLevel.A3: "Impact evaluated in subjective studies",
    GradeLevel.A2: "Impact evaluated in observational studies",
    GradeLevel.A1: "Impact evaluated in experimental studies",
}

_EVIDENCE_LABEL = {
    GradeLevel.C1: "High Evidence",
    GradeLevel.C2: "Medium Evidence",
    GradeLevel.C3: "Low Evidence",
}


def ordinal_rank(level: GradeLevel) -> int:
    """Fixed ordinal position of a grade: C0=0 up to A1=9."""
    return _RANK[level]


#: Levels scanned for a final grade, best first. C0 is the fallback outcome.
GRADE_SCAN_ORDER = (
    GradeLevel.A1,
    GradeLevel.A2,
    GradeLevel.A3,
    GradeLevel.B1,
    GradeLevel.B2,
    GradeLevel.B3,
    GradeLevel.C1,
    GradeLevel.C2,
    GradeLevel.C3,
)


class StudyDirection(Enum):
    """Per-study conclusion. Equivocal is grouped with negative when aggregating."""

    POSITIVE = "positive"
    EQUIVOCAL = "equivocal"
    NEGATIVE = "negative"


class BucketDirection(Enum):
    """Aggregated direction of one evidence bucket."""

    POSITIVE = "positive"
    NEGATIVE = "negative"
    MIXED_POSITIVE = "mixed_positive"
    MIXED_NEGATIVE = "mixed_negative"

    @property
    def qualifies(self) -> bool:
        """Whether this direction can support a final grade."""
        return self in (BucketDirection.POSITIVE, BucketDirection.MIXED_POSITIVE)


class MatchingVerdict(Enum):
    MATCHING = "matching"
    NON_MATCHING = "non_matching"


class QualityVerdict(Enum):
    HIGH = "high"
    LOW = "low"


class StrengthVerdict(Enum):
    STRONG = "strong"
    MEDIUM = "medium"
    WEAK = "weak"


class EvidenceClass(Enum):
    """Adjudication class used by the mixed evidence protocol (A strongest)."""

    A = "A"
    B = "B"
    C = "C"


class ToolCategory(Enum):
    DIAGNOSTIC = "diagnostic"
    THERAPEUTIC = "therapeutic"
    PROGNOSTIC = "prognostic"
    PREVENTIVE = "preventive"


class InputSource(Enum):
    CLINICAL = "clinical"
    NON_CLINICAL = "non_clinical"


class InputType(Enum):
    OBJECTIVE = "objective"
    SUBJECTIVE = "subjective"


class Automation(Enum):
    MANUAL = "manual"
    AUTOMATED = "automated"


class StudyType(Enum):
    DEVELOPMENT = "development"
    INTERNAL_VALIDATION = "internal_validation"
    EXTERNAL_VALIDATION = "external_validation"
    USABILITY = "usability"
    POTENTIAL_EFFECT = "potential_effect"
    POST_IMPLEMENTATION_IMPACT = "post_implementation_impact"


class ImpactSubtype(Enum):
    """Design of a post-implementation impact study; fixes its A-level."""

    EXPERIMENTAL = "experimental"
    OBSERVATIONAL = "observational"
    SUBJECTIVE = "subjective"


class OutcomeLabel(Enum):
    """One-word outcome tags a study may carry."""

    EFFECTIVENESS = "effectiveness"
    EFFICIENCY = "efficiency"
    SAFETY = "safety"
    WORKFLOW = "workflow"
    PROCESSES = "processes"

    @property
    def display(self) -> str:
        return self.value.capitalize()


#: Study conditions compared against the tool's original specification.
MATCHING_FIELD_KEYS = (
    "predictive_task",
    "target_outcome",
    "intended_user",
    "clinical_area",
    "settings",
    "target_population",
    "age_group",
)

#: Binary quality indicators of a study.
QUALITY_FIELD_KEYS = (
    "sample_size_adequate",
    "data_collection_prospective",
    "methods_adequate",
    "institute_credible",
    "multi_site",
)

#: Levels a study of each type may declare. Development records may instead
#: omit the level entirely, which makes them metadata-only (not graded).
LEVELS_BY_STUDY_TYPE: Mapping[StudyType, frozenset[GradeLevel]] = {
    StudyType.DEVELOPMENT: frozenset({GradeLevel.C3}),
    StudyType.INTERNAL_VALIDATION: frozenset({GradeLevel.C3}),
    StudyType.EXTERNAL_VALIDATION: frozenset({GradeLevel.C2, GradeLevel.C1}),
    StudyType.USABILITY: frozenset({GradeLevel.B3}),
    StudyType.POTENTIAL_EFFECT: frozenset({GradeLevel.B2}),
    StudyType.POST_IMPLEMENTATION_IMPACT: frozenset(
        {GradeLevel.A1, GradeLevel.A2, GradeLevel.A3}
    ),
}

#: A-levels pinned to the impact study design.
LEVEL_BY_IMPACT_SUBTYPE: Mapping[ImpactSubtype, GradeLevel] = {
    ImpactSubtype.EXPERIMENTAL: GradeLevel.A1,
    ImpactSubtype.OBSERVATIONAL: GradeLevel.A2,
    ImpactSubtype.SUBJECTIVE: GradeLevel.A3,
}


@dataclass(frozen=True)
class ToolProfile:
    """Identity, clinical specification, and bibliometrics of one predictive tool."""

    id: str
    name: str
    author: str
    country: str
    year: int
    category: ToolCategory
    intended_use: str
    intended_user: str
    clinical_area: str
    target_population: str
    target_outcome: str
    action: str
    input_source: frozenset[InputSource]
    input_type: frozenset[InputType]
    local_context: bool
    methodology: str
    internal_validation_method: str
    automation: Automation
    tool_citations: int
    studies_count: int
    authors_count: int
    sample_size: int
    journal_name: str
    journal_rank: float
    dedicated_support: Optional[str] = None
    endorsement: Optional[str] = None


@dataclass(frozen=True)
class StudyRecord:
    """One published study about a tool, encoded as an evidence-summary row.

    ``level`` is the grade rung the study evidences. It is mandatory except
    for development studies that report no validity measures; those are
    metadata-only and never graded. ``matching_fields``/``quality_fields``
    hold only the flags the report actually stated; absent keys are unknown.
    """

    id: str
    tool_id: str
    citation: str
    country: str
    year: int
    phase: Phase
    study_type: StudyType
    comparative: bool
    direction: StudyDirection
    level: Optional[GradeLevel] = None
    matching_fields: Mapping[str, bool] = field(default_factory=dict)
    quality_fields: Mapping[str, bool] = field(default_factory=dict)
    matching_override: Optional[MatchingVerdict] = None
    quality_override: Optional[QualityVerdict] = None
    impact_subtype: Optional[ImpactSubtype] = None
    labels: frozenset[OutcomeLabel] = frozenset()
    sample_size: Optional[int] = None
    notes: Optional[str] = None

    @property
    def is_gradable(self) -> bool:
        return self.level is not None


@dataclass(frozen=True)
class EvidenceBucket:
    """All studies of one tool at one grade level, with an aggregated direction.

    External-validation records are re-levelled by multiplicity before
    bucketing (two or more distinct studies form the C1 bucket, exactly one
    the C2 bucket). The derived B1 bucket owns no raw studies; it references
    the B2 and B3 buckets it was built from via ``sources``.
    """

    tool_id: str
    level: GradeLevel
    studies: tuple[StudyRecord, ...]
    direction: BucketDirection
    needs_review: bool
    adjudication_trace: tuple[str, ...]
    sources: tuple["EvidenceBucket", ...] = ()

    @property
    def qualifies(self) -> bool:
        return self.direction.qualifies


@dataclass(frozen=True)
class GradeResult:
    """Outcome of grading one tool.

    ``final_grade`` is C0 exactly when no bucket direction qualifies; in that
    case ``supporting_bucket`` is absent and ``direction`` reports the verdict
    of the highest-ranked bucket.
    """

    tool_id: str
    final_grade: GradeLevel
    direction: BucketDirection
    justification: str
    needs_review: bool
    all_buckets: tuple[EvidenceBucket, ...]
    supporting_bucket: Optional[EvidenceBucket] = None
    tool_label: Optional[str] = None


@dataclass(frozen=True)
class RaterComparison:
    """Paired grade vectors from two raters with their agreement statistics."""

    rater_a_name: str
    rater_b_name: str
    tool_ids: tuple[str, ...]
    grades_a: tuple[GradeLevel, ...]
    grades_b: tuple[GradeLevel, ...]
    rho: float
    p_value: float
    exact_agreement: int
