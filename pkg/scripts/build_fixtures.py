"""One-off builder for the shipped fixtures (run once, output committed)."""

from __future__ import annotations

import json
from pathlib import Path

from grasp.corpus import Corpus, emit_corpus, parse_corpus
from grasp.engine import assign_grade
from grasp.model import (
    Automation,
    GradeLevel,
    ImpactSubtype,
    InputSource,
    InputType,
    MatchingVerdict,
    OutcomeLabel,
    Phase,
    QualityVerdict,
    StudyDirection,
    StudyRecord,
    StudyType,
    ToolCategory,
    ToolProfile,
)

ROOT = Path(__file__).resolve().parent.parent / "fixtures"

ALL_MATCH = {
    "predictive_task": True,
    "target_outcome": True,
    "intended_user": True,
    "clinical_area": True,
    "settings": True,
    "target_population": True,
    "age_group": True,
}


def mismatch(**kw):
    flags = dict(ALL_MATCH)
    flags.update(kw)
    return flags


def tool(**kw) -> ToolProfile:
    base = dict(
        input_source=frozenset({InputSource.CLINICAL}),
        input_type=frozenset({InputType.OBJECTIVE, InputType.SUBJECTIVE}),
        local_context=False,
        automation=Automation.MANUAL,
    )
    base.update(kw)
    return ToolProfile(**base)


def study(**kw) -> StudyRecord:
    base = dict(
        comparative=False,
        matching_fields=ALL_MATCH,
        quality_override=QualityVerdict.HIGH,
    )
    base.update(kw)
    return base and StudyRecord(**base)


P = StudyDirection.POSITIVE
E = StudyDirection.EQUIVOCAL
N = StudyDirection.NEGATIVE
BEFORE = Phase.BEFORE_IMPLEMENTATION
PLANNING = Phase.PLANNING_FOR_IMPLEMENTATION
AFTER = Phase.AFTER_IMPLEMENTATION

tools = [
    tool(
        id="centor",
        name="Centor Score",
        author="Centor",
        country="United States",
        year=1981,
        category=ToolCategory.DIAGNOSTIC,
        intended_use="Estimate the probability of group A streptococcal pharyngitis in adults presenting with sore throat",
        intended_user="Emergency and primary care physicians",
        clinical_area="Infectious disease",
        target_population="Adults presenting with acute sore throat",
        target_outcome="Positive throat culture for group A streptococcus",
        action="Guide throat culture and empirical antibiotic decisions",
        methodology="Multivariate logistic regression",
        internal_validation_method="Split-sample validation",
        endorsement="Referenced in adult pharyngitis practice guidelines",
        tool_citations=1460,
        studies_count=6,
        authors_count=5,
        sample_size=286,
        journal_name="Medical Decision Making",
        journal_rank=3.1,
    ),
    tool(
        id="chalice",
        name="CHALICE Rule",
        author="Dunning",
        country="United Kingdom",
        year=2006,
        category=ToolCategory.DIAGNOSTIC,
        intended_use="Identify children with head injury at high risk of clinically significant intracranial injury",
        intended_user="Emergency physicians",
        clinical_area="Paediatric emergency medicine",
        target_population="Children presenting with head injury of any severity",
        target_outcome="Clinically significant intracranial injury",
        action="Select children for cranial computed tomography",
        methodology="Recursive partitioning",
        internal_validation_method="Apparent performance on the derivation cohort",
        dedicated_support="Children's head injury study group",
        tool_citations=390,
        studies_count=5,
        authors_count=7,
        sample_size=22772,
        journal_name="Archives of Disease in Childhood",
        journal_rank=3.0,
    ),
    tool(
        id="dietrich",
        name="Dietrich Rule",
        author="Dietrich",
        country="United States",
        year=1993,
        category=ToolCategory.DIAGNOSTIC,
        intended_use="Predict abnormality on computed tomography after paediatric head trauma from clinical factors",
        intended_user="Emergency physicians",
        clinical_area="Paediatric emergency medicine",
        target_population="Children with blunt head trauma",
        target_outcome="Abnormal cranial computed tomography",
        action="Support selective imaging of injured children",
        methodology="Univariate and multivariate risk-factor analysis",
        internal_validation_method="Retrospective cohort performance",
        tool_citations=120,
        studies_count=1,
        authors_count=5,
        sample_size=322,
        journal_name="Annals of Emergency Medicine",
        journal_rank=5.2,
    ),
    tool(
        id="lace",
        name="LACE Index",
        author="van Walraven",
        country="Canada",
        year=2010,
        category=ToolCategory.PROGNOSTIC,
        intended_use="Predict early death or unplanned readmission within thirty days of hospital discharge",
        intended_user="Hospital physicians and discharge planners",
        clinical_area="Internal medicine",
        target_population="Adults discharged from hospital to the community",
        target_outcome="Death or unplanned readmission within thirty days",
        action="Target transitional-care interventions at high-risk patients",
        input_source=frozenset({InputSource.CLINICAL, InputSource.NON_CLINICAL}),
        methodology="Multivariable logistic regression",
        internal_validation_method="Split-sample validation",
        tool_citations=980,
        studies_count=4,
        authors_count=8,
        sample_size=4812,
        journal_name="Canadian Medical Association Journal",
        journal_rank=7.4,
    ),
    tool(
        id="manuck",
        name="Manuck Scoring System",
        author="Manuck",
        country="United States",
        year=2016,
        category=ToolCategory.PROGNOSTIC,
        intended_use="Predict nonresponse to 17-alpha hydroxyprogesterone caproate for recurrent preterm birth prevention",
        intended_user="Obstetricians",
        clinical_area="Obstetrics",
        target_population="Pregnant women with a prior spontaneous preterm birth",
        target_outcome="Recurrent spontaneous preterm birth despite prophylaxis",
        action="Identify candidates for alternative preventive management",
        methodology="Logistic regression with bootstrapped risk scoring",
        internal_validation_method="Bootstrap resampling",
        tool_citations=45,
        studies_count=2,
        authors_count=6,
        sample_size=754,
        journal_name="American Journal of Obstetrics and Gynecology",
        journal_rank=6.1,
    ),
    tool(
        id="ottawa-knee",
        name="Ottawa Knee Rule",
        author="Stiell",
        country="Canada",
        year=1995,
        category=ToolCategory.DIAGNOSTIC,
        intended_use="Determine the need for radiography in acute knee injury",
        intended_user="Emergency physicians",
        clinical_area="Emergency medicine",
        target_population="Adults with acute knee injury",
        target_outcome="Clinically important knee fracture",
        action="Order knee radiography only when a rule criterion is met",
        methodology="Recursive partitioning",
        internal_validation_method="Prospective derivation-cohort performance",
        endorsement="Adopted in emergency medicine imaging guidelines",
        tool_citations=520,
        studies_count=4,
        authors_count=9,
        sample_size=1047,
        journal_name="Annals of Emergency Medicine",
        journal_rank=5.2,
    ),
    tool(
        id="pecarn",
        name="PECARN Rule",
        author="Kuppermann",
        country="United States",
        year=2009,
        category=ToolCategory.DIAGNOSTIC,
        intended_use="Identify children at very low risk of clinically important traumatic brain injury after head trauma",
        intended_user="Emergency physicians",
        clinical_area="Paediatric emergency medicine",
        target_population="Children presenting within 24 hours of head trauma",
        target_outcome="Clinically important traumatic brain injury",
        action="Avoid cranial computed tomography in very-low-risk children",
        methodology="Binary recursive partitioning",
        internal_validation_method="Held-out validation cohort",
        dedicated_support="Pediatric Emergency Care Applied Research Network",
        endorsement="Recommended in paediatric head injury guidelines",
        tool_citations=1650,
        studies_count=7,
        authors_count=12,
        sample_size=42412,
        journal_name="The Lancet",
        journal_rank=59.1,
    ),
    tool(
        id="taylor",
        name="Taylor Mortality Model",
        author="Taylor",
        country="United States",
        year=2016,
        category=ToolCategory.PROGNOSTIC,
        intended_use="Predict in-hospital mortality of emergency department patients with sepsis from electronic health record data",
        intended_user="Emergency physicians",
        clinical_area="Emergency medicine",
        target_population="Adult emergency department patients with sepsis",
        target_outcome="In-hospital death",
        action="Prioritise monitoring and disposition of high-risk patients",
        input_source=frozenset({InputSource.CLINICAL, InputSource.NON_CLINICAL}),
        methodology="Machine learning (random forest)",
        internal_validation_method="Cross-validation on the development sample",
        automation=Automation.AUTOMATED,
        tool_citations=210,
        studies_count=1,
        authors_count=6,
        sample_size=5278,
        journal_name="Academic Emergency Medicine",
        journal_rank=3.2,
    ),
]

studies = [
    # Centor: A1 mixed resolving negative, B3 positive, C1 positive, C3 positive -> B3.
    study(
        id="centor-s1", tool_id="centor",
        citation="Centor et al., 1981 (derivation and internal performance)",
        country="United States", year=1981, phase=BEFORE,
        study_type=StudyType.DEVELOPMENT, level=GradeLevel.C3, direction=P,
        quality_fields={"sample_size_adequate": True, "methods_adequate": True,
                        "institute_credible": True, "multi_site": False},
        sample_size=286,
        notes="Derivation study reporting discrimination of the four-item score",
    ),
    study(
        id="centor-s2", tool_id="centor",
        citation="McIsaac et al., 1998 (community validation)",
        country="Canada", year=1998, phase=BEFORE,
        study_type=StudyType.EXTERNAL_VALIDATION, level=GradeLevel.C1, direction=P,
        sample_size=521,
    ),
    study(
        id="centor-s3", tool_id="centor",
        citation="McIsaac et al., 2000 (validation in mixed-age practices)",
        country="Canada", year=2000, phase=BEFORE,
        study_type=StudyType.EXTERNAL_VALIDATION, level=GradeLevel.C1, direction=P,
        sample_size=621,
    ),
    study(
        id="centor-s4", tool_id="centor",
        citation="Linder et al., 2006 (score-based decision support acceptability)",
        country="United States", year=2006, phase=PLANNING,
        study_type=StudyType.USABILITY, level=GradeLevel.B3, direction=P,
        labels=frozenset({OutcomeLabel.WORKFLOW}),
        sample_size=64,
    ),
    study(
        id="centor-s5", tool_id="centor",
        citation="McIsaac et al., 2002 (cluster trial of score-guided care)",
        country="Canada", year=2002, phase=AFTER,
        study_type=StudyType.POST_IMPLEMENTATION_IMPACT, level=GradeLevel.A1,
        impact_subtype=ImpactSubtype.EXPERIMENTAL, direction=N,
        comparative=True,
        labels=frozenset({OutcomeLabel.EFFECTIVENESS}),
        sample_size=621,
        notes="No reduction in unnecessary antibiotic prescribing in matched settings",
    ),
    study(
        id="centor-s6", tool_id="centor",
        citation="Worrall et al., 2007 (small before-after trial, different settings)",
        country="Canada", year=2007, phase=AFTER,
        study_type=StudyType.POST_IMPLEMENTATION_IMPACT, level=GradeLevel.A1,
        impact_subtype=ImpactSubtype.EXPERIMENTAL, direction=P,
        comparative=True,
        matching_fields=mismatch(settings=False, target_population=False),
        quality_override=QualityVerdict.LOW,
        labels=frozenset({OutcomeLabel.EFFICIENCY}),
        sample_size=149,
    ),
    # CHALICE: B2 positive, C1 positive, C3 positive (+ metadata-only development).
    study(
        id="chalice-s1", tool_id="chalice",
        citation="Dunning et al., 2006 (rule derivation, descriptive)",
        country="United Kingdom", year=2006, phase=BEFORE,
        study_type=StudyType.DEVELOPMENT, direction=P,
        notes="Metadata only: derivation description without validity measures",
    ),
    study(
        id="chalice-s2", tool_id="chalice",
        citation="Dunning et al., 2006 (derivation cohort performance)",
        country="United Kingdom", year=2006, phase=BEFORE,
        study_type=StudyType.INTERNAL_VALIDATION, level=GradeLevel.C3, direction=P,
        sample_size=22772,
    ),
    study(
        id="chalice-s3", tool_id="chalice",
        citation="Crowe et al., 2010 (retrospective external validation)",
        country="Australia", year=2010, phase=BEFORE,
        study_type=StudyType.EXTERNAL_VALIDATION, level=GradeLevel.C1, direction=P,
        sample_size=1065,
    ),
    study(
        id="chalice-s4", tool_id="chalice",
        citation="Lyttle et al., 2012 (multicentre comparative validation)",
        country="Australia", year=2012, phase=BEFORE,
        study_type=StudyType.EXTERNAL_VALIDATION, level=GradeLevel.C1, direction=P,
        comparative=True,
        sample_size=1009,
    ),
    study(
        id="chalice-s5", tool_id="chalice",
        citation="Pickering et al., 2013 (projected imaging-rate effect)",
        country="United Kingdom", year=2013, phase=PLANNING,
        study_type=StudyType.POTENTIAL_EFFECT, level=GradeLevel.B2, direction=P,
        labels=frozenset({OutcomeLabel.EFFICIENCY}),
        sample_size=1009,
    ),
    # Dietrich: single negative internal validation -> C0.
    study(
        id="dietrich-s1", tool_id="dietrich",
        citation="Dietrich et al., 1993 (clinical predictors vs computed tomography)",
        country="United States", year=1993, phase=BEFORE,
        study_type=StudyType.INTERNAL_VALIDATION, level=GradeLevel.C3, direction=N,
        quality_fields={"sample_size_adequate": False, "data_collection_prospective": True},
        sample_size=322,
        notes="Clinical factors could not reliably predict abnormal tomography",
    ),
    # LACE: C1 mixed resolving positive, C3 positive -> C1.
    study(
        id="lace-s1", tool_id="lace",
        citation="van Walraven et al., 2010 (derivation and split-sample validation)",
        country="Canada", year=2010, phase=BEFORE,
        study_type=StudyType.INTERNAL_VALIDATION, level=GradeLevel.C3, direction=P,
        sample_size=4812,
    ),
    study(
        id="lace-s2", tool_id="lace",
        citation="Gruneir et al., 2011 (administrative-data validation)",
        country="Canada", year=2011, phase=BEFORE,
        study_type=StudyType.EXTERNAL_VALIDATION, level=GradeLevel.C1, direction=P,
        sample_size=26045,
    ),
    study(
        id="lace-s3", tool_id="lace",
        citation="Wang et al., 2014 (validation in a veteran cohort)",
        country="United States", year=2014, phase=BEFORE,
        study_type=StudyType.EXTERNAL_VALIDATION, level=GradeLevel.C1, direction=P,
        sample_size=1442,
    ),
    study(
        id="lace-s4", tool_id="lace",
        citation="Low et al., 2015 (validation in an elderly Asian cohort)",
        country="Singapore", year=2015, phase=BEFORE,
        study_type=StudyType.EXTERNAL_VALIDATION, level=GradeLevel.C1, direction=N,
        matching_fields=mismatch(target_population=False, age_group=False),
        sample_size=5862,
        notes="Discrimination attenuated outside the derivation population",
    ),
    # Manuck: single positive external validation -> C2; C3 positive.
    study(
        id="manuck-s1", tool_id="manuck",
        citation="Manuck et al., 2016 (derivation with bootstrap validation)",
        country="United States", year=2016, phase=BEFORE,
        study_type=StudyType.INTERNAL_VALIDATION, level=GradeLevel.C3, direction=P,
        sample_size=754,
    ),
    study(
        id="manuck-s2", tool_id="manuck",
        citation="Manuck et al., 2018 (validation in an independent trial cohort)",
        country="United States", year=2018, phase=BEFORE,
        study_type=StudyType.EXTERNAL_VALIDATION, level=GradeLevel.C2, direction=P,
        sample_size=430,
    ),
    # Ottawa Knee: A1 positive, C1 positive, C3 positive -> A1.
    study(
        id="ottawa-s1", tool_id="ottawa-knee",
        citation="Stiell et al., 1995 (derivation with prospective performance)",
        country="Canada", year=1995, phase=BEFORE,
        study_type=StudyType.DEVELOPMENT, level=GradeLevel.C3, direction=P,
        sample_size=1047,
    ),
    study(
        id="ottawa-s2", tool_id="ottawa-knee",
        citation="Stiell et al., 1996 (prospective validation)",
        country="Canada", year=1996, phase=BEFORE,
        study_type=StudyType.EXTERNAL_VALIDATION, level=GradeLevel.C1, direction=P,
        sample_size=1096,
    ),
    study(
        id="ottawa-s3", tool_id="ottawa-knee",
        citation="Emparanza et al., 2001 (validation in another health system)",
        country="Spain", year=2001, phase=BEFORE,
        study_type=StudyType.EXTERNAL_VALIDATION, level=GradeLevel.C1, direction=P,
        sample_size=766,
    ),
    study(
        id="ottawa-s4", tool_id="ottawa-knee",
        citation="Stiell et al., 1997 (controlled implementation trial)",
        country="Canada", year=1997, phase=AFTER,
        study_type=StudyType.POST_IMPLEMENTATION_IMPACT, level=GradeLevel.A1,
        impact_subtype=ImpactSubtype.EXPERIMENTAL, direction=P,
        comparative=True,
        quality_fields={"sample_size_adequate": True, "data_collection_prospective": True,
                        "methods_adequate": True, "institute_credible": True,
                        "multi_site": True},
        labels=frozenset({OutcomeLabel.EFFICIENCY}),
        sample_size=3907,
        notes="Reduced knee radiography without missed fractures",
    ),
    # PECARN: A2 mixed resolving positive, B2 positive, C1 positive, C3 positive -> A2.
    study(
        id="pecarn-s1", tool_id="pecarn",
        citation="Kuppermann et al., 2009 (derivation and held-out validation)",
        country="United States", year=2009, phase=BEFORE,
        study_type=StudyType.INTERNAL_VALIDATION, level=GradeLevel.C3, direction=P,
        sample_size=42412,
    ),
    study(
        id="pecarn-s2", tool_id="pecarn",
        citation="Schonfeld et al., 2014 (two-site external validation)",
        country="United States", year=2014, phase=BEFORE,
        study_type=StudyType.EXTERNAL_VALIDATION, level=GradeLevel.C1, direction=P,
        sample_size=2439,
    ),
    study(
        id="pecarn-s3", tool_id="pecarn",
        citation="Babl et al., 2017 (multicentre comparative validation)",
        country="Australia", year=2017, phase=BEFORE,
        study_type=StudyType.EXTERNAL_VALIDATION, level=GradeLevel.C1, direction=P,
        comparative=True,
        sample_size=20137,
    ),
    study(
        id="pecarn-s4", tool_id="pecarn",
        citation="Nishijima et al., 2015 (cost-effectiveness of rule-based imaging)",
        country="United States", year=2015, phase=PLANNING,
        study_type=StudyType.POTENTIAL_EFFECT, level=GradeLevel.B2, direction=P,
        labels=frozenset({OutcomeLabel.EFFICIENCY, OutcomeLabel.SAFETY}),
        sample_size=1000,
    ),
    study(
        id="pecarn-s5", tool_id="pecarn",
        citation="Dayan et al., 2017 (implementation cohort across network sites)",
        country="United States", year=2017, phase=AFTER,
        study_type=StudyType.POST_IMPLEMENTATION_IMPACT, level=GradeLevel.A2,
        impact_subtype=ImpactSubtype.OBSERVATIONAL, direction=P,
        quality_fields={"sample_size_adequate": True, "data_collection_prospective": True,
                        "methods_adequate": True, "institute_credible": True,
                        "multi_site": True},
        labels=frozenset({OutcomeLabel.EFFICIENCY}),
        sample_size=16658,
        notes="Computed tomography use fell after decision-support rollout",
    ),
    study(
        id="pecarn-s6", tool_id="pecarn",
        citation="Jennings et al., 2017 (before-after cohort at a community site)",
        country="United States", year=2017, phase=AFTER,
        study_type=StudyType.POST_IMPLEMENTATION_IMPACT, level=GradeLevel.A2,
        impact_subtype=ImpactSubtype.OBSERVATIONAL, direction=P,
        labels=frozenset({OutcomeLabel.EFFICIENCY, OutcomeLabel.SAFETY}),
        sample_size=2696,
    ),
    study(
        id="pecarn-s7", tool_id="pecarn",
        citation="Puffenbarger et al., 2018 (single-site observational audit)",
        country="United States", year=2018, phase=AFTER,
        study_type=StudyType.POST_IMPLEMENTATION_IMPACT, level=GradeLevel.A2,
        impact_subtype=ImpactSubtype.OBSERVATIONAL, direction=E,
        matching_fields=mismatch(settings=False),
        quality_override=QualityVerdict.LOW,
        sample_size=920,
        notes="Imaging trend unchanged; concurrent initiatives confound the estimate",
    ),
    # Taylor: single positive internal validation -> C3.
    study(
        id="taylor-s1", tool_id="taylor",
        citation="Taylor et al., 2016 (derivation with cross-validated performance)",
        country="United States", year=2016, phase=BEFORE,
        study_type=StudyType.INTERNAL_VALIDATION, level=GradeLevel.C3, direction=P,
        matching_override=MatchingVerdict.MATCHING,
        matching_fields={},
        sample_size=5278,
    ),
]

corpus = Corpus(tools=tuple(sorted(tools, key=lambda t: t.id)),
                studies=tuple(sorted(studies, key=lambda s: s.id)))

out = emit_corpus(corpus)
(ROOT / "grasp8.json").write_bytes(out)

reparsed = parse_corpus(out)
assert reparsed == corpus, "fixture does not round-trip"

expected = {
    "centor": "B3", "chalice": "B2", "dietrich": "C0", "lace": "C1",
    "manuck": "C2", "ottawa-knee": "A1", "pecarn": "A2", "taylor": "C3",
}
for t in reparsed.tools:
    result = assign_grade(t, reparsed.studies_for(t.id))
    status = "ok" if result.final_grade.value == expected[t.id] else "MISMATCH"
    print(f"{t.id:12s} {result.final_grade.value:3s} {result.direction.value:15s} {status}")
    assert result.final_grade.value == expected[t.id], t.id

# Rater grade sheets for the three independent grading passes.
RATERS = ROOT / "raters"
RATERS.mkdir(parents=True, exist_ok=True)
base = {
    "centor": ("B2", "B3", "B3"),
    "chalice": ("B2", "B2", "B2"),
    "dietrich": ("C0", "C0", "C0"),
    "lace": ("C1", "C1", "C1"),
    "manuck": ("C2", "C2", "C2"),
    "ottawa-knee": ("A1", "A2", "A1"),
    "pecarn": ("A2", "A2", "A2"),
    "taylor": ("C3", "C3", "C3"),
}
for idx, fname in enumerate(["r1.csv", "r2.csv", "authors.csv"]):
    lines = ["tool_id,grade"] + [f"{tid},{grades[idx]}" for tid, grades in base.items()]
    (RATERS / fname).write_text("\n".join(lines) + "\n")

# Survey sheet hitting the published per-question means exactly (n=100 each).
questions = [
    ("predictive-performance", [(5, 87), (4, 13)]),   # 4.87
    ("performance-levels", [(5, 44), (4, 56)]),       # 4.44
    ("usability", [(5, 68), (4, 32)]),                # 4.68
    ("potential-effect", [(5, 61), (4, 39)]),         # 4.61
    ("usability-higher", [(3, 97), (2, 3)]),          # 2.97
    ("impact", [(5, 78), (4, 22)]),                   # 4.78
    ("impact-levels", [(5, 16), (4, 84)]),            # 4.16
    ("evidence-direction", [(5, 26), (4, 74)]),       # 4.26
]
lines = ["question_id,response"]
for qid, mix in questions:
    total = sum(n for _, n in mix)
    assert total == 100, qid
    mean = sum(v * n for v, n in mix) / total
    print(f"{qid:25s} mean={mean:.4f}")
    for value, count in mix:
        lines.extend([f"{qid},{value}"] * count)
(ROOT / "survey.csv").write_text("\n".join(lines) + "\n")
print("fixtures written")
