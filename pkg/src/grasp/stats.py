"""Ordinal statistics: tie-corrected rank correlation, exact permutation
p-values, interrater comparison, and Likert survey aggregation.

The rank correlation assigns mid-ranks to ties and correlates the rank
vectors, which is the tie-correct form (the difference-of-ranks shortcut is
wrong in the presence of ties). Significance uses exact enumeration of all
n! arrangements, bounded at n = 10.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    DegenerateInput,
    EmptyResponses,
    LengthMismatch,
    OutOfRange,
    TooLarge,
)
from .model import GradeLevel, RaterComparison, ordinal_rank

#: Exact permutation enumeration bound (10! = 3,628,800 arrangements).
MAX_EXACT_N = 10

_EPS = 1e-12


def _midranks(values: Sequence[float]) -> np.ndarray:
    """Ranks 1..n with tied values sharing the mean of their positions."""
    arr = np.asarray(values, dtype=float)
    order = np.argsort(arr, kind="stable")
    ranks = np.empty(len(arr), dtype=float)
    i = 0
    while i < len(arr):
        j = i
        while j + 1 < len(arr) and arr[order[j + 1]] == arr[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2 + 1
        i = j + 1
    return ranks


def _rank_vectors(x: Sequence[float], y: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    if len(x) != len(y):
        raise LengthMismatch(f"paired vectors differ in length: {len(x)} vs {len(y)}")
    if len(x) < 2:
        raise DegenerateInput("rank correlation needs at least two observations")
    rx, ry = _midranks(x), _midranks(y)
    if np.ptp(rx) == 0 or np.ptp(ry) == 0:
        raise DegenerateInput("rank correlation is undefined for a constant vector")
    return rx, ry


def _pearson(rx: np.ndarray, ry: np.ndarray) -> float:
    dx = rx - rx.mean()
    dy = ry - ry.mean()
    return float(dx @ dy / math.sqrt((dx @ dx) * (dy @ dy)))


def spearman_rho(x: Sequence[float], y: Sequence[float]) -> float:
    """Tie-corrected Spearman rank correlation of two ordinal vectors."""
    rx, ry = _rank_vectors(x, y)
    return _pearson(rx, ry)


def permutation_p(x: Sequence[float], y: Sequence[float]) -> float:
    """Exact two-sided permutation p-value for the observed correlation.

    Counts the arrangements pi of y with |rho(x, pi(y))| at least the
    observed |rho| over all n! arrangements; arrangements that coincide
    because of ties still count separately.
    """
    rx, ry = _rank_vectors(x, y)
    n = len(rx)
    if n > MAX_EXACT_N:
        raise TooLarge(f"exact permutation test is bounded at n={MAX_EXACT_N}, got {n}")
    observed = abs(_pearson(rx, ry))

    perms = np.array(list(itertools.permutations(ry)))
    dx = rx - rx.mean()
    dy = perms - ry.mean()
    denom = math.sqrt(float(dx @ dx) * float(dy[0] @ dy[0]))
    rhos = dy @ dx / denom
    hits = int(np.count_nonzero(np.abs(rhos) >= observed - _EPS))
    return hits / math.factorial(n)


def compare_raters(
    rater_a_name: str,
    rater_b_name: str,
    tool_ids: Sequence[str],
    grades_a: Sequence[GradeLevel],
    grades_b: Sequence[GradeLevel],
) -> RaterComparison:
    """Compare two raters' grade vectors on the ordinal scale.

    Grades map through their ordinal rank; the comparison carries the
    tie-corrected correlation, the exact permutation p-value, and the count
    of tools graded identically.
    """
    if not (len(tool_ids) == len(grades_a) == len(grades_b)):
        raise LengthMismatch(
            f"tool ids and grade vectors differ in length:"
            f" {len(tool_ids)}, {len(grades_a)}, {len(grades_b)}"
        )
    ranks_a = [ordinal_rank(g) for g in grades_a]
    ranks_b = [ordinal_rank(g) for g in grades_b]
    rho = spearman_rho(ranks_a, ranks_b)
    return RaterComparison(
        rater_a_name=rater_a_name,
        rater_b_name=rater_b_name,
        tool_ids=tuple(tool_ids),
        grades_a=tuple(grades_a),
        grades_b=tuple(grades_b),
        rho=rho,
        p_value=permutation_p(ranks_a, ranks_b),
        exact_agreement=sum(a is b for a, b in zip(grades_a, grades_b)),
    )


class AgreementLabel(Enum):
    """Meaning of a five-point Likert mean, split into equal-width bins."""

    STRONGLY_DISAGREE = "strongly_disagree"
    SOMEWHAT_DISAGREE = "somewhat_disagree"
    NEITHER = "neither"
    SOMEWHAT_AGREE = "somewhat_agree"
    STRONGLY_AGREE = "strongly_agree"

    @property
    def display(self) -> str:
        return _LABEL_DISPLAY[self]


_LABEL_DISPLAY = {
    AgreementLabel.STRONGLY_DISAGREE: "Strongly Disagree",
    AgreementLabel.SOMEWHAT_DISAGREE: "Somewhat Disagree",
    AgreementLabel.NEITHER: "Neither Agree nor Disagree",
    AgreementLabel.SOMEWHAT_AGREE: "Somewhat Agree",
    AgreementLabel.STRONGLY_AGREE: "Strongly Agree",
}

# Upper bin edges; each bin is half-open below except the first.
_LABEL_BINS = (
    (1.8, AgreementLabel.STRONGLY_DISAGREE),
    (2.6, AgreementLabel.SOMEWHAT_DISAGREE),
    (3.4, AgreementLabel.NEITHER),
    (4.2, AgreementLabel.SOMEWHAT_AGREE),
    (5.0, AgreementLabel.STRONGLY_AGREE),
)


def likert_mean(responses: Sequence[int]) -> float:
    """Arithmetic mean of five-point Likert responses."""
    if not responses:
        raise EmptyResponses("no responses to average")
    for value in responses:
        if not isinstance(value, int) or isinstance(value, bool) or not 1 <= value <= 5:
            raise OutOfRange(f"Likert response must be an integer 1..5, got {value!r}")
    return sum(responses) / len(responses)


def agreement_label(mean_score: float) -> AgreementLabel:
    """Label for a Likert mean: 1.0-1.8 strongly disagree up to 4.2-5.0 strongly agree."""
    if not 1.0 <= mean_score <= 5.0:
        raise OutOfRange(f"Likert mean must lie in [1, 5], got {mean_score!r}")
    for upper, label in _LABEL_BINS:
        if mean_score <= upper:
            return label
    return AgreementLabel.STRONGLY_AGREE  # mean_score == 5.0 after float noise


@dataclass(frozen=True)
class LikertSummary:
    """Aggregated responses to one survey question."""

    question_id: str
    mean_score: float
    n: int
    label: AgreementLabel


def summarize_survey(
    responses_by_question: Mapping[str, Sequence[int]],
) -> list[LikertSummary]:
    """Per-question Likert summaries, in the mapping's question order."""
    return [
        LikertSummary(
            question_id=qid,
            mean_score=(mean := likert_mean(responses)),
            n=len(responses),
            label=agreement_label(mean),
        )
        for qid, responses in responses_by_question.items()
    ]


def overall_summary(responses_by_question: Mapping[str, Sequence[int]]) -> LikertSummary:
    """Summary of all responses pooled across questions."""
    pooled = [r for responses in responses_by_question.values() for r in responses]
    mean = likert_mean(pooled)
    return LikertSummary(
        question_id="overall", mean_score=mean, n=len(pooled), label=agreement_label(mean)
    )
