"""Rubric scoring: three metric ratings to a 1-5 score, evidence validation.

Each evaluated target is rated low/medium/high on three metrics (coverage,
robustness, input diversity). Ratings carry 1/2/3 points; the summed points
map to the score through fixed thresholds: 3 -> 1, 4-5 -> 2, 6-7 -> 3,
8 -> 4, 9 -> 5. A target may instead be marked not applicable. Every numeric
score must be backed by at least one evidence item; a not-applicable outcome
needs an explicit justification item.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import DomainError, ValidationError


class MetricRating(Enum):
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"

    @property
    def points(self) -> int:
        return {MetricRating.LOW: 1, MetricRating.MEDIUM: 2, MetricRating.HIGH: 3}[self]

    @classmethod
    def from_token(cls, token: str) -> "MetricRating":
        normalized = token.strip().lower()
        aliases = {"l": cls.LOW, "low": cls.LOW, "m": cls.MEDIUM, "medium": cls.MEDIUM,
                   "h": cls.HIGH, "high": cls.HIGH}
        if normalized not in aliases:
            raise ValidationError(f"unknown metric rating {token!r}")
        return aliases[normalized]


# The six ideals the robustness rating summarizes. Checklist is informational:
# it never changes the computed score.
ROBUSTNESS_FACETS = (
    "regular",
    "systematic",
    "trained_personnel",
    "sufficiently_resourced",
    "adaptive",
    "cross_functional",
)


@dataclass(frozen=True)
class RobustnessFacets:
    regular: bool = False
    systematic: bool = False
    trained_personnel: bool = False
    sufficiently_resourced: bool = False
    adaptive: bool = False
    cross_functional: bool = False

    def to_dict(self) -> dict[str, bool]:
        return {name: getattr(self, name) for name in ROBUSTNESS_FACETS}

    @classmethod
    def from_dict(cls, data: dict) -> "RobustnessFacets":
        unknown = set(data) - set(ROBUSTNESS_FACETS)
        if unknown:
            raise ValidationError(f"unknown robustness facets: {sorted(unknown)}")
        return cls(**{name: bool(value) for name, value in data.items()})


@dataclass(frozen=True)
class MetricAssessment:
    """One evaluator judgment: the three ratings plus the optional facet notes."""

    coverage: MetricRating
    robustness: MetricRating
    input_diversity: MetricRating
    robustness_facets: RobustnessFacets | None = None

    @property
    def ratings(self) -> tuple[MetricRating, MetricRating, MetricRating]:
        return (self.coverage, self.robustness, self.input_diversity)

    def to_dict(self) -> dict:
        out: dict = {
            "coverage": self.coverage.value,
            "robustness": self.robustness.value,
            "input_diversity": self.input_diversity.value,
        }
        if self.robustness_facets is not None:
            out["robustness_facets"] = self.robustness_facets.to_dict()
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "MetricAssessment":
        for key in ("coverage", "robustness", "input_diversity"):
            if key not in data:
                raise ValidationError(f"metric assessment missing {key!r}")
        facets = data.get("robustness_facets")
        return cls(
            coverage=MetricRating.from_token(data["coverage"]),
            robustness=MetricRating.from_token(data["robustness"]),
            input_diversity=MetricRating.from_token(data["input_diversity"]),
            robustness_facets=RobustnessFacets.from_dict(facets) if facets is not None else None,
        )


NOT_APPLICABLE = "n/a"

# Point-sum thresholds for the 1-5 score.
_SCORE_BY_POINTS = {3: 1, 4: 2, 5: 2, 6: 3, 7: 3, 8: 4, 9: 5}


@dataclass(frozen=True)
class ScoreValue:
    """A 1-5 score or the distinguished not-applicable outcome."""

    value: int | None  # None encodes not applicable

    def __post_init__(self) -> None:
        if self.value is not None and self.value not in range(1, 6):
            raise ValidationError(f"numeric scores are 1..5, got {self.value}")

    @property
    def is_numeric(self) -> bool:
        return self.value is not None

    def to_json(self) -> int | str:
        return self.value if self.value is not None else NOT_APPLICABLE

    @classmethod
    def from_json(cls, raw) -> "ScoreValue":
        if raw == NOT_APPLICABLE or raw is None:
            return SCORE_NOT_APPLICABLE
        if isinstance(raw, bool) or not isinstance(raw, int):
            raise ValidationError(f"score must be an integer or {NOT_APPLICABLE!r}, got {raw!r}")
        return cls(raw)

    def __str__(self) -> str:
        return str(self.value) if self.value is not None else NOT_APPLICABLE


SCORE_NOT_APPLICABLE = ScoreValue(None)


def score_from_metrics(metrics: MetricAssessment) -> ScoreValue:
    """Derive the 1-5 score from the three ratings via the point thresholds."""
    total = sum(r.points for r in metrics.ratings)
    return ScoreValue(_SCORE_BY_POINTS[total])


class EvidenceKind(Enum):
    SUPPORTS_ACTIVITY = "supports_activity"
    INDICATES_ABSENCE = "indicates_absence"
    NO_EVIDENCE_FOUND = "no_evidence_found"
    NOT_APPLICABLE_JUSTIFICATION = "not_applicable_justification"


@dataclass(frozen=True)
class EvidenceItem:
    """One evidence entry: what was observed (or not) and where.

    ``kind`` keeps absence-of-evidence (``no_evidence_found``) distinct from
    evidence-of-absence (``indicates_absence``).
    """

    kind: EvidenceKind
    description: str
    sources: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.description.strip():
            raise ValidationError("evidence description must be non-empty")

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "description": self.description,
            "sources": list(self.sources),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EvidenceItem":
        try:
            kind = EvidenceKind(data.get("kind"))
        except ValueError:
            raise ValidationError(f"unknown evidence kind {data.get('kind')!r}") from None
        return cls(
            kind=kind,
            description=str(data.get("description", "")),
            sources=tuple(str(s) for s in data.get("sources", [])),
        )


@dataclass(frozen=True)
class ValidationReport:
    passed: bool
    failures: tuple[str, ...] = ()

    def raise_if_failed(self) -> None:
        if not self.passed:
            raise ValidationError("; ".join(self.failures))


def validate_response(score: ScoreValue, evidence: tuple[EvidenceItem, ...] | list[EvidenceItem]) -> ValidationReport:
    """Check the evidence gate for one scored target.

    Numeric scores need at least one evidence item of any kind; a
    not-applicable outcome needs at least one justification item.
    """
    failures: list[str] = []
    items = tuple(evidence)
    if score.is_numeric:
        if not items:
            failures.append("score without evidence: a numeric score requires at least one evidence item")
    else:
        if not any(i.kind is EvidenceKind.NOT_APPLICABLE_JUSTIFICATION for i in items):
            failures.append(
                "n/a requires justification: a not-applicable outcome requires an evidence item "
                "of kind not_applicable_justification"
            )
    return ValidationReport(passed=not failures, failures=tuple(failures))


# Coverage-suggestion thresholds: below 1/3 of applicable sub-statements is
# low, at or above 2/3 is high. Non-binding; the evaluator sets the rating.
DEFAULT_COVERAGE_THRESHOLDS = (Fraction(1, 3), Fraction(2, 3))


def suggest_coverage_rating(
    covered: int,
    applicable: int,
    thresholds: tuple[Fraction, Fraction] = DEFAULT_COVERAGE_THRESHOLDS,
) -> MetricRating:
    """Suggest a coverage rating from addressed/applicable sub-statement counts."""
    if applicable < 1:
        raise DomainError("applicable sub-statement count must be at least 1")
    if covered < 0 or covered > applicable:
        raise DomainError(f"covered must be within 0..{applicable}, got {covered}")
    low_cut, high_cut = thresholds
    ratio = Fraction(covered, applicable)
    if ratio < low_cut:
        return MetricRating.LOW
    if ratio >= high_cut:
        return MetricRating.HIGH
    return MetricRating.MEDIUM
