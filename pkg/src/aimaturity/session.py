"""Assessment sessions: scope, systems, applicable targets, responses.

An assessment evaluates one organization at a chosen scope (holistic, or per
AI system) and granularity (topic-level or statement-level). Which targets
are applicable follows from the effective lifecycle stage: a per-system
response is gated by that system's stage, a holistic assessment by the most
advanced system's stage. Responses are keyed by (target, system) and upserted;
every mutation bumps the assessment's revision.
"""

from __future__ import annotations

import uuid
from dataclasses import dataclass, field, replace
from datetime import date, datetime, timezone
from enum import Enum
from fractions import Fraction

from .errors import (
    DomainError,
    GranularityMismatch,
    InapplicableTarget,
    RevisionConflict,
    UnknownSystem,
    ValidationError,
)
from .questionnaire import LifecycleStage, Questionnaire, applicable_topics, iter_targets
from .scoring import (
    NOT_APPLICABLE,
    SCORE_NOT_APPLICABLE,
    EvidenceItem,
    MetricAssessment,
    ScoreValue,
    score_from_metrics,
    validate_response,
)


def utc_now() -> datetime:
    """Current UTC time at second precision (the storage granularity)."""
    return datetime.now(timezone.utc).replace(microsecond=0)


class GranularityMode(Enum):
    TOPIC_LEVEL = "topic"
    STATEMENT_LEVEL = "statement"

    @classmethod
    def from_token(cls, token: str) -> "GranularityMode":
        normalized = token.strip().lower()
        for mode in cls:
            if normalized == mode.value:
                return mode
        raise ValidationError(f"unknown granularity mode {token!r}")


class ScopeMode(Enum):
    PER_SYSTEM = "per_system"
    HOLISTIC = "holistic"

    @classmethod
    def from_token(cls, token: str) -> "ScopeMode":
        normalized = token.strip().lower().replace("-", "_")
        for mode in cls:
            if normalized == mode.value:
                return mode
        raise ValidationError(f"unknown scope mode {token!r}")


@dataclass(frozen=True)
class Organization:
    org_id: str
    name: str

    def to_dict(self) -> dict:
        return {"org_id": self.org_id, "name": self.name}

    @classmethod
    def from_dict(cls, data: dict) -> "Organization":
        return cls(org_id=str(data["org_id"]), name=str(data.get("name", "")))


@dataclass(frozen=True)
class AISystemProfile:
    system_id: str
    name: str
    stage: LifecycleStage
    description: str = ""

    def to_dict(self) -> dict:
        return {
            "system_id": self.system_id,
            "name": self.name,
            "stage": self.stage.token,
            "description": self.description,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AISystemProfile":
        return cls(
            system_id=str(data["system_id"]),
            name=str(data.get("name", "")),
            stage=LifecycleStage.from_token(data["stage"]),
            description=str(data.get("description", "")),
        )


ResponseKey = tuple[str, str | None]  # (target, system_id)


@dataclass(frozen=True)
class Response:
    """One recorded judgment for a target, optionally scoped to a system.

    ``metrics is None`` encodes the not-applicable marker; otherwise the score
    is derived from the metrics and the two must agree.
    """

    target: str
    metrics: MetricAssessment | None
    score: ScoreValue
    evidence: tuple[EvidenceItem, ...]
    note: str = ""
    system_id: str | None = None
    recorded_at: datetime = field(default_factory=utc_now)

    def __post_init__(self) -> None:
        if self.metrics is not None:
            expected = score_from_metrics(self.metrics)
            if self.score != expected:
                raise ValidationError(
                    f"stale score for target {self.target}: stored {self.score}, "
                    f"metrics derive {expected}",
                    ids=(self.target,),
                )
        elif self.score.is_numeric:
            raise ValidationError(
                f"target {self.target}: numeric score requires metrics",
                ids=(self.target,),
            )
        # the evidence gate is intrinsic: no response object can exist without it
        validate_response(self.score, self.evidence).raise_if_failed()

    @property
    def key(self) -> ResponseKey:
        return (self.target, self.system_id)

    @classmethod
    def answered(
        cls,
        target: str,
        metrics: MetricAssessment,
        evidence: tuple[EvidenceItem, ...] | list[EvidenceItem],
        *,
        note: str = "",
        system_id: str | None = None,
        recorded_at: datetime | None = None,
    ) -> "Response":
        return cls(
            target=str(target),
            metrics=metrics,
            score=score_from_metrics(metrics),
            evidence=tuple(evidence),
            note=note,
            system_id=system_id,
            recorded_at=recorded_at or utc_now(),
        )

    @classmethod
    def not_applicable(
        cls,
        target: str,
        evidence: tuple[EvidenceItem, ...] | list[EvidenceItem],
        *,
        note: str = "",
        system_id: str | None = None,
        recorded_at: datetime | None = None,
    ) -> "Response":
        return cls(
            target=str(target),
            metrics=None,
            score=SCORE_NOT_APPLICABLE,
            evidence=tuple(evidence),
            note=note,
            system_id=system_id,
            recorded_at=recorded_at or utc_now(),
        )

    def content_equals(self, other: "Response") -> bool:
        """Equality ignoring the recording timestamp (used for replay detection)."""
        return (
            self.key == other.key
            and self.metrics == other.metrics
            and self.score == other.score
            and self.evidence == other.evidence
            and self.note == other.note
        )

    def to_dict(self) -> dict:
        out: dict = {
            "target": self.target,
            "metrics": self.metrics.to_dict() if self.metrics is not None else NOT_APPLICABLE,
            "score": self.score.to_json(),
            "evidence": [e.to_dict() for e in self.evidence],
            "note": self.note,
            "system_id": self.system_id,
            "recorded_at": self.recorded_at.isoformat(),
        }
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "Response":
        raw_metrics = data.get("metrics")
        metrics = (
            None
            if raw_metrics in (None, NOT_APPLICABLE)
            else MetricAssessment.from_dict(raw_metrics)
        )
        return cls(
            target=str(data["target"]),
            metrics=metrics,
            score=ScoreValue.from_json(data.get("score")),
            evidence=tuple(EvidenceItem.from_dict(e) for e in data.get("evidence", [])),
            note=str(data.get("note", "")),
            system_id=data.get("system_id"),
            recorded_at=datetime.fromisoformat(data["recorded_at"]),
        )


def target_sort_key(target: str) -> tuple[int, str]:
    """Deterministic ordering: topics and statements sort by topic then letter."""
    if target.isdigit():
        return (int(target), "")
    return (int(target[:-1]), target[-1])


def is_topic_target(target: str) -> bool:
    return target.isdigit()


@dataclass
class Assessment:
    """One evaluation session; mutations go through module functions."""

    assessment_id: str
    organization: Organization
    questionnaire_version: str
    scope: ScopeMode
    granularity: GranularityMode
    systems: list[AISystemProfile]
    responses: dict[ResponseKey, Response] = field(default_factory=dict)
    revision: int = 1
    created_at: datetime = field(default_factory=utc_now)
    updated_at: datetime = field(default_factory=utc_now)
    as_of: date | None = None

    def system(self, system_id: str) -> AISystemProfile:
        for profile in self.systems:
            if profile.system_id == system_id:
                return profile
        raise UnknownSystem(f"unknown system id {system_id!r}", ids=(system_id,))

    @property
    def as_of_date(self) -> date:
        """Trajectory ordering date: explicit as-of, else the creation date."""
        return self.as_of if self.as_of is not None else self.created_at.date()

    def sorted_responses(self) -> list[Response]:
        return [
            self.responses[key]
            for key in sorted(
                self.responses,
                key=lambda k: (target_sort_key(k[0]), k[1] or ""),
            )
        ]

    def to_dict(self) -> dict:
        return {
            "assessment_id": self.assessment_id,
            "organization": self.organization.to_dict(),
            "questionnaire_version": self.questionnaire_version,
            "scope": self.scope.value,
            "granularity": self.granularity.value,
            "systems": [s.to_dict() for s in self.systems],
            "responses": [r.to_dict() for r in self.sorted_responses()],
            "revision": self.revision,
            "created_at": self.created_at.isoformat(),
            "updated_at": self.updated_at.isoformat(),
            "as_of": self.as_of.isoformat() if self.as_of is not None else None,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Assessment":
        responses = [Response.from_dict(r) for r in data.get("responses", [])]
        return cls(
            assessment_id=str(data["assessment_id"]),
            organization=Organization.from_dict(data["organization"]),
            questionnaire_version=str(data["questionnaire_version"]),
            scope=ScopeMode.from_token(data["scope"]),
            granularity=GranularityMode.from_token(data["granularity"]),
            systems=[AISystemProfile.from_dict(s) for s in data["systems"]],
            responses={r.key: r for r in responses},
            revision=int(data["revision"]),
            created_at=datetime.fromisoformat(data["created_at"]),
            updated_at=datetime.fromisoformat(data["updated_at"]),
            as_of=date.fromisoformat(data["as_of"]) if data.get("as_of") else None,
        )


def create_assessment(
    organization: Organization,
    scope: ScopeMode,
    granularity: GranularityMode,
    systems: list[AISystemProfile],
    q: Questionnaire,
    *,
    assessment_id: str | None = None,
    created_at: datetime | None = None,
    as_of: date | None = None,
) -> Assessment:
    """Open a new assessment with an empty response set at revision 1."""
    if not systems:
        raise ValidationError("an assessment needs at least one AI system profile")
    seen: set[str] = set()
    for profile in systems:
        if profile.system_id in seen:
            raise ValidationError(
                f"duplicate system id {profile.system_id!r}", ids=(profile.system_id,)
            )
        seen.add(profile.system_id)
    now = created_at or utc_now()
    return Assessment(
        assessment_id=assessment_id or uuid.uuid4().hex,
        organization=organization,
        questionnaire_version=q.version,
        scope=scope,
        granularity=granularity,
        systems=list(systems),
        responses={},
        revision=1,
        created_at=now,
        updated_at=now,
        as_of=as_of,
    )


def effective_stage(assessment: Assessment, system_id: str | None = None) -> LifecycleStage:
    """Stage gating applicability: the system's own stage, or the holistic max."""
    if system_id is not None:
        if assessment.scope is not ScopeMode.PER_SYSTEM:
            raise DomainError("holistic assessments have no per-system effective stage")
        return assessment.system(system_id).stage
    if assessment.scope is ScopeMode.PER_SYSTEM:
        raise DomainError("per-system assessments need a system id for the effective stage")
    return max(profile.stage for profile in assessment.systems)


def applicable_targets(
    q: Questionnaire, assessment: Assessment, system_id: str | None = None
) -> list[str]:
    """Target ids applicable to the assessment (or to one of its systems)."""
    stage = effective_stage(assessment, system_id)
    topics = applicable_topics(q, stage)
    return iter_targets(topics, assessment.granularity is GranularityMode.STATEMENT_LEVEL)


def _check_target_kind(assessment: Assessment, target: str) -> None:
    topic_target = is_topic_target(target)
    if assessment.granularity is GranularityMode.TOPIC_LEVEL and not topic_target:
        raise GranularityMismatch(
            f"statement target {target!r} on a topic-level assessment", ids=(target,)
        )
    if assessment.granularity is GranularityMode.STATEMENT_LEVEL and topic_target:
        raise GranularityMismatch(
            f"topic target {target!r} on a statement-level assessment", ids=(target,)
        )


def record_response(
    q: Questionnaire,
    assessment: Assessment,
    response: Response,
    *,
    expected_revision: int | None = None,
) -> Assessment:
    """Validate and upsert one response; bumps the revision on success.

    Validation order: optimistic revision check, scope/system consistency,
    granularity, applicability at the effective stage, then the evidence gate.
    """
    if expected_revision is not None and expected_revision != assessment.revision:
        raise RevisionConflict(
            f"expected revision {expected_revision}, assessment is at {assessment.revision}",
            ids=(assessment.assessment_id,),
        )
    if assessment.scope is ScopeMode.PER_SYSTEM:
        if response.system_id is None:
            raise ValidationError(
                "per-system assessments require a system id on every response"
            )
        assessment.system(response.system_id)  # raises UnknownSystem
    elif response.system_id is not None:
        raise ValidationError("holistic assessments take no per-system responses")
    _check_target_kind(assessment, response.target)
    targets = applicable_targets(q, assessment, response.system_id)
    if response.target not in targets:
        raise InapplicableTarget(
            f"target {response.target!r} is not applicable at the effective stage",
            ids=(response.target,),
        )
    validate_response(response.score, response.evidence).raise_if_failed()
    assessment.responses[response.key] = response
    assessment.revision += 1
    assessment.updated_at = utc_now()
    return assessment


@dataclass(frozen=True)
class CompletenessReport:
    """Answered/applicable fractions; not-applicable responses count as answered."""

    answered: int
    total: int
    unanswered: tuple[ResponseKey, ...]
    per_system: dict[str, Fraction]

    @property
    def overall(self) -> Fraction:
        return Fraction(self.answered, self.total) if self.total else Fraction(0)


def completeness(q: Questionnaire, assessment: Assessment) -> CompletenessReport:
    """Fraction of applicable targets answered, with the remaining target list."""
    per_system: dict[str, Fraction] = {}
    unanswered: list[ResponseKey] = []
    answered_count = 0
    total = 0
    if assessment.scope is ScopeMode.PER_SYSTEM:
        for profile in assessment.systems:
            targets = applicable_targets(q, assessment, profile.system_id)
            answered = [
                t for t in targets if (t, profile.system_id) in assessment.responses
            ]
            unanswered.extend(
                (t, profile.system_id) for t in targets
                if (t, profile.system_id) not in assessment.responses
            )
            per_system[profile.system_id] = (
                Fraction(len(answered), len(targets)) if targets else Fraction(0)
            )
            answered_count += len(answered)
            total += len(targets)
    else:
        targets = applicable_targets(q, assessment)
        answered_count = sum(1 for t in targets if (t, None) in assessment.responses)
        unanswered = [(t, None) for t in targets if (t, None) not in assessment.responses]
        total = len(targets)
    return CompletenessReport(
        answered=answered_count,
        total=total,
        unanswered=tuple(unanswered),
        per_system=per_system,
    )


def clone_assessment(assessment: Assessment) -> Assessment:
    """Deep-enough copy for mutate-then-save flows (responses map is copied)."""
    return replace(
        assessment,
        systems=list(assessment.systems),
        responses=dict(assessment.responses),
    )
