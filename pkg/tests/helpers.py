"""Shared builders for test fixtures."""

from __future__ import annotations

from aimaturity import (
    AISystemProfile,
    EvidenceItem,
    EvidenceKind,
    GranularityMode,
    LifecycleStage,
    MetricAssessment,
    MetricRating,
    Response,
    ScopeMode,
    create_assessment,
)


def rating(token: str) -> MetricRating:
    return MetricRating.from_token(token)


def metrics(coverage: str, robustness: str, diversity: str) -> MetricAssessment:
    return MetricAssessment(rating(coverage), rating(robustness), rating(diversity))


def supporting_evidence(description: str = "Process documentation reviewed first-hand"):
    return [EvidenceItem(EvidenceKind.SUPPORTS_ACTIVITY, description)]


def na_evidence(description: str = "Out of scope at this lifecycle stage"):
    return [EvidenceItem(EvidenceKind.NOT_APPLICABLE_JUSTIFICATION, description)]


def answered(target: str, combo: str = "hml", system_id: str | None = None) -> Response:
    return Response.answered(
        target,
        metrics(combo[0], combo[1], combo[2]),
        supporting_evidence(),
        system_id=system_id,
    )


def build_assessment(
    q,
    org,
    *,
    scope=ScopeMode.HOLISTIC,
    granularity=GranularityMode.STATEMENT_LEVEL,
    stages=(LifecycleStage.DEPLOYMENT,),
    assessment_id: str | None = None,
):
    systems = [
        AISystemProfile(system_id=f"sys{i + 1}", name=f"System {i + 1}", stage=stage)
        for i, stage in enumerate(stages)
    ]
    return create_assessment(
        org, scope, granularity, systems, q, assessment_id=assessment_id
    )
