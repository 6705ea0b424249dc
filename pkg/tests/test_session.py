from __future__ import annotations

from fractions import Fraction

import pytest

from aimaturity import (
    AISystemProfile,
    GranularityMode,
    LifecycleStage,
    Response,
    ScopeMode,
    ScoreValue,
    applicable_targets,
    completeness,
    create_assessment,
    effective_stage,
    record_response,
    score_from_metrics,
)
from aimaturity.errors import (
    DomainError,
    GranularityMismatch,
    InapplicableTarget,
    RevisionConflict,
    UnknownSystem,
    ValidationError,
)

from helpers import answered, build_assessment, metrics, na_evidence, supporting_evidence

PLAN = LifecycleStage.PLANNING_AND_DESIGN
BUILD = LifecycleStage.BUILDING_AND_DATA
DEPLOY = LifecycleStage.DEPLOYMENT


def test_create_assessment_starts_empty_at_revision_1(questionnaire, org):
    a = build_assessment(questionnaire, org, granularity=GranularityMode.TOPIC_LEVEL)
    assert a.revision == 1
    assert a.responses == {}
    assert a.questionnaire_version == questionnaire.version
    assert applicable_targets(questionnaire, a) == [str(i) for i in range(1, 10)]


def test_create_assessment_rejects_empty_systems(questionnaire, org):
    with pytest.raises(ValidationError):
        create_assessment(
            org, ScopeMode.HOLISTIC, GranularityMode.TOPIC_LEVEL, [], questionnaire
        )


def test_create_assessment_rejects_duplicate_system_ids(questionnaire, org):
    systems = [
        AISystemProfile("dup", "A", PLAN),
        AISystemProfile("dup", "B", DEPLOY),
    ]
    with pytest.raises(ValidationError):
        create_assessment(
            org, ScopeMode.PER_SYSTEM, GranularityMode.TOPIC_LEVEL, systems, questionnaire
        )


def test_holistic_effective_stage_is_the_most_advanced_system(questionnaire, org):
    a = build_assessment(questionnaire, org, stages=(PLAN, DEPLOY))
    assert effective_stage(a) is DEPLOY


def test_holistic_single_plan_system(questionnaire, org):
    a = build_assessment(questionnaire, org, stages=(PLAN,))
    assert effective_stage(a) is PLAN


def test_per_system_effective_stage_is_that_system(questionnaire, org):
    a = build_assessment(
        questionnaire, org, scope=ScopeMode.PER_SYSTEM, stages=(BUILD, DEPLOY)
    )
    assert effective_stage(a, "sys1") is BUILD
    assert effective_stage(a, "sys2") is DEPLOY


def test_effective_stage_undefined_combinations_fail_loudly(questionnaire, org):
    holistic = build_assessment(questionnaire, org, stages=(BUILD,))
    with pytest.raises(DomainError):
        effective_stage(holistic, "sys1")
    per_system = build_assessment(
        questionnaire, org, scope=ScopeMode.PER_SYSTEM, stages=(BUILD,)
    )
    with pytest.raises(DomainError):
        effective_stage(per_system)


def test_effective_stage_unknown_system(questionnaire, org):
    a = build_assessment(questionnaire, org, scope=ScopeMode.PER_SYSTEM, stages=(BUILD,))
    with pytest.raises(UnknownSystem):
        effective_stage(a, "ghost")


@pytest.mark.parametrize(
    "stage, granularity, expected_count",
    [
        (BUILD, GranularityMode.TOPIC_LEVEL, 7),
        (PLAN, GranularityMode.STATEMENT_LEVEL, 14),
        (DEPLOY, GranularityMode.STATEMENT_LEVEL, 59),
    ],
)
def test_applicable_target_counts(questionnaire, org, stage, granularity, expected_count):
    a = build_assessment(questionnaire, org, granularity=granularity, stages=(stage,))
    assert len(applicable_targets(questionnaire, a)) == expected_count


def test_record_response_upserts_and_bumps_revision(questionnaire, org):
    a = build_assessment(
        questionnaire, org, granularity=GranularityMode.TOPIC_LEVEL, stages=(BUILD,)
    )
    record_response(questionnaire, a, answered("4", "hml"))
    assert a.revision == 2
    assert a.responses[("4", None)].score == ScoreValue(3)
    # same key replaces rather than duplicating
    record_response(questionnaire, a, answered("4", "hhh"))
    assert a.revision == 3
    assert len(a.responses) == 1
    assert a.responses[("4", None)].score == ScoreValue(5)


def test_response_count_never_exceeds_applicable_targets(questionnaire, org):
    a = build_assessment(
        questionnaire, org, granularity=GranularityMode.TOPIC_LEVEL, stages=(PLAN,)
    )
    for _ in range(3):
        for target in applicable_targets(questionnaire, a):
            record_response(questionnaire, a, answered(target, "mmm"))
    assert len(a.responses) == len(applicable_targets(questionnaire, a))


def test_inapplicable_target_is_rejected(questionnaire, org):
    a = build_assessment(
        questionnaire, org, granularity=GranularityMode.TOPIC_LEVEL, stages=(PLAN,)
    )
    with pytest.raises(InapplicableTarget):
        record_response(questionnaire, a, answered("9", "hhh"))


def test_granularity_mismatch_is_rejected(questionnaire, org):
    topic_level = build_assessment(
        questionnaire, org, granularity=GranularityMode.TOPIC_LEVEL, stages=(BUILD,)
    )
    with pytest.raises(GranularityMismatch):
        record_response(questionnaire, topic_level, answered("4e", "hml"))
    statement_level = build_assessment(questionnaire, org, stages=(BUILD,))
    with pytest.raises(GranularityMismatch):
        record_response(questionnaire, statement_level, answered("4", "hml"))


def test_per_system_responses_are_gated_by_that_systems_stage(questionnaire, org):
    a = build_assessment(
        questionnaire,
        org,
        scope=ScopeMode.PER_SYSTEM,
        granularity=GranularityMode.STATEMENT_LEVEL,
        stages=(PLAN, DEPLOY),
    )
    # 4e is a build-stage statement: fine for the deploy system, rejected for plan
    record_response(questionnaire, a, answered("4e", "hml", system_id="sys2"))
    with pytest.raises(InapplicableTarget):
        record_response(questionnaire, a, answered("4e", "hml", system_id="sys1"))


def test_per_system_response_requires_known_system(questionnaire, org):
    a = build_assessment(
        questionnaire, org, scope=ScopeMode.PER_SYSTEM, stages=(DEPLOY,)
    )
    with pytest.raises(UnknownSystem):
        record_response(questionnaire, a, answered("4e", "hml", system_id="ghost"))
    with pytest.raises(ValidationError):
        record_response(questionnaire, a, answered("4e", "hml"))


def test_holistic_rejects_system_scoped_responses(questionnaire, org):
    a = build_assessment(questionnaire, org, stages=(DEPLOY,))
    with pytest.raises(ValidationError):
        record_response(questionnaire, a, answered("4e", "hml", system_id="sys1"))


def test_evidence_gate_is_a_type_invariant(questionnaire, org):
    # a response without its required evidence cannot even be constructed
    with pytest.raises(ValidationError):
        Response.answered("4e", metrics("h", "m", "l"), [])
    with pytest.raises(ValidationError):
        Response.not_applicable("4e", supporting_evidence())
    a = build_assessment(questionnaire, org, stages=(DEPLOY,))
    record_response(questionnaire, a, Response.not_applicable("4e", na_evidence()))
    assert not a.responses[("4e", None)].score.is_numeric


def test_expected_revision_conflict(questionnaire, org):
    a = build_assessment(questionnaire, org, stages=(DEPLOY,))
    record_response(questionnaire, a, answered("4e", "hml"), expected_revision=1)
    with pytest.raises(RevisionConflict):
        record_response(questionnaire, a, answered("4f", "hml"), expected_revision=1)


def test_stale_scores_cannot_be_constructed(questionnaire):
    with pytest.raises(ValidationError):
        Response(
            target="4e",
            metrics=metrics("h", "m", "l"),
            score=ScoreValue(5),
            evidence=tuple(supporting_evidence()),
        )


def test_stored_scores_match_recomputation(questionnaire, org):
    a = build_assessment(questionnaire, org, stages=(DEPLOY,))
    for target, combo in [("4e", "hml"), ("4f", "hhh"), ("7b", "lll")]:
        record_response(questionnaire, a, answered(target, combo))
    for response in a.responses.values():
        assert response.score == score_from_metrics(response.metrics)


def test_completeness_fresh_assessment(questionnaire, org):
    a = build_assessment(
        questionnaire, org, granularity=GranularityMode.TOPIC_LEVEL, stages=(DEPLOY,)
    )
    report = completeness(questionnaire, a)
    assert report.overall == Fraction(0)
    assert len(report.unanswered) == 9


def test_completeness_counts_na_as_answered(questionnaire, org):
    a = build_assessment(
        questionnaire, org, granularity=GranularityMode.TOPIC_LEVEL, stages=(DEPLOY,)
    )
    for target in ("1", "2", "3", "4", "5", "6"):
        record_response(questionnaire, a, answered(target, "mmm"))
    record_response(questionnaire, a, Response.not_applicable("7", na_evidence()))
    report = completeness(questionnaire, a)
    assert report.overall == Fraction(7, 9)
    assert {t for t, _ in report.unanswered} == {"8", "9"}


def test_completeness_full(questionnaire, org):
    a = build_assessment(
        questionnaire, org, granularity=GranularityMode.TOPIC_LEVEL, stages=(PLAN,)
    )
    for target in applicable_targets(questionnaire, a):
        record_response(questionnaire, a, answered(target, "hhh"))
    report = completeness(questionnaire, a)
    assert report.overall == Fraction(1)
    assert report.unanswered == ()


def test_completeness_per_system(questionnaire, org):
    a = build_assessment(
        questionnaire,
        org,
        scope=ScopeMode.PER_SYSTEM,
        granularity=GranularityMode.TOPIC_LEVEL,
        stages=(PLAN, DEPLOY),
    )
    record_response(questionnaire, a, answered("1", "mmm", system_id="sys1"))
    report = completeness(questionnaire, a)
    assert report.per_system["sys1"] == Fraction(1, 3)
    assert report.per_system["sys2"] == Fraction(0)
    assert report.total == 3 + 9


def test_serialization_round_trip(questionnaire, org):
    from aimaturity.session import Assessment

    a = build_assessment(
        questionnaire,
        org,
        scope=ScopeMode.PER_SYSTEM,
        granularity=GranularityMode.STATEMENT_LEVEL,
        stages=(BUILD, DEPLOY),
    )
    record_response(questionnaire, a, answered("4e", "hml", system_id="sys1"))
    record_response(
        questionnaire, a, Response.not_applicable("9a", na_evidence(), system_id="sys2")
    )
    again = Assessment.from_dict(a.to_dict())
    assert again.to_dict() == a.to_dict()
