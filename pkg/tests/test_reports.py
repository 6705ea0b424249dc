from __future__ import annotations

import re

from aimaturity import (
    GranularityMode,
    LifecycleStage,
    Response,
    ScopeMode,
    build_report_bundle,
    record_response,
)
from aimaturity.reports import DIMENSION_UNAVAILABLE_REASON
from aimaturity.scoring import EvidenceItem, EvidenceKind

from helpers import answered, build_assessment, metrics, na_evidence

BUILD = LifecycleStage.BUILDING_AND_DATA
DEPLOY = LifecycleStage.DEPLOYMENT


def _case_study_fixture(questionnaire, org):
    """Single-topic evaluation: high coverage, medium robustness, low diversity."""
    a = build_assessment(
        questionnaire, org, granularity=GranularityMode.TOPIC_LEVEL, stages=(BUILD,),
        assessment_id="case-study",
    )
    evidence = [
        EvidenceItem(
            EvidenceKind.SUPPORTS_ACTIVITY,
            "Published standards document covers most named risk areas in detail",
            sources=("doc://responsible-ai-standards",),
        ),
        EvidenceItem(
            EvidenceKind.NO_EVIDENCE_FOUND,
            "No indication that external stakeholder feedback informs the measurements",
        ),
    ]
    response = Response.answered(
        "4",
        metrics("h", "m", "l"),
        evidence,
        note="Coverage strong, implementation detail thinner, little input diversity.",
    )
    record_response(questionnaire, a, response)
    return a


def test_case_study_report_shows_score_and_ratings(questionnaire, org):
    bundle = build_report_bundle(questionnaire, _case_study_fixture(questionnaire, org))
    assert "Score: [3](#ev-4)" in bundle.markdown
    assert "coverage high, robustness medium, input diversity low" in bundle.markdown
    assert "Published standards document" in bundle.markdown


def test_every_score_cross_links_to_evidence(questionnaire, org):
    a = build_assessment(questionnaire, org, stages=(DEPLOY,))
    for target in ("4e", "4f", "9a"):
        record_response(questionnaire, a, answered(target, "hml"))
    bundle = build_report_bundle(questionnaire, a)
    links = re.findall(r"Score: \[[^\]]+\]\(#(ev-[\w-]+)\)", bundle.markdown)
    anchors = re.findall(r'<a id="(ev-[\w-]+)"></a>', bundle.markdown)
    assert len(links) == 3
    assert set(links) == set(anchors)
    index_anchors = {entry["anchor"] for entry in bundle.chart_data["evidence_index"]}
    assert set(links) == index_anchors


def test_chart_data_always_has_four_pillar_axes_in_fixed_order(questionnaire, org):
    empty = build_assessment(questionnaire, org, stages=(DEPLOY,))
    filled = _case_study_fixture(questionnaire, org)
    for assessment in (empty, filled):
        bundle = build_report_bundle(questionnaire, assessment)
        assert [a["pillar"] for a in bundle.chart_data["pillar_axes"]] == [
            "MAP", "MEASURE", "MANAGE", "GOVERN",
        ]


def test_topic_level_report_withholds_dimension_chart_with_reason(questionnaire, org):
    bundle = build_report_bundle(questionnaire, _case_study_fixture(questionnaire, org))
    assert bundle.chart_data["dimension_axes"] is None
    assert bundle.chart_data["dimension_axes_unavailable_reason"] == DIMENSION_UNAVAILABLE_REASON
    assert DIMENSION_UNAVAILABLE_REASON in bundle.markdown


def test_statement_level_report_includes_dimension_chart(questionnaire, org):
    a = build_assessment(questionnaire, org, stages=(BUILD,))
    record_response(questionnaire, a, answered("4e", "hml"))
    bundle = build_report_bundle(questionnaire, a)
    assert bundle.chart_data["dimension_axes"] is not None
    fairness = [
        axis for axis in bundle.chart_data["dimension_axes"]
        if axis["dimension"] == "fairness_bias"
    ][0]
    assert fairness["average"] == "3.00"
    assert bundle.chart_data["dimension_axes_unavailable_reason"] is None


def test_empty_assessment_report(questionnaire, org):
    a = build_assessment(questionnaire, org, stages=(DEPLOY,))
    bundle = build_report_bundle(questionnaire, a)
    assert "No responses recorded yet" in bundle.markdown
    assert "Maturity profile" not in bundle.markdown
    assert bundle.chart_data["completeness"]["overall"] == "0.00"
    assert bundle.chart_data["pillar_axes"][0]["average"] is None


def test_report_regeneration_is_deterministic(questionnaire, org):
    a = _case_study_fixture(questionnaire, org)
    first = build_report_bundle(questionnaire, a)
    second = build_report_bundle(questionnaire, a)
    assert first.markdown == second.markdown
    assert first.chart_data == second.chart_data


def test_na_scores_render_with_justification(questionnaire, org):
    a = build_assessment(questionnaire, org, granularity=GranularityMode.TOPIC_LEVEL,
                         stages=(BUILD,))
    record_response(
        questionnaire, a,
        Response.not_applicable("5", na_evidence("No third-party components in use")),
    )
    bundle = build_report_bundle(questionnaire, a)
    assert "Score: [n/a](#ev-5)" in bundle.markdown
    assert "No third-party components in use" in bundle.markdown


def test_diagnostics_section_lists_flags(questionnaire, org):
    a = build_assessment(questionnaire, org, granularity=GranularityMode.TOPIC_LEVEL,
                         stages=(DEPLOY,))
    record_response(questionnaire, a, answered("3", "hhh"))  # GOVERN-only topic, score 5
    record_response(questionnaire, a, answered("4", "lll"))  # MEASURE+GOVERN... score 1
    bundle = build_report_bundle(questionnaire, a)
    assert "## Diagnostics" in bundle.markdown


def test_per_system_breakdown_renders(questionnaire, org):
    a = build_assessment(
        questionnaire, org, scope=ScopeMode.PER_SYSTEM,
        granularity=GranularityMode.STATEMENT_LEVEL, stages=(BUILD, BUILD),
    )
    record_response(questionnaire, a, answered("4e", "hml", system_id="sys1"))
    record_response(questionnaire, a, answered("4e", "hhh", system_id="sys2"))
    bundle = build_report_bundle(questionnaire, a)
    assert "## Per-system breakdown" in bundle.markdown
    assert "### System `sys1`" in bundle.markdown
    assert bundle.chart_data["per_system"] is not None
    assert set(bundle.chart_data["per_system"]) == {"sys1", "sys2"}
