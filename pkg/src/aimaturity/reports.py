"""Report bundle: a human-readable markdown report plus machine chart data.

Both outputs are deterministic functions of the assessment and its computed
aggregates: the same inputs render byte-identical documents. Every score in
the markdown cross-links to the evidence entries behind it, and the chart
data always carries exactly four pillar axes in the fixed order MAP,
MEASURE, MANAGE, GOVERN.
"""

from __future__ import annotations

from dataclasses import dataclass

from .aggregation import (
    CrossSystemScores,
    DiagnosticFlag,
    DiagnosticThresholds,
    DimensionScores,
    PillarScores,
    aggregate_across_systems,
    aggregate_by_dimension,
    aggregate_by_pillar,
    detect_patterns,
    format_fraction,
)
from .errors import GranularityUnsupported, NoData
from .questionnaire import Dimension, Pillar, Questionnaire
from .session import (
    Assessment,
    CompletenessReport,
    GranularityMode,
    Response,
    ScopeMode,
    completeness,
    is_topic_target,
)

CHART_FORMAT_VERSION = "1"

# Shown wherever the dimension profile is withheld.
DIMENSION_UNAVAILABLE_REASON = (
    "Dimension aggregation needs statement-level scores; this assessment was "
    "scored at topic level."
)


@dataclass(frozen=True)
class ReportBundle:
    markdown: str
    chart_data: dict


def _anchor(response: Response) -> str:
    suffix = f"-{response.system_id}" if response.system_id else ""
    return f"ev-{response.target}{suffix}"


def _axis_rows(axes: dict) -> list[str]:
    rows = []
    for key, axis in axes.items():
        label = key.value if hasattr(key, "value") else str(key)
        shown = format_fraction(axis.average) if axis.average is not None else "no data"
        rows.append(f"| {label} | {shown} | {axis.contributors} | {axis.not_applicable} |")
    return rows


def _pillar_axes_json(scores: PillarScores | None) -> list[dict]:
    axes = []
    for pillar in Pillar:
        axis = scores.axes[pillar] if scores is not None else None
        axes.append(
            {
                "pillar": pillar.value,
                "average": format_fraction(axis.average) if axis is not None else None,
                "contributors": axis.contributors if axis is not None else 0,
                "not_applicable": axis.not_applicable if axis is not None else 0,
            }
        )
    return axes


def _dimension_axes_json(scores: DimensionScores) -> list[dict]:
    return [
        {
            "dimension": dimension.value,
            "average": format_fraction(scores.axes[dimension].average),
            "contributors": scores.axes[dimension].contributors,
            "not_applicable": scores.axes[dimension].not_applicable,
        }
        for dimension in Dimension
    ]


def _target_heading(q: Questionnaire, response: Response) -> str:
    if is_topic_target(response.target):
        topic = q.topic(int(response.target))
        return f"Topic {topic.id} — {topic.name}"
    stmt = q.statement(response.target)
    refs = ", ".join(r.token() for r in stmt.rmf_refs)
    return f"Statement {stmt.id} ({refs})"


def render_report(
    q: Questionnaire,
    assessment: Assessment,
    *,
    pillar_scores: PillarScores | None,
    dimension_scores: DimensionScores | None,
    diagnostics: list[DiagnosticFlag],
    completeness_report: CompletenessReport,
    cross_system: CrossSystemScores | None = None,
) -> ReportBundle:
    """Render both report forms from precomputed aggregates."""
    lines: list[str] = []
    a = assessment
    lines.append("# AI risk-management maturity report")
    lines.append("")
    lines.append(f"- Organization: {a.organization.name} (`{a.organization.org_id}`)")
    lines.append(f"- Assessment: `{a.assessment_id}` (revision {a.revision})")
    lines.append(f"- Questionnaire version: {a.questionnaire_version}")
    lines.append(f"- Scope: {a.scope.value}; granularity: {a.granularity.value}")
    lines.append(f"- As of: {a.as_of_date.isoformat()}")
    lines.append("- Systems:")
    for profile in a.systems:
        lines.append(f"  - `{profile.system_id}` {profile.name} ({profile.stage.token})")
    lines.append("")

    lines.append("## Completeness")
    lines.append("")
    lines.append(
        f"{completeness_report.answered} of {completeness_report.total} applicable targets "
        f"answered ({format_fraction(completeness_report.overall)})."
    )
    if completeness_report.per_system:
        for system_id in sorted(completeness_report.per_system):
            lines.append(
                f"- `{system_id}`: {format_fraction(completeness_report.per_system[system_id])}"
            )
    if completeness_report.unanswered:
        missing = ", ".join(
            t if s is None else f"{t}@{s}" for t, s in completeness_report.unanswered
        )
        lines.append(f"\nUnanswered targets: {missing}")
    lines.append("")

    responses = a.sorted_responses()
    if responses:
        lines.append("## Responses")
        lines.append("")
        for response in responses:
            heading = _target_heading(q, response)
            if response.system_id:
                heading += f" — system `{response.system_id}`"
            lines.append(f"### {heading}")
            lines.append("")
            anchor = _anchor(response)
            if response.metrics is not None:
                m = response.metrics
                lines.append(
                    f"Score: [{response.score}](#{anchor}) — coverage {m.coverage.value}, "
                    f"robustness {m.robustness.value}, input diversity {m.input_diversity.value}"
                )
                if m.robustness_facets is not None:
                    checked = [
                        name for name, on in m.robustness_facets.to_dict().items() if on
                    ]
                    lines.append(
                        "Robustness facets noted: " + (", ".join(checked) if checked else "none")
                    )
            else:
                lines.append(f"Score: [n/a](#{anchor})")
            if response.note:
                lines.append(f"Note: {response.note}")
            lines.append("")
            lines.append(f'<a id="{anchor}"></a>Evidence:')
            lines.append("")
            for index, item in enumerate(response.evidence, start=1):
                sources = f" [{'; '.join(item.sources)}]" if item.sources else ""
                lines.append(f"{index}. ({item.kind.value}) {item.description}{sources}")
            lines.append("")

        lines.append("## Maturity profile by pillar")
        lines.append("")
        lines.append("| Pillar | Average | Contributors | N/A |")
        lines.append("| --- | --- | --- | --- |")
        shown_pillars = pillar_scores if pillar_scores is not None else None
        if shown_pillars is not None:
            lines.extend(_axis_rows(shown_pillars.axes))
            overall = format_fraction(shown_pillars.overall)
            if overall is not None:
                lines.append("")
                lines.append(
                    f"Overall average: {overall} (unweighted mean of populated pillar "
                    "averages; a reporting convention, not part of the scoring rubric)"
                )
        lines.append("")

        lines.append("## Maturity profile by dimension")
        lines.append("")
        if dimension_scores is not None:
            lines.append("| Dimension | Average | Contributors | N/A |")
            lines.append("| --- | --- | --- | --- |")
            lines.extend(_axis_rows(dimension_scores.axes))
        else:
            lines.append(f"_Not available: {DIMENSION_UNAVAILABLE_REASON}_")
        lines.append("")

        lines.append("## Diagnostics")
        lines.append("")
        if diagnostics:
            for flag in diagnostics:
                lines.append(f"- **{flag.kind.value}**: {flag.rationale}")
        else:
            lines.append("No diagnostic patterns detected.")
        lines.append("")

        if cross_system is not None:
            lines.append("## Per-system breakdown")
            lines.append("")
            for system_id in sorted(cross_system.per_system):
                lines.append(f"### System `{system_id}`")
                lines.append("")
                lines.append("| Pillar | Average | Contributors | N/A |")
                lines.append("| --- | --- | --- | --- |")
                lines.extend(_axis_rows(cross_system.per_system[system_id].axes))
                lines.append("")
    else:
        lines.append("_No responses recorded yet._")
        lines.append("")

    chart_data: dict = {
        "format_version": CHART_FORMAT_VERSION,
        "assessment_id": a.assessment_id,
        "organization": a.organization.to_dict(),
        "questionnaire_version": a.questionnaire_version,
        "revision": a.revision,
        "scope": a.scope.value,
        "granularity": a.granularity.value,
        "as_of": a.as_of_date.isoformat(),
        "completeness": {
            "overall": format_fraction(completeness_report.overall),
            "answered": completeness_report.answered,
            "total": completeness_report.total,
            "per_system": {
                system_id: format_fraction(value)
                for system_id, value in sorted(completeness_report.per_system.items())
            },
        },
        "pillar_axes": _pillar_axes_json(pillar_scores),
        "pillar_overall": format_fraction(pillar_scores.overall) if pillar_scores else None,
        "dimension_axes": (
            _dimension_axes_json(dimension_scores) if dimension_scores is not None else None
        ),
        "dimension_axes_unavailable_reason": (
            DIMENSION_UNAVAILABLE_REASON
            if assessment.granularity is GranularityMode.TOPIC_LEVEL
            else None
        ),
        "per_system": (
            {
                system_id: _pillar_axes_json(scores)
                for system_id, scores in sorted(cross_system.per_system.items())
            }
            if cross_system is not None
            else None
        ),
        "diagnostics": [flag.to_dict() for flag in diagnostics],
        "evidence_index": [
            {
                "target": response.target,
                "system_id": response.system_id,
                "anchor": _anchor(response),
                "score": response.score.to_json(),
                "items": [item.to_dict() for item in response.evidence],
            }
            for response in responses
        ],
    }
    return ReportBundle(markdown="\n".join(lines), chart_data=chart_data)


def build_report_bundle(
    q: Questionnaire,
    assessment: Assessment,
    thresholds: DiagnosticThresholds | None = None,
) -> ReportBundle:
    """Compute all aggregates for an assessment and render its bundle."""
    completeness_report = completeness(q, assessment)
    pillar_scores: PillarScores | None = None
    dimension_scores: DimensionScores | None = None
    cross_system: CrossSystemScores | None = None
    diagnostics: list[DiagnosticFlag] = []
    if assessment.responses:
        if assessment.scope is ScopeMode.PER_SYSTEM:
            cross_system = aggregate_across_systems(q, assessment)
            pillar_scores = cross_system.organization
        else:
            pillar_scores = aggregate_by_pillar(q, assessment)
        diagnostics = detect_patterns(pillar_scores, thresholds)
        if assessment.scope is ScopeMode.HOLISTIC:
            try:
                dimension_scores = aggregate_by_dimension(q, assessment)
            except (GranularityUnsupported, NoData):
                dimension_scores = None
    return render_report(
        q,
        assessment,
        pillar_scores=pillar_scores,
        dimension_scores=dimension_scores,
        diagnostics=diagnostics,
        completeness_report=completeness_report,
        cross_system=cross_system,
    )
