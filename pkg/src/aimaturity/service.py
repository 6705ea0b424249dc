"""Shared engine facade behind both the HTTP API and the CLI.

Both adapters stay thin: every operation (create, respond, aggregate,
diagnose, report, trajectory) funnels through this module, so a scripted CLI
session and an equivalent API session produce identical stored documents.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import date
from pathlib import Path

import yaml

from .aggregation import (
    DiagnosticThresholds,
    DimensionScores,
    PillarScores,
    TrajectoryPoint,
    aggregate_across_systems,
    aggregate_by_dimension,
    aggregate_by_pillar,
    detect_patterns,
    format_fraction,
    trajectory,
)
from .config import ServiceConfig
from .errors import NotFound, ParseError, RevisionConflict, ValidationError
from .questionnaire import (
    Dimension,
    LifecycleStage,
    Pillar,
    Questionnaire,
    applicable_topics,
    load_bundled_questionnaire,
    load_questionnaire,
)
from .reports import ReportBundle, build_report_bundle
from .scoring import NOT_APPLICABLE, EvidenceItem, MetricAssessment, score_from_metrics
from .storage import AssessmentDocument, AssessmentStore, body_checksum
from .session import (
    AISystemProfile,
    GranularityMode,
    Organization,
    Response,
    ScopeMode,
    applicable_targets,
    clone_assessment,
    completeness,
    create_assessment,
    record_response,
)


def questionnaire_payload(
    q: Questionnaire,
    stage: LifecycleStage | None = None,
    granularity: GranularityMode | None = None,
) -> dict:
    """Wire form of the instrument, optionally filtered by stage/granularity."""
    topics = applicable_topics(q, stage) if stage is not None else list(q.topics)
    include_statements = granularity is not GranularityMode.TOPIC_LEVEL
    return {
        "version": q.version,
        "notes": list(q.notes),
        "stage": stage.token if stage is not None else None,
        "granularity": granularity.value if granularity is not None else None,
        "topic_count": len(topics),
        "statement_count": sum(len(t.statements) for t in topics),
        "topics": [
            {
                "id": t.id,
                "name": t.name,
                "summary": t.summary,
                "stage": t.stage.token,
                "statement_count": len(t.statements),
                **(
                    {
                        "statements": [
                            {
                                "id": s.id,
                                "text": s.text,
                                "emphasis": s.emphasis,
                                "rmf_refs": [r.token() for r in s.rmf_refs],
                                "pillars": sorted(p.value for p in s.pillars),
                                "dimensions": sorted(d.value for d in s.dimensions),
                            }
                            for s in t.statements
                        ]
                    }
                    if include_statements
                    else {}
                ),
            }
            for t in topics
        ],
    }


def pillar_scores_payload(scores: PillarScores) -> dict:
    return {
        "mode": "pillar",
        "axes": [
            {
                "pillar": pillar.value,
                "average": format_fraction(scores.axes[pillar].average),
                "contributors": scores.axes[pillar].contributors,
                "not_applicable": scores.axes[pillar].not_applicable,
            }
            for pillar in Pillar
        ],
        "overall": format_fraction(scores.overall),
    }


def dimension_scores_payload(scores: DimensionScores) -> dict:
    return {
        "mode": "dimension",
        "axes": [
            {
                "dimension": dimension.value,
                "average": format_fraction(scores.axes[dimension].average),
                "contributors": scores.axes[dimension].contributors,
                "not_applicable": scores.axes[dimension].not_applicable,
            }
            for dimension in Dimension
        ],
        "overall": format_fraction(scores.overall),
    }


def trajectory_payload(points: list[TrajectoryPoint]) -> list[dict]:
    return [
        {
            "assessment_id": p.assessment_id,
            "as_of": p.as_of.isoformat(),
            "questionnaire_version": p.questionnaire_version,
            "version_mismatch": p.version_mismatch,
            "pillar_scores": pillar_scores_payload(p.pillar_scores),
            "dimension_scores": (
                dimension_scores_payload(p.dimension_scores)
                if p.dimension_scores is not None
                else None
            ),
        }
        for p in points
    ]


def parse_response_payload(payload: dict, *, system_id: str | None) -> Response:
    """Build a Response from its wire form ({'na': true} or metric ratings)."""
    if not isinstance(payload, dict):
        raise ValidationError("response payload must be an object")
    if "target" not in payload:
        raise ValidationError("response payload missing 'target'")
    target = str(payload["target"])
    evidence = tuple(EvidenceItem.from_dict(e) for e in payload.get("evidence", []))
    note = str(payload.get("note", ""))
    metrics_raw = payload.get("metrics")
    # the document format spells the marker "metrics": "n/a"; the request
    # form uses "na": true — accept both so exports re-import unchanged
    if payload.get("na") or metrics_raw == NOT_APPLICABLE:
        return Response.not_applicable(target, evidence, note=note, system_id=system_id)
    if metrics_raw is None:
        raise ValidationError("response payload needs 'metrics' or 'na': true")
    metrics = MetricAssessment.from_dict(metrics_raw)
    return Response.answered(target, metrics, evidence, note=note, system_id=system_id)


@dataclass
class EngineService:
    """One configured engine instance: questionnaire + store + thresholds."""

    questionnaire: Questionnaire
    store: AssessmentStore
    thresholds: DiagnosticThresholds

    @classmethod
    def from_config(cls, config: ServiceConfig) -> "EngineService":
        if config.questionnaire_path is not None:
            with open(config.questionnaire_path, "rb") as handle:
                q = load_questionnaire(handle)
        else:
            q = load_bundled_questionnaire()
        return cls(
            questionnaire=q,
            store=AssessmentStore(config.store_path),
            thresholds=config.thresholds,
        )

    # -- assessment lifecycle ------------------------------------------------

    def create(
        self,
        *,
        org_id: str,
        org_name: str,
        scope: str,
        granularity: str,
        systems: list[dict],
        assessment_id: str | None = None,
        as_of: str | None = None,
    ) -> AssessmentDocument:
        assessment = create_assessment(
            Organization(org_id=org_id, name=org_name),
            ScopeMode.from_token(scope),
            GranularityMode.from_token(granularity),
            [AISystemProfile.from_dict(s) for s in systems],
            self.questionnaire,
            assessment_id=assessment_id,
            as_of=date.fromisoformat(as_of) if as_of else None,
        )
        return self.store.save(assessment, expected_revision=0)

    def get(self, assessment_id: str, revision: int | None = None) -> AssessmentDocument:
        return self.store.load(assessment_id, revision=revision)

    def targets(self, assessment_id: str, system_id: str | None = None) -> dict:
        document = self.get(assessment_id)
        assessment = document.assessment
        if assessment.scope is ScopeMode.PER_SYSTEM and system_id is None:
            per_system = {
                profile.system_id: applicable_targets(
                    self.questionnaire, assessment, profile.system_id
                )
                for profile in assessment.systems
            }
            return {"revision": assessment.revision, "per_system": per_system}
        targets = applicable_targets(self.questionnaire, assessment, system_id)
        return {"revision": assessment.revision, "targets": targets}

    def put_response(
        self,
        assessment_id: str,
        payload: dict,
        *,
        system_id: str | None,
        expected_revision: int,
    ) -> tuple[AssessmentDocument, Response, bool]:
        """Record one response. Returns (document, response, replayed).

        A PUT whose expected revision is exactly one behind and whose payload
        matches the stored response for that key is treated as a safe replay
        of the request that already succeeded.
        """
        document = self.get(assessment_id)
        assessment = clone_assessment(document.assessment)
        response = parse_response_payload(payload, system_id=system_id)
        if expected_revision != assessment.revision:
            stored = assessment.responses.get(response.key)
            if (
                expected_revision == assessment.revision - 1
                and stored is not None
                and stored.content_equals(response)
            ):
                return document, stored, True
            raise RevisionConflict(
                f"expected revision {expected_revision}, assessment is at "
                f"{assessment.revision}",
                ids=(assessment_id,),
            )
        record_response(self.questionnaire, assessment, response)
        saved = self.store.save(assessment, expected_revision=expected_revision)
        return saved, response, False

    def import_responses(
        self, assessment_id: str, items: list[dict], *, expected_revision: int
    ) -> AssessmentDocument:
        """Apply a batch of responses (document-format array) in one save."""
        document = self.get(assessment_id)
        assessment = clone_assessment(document.assessment)
        if expected_revision != assessment.revision:
            raise RevisionConflict(
                f"expected revision {expected_revision}, assessment is at "
                f"{assessment.revision}",
                ids=(assessment_id,),
            )
        for item in items:
            response = parse_response_payload(item, system_id=item.get("system_id"))
            record_response(self.questionnaire, assessment, response)
        return self.store.save(assessment, expected_revision=expected_revision)

    # -- analytics ------------------------------------------------------------

    def aggregates(
        self, assessment_id: str, mode: str, system_id: str | None = None
    ) -> dict:
        document = self.get(assessment_id)
        assessment = document.assessment
        if mode == "pillar":
            if assessment.scope is ScopeMode.PER_SYSTEM and system_id is None:
                cross = aggregate_across_systems(self.questionnaire, assessment)
                payload = pillar_scores_payload(cross.organization)
                payload["per_system"] = {
                    sid: pillar_scores_payload(scores)
                    for sid, scores in sorted(cross.per_system.items())
                }
            else:
                payload = pillar_scores_payload(
                    aggregate_by_pillar(self.questionnaire, assessment, system_id)
                )
        elif mode == "dimension":
            payload = dimension_scores_payload(
                aggregate_by_dimension(self.questionnaire, assessment, system_id)
            )
        else:
            raise ValidationError(f"unknown aggregation mode {mode!r}; use pillar or dimension")
        payload["assessment_id"] = assessment.assessment_id
        payload["revision"] = assessment.revision
        return payload

    def diagnostics(self, assessment_id: str) -> dict:
        document = self.get(assessment_id)
        assessment = document.assessment
        if assessment.scope is ScopeMode.PER_SYSTEM:
            scores = aggregate_across_systems(self.questionnaire, assessment).organization
        else:
            scores = aggregate_by_pillar(self.questionnaire, assessment)
        flags = detect_patterns(scores, self.thresholds)
        return {
            "assessment_id": assessment.assessment_id,
            "revision": assessment.revision,
            "flags": [flag.to_dict() for flag in flags],
        }

    def completeness(self, assessment_id: str) -> dict:
        document = self.get(assessment_id)
        report = completeness(self.questionnaire, document.assessment)
        return {
            "assessment_id": assessment_id,
            "revision": document.revision,
            "overall": format_fraction(report.overall),
            "answered": report.answered,
            "total": report.total,
            "unanswered": [
                {"target": target, "system_id": system_id}
                for target, system_id in report.unanswered
            ],
            "per_system": {
                system_id: format_fraction(value)
                for system_id, value in sorted(report.per_system.items())
            },
        }

    def report(self, assessment_id: str) -> ReportBundle:
        document = self.get(assessment_id)
        return build_report_bundle(self.questionnaire, document.assessment, self.thresholds)

    def trajectory(self, org_id: str) -> list[dict]:
        summaries = self.store.list(org_id)
        if not summaries:
            raise NotFound(f"no assessments stored for organization {org_id!r}", ids=(org_id,))
        assessments = [self.get(s.assessment_id).assessment for s in summaries]
        return trajectory_payload(trajectory(self.questionnaire, assessments))

    def score_table(self, assessment_id: str) -> list[dict]:
        """Recompute each stored response's score from its metrics."""
        document = self.get(assessment_id)
        rows = []
        for response in document.assessment.sorted_responses():
            recomputed = (
                score_from_metrics(response.metrics).to_json()
                if response.metrics is not None
                else "n/a"
            )
            rows.append(
                {
                    "target": response.target,
                    "system_id": response.system_id,
                    "score": response.score.to_json(),
                    "recomputed": recomputed,
                    "consistent": response.score.to_json() == recomputed,
                }
            )
        return rows


def validate_file(path: Path) -> str:
    """Validate a questionnaire or assessment-document file; returns a summary."""
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ParseError(f"unreadable file {path}: {exc}") from None
    text = raw.decode("utf-8")
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path} is neither valid YAML nor JSON: {exc}") from None
    if isinstance(data, dict) and "topics" in data:
        q = load_questionnaire(raw)
        return (
            f"{len(q.topics)} topics, {len(q.statements)} statements "
            f"(version {q.version})"
        )
    if isinstance(data, dict) and "assessment" in data:
        document = AssessmentDocument.from_dict(data)
        if body_checksum(document.assessment.to_dict()) != document.checksum:
            raise ParseError(f"{path}: checksum mismatch")
        a = document.assessment
        return (
            f"assessment {a.assessment_id} (revision {a.revision}, "
            f"{len(a.responses)} responses)"
        )
    raise ParseError(f"{path}: not a questionnaire or assessment document")
