"""aimaturity: an executable maturity model for AI risk-management practices.

A canonical questionnaire (9 topics, 59 statements with framework subcategory
refs), a three-metric scoring rubric with an evidence gate, pillar and
dimension aggregation with pattern diagnostics and trajectories, a versioned
document store, and HTTP/CLI front ends.
"""

from .aggregation import (
    AxisScore,
    CrossSystemScores,
    DiagnosticFlag,
    DiagnosticKind,
    DiagnosticThresholds,
    DimensionScores,
    PillarScores,
    TrajectoryPoint,
    aggregate_across_systems,
    aggregate_by_dimension,
    aggregate_by_pillar,
    detect_patterns,
    trajectory,
)
from .errors import MaturityError
from .questionnaire import (
    Dimension,
    LifecycleStage,
    Pillar,
    Questionnaire,
    RmfRef,
    Statement,
    Topic,
    applicable_topics,
    load_bundled_questionnaire,
    load_questionnaire,
    statements_for_dimension,
    statements_for_pillar,
)
from .reports import ReportBundle, build_report_bundle, render_report
from .scoring import (
    EvidenceItem,
    EvidenceKind,
    MetricAssessment,
    MetricRating,
    RobustnessFacets,
    ScoreValue,
    score_from_metrics,
    suggest_coverage_rating,
    validate_response,
)
from .session import (
    AISystemProfile,
    Assessment,
    GranularityMode,
    Organization,
    Response,
    ScopeMode,
    applicable_targets,
    completeness,
    create_assessment,
    effective_stage,
    record_response,
)
from .storage import AssessmentDocument, AssessmentStore

__version__ = "0.1.0"

__all__ = [
    "AISystemProfile",
    "Assessment",
    "AssessmentDocument",
    "AssessmentStore",
    "AxisScore",
    "CrossSystemScores",
    "DiagnosticFlag",
    "DiagnosticKind",
    "DiagnosticThresholds",
    "Dimension",
    "DimensionScores",
    "EvidenceItem",
    "EvidenceKind",
    "GranularityMode",
    "LifecycleStage",
    "MaturityError",
    "MetricAssessment",
    "MetricRating",
    "Organization",
    "Pillar",
    "PillarScores",
    "Questionnaire",
    "ReportBundle",
    "Response",
    "RmfRef",
    "RobustnessFacets",
    "ScopeMode",
    "ScoreValue",
    "Statement",
    "Topic",
    "TrajectoryPoint",
    "aggregate_across_systems",
    "aggregate_by_dimension",
    "aggregate_by_pillar",
    "applicable_targets",
    "applicable_topics",
    "build_report_bundle",
    "completeness",
    "create_assessment",
    "detect_patterns",
    "effective_stage",
    "load_bundled_questionnaire",
    "load_questionnaire",
    "record_response",
    "render_report",
    "score_from_metrics",
    "statements_for_dimension",
    "statements_for_pillar",
    "suggest_coverage_rating",
    "trajectory",
    "validate_response",
]
