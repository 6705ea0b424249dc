"""Aggregate profiles, pattern diagnostics, and progress trajectories.

Averages are exact rationals over the contributing numeric scores; axes with
no contributors report "no data" (None), never 0. Not-applicable responses
are excluded from every aggregate. A statement contributes once to every
pillar its non-custom refs cite; a scored topic contributes once to every
pillar cited anywhere among its sub-statements. Custom-only statements reach
dimension aggregates through their tags but never touch pillar aggregates.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from enum import Enum
from fractions import Fraction

from .errors import (
    DomainError,
    GranularityUnsupported,
    MixedOrganizations,
    NoData,
    ScopeUnsupported,
)
from .questionnaire import Dimension, Pillar, Questionnaire
from .session import Assessment, GranularityMode, Response, ScopeMode


@dataclass(frozen=True)
class AxisScore:
    """One aggregate axis: exact average, contributor count, N/A count."""

    average: Fraction | None
    contributors: int
    not_applicable: int

    @property
    def has_data(self) -> bool:
        return self.average is not None


EMPTY_AXIS = AxisScore(average=None, contributors=0, not_applicable=0)


@dataclass(frozen=True)
class PillarScores:
    """Per-pillar aggregate plus the unweighted overall mean (a reporting
    convention: the mean of the populated pillar averages)."""

    axes: dict[Pillar, AxisScore]

    @property
    def overall(self) -> Fraction | None:
        populated = [axis.average for axis in self.axes.values() if axis.average is not None]
        if not populated:
            return None
        return sum(populated, Fraction(0)) / len(populated)

    def axis(self, pillar: Pillar) -> AxisScore:
        return self.axes[pillar]


@dataclass(frozen=True)
class DimensionScores:
    axes: dict[Dimension, AxisScore]

    @property
    def overall(self) -> Fraction | None:
        populated = [axis.average for axis in self.axes.values() if axis.average is not None]
        if not populated:
            return None
        return sum(populated, Fraction(0)) / len(populated)

    def axis(self, dimension: Dimension) -> AxisScore:
        return self.axes[dimension]


def empty_pillar_scores() -> PillarScores:
    return PillarScores(axes={pillar: EMPTY_AXIS for pillar in Pillar})


def empty_dimension_scores() -> DimensionScores:
    return DimensionScores(axes={dimension: EMPTY_AXIS for dimension in Dimension})


def _in_scope_responses(
    assessment: Assessment, system_id: str | None
) -> list[Response]:
    if system_id is not None:
        if assessment.scope is not ScopeMode.PER_SYSTEM:
            raise DomainError("per-system aggregation applies to per-system assessments only")
        assessment.system(system_id)  # raises UnknownSystem
        return [r for r in assessment.sorted_responses() if r.system_id == system_id]
    if assessment.scope is ScopeMode.PER_SYSTEM:
        raise DomainError(
            "per-system assessments aggregate one system at a time; "
            "use aggregate_across_systems for the organization rollup"
        )
    return assessment.sorted_responses()


def _pillars_for_target(q: Questionnaire, assessment: Assessment, target: str) -> frozenset[Pillar]:
    if assessment.granularity is GranularityMode.STATEMENT_LEVEL:
        return q.statement(target).pillars
    return q.topic(int(target)).pillars


def aggregate_by_pillar(
    q: Questionnaire, assessment: Assessment, system_id: str | None = None
) -> PillarScores:
    """Average the in-scope numeric scores onto the four pillar axes."""
    responses = _in_scope_responses(assessment, system_id)
    if not responses:
        raise NoData("no responses recorded in scope", ids=(assessment.assessment_id,))
    sums: dict[Pillar, Fraction] = {p: Fraction(0) for p in Pillar}
    counts: dict[Pillar, int] = {p: 0 for p in Pillar}
    na_counts: dict[Pillar, int] = {p: 0 for p in Pillar}
    for response in responses:
        pillars = _pillars_for_target(q, assessment, response.target)
        if response.score.is_numeric:
            for pillar in pillars:
                sums[pillar] += response.score.value
                counts[pillar] += 1
        else:
            for pillar in pillars:
                na_counts[pillar] += 1
    axes = {
        pillar: AxisScore(
            average=(sums[pillar] / counts[pillar]) if counts[pillar] else None,
            contributors=counts[pillar],
            not_applicable=na_counts[pillar],
        )
        for pillar in Pillar
    }
    return PillarScores(axes=axes)


def aggregate_by_dimension(
    q: Questionnaire, assessment: Assessment, system_id: str | None = None
) -> DimensionScores:
    """Average statement scores onto dimension axes (statement-level only)."""
    if assessment.granularity is not GranularityMode.STATEMENT_LEVEL:
        raise GranularityUnsupported(
            "dimension aggregation needs statement-level scores; "
            "this assessment was scored at topic level",
            ids=(assessment.assessment_id,),
        )
    responses = _in_scope_responses(assessment, system_id)
    if not responses:
        raise NoData("no responses recorded in scope", ids=(assessment.assessment_id,))
    sums: dict[Dimension, Fraction] = {d: Fraction(0) for d in Dimension}
    counts: dict[Dimension, int] = {d: 0 for d in Dimension}
    na_counts: dict[Dimension, int] = {d: 0 for d in Dimension}
    for response in responses:
        dimensions = q.statement(response.target).dimensions
        if response.score.is_numeric:
            for dimension in dimensions:
                sums[dimension] += response.score.value
                counts[dimension] += 1
        else:
            for dimension in dimensions:
                na_counts[dimension] += 1
    axes = {
        dimension: AxisScore(
            average=(sums[dimension] / counts[dimension]) if counts[dimension] else None,
            contributors=counts[dimension],
            not_applicable=na_counts[dimension],
        )
        for dimension in Dimension
    }
    return DimensionScores(axes=axes)


@dataclass(frozen=True)
class CrossSystemScores:
    """Organization rollup of a per-system assessment.

    Organization axes are unweighted means over the systems that have data for
    a pillar; their ``contributors`` count systems, not responses.
    """

    organization: PillarScores
    per_system: dict[str, PillarScores]


def aggregate_across_systems(q: Questionnaire, assessment: Assessment) -> CrossSystemScores:
    if assessment.scope is not ScopeMode.PER_SYSTEM:
        raise ScopeUnsupported(
            "holistic assessments are already organization-level",
            ids=(assessment.assessment_id,),
        )
    if not assessment.responses:
        raise NoData("no responses recorded in scope", ids=(assessment.assessment_id,))
    per_system: dict[str, PillarScores] = {}
    for profile in assessment.systems:
        has_any = any(r.system_id == profile.system_id for r in assessment.responses.values())
        per_system[profile.system_id] = (
            aggregate_by_pillar(q, assessment, profile.system_id)
            if has_any
            else empty_pillar_scores()
        )
    org_axes: dict[Pillar, AxisScore] = {}
    for pillar in Pillar:
        values = [
            scores.axis(pillar).average
            for scores in per_system.values()
            if scores.axis(pillar).average is not None
        ]
        na_total = sum(scores.axis(pillar).not_applicable for scores in per_system.values())
        org_axes[pillar] = AxisScore(
            average=(sum(values, Fraction(0)) / len(values)) if values else None,
            contributors=len(values),
            not_applicable=na_total,
        )
    return CrossSystemScores(organization=PillarScores(axes=org_axes), per_system=per_system)


class DiagnosticKind(Enum):
    ETHICS_WASHING_PATTERN = "ethics_washing_pattern"
    ILL_INFORMED_RISK_MANAGEMENT = "ill_informed_risk_management"


@dataclass(frozen=True)
class DiagnosticThresholds:
    """Strength/weakness cutoffs for pattern detection (configurable)."""

    high: Fraction = Fraction(4)
    low: Fraction = Fraction(2)

    @classmethod
    def of(cls, high: float | str | Fraction = 4, low: float | str | Fraction = 2) -> "DiagnosticThresholds":
        return cls(high=_as_fraction(high), low=_as_fraction(low))


def _as_fraction(value: float | str | Fraction) -> Fraction:
    if isinstance(value, Fraction):
        return value
    # str() round-trips floats through their decimal display, so config values
    # like 4.0 or 2.5 stay exact.
    return Fraction(str(value))


@dataclass(frozen=True)
class DiagnosticFlag:
    kind: DiagnosticKind
    rationale: str
    thresholds: DiagnosticThresholds

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "rationale": self.rationale,
            "thresholds": {
                "high": format_fraction(self.thresholds.high),
                "low": format_fraction(self.thresholds.low),
            },
        }


def format_fraction(value: Fraction | None) -> str | None:
    """Serialize an exact average at 2 decimal places, round-half-to-even."""
    if value is None:
        return None
    with localcontext() as ctx:
        ctx.prec = 50
        quotient = Decimal(value.numerator) / Decimal(value.denominator)
        return str(quotient.quantize(Decimal("0.01"), rounding=ROUND_HALF_EVEN))


def _strong(axis: AxisScore, thresholds: DiagnosticThresholds) -> bool:
    return axis.average is not None and axis.average >= thresholds.high


def _weak(axis: AxisScore, thresholds: DiagnosticThresholds) -> bool:
    return axis.average is not None and axis.average <= thresholds.low


def detect_patterns(
    scores: PillarScores, thresholds: DiagnosticThresholds | None = None
) -> list[DiagnosticFlag]:
    """Flag systematic profiles: governance strength masking weak practice.

    Ethics washing: GOVERN at/above the high cutoff while MAP, MEASURE, and
    MANAGE all sit at/below the low cutoff. Ill-informed risk management:
    GOVERN and MANAGE strong while MAP and MEASURE are weak. Axes without
    data never satisfy either side.
    """
    thresholds = thresholds or DiagnosticThresholds()
    flags: list[DiagnosticFlag] = []
    govern = scores.axis(Pillar.GOVERN)
    map_axis = scores.axis(Pillar.MAP)
    measure = scores.axis(Pillar.MEASURE)
    manage = scores.axis(Pillar.MANAGE)

    def describe(pillar: Pillar) -> str:
        return f"{pillar.value} {format_fraction(scores.axis(pillar).average)}"

    if _strong(govern, thresholds) and all(
        _weak(axis, thresholds) for axis in (map_axis, measure, manage)
    ):
        flags.append(
            DiagnosticFlag(
                kind=DiagnosticKind.ETHICS_WASHING_PATTERN,
                rationale=(
                    f"{describe(Pillar.GOVERN)} at/above {format_fraction(thresholds.high)} while "
                    f"{describe(Pillar.MAP)}, {describe(Pillar.MEASURE)}, {describe(Pillar.MANAGE)} "
                    f"sit at/below {format_fraction(thresholds.low)}: governance activity is not "
                    "matched by mapping, measurement, or mitigation practice"
                ),
                thresholds=thresholds,
            )
        )
    if (
        _strong(govern, thresholds)
        and _strong(manage, thresholds)
        and _weak(map_axis, thresholds)
        and _weak(measure, thresholds)
    ):
        flags.append(
            DiagnosticFlag(
                kind=DiagnosticKind.ILL_INFORMED_RISK_MANAGEMENT,
                rationale=(
                    f"{describe(Pillar.GOVERN)} and {describe(Pillar.MANAGE)} at/above "
                    f"{format_fraction(thresholds.high)} while {describe(Pillar.MAP)} and "
                    f"{describe(Pillar.MEASURE)} sit at/below {format_fraction(thresholds.low)}: "
                    "mitigation without risk understanding"
                ),
                thresholds=thresholds,
            )
        )
    return flags


@dataclass(frozen=True)
class TrajectoryPoint:
    assessment_id: str
    as_of: date
    questionnaire_version: str
    pillar_scores: PillarScores
    dimension_scores: DimensionScores | None
    version_mismatch: bool


def trajectory(q: Questionnaire, assessments: list[Assessment]) -> list[TrajectoryPoint]:
    """Time-ordered aggregate snapshots across one organization's assessments.

    Points sort by as-of date (ties broken by creation time then id, keeping
    the order deterministic). Assessments without responses yield empty axes
    so gaps stay visible; mixed questionnaire versions are annotated.
    """
    if not assessments:
        return []
    org_ids = {a.organization.org_id for a in assessments}
    if len(org_ids) > 1:
        raise MixedOrganizations(
            f"assessments span organizations {sorted(org_ids)}", ids=tuple(sorted(org_ids))
        )
    ordered = sorted(assessments, key=lambda a: (a.as_of_date, a.created_at, a.assessment_id))
    points: list[TrajectoryPoint] = []
    for assessment in ordered:
        try:
            if assessment.scope is ScopeMode.PER_SYSTEM:
                pillar_scores = aggregate_across_systems(q, assessment).organization
            else:
                pillar_scores = aggregate_by_pillar(q, assessment)
        except NoData:
            pillar_scores = empty_pillar_scores()
        dimension_scores: DimensionScores | None = None
        if (
            assessment.granularity is GranularityMode.STATEMENT_LEVEL
            and assessment.scope is ScopeMode.HOLISTIC
        ):
            try:
                dimension_scores = aggregate_by_dimension(q, assessment)
            except NoData:
                dimension_scores = empty_dimension_scores()
        points.append(
            TrajectoryPoint(
                assessment_id=assessment.assessment_id,
                as_of=assessment.as_of_date,
                questionnaire_version=assessment.questionnaire_version,
                pillar_scores=pillar_scores,
                dimension_scores=dimension_scores,
                version_mismatch=assessment.questionnaire_version != q.version,
            )
        )
    return points
