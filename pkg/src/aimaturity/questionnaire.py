"""Canonical questionnaire model: an immutable, validated instrument.

The instrument ships as a YAML document (``data/questionnaire.yaml``, format
documented in ``docs/questionnaire-format.md``): 9 topics split across three
lifecycle stages, 59 sub-statements, each citing framework subcategories by
pillar or marked as a custom addition, optionally tagged with responsibility
dimensions. ``load_questionnaire`` parses and enforces every structural
invariant; after that the value is frozen and safe to share across threads.
"""

from __future__ import annotations

import re
import string
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from importlib import resources
from typing import IO, Iterable

import yaml

from .errors import IntegrityError, NotFound, ParseError


class LifecycleStage(IntEnum):
    """Development lifecycle stage; comparison follows progression order."""

    PLANNING_AND_DESIGN = 1
    BUILDING_AND_DATA = 2
    DEPLOYMENT = 3

    @property
    def token(self) -> str:
        return self.name.lower()

    @classmethod
    def from_token(cls, token: str) -> "LifecycleStage":
        normalized = token.strip().lower().replace("-", "_")
        aliases = {
            "plan": cls.PLANNING_AND_DESIGN,
            "planning": cls.PLANNING_AND_DESIGN,
            "planning_and_design": cls.PLANNING_AND_DESIGN,
            "build": cls.BUILDING_AND_DATA,
            "building": cls.BUILDING_AND_DATA,
            "building_and_data": cls.BUILDING_AND_DATA,
            "deploy": cls.DEPLOYMENT,
            "deployment": cls.DEPLOYMENT,
        }
        if normalized not in aliases:
            raise ParseError(f"unknown lifecycle stage {token!r}")
        return aliases[normalized]


class Pillar(str, Enum):
    """The four framework functions, in canonical chart-axis order."""

    MAP = "MAP"
    MEASURE = "MEASURE"
    MANAGE = "MANAGE"
    GOVERN = "GOVERN"


# Abbreviations used in the data file's subcategory refs.
_PILLAR_ABBREVIATIONS = {
    "MAP": Pillar.MAP,
    "MEA": Pillar.MEASURE,
    "MAN": Pillar.MANAGE,
    "GOV": Pillar.GOVERN,
}

_REF_PATTERN = re.compile(r"^(MAP|MEA|MAN|GOV)\s+(\d+)\.(\d+)$")


class Dimension(str, Enum):
    """Responsibility dimensions used for the second aggregation mode."""

    PERFORMANCE_VALIDITY = "performance_validity"
    FAIRNESS_BIAS = "fairness_bias"
    PRIVACY = "privacy"
    ENVIRONMENTAL = "environmental"
    TRANSPARENCY_ACCOUNTABILITY = "transparency_accountability"
    SECURITY_RESILIENCE = "security_resilience"
    EXPLAINABILITY = "explainability"
    THIRD_PARTY = "third_party"
    OTHER = "other"


@dataclass(frozen=True)
class RmfRef:
    """One framework subcategory citation, or a custom (beyond-framework) marker."""

    pillar: Pillar | None
    category: int | None
    subcategory: int | None
    custom: bool = False

    def __post_init__(self) -> None:
        if self.custom:
            if self.pillar is not None or self.category is not None or self.subcategory is not None:
                raise IntegrityError("custom ref must not carry pillar/category/subcategory")
        else:
            if self.pillar is None or self.category is None or self.subcategory is None:
                raise IntegrityError("non-custom ref requires pillar, category, and subcategory")
            if self.category < 1 or self.subcategory < 1:
                raise IntegrityError("ref category and subcategory must be positive")

    @classmethod
    def parse(cls, token: str) -> "RmfRef":
        token = token.strip()
        if token.lower() == "custom":
            return cls(pillar=None, category=None, subcategory=None, custom=True)
        match = _REF_PATTERN.match(token)
        if not match:
            raise ParseError(f"malformed subcategory ref {token!r}")
        return cls(
            pillar=_PILLAR_ABBREVIATIONS[match.group(1)],
            category=int(match.group(2)),
            subcategory=int(match.group(3)),
        )

    def token(self) -> str:
        if self.custom:
            return "custom"
        abbrev = {v: k for k, v in _PILLAR_ABBREVIATIONS.items()}[self.pillar]
        return f"{abbrev} {self.category}.{self.subcategory}"


@dataclass(frozen=True)
class Statement:
    """One sub-statement of the instrument."""

    id: str
    topic_id: int
    text: str
    emphasis: str
    rmf_refs: tuple[RmfRef, ...]
    dimensions: frozenset[Dimension]
    stage: LifecycleStage

    @property
    def pillars(self) -> frozenset[Pillar]:
        """Pillars cited by non-custom refs (deduplicated)."""
        return frozenset(r.pillar for r in self.rmf_refs if not r.custom)

    @property
    def custom_only(self) -> bool:
        return all(r.custom for r in self.rmf_refs)


@dataclass(frozen=True)
class Topic:
    """A coarse-grained topic grouping consecutive statements."""

    id: int
    name: str
    summary: str
    stage: LifecycleStage
    statements: tuple[Statement, ...]

    @property
    def pillars(self) -> frozenset[Pillar]:
        """Union of all sub-statements' non-custom pillars."""
        out: set[Pillar] = set()
        for stmt in self.statements:
            out |= stmt.pillars
        return frozenset(out)


# Fixed per-topic structure of the canonical instrument.
EXPECTED_TOPIC_COUNT = 9
EXPECTED_STATEMENT_COUNTS = (7, 3, 4, 13, 4, 4, 14, 1, 9)
EXPECTED_STAGES = {
    LifecycleStage.PLANNING_AND_DESIGN: (1, 2, 3),
    LifecycleStage.BUILDING_AND_DATA: (4, 5, 6, 7),
    LifecycleStage.DEPLOYMENT: (8, 9),
}


@dataclass(frozen=True)
class Questionnaire:
    """The full validated instrument plus lookup indexes."""

    version: str
    notes: tuple[str, ...]
    topics: tuple[Topic, ...]
    _by_statement_id: dict[str, Statement] = field(repr=False, compare=False, default_factory=dict)
    _by_topic_id: dict[int, Topic] = field(repr=False, compare=False, default_factory=dict)

    def __post_init__(self) -> None:
        self._by_statement_id.clear()
        self._by_topic_id.clear()
        for topic in self.topics:
            self._by_topic_id[topic.id] = topic
            for stmt in topic.statements:
                self._by_statement_id[stmt.id] = stmt

    @property
    def statements(self) -> tuple[Statement, ...]:
        return tuple(s for t in self.topics for s in t.statements)

    def topic(self, topic_id: int) -> Topic:
        try:
            return self._by_topic_id[topic_id]
        except KeyError:
            raise NotFound(f"unknown topic id {topic_id!r}", ids=(str(topic_id),)) from None

    def statement(self, statement_id: str) -> Statement:
        try:
            return self._by_statement_id[statement_id]
        except KeyError:
            raise NotFound(f"unknown statement id {statement_id!r}", ids=(statement_id,)) from None

    def has_target(self, target: str) -> bool:
        return target in self._by_statement_id or (
            target.isdigit() and int(target) in self._by_topic_id
        )


def _require(data: dict, key: str, context: str):
    if key not in data:
        raise ParseError(f"{context}: missing field {key!r}")
    return data[key]


def _parse_statement(raw: dict, topic_id: int, stage: LifecycleStage) -> Statement:
    context = f"statement in topic {topic_id}"
    statement_id = str(_require(raw, "id", context))
    refs = _require(raw, "rmf_refs", f"statement {statement_id}")
    if not isinstance(refs, list) or not refs:
        raise IntegrityError(
            f"statement {statement_id}: rmf_refs must be a non-empty list",
            ids=(statement_id,),
        )
    dims = raw.get("dimensions", [])
    try:
        dimensions = frozenset(Dimension(d) for d in dims)
    except ValueError as exc:
        raise ParseError(f"statement {statement_id}: {exc}") from None
    return Statement(
        id=statement_id,
        topic_id=topic_id,
        text=str(_require(raw, "text", f"statement {statement_id}")).strip(),
        emphasis=str(raw.get("emphasis", "")).strip(),
        rmf_refs=tuple(RmfRef.parse(str(r)) for r in refs),
        dimensions=dimensions,
        stage=stage,
    )


def _parse_topic(raw: dict) -> Topic:
    topic_id = _require(raw, "id", "topic")
    if not isinstance(topic_id, int):
        raise ParseError(f"topic id must be an integer, got {topic_id!r}")
    stage = LifecycleStage.from_token(str(_require(raw, "stage", f"topic {topic_id}")))
    statements_raw = _require(raw, "statements", f"topic {topic_id}")
    if not isinstance(statements_raw, list) or not statements_raw:
        raise IntegrityError(f"topic {topic_id}: statements must be a non-empty list", ids=(str(topic_id),))
    return Topic(
        id=topic_id,
        name=str(_require(raw, "name", f"topic {topic_id}")).strip(),
        summary=str(_require(raw, "summary", f"topic {topic_id}")).strip(),
        stage=stage,
        statements=tuple(_parse_statement(s, topic_id, stage) for s in statements_raw),
    )


def _check_integrity(q: Questionnaire) -> None:
    if len(q.topics) != EXPECTED_TOPIC_COUNT:
        raise IntegrityError(f"expected {EXPECTED_TOPIC_COUNT} topics, found {len(q.topics)}")
    for index, topic in enumerate(q.topics, start=1):
        if topic.id != index:
            raise IntegrityError(
                f"topic ids must be 1..9 in order; position {index} holds topic {topic.id}",
                ids=(str(topic.id),),
            )
    expected_stage_by_topic = {
        topic_id: stage for stage, ids in EXPECTED_STAGES.items() for topic_id in ids
    }
    for topic in q.topics:
        expected_stage = expected_stage_by_topic[topic.id]
        if topic.stage is not expected_stage:
            raise IntegrityError(
                f"topic {topic.id} must carry stage {expected_stage.token}, found {topic.stage.token}",
                ids=(str(topic.id),),
            )
        expected_count = EXPECTED_STATEMENT_COUNTS[topic.id - 1]
        if len(topic.statements) != expected_count:
            raise IntegrityError(
                f"topic {topic.id} must hold {expected_count} statements, found {len(topic.statements)}",
                ids=(str(topic.id),),
            )
        for position, stmt in enumerate(topic.statements):
            expected_id = f"{topic.id}{string.ascii_lowercase[position]}"
            if stmt.id != expected_id:
                raise IntegrityError(
                    f"statement letters must be consecutive from 'a': expected {expected_id}, found {stmt.id}",
                    ids=(stmt.id,),
                )
            if stmt.topic_id != topic.id:
                raise IntegrityError(
                    f"statement {stmt.id} names topic {stmt.topic_id}, contained in topic {topic.id}",
                    ids=(stmt.id,),
                )
    seen: set[str] = set()
    for stmt in q.statements:
        if stmt.id in seen:
            raise IntegrityError(f"duplicate statement id {stmt.id}", ids=(stmt.id,))
        seen.add(stmt.id)
    total = len(q.statements)
    expected_total = sum(EXPECTED_STATEMENT_COUNTS)
    if total != expected_total:
        raise IntegrityError(f"expected {expected_total} statements, found {total}")


def load_questionnaire(source: IO[bytes] | IO[str] | bytes | str) -> Questionnaire:
    """Parse and validate a questionnaire document.

    Raises ParseError for malformed input and IntegrityError (naming the
    violated invariant and offending id) for structurally invalid instruments.
    """
    if hasattr(source, "read"):
        payload = source.read()
    else:
        payload = source
    if isinstance(payload, bytes):
        payload = payload.decode("utf-8")
    try:
        data = yaml.safe_load(payload)
    except yaml.YAMLError as exc:
        raise ParseError(f"malformed questionnaire document: {exc}") from None
    if not isinstance(data, dict):
        raise ParseError("questionnaire document must be a mapping with version/topics")
    version = str(_require(data, "version", "questionnaire"))
    notes = tuple(str(n) for n in data.get("notes", []))
    topics_raw = _require(data, "topics", "questionnaire")
    if not isinstance(topics_raw, list):
        raise ParseError("topics must be a list")
    q = Questionnaire(
        version=version,
        notes=notes,
        topics=tuple(_parse_topic(t) for t in topics_raw),
    )
    _check_integrity(q)
    return q


def load_bundled_questionnaire() -> Questionnaire:
    """Load the canonical instrument bundled with the package."""
    data = resources.files("aimaturity.data").joinpath("questionnaire.yaml").read_bytes()
    return load_questionnaire(data)


def serialize_questionnaire(q: Questionnaire) -> str:
    """Render a questionnaire back to its YAML document form.

    ``load_questionnaire(serialize_questionnaire(q))`` reproduces ``q``.
    """
    doc = {
        "version": q.version,
        "notes": list(q.notes),
        "topics": [
            {
                "id": t.id,
                "name": t.name,
                "summary": t.summary,
                "stage": t.stage.token,
                "statements": [
                    {
                        "id": s.id,
                        "text": s.text,
                        "emphasis": s.emphasis,
                        "rmf_refs": [r.token() for r in s.rmf_refs],
                        **(
                            {"dimensions": sorted(d.value for d in s.dimensions)}
                            if s.dimensions
                            else {}
                        ),
                    }
                    for s in t.statements
                ],
            }
            for t in q.topics
        ],
    }
    return yaml.safe_dump(doc, sort_keys=False, allow_unicode=True)


def applicable_topics(q: Questionnaire, stage: LifecycleStage) -> list[Topic]:
    """Topics applicable at ``stage``: everything introduced at or before it."""
    return [t for t in q.topics if t.stage <= stage]


def applicable_statements(q: Questionnaire, stage: LifecycleStage) -> list[Statement]:
    return [s for t in applicable_topics(q, stage) for s in t.statements]


def statements_for_pillar(q: Questionnaire, pillar: Pillar) -> list[Statement]:
    """Statements citing ``pillar`` in at least one non-custom ref."""
    return [s for s in q.statements if pillar in s.pillars]


def statements_for_dimension(q: Questionnaire, dimension: Dimension) -> list[Statement]:
    """Statements tagged with ``dimension`` in the canonical tagging table."""
    return [s for s in q.statements if dimension in s.dimensions]


def custom_only_statements(q: Questionnaire) -> list[Statement]:
    """Statements citing no framework subcategory at all (custom additions)."""
    return [s for s in q.statements if s.custom_only]


def stage_counts(q: Questionnaire) -> dict[LifecycleStage, tuple[int, int]]:
    """Per-stage (topic count, statement count) of the applicable sets."""
    out = {}
    for stage in LifecycleStage:
        topics = applicable_topics(q, stage)
        out[stage] = (len(topics), sum(len(t.statements) for t in topics))
    return out


def iter_targets(topics: Iterable[Topic], statement_level: bool) -> list[str]:
    """Target ids for the given topics at the requested granularity."""
    if statement_level:
        return [s.id for t in topics for s in t.statements]
    return [str(t.id) for t in topics]
