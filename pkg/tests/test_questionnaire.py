from __future__ import annotations

import pytest
import yaml

from aimaturity import Dimension, LifecycleStage, Pillar
from aimaturity.errors import IntegrityError, ParseError
from aimaturity.questionnaire import (
    applicable_statements,
    applicable_topics,
    custom_only_statements,
    load_questionnaire,
    serialize_questionnaire,
    statements_for_dimension,
    statements_for_pillar,
)

PER_TOPIC_COUNTS = (7, 3, 4, 13, 4, 4, 14, 1, 9)


def test_canonical_shape(questionnaire):
    assert len(questionnaire.topics) == 9
    assert tuple(len(t.statements) for t in questionnaire.topics) == PER_TOPIC_COUNTS
    assert len(questionnaire.statements) == 59


def test_stage_partition(questionnaire):
    by_stage = {
        LifecycleStage.PLANNING_AND_DESIGN: [1, 2, 3],
        LifecycleStage.BUILDING_AND_DATA: [4, 5, 6, 7],
        LifecycleStage.DEPLOYMENT: [8, 9],
    }
    for stage, topic_ids in by_stage.items():
        assert [t.id for t in questionnaire.topics if t.stage is stage] == topic_ids


def test_statement_letters_consecutive(questionnaire):
    for topic in questionnaire.topics:
        letters = [s.id[len(str(topic.id)):] for s in topic.statements]
        assert letters == [chr(ord("a") + i) for i in range(len(letters))]


def test_custom_statements_flagged(questionnaire):
    assert {s.id for s in custom_only_statements(questionnaire)} == {"4l", "7l"}
    for statement_id in ("4l", "7l"):
        refs = questionnaire.statement(statement_id).rmf_refs
        assert all(r.custom for r in refs)
        assert all(r.pillar is None for r in refs)


def test_every_noncustom_ref_names_a_pillar(questionnaire):
    for statement in questionnaire.statements:
        for ref in statement.rmf_refs:
            if not ref.custom:
                assert ref.pillar in Pillar
                assert ref.category >= 1 and ref.subcategory >= 1


@pytest.mark.parametrize(
    "statement_id, tokens",
    [
        ("4e", ["MEA 2.11"]),
        ("4f", ["MEA 2.10"]),
        ("4k", ["GOV 6.1"]),
        ("7h", ["GOV 6.1"]),
        ("8a", ["MEA 2.5", "MAN 1.1"]),
        ("1b", ["MAP 1.1", "MAP 3.1", "MAP 5.1", "GOV 4.2"]),
        ("1d", ["GOV 1.1", "GOV 4.2", "GOV 5.1"]),
        ("3a", ["GOV 1.2", "GOV 1.4"]),
        ("5c", ["MEA 2.9"]),
    ],
)
def test_reference_spot_checks(questionnaire, statement_id, tokens):
    assert [r.token() for r in questionnaire.statement(statement_id).rmf_refs] == tokens


@pytest.mark.parametrize(
    "stage, topic_ids, statement_count",
    [
        (LifecycleStage.PLANNING_AND_DESIGN, [1, 2, 3], 14),
        (LifecycleStage.BUILDING_AND_DATA, [1, 2, 3, 4, 5, 6, 7], 49),
        (LifecycleStage.DEPLOYMENT, [1, 2, 3, 4, 5, 6, 7, 8, 9], 59),
    ],
)
def test_applicable_topics_by_stage(questionnaire, stage, topic_ids, statement_count):
    topics = applicable_topics(questionnaire, stage)
    assert [t.id for t in topics] == topic_ids
    assert len(applicable_statements(questionnaire, stage)) == statement_count


def test_applicable_sets_are_nested(questionnaire):
    plan, build, deploy = (
        {t.id for t in applicable_topics(questionnaire, stage)} for stage in LifecycleStage
    )
    assert plan <= build <= deploy
    assert deploy == {t.id for t in questionnaire.topics}


def test_statements_for_pillar_membership(questionnaire):
    measure = {s.id for s in statements_for_pillar(questionnaire, Pillar.MEASURE)}
    govern = {s.id for s in statements_for_pillar(questionnaire, Pillar.GOVERN)}
    map_ = {s.id for s in statements_for_pillar(questionnaire, Pillar.MAP)}
    assert {"4e", "5c"} <= measure
    assert {"1d", "3a"} <= govern
    # a statement citing several pillars appears under each of them
    assert "1b" in map_ and "1b" in govern


def test_pillar_union_plus_custom_covers_everything(questionnaire):
    covered = set()
    for pillar in Pillar:
        covered |= {s.id for s in statements_for_pillar(questionnaire, pillar)}
    covered |= {s.id for s in custom_only_statements(questionnaire)}
    assert covered == {s.id for s in questionnaire.statements}


@pytest.mark.parametrize(
    "dimension, expected",
    [
        (Dimension.FAIRNESS_BIAS, {"4e", "7b"}),
        (Dimension.PRIVACY, {"4f", "7c"}),
        (Dimension.PERFORMANCE_VALIDITY, {"4d"}),
        (Dimension.ENVIRONMENTAL, {"4g", "7d"}),
        (Dimension.TRANSPARENCY_ACCOUNTABILITY, {"4h", "7e"}),
        (Dimension.SECURITY_RESILIENCE, {"4i", "7f"}),
        (Dimension.EXPLAINABILITY, {"4j", "7g"}),
        (Dimension.THIRD_PARTY, {"4k", "7h"}),
        (Dimension.OTHER, {"4l", "7l"}),
    ],
)
def test_statements_for_dimension(questionnaire, dimension, expected):
    assert {s.id for s in statements_for_dimension(questionnaire, dimension)} == expected


def test_other_statements_match_no_named_dimension(questionnaire):
    named = set(Dimension) - {Dimension.OTHER}
    for statement in statements_for_dimension(questionnaire, Dimension.OTHER):
        assert not (statement.dimensions & named)


def test_empty_stream_is_a_parse_error():
    with pytest.raises(ParseError):
        load_questionnaire(b"")


def test_garbage_is_a_parse_error():
    with pytest.raises(ParseError):
        load_questionnaire(b"{{{not yaml")


def _canonical_doc(questionnaire):
    return yaml.safe_load(serialize_questionnaire(questionnaire))


def test_deleting_a_topic_is_rejected(questionnaire):
    doc = _canonical_doc(questionnaire)
    doc["topics"] = [t for t in doc["topics"] if t["id"] != 4]
    with pytest.raises(IntegrityError, match="expected 9 topics"):
        load_questionnaire(yaml.safe_dump(doc))


def test_deleting_a_statement_is_rejected(questionnaire):
    doc = _canonical_doc(questionnaire)
    doc["topics"][3]["statements"] = doc["topics"][3]["statements"][:-1]
    with pytest.raises(IntegrityError, match="topic 4"):
        load_questionnaire(yaml.safe_dump(doc))


def test_wrong_stage_is_rejected(questionnaire):
    doc = _canonical_doc(questionnaire)
    doc["topics"][0]["stage"] = "deployment"
    with pytest.raises(IntegrityError, match="topic 1"):
        load_questionnaire(yaml.safe_dump(doc))


def test_broken_letter_sequence_is_rejected(questionnaire):
    doc = _canonical_doc(questionnaire)
    doc["topics"][0]["statements"][1]["id"] = "1z"
    with pytest.raises(IntegrityError, match="consecutive"):
        load_questionnaire(yaml.safe_dump(doc))


def test_statement_without_refs_is_rejected(questionnaire):
    doc = _canonical_doc(questionnaire)
    doc["topics"][0]["statements"][0]["rmf_refs"] = []
    with pytest.raises(IntegrityError, match="rmf_refs"):
        load_questionnaire(yaml.safe_dump(doc))


def test_serialize_load_round_trip(questionnaire):
    again = load_questionnaire(serialize_questionnaire(questionnaire))
    assert again == questionnaire


def test_lookups_resolve_every_statement_id(questionnaire):
    for statement in questionnaire.statements:
        assert questionnaire.statement(statement.id) is statement
        assert questionnaire.has_target(statement.id)
    for topic in questionnaire.topics:
        assert questionnaire.has_target(str(topic.id))
