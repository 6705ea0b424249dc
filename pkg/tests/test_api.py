from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from aimaturity.api import create_app
from aimaturity.config import load_config


@pytest.fixture
def client(tmp_path):
    config = load_config(store_path=tmp_path / "store", env={})
    return TestClient(create_app(config))


def _create(client, *, scope="holistic", granularity="topic", systems=None, org="acme"):
    payload = {
        "org_id": org,
        "org_name": org.upper(),
        "scope": scope,
        "granularity": granularity,
        "systems": systems or [{"system_id": "s1", "name": "Bot", "stage": "deploy"}],
    }
    response = client.post("/api/assessments", json=payload)
    assert response.status_code == 201, response.text
    return response.json()


def _supports(description="Documented process reviewed"):
    return [{"kind": "supports_activity", "description": description}]


def _put(client, assessment_id, target, revision, *, metrics=None, na=False,
         evidence=None, system=None, note=""):
    body = {"expected_revision": revision, "note": note, "evidence": evidence or []}
    if na:
        body["na"] = True
    if metrics is not None:
        body["metrics"] = metrics
    params = {"system": system} if system else {}
    return client.put(
        f"/api/assessments/{assessment_id}/responses/{target}", json=body, params=params
    )


HML = {"coverage": "high", "robustness": "medium", "input_diversity": "low"}


def test_questionnaire_endpoint_full(client):
    data = client.get("/api/questionnaire").json()
    assert data["topic_count"] == 9
    assert data["statement_count"] == 59


@pytest.mark.parametrize(
    "stage, topics, statements",
    [("plan", 3, 14), ("build", 7, 49), ("deploy", 9, 59)],
)
def test_questionnaire_stage_filter(client, stage, topics, statements):
    data = client.get("/api/questionnaire", params={"stage": stage}).json()
    assert (data["topic_count"], data["statement_count"]) == (topics, statements)


def test_questionnaire_topic_granularity_omits_statements(client):
    data = client.get("/api/questionnaire", params={"granularity": "topic"}).json()
    assert all("statements" not in t for t in data["topics"])
    assert data["topics"][0]["statement_count"] == 7


def test_create_and_get_assessment(client):
    created = _create(client)
    assessment_id = created["assessment"]["assessment_id"]
    fetched = client.get(f"/api/assessments/{assessment_id}")
    assert fetched.status_code == 200
    assert fetched.json()["revision"] == 1
    assert fetched.json()["assessment"]["organization"]["org_id"] == "acme"


def test_get_unknown_assessment_is_404(client):
    response = client.get("/api/assessments/ghost")
    assert response.status_code == 404
    assert response.json()["code"] == "NOT_FOUND"


def test_put_response_and_revision_flow(client):
    created = _create(client)
    assessment_id = created["assessment"]["assessment_id"]
    response = _put(client, assessment_id, "4", 1, metrics=HML, evidence=_supports())
    assert response.status_code == 200
    assert response.json()["response"]["score"] == 3
    assert response.json()["revision"] == 2


def test_put_with_stale_revision_conflicts(client):
    created = _create(client)
    assessment_id = created["assessment"]["assessment_id"]
    assert _put(client, assessment_id, "4", 1, metrics=HML, evidence=_supports()).status_code == 200
    stale = _put(
        client, assessment_id, "5", 1,
        metrics={"coverage": "high", "robustness": "high", "input_diversity": "high"},
        evidence=_supports(),
    )
    assert stale.status_code == 409
    assert stale.json()["code"] == "REVISION_CONFLICT"


def test_put_replay_with_identical_body_is_safe(client):
    created = _create(client)
    assessment_id = created["assessment"]["assessment_id"]
    first = _put(client, assessment_id, "4", 1, metrics=HML, evidence=_supports())
    replay = _put(client, assessment_id, "4", 1, metrics=HML, evidence=_supports())
    assert first.status_code == replay.status_code == 200
    assert replay.json()["replayed"] is True
    assert replay.json()["revision"] == first.json()["revision"] == 2


def test_evidence_gate_rejections(client):
    created = _create(client)
    assessment_id = created["assessment"]["assessment_id"]
    no_evidence = _put(client, assessment_id, "4", 1, metrics=HML)
    assert no_evidence.status_code == 400
    assert no_evidence.json()["code"] == "VALIDATION_ERROR"
    na_wrong = _put(client, assessment_id, "4", 1, na=True, evidence=_supports())
    assert na_wrong.status_code == 400
    assert na_wrong.json()["code"] == "VALIDATION_ERROR"
    empty_description = _put(
        client, assessment_id, "4", 1, metrics=HML,
        evidence=[{"kind": "supports_activity", "description": "  "}],
    )
    assert empty_description.status_code == 400
    # nothing was stored along the way
    assert client.get(f"/api/assessments/{assessment_id}").json()["revision"] == 1


def test_inapplicable_target_code(client):
    created = _create(
        client, systems=[{"system_id": "s1", "name": "Bot", "stage": "plan"}]
    )
    assessment_id = created["assessment"]["assessment_id"]
    response = _put(client, assessment_id, "9", 1, metrics=HML, evidence=_supports())
    assert response.status_code == 400
    assert response.json()["code"] == "INAPPLICABLE_TARGET"
    assert response.json()["ids"] == ["9"]


def test_granularity_mismatch_code(client):
    created = _create(client, granularity="statement")
    assessment_id = created["assessment"]["assessment_id"]
    response = _put(client, assessment_id, "4", 1, metrics=HML, evidence=_supports())
    assert response.status_code == 400
    assert response.json()["code"] == "GRANULARITY_MISMATCH"


def test_dimension_aggregates_on_topic_level_are_rejected(client):
    created = _create(client)
    assessment_id = created["assessment"]["assessment_id"]
    _put(client, assessment_id, "4", 1, metrics=HML, evidence=_supports())
    response = client.get(
        f"/api/assessments/{assessment_id}/aggregates", params={"mode": "dimension"}
    )
    assert response.status_code == 400
    assert response.json()["code"] == "GRANULARITY_UNSUPPORTED"


def test_pillar_aggregates_payload(client):
    created = _create(client, granularity="statement")
    assessment_id = created["assessment"]["assessment_id"]
    _put(client, assessment_id, "4e", 1, metrics=HML, evidence=_supports())
    _put(
        client, assessment_id, "4f", 2,
        metrics={"coverage": "high", "robustness": "high", "input_diversity": "high"},
        evidence=_supports(),
    )
    data = client.get(f"/api/assessments/{assessment_id}/aggregates").json()
    measure = [a for a in data["axes"] if a["pillar"] == "MEASURE"][0]
    assert measure["average"] == "4.00"
    assert measure["contributors"] == 2
    map_axis = [a for a in data["axes"] if a["pillar"] == "MAP"][0]
    assert map_axis["average"] is None


def test_per_system_aggregates_with_system_param(client):
    created = _create(
        client,
        scope="per-system",
        granularity="statement",
        systems=[
            {"system_id": "s1", "name": "A", "stage": "build"},
            {"system_id": "s2", "name": "B", "stage": "build"},
        ],
    )
    assessment_id = created["assessment"]["assessment_id"]
    _put(client, assessment_id, "4e", 1, metrics=HML, evidence=_supports(), system="s1")
    data = client.get(
        f"/api/assessments/{assessment_id}/aggregates", params={"system": "s1"}
    ).json()
    measure = [a for a in data["axes"] if a["pillar"] == "MEASURE"][0]
    assert measure["average"] == "3.00"
    org_level = client.get(f"/api/assessments/{assessment_id}/aggregates").json()
    assert "per_system" in org_level
    unknown = client.get(
        f"/api/assessments/{assessment_id}/aggregates", params={"system": "ghost"}
    )
    assert unknown.status_code == 404
    assert unknown.json()["code"] == "UNKNOWN_SYSTEM"


def test_diagnostics_endpoint(client):
    # GOVERN-only statements high, single-pillar MAP/MEASURE/MANAGE statements low
    created = _create(
        client, granularity="statement",
        systems=[{"system_id": "s1", "name": "Bot", "stage": "build"}],
    )
    assessment_id = created["assessment"]["assessment_id"]
    high = {"coverage": "high", "robustness": "high", "input_diversity": "high"}
    low = {"coverage": "low", "robustness": "low", "input_diversity": "low"}
    revision = 1
    for target, combo in [("3a", high), ("3b", high), ("1a", low), ("4a", low), ("6a", low)]:
        response = _put(client, assessment_id, target, revision, metrics=combo,
                        evidence=_supports())
        assert response.status_code == 200, response.text
        revision = response.json()["revision"]
    data = client.get(f"/api/assessments/{assessment_id}/diagnostics").json()
    assert [f["kind"] for f in data["flags"]] == ["ethics_washing_pattern"]
    assert "GOVERN 5.00" in data["flags"][0]["rationale"]


def test_report_endpoint(client):
    created = _create(client)
    assessment_id = created["assessment"]["assessment_id"]
    _put(client, assessment_id, "4", 1, metrics=HML, evidence=_supports())
    data = client.get(f"/api/assessments/{assessment_id}/report").json()
    assert "Score: [3]" in data["markdown"]
    assert [a["pillar"] for a in data["chart_data"]["pillar_axes"]] == [
        "MAP", "MEASURE", "MANAGE", "GOVERN",
    ]


def test_trajectory_endpoint(client):
    for ident, combo in [("t1", "low"), ("t2", "high")]:
        created = _create(client)
        assessment_id = created["assessment"]["assessment_id"]
        _put(
            client, assessment_id, "3", 1,
            metrics={"coverage": combo, "robustness": combo, "input_diversity": combo},
            evidence=_supports(),
        )
    data = client.get("/api/organizations/acme/trajectory").json()
    assert len(data["points"]) == 2
    missing = client.get("/api/organizations/nobody/trajectory")
    assert missing.status_code == 404


def test_list_assessments_by_org(client):
    _create(client, org="acme")
    _create(client, org="zen")
    both = client.get("/api/assessments").json()["assessments"]
    assert len(both) == 2
    acme = client.get("/api/assessments", params={"org": "acme"}).json()["assessments"]
    assert len(acme) == 1 and acme[0]["org_id"] == "acme"


def test_bearer_token_gate(tmp_path):
    config = load_config(store_path=tmp_path / "store", env={}, api_token="sesame")
    client = TestClient(create_app(config))
    denied = client.get("/api/questionnaire")
    assert denied.status_code == 401
    assert denied.json()["code"] == "UNAUTHORIZED"
    allowed = client.get(
        "/api/questionnaire", headers={"Authorization": "Bearer sesame"}
    )
    assert allowed.status_code == 200


def test_validation_errors_carry_machine_codes(client):
    bad_scope = client.post(
        "/api/assessments",
        json={"org_id": "x", "scope": "sideways", "granularity": "topic",
              "systems": [{"system_id": "s", "stage": "plan"}]},
    )
    assert bad_scope.status_code == 400
    assert bad_scope.json()["code"] == "VALIDATION_ERROR"
    no_systems = client.post(
        "/api/assessments",
        json={"org_id": "x", "scope": "holistic", "granularity": "topic", "systems": []},
    )
    assert no_systems.status_code == 400
