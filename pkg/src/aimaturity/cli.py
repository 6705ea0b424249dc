"""Command-line interface over the engine service.

Every subcommand is a thin adapter over the same service layer the HTTP API
uses. Exit code 0 on success; on failure the machine error code and message
go to stderr and the exit code is nonzero.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import yaml

from .config import load_config
from .errors import MaturityError
from .scoring import EvidenceKind
from .service import EngineService, validate_file
from .storage import canonical_json

_CONFIG_OPTIONS = [
    click.option("--config", "config_file", type=click.Path(exists=True, dir_okay=False), default=None, help="Config file (YAML)."),
    click.option("--store", "store_path", type=click.Path(file_okay=False), default=None, help="Assessment store directory."),
    click.option("--questionnaire", "questionnaire_path", type=click.Path(exists=True, dir_okay=False), default=None, help="Questionnaire file (defaults to the bundled instrument)."),
]


def _with_config_options(command):
    for option in reversed(_CONFIG_OPTIONS):
        command = option(command)
    return command


def _service(config_file, store_path, questionnaire_path) -> EngineService:
    config = load_config(
        config_file, store_path=store_path, questionnaire_path=questionnaire_path
    )
    return EngineService.from_config(config)


def _fail(error: MaturityError) -> None:
    click.echo(f"{error.code}: {error.message}", err=True)
    sys.exit(1)


def _echo_json(data) -> None:
    click.echo(json.dumps(data, indent=2, ensure_ascii=False))


@click.group()
def main() -> None:
    """Maturity assessment engine for AI risk-management practices."""


@main.command()
@_with_config_options
@click.option("--org-id", required=True)
@click.option("--org-name", default="")
@click.option("--scope", type=click.Choice(["holistic", "per-system", "per_system"]), required=True)
@click.option("--granularity", type=click.Choice(["topic", "statement"]), required=True)
@click.option("--system", "systems", multiple=True, required=True,
              help="System profile as ID:NAME:STAGE (stage: plan|build|deploy).")
@click.option("--as-of", default=None, help="Explicit as-of date (YYYY-MM-DD) for retrospective entry.")
@click.option("--id", "assessment_id", default=None, help="Explicit assessment id.")
def init(config_file, store_path, questionnaire_path, org_id, org_name, scope,
         granularity, systems, as_of, assessment_id):
    """Create a new assessment and print its id and applicable target count."""
    service = _service(config_file, store_path, questionnaire_path)
    profiles = []
    for raw in systems:
        parts = raw.split(":")
        if len(parts) != 3:
            raise click.UsageError(f"--system must be ID:NAME:STAGE, got {raw!r}")
        profiles.append({"system_id": parts[0], "name": parts[1], "stage": parts[2]})
    try:
        document = service.create(
            org_id=org_id,
            org_name=org_name or org_id,
            scope=scope,
            granularity=granularity,
            systems=profiles,
            assessment_id=assessment_id,
            as_of=as_of,
        )
        targets = service.targets(document.assessment.assessment_id)
    except MaturityError as error:
        _fail(error)
    count = (
        len(targets["targets"])
        if "targets" in targets
        else sum(len(v) for v in targets["per_system"].values())
    )
    click.echo(f"assessment: {document.assessment.assessment_id}")
    click.echo(f"revision: {document.revision}")
    click.echo(f"applicable targets: {count}")


@main.command()
@_with_config_options
@click.argument("assessment_id")
@click.option("--system", default=None)
def targets(config_file, store_path, questionnaire_path, assessment_id, system):
    """List applicable targets for an assessment (or one of its systems)."""
    service = _service(config_file, store_path, questionnaire_path)
    try:
        _echo_json(service.targets(assessment_id, system))
    except MaturityError as error:
        _fail(error)


def _parse_evidence(raw_items: tuple[str, ...]) -> list[dict]:
    items = []
    kinds = {k.value for k in EvidenceKind}
    for raw in raw_items:
        parts = raw.split(":", 2)
        if len(parts) < 2 or parts[0] not in kinds:
            raise click.UsageError(
                f"--evidence must be KIND:DESCRIPTION[:SOURCE;SOURCE], with KIND one of "
                f"{sorted(kinds)}; got {raw!r}"
            )
        item: dict = {"kind": parts[0], "description": parts[1]}
        if len(parts) == 3 and parts[2]:
            item["sources"] = [s.strip() for s in parts[2].split(";") if s.strip()]
        items.append(item)
    return items


@main.command()
@_with_config_options
@click.argument("assessment_id")
@click.option("--target", required=True, help="Topic id (e.g. 4) or statement id (e.g. 4e).")
@click.option("--system", default=None)
@click.option("--coverage", default=None, help="low|medium|high (or l/m/h).")
@click.option("--robustness", default=None)
@click.option("--input-diversity", default=None)
@click.option("--facet", "facets", multiple=True,
              help="Robustness facet observed (repeatable): regular, systematic, ...")
@click.option("--na", is_flag=True, help="Mark the target not applicable.")
@click.option("--evidence", "evidence_items", multiple=True,
              help="Evidence as KIND:DESCRIPTION[:SOURCE;SOURCE].")
@click.option("--note", default="")
@click.option("--expected-revision", type=int, default=None,
              help="Optimistic concurrency check (defaults to the stored revision).")
def respond(config_file, store_path, questionnaire_path, assessment_id, target, system,
            coverage, robustness, input_diversity, facets, na, evidence_items, note,
            expected_revision):
    """Record one response and print the derived score."""
    service = _service(config_file, store_path, questionnaire_path)
    payload: dict = {"target": target, "evidence": _parse_evidence(evidence_items), "note": note}
    if na:
        payload["na"] = True
    else:
        missing = [name for name, value in
                   (("--coverage", coverage), ("--robustness", robustness),
                    ("--input-diversity", input_diversity)) if not value]
        if missing:
            raise click.UsageError(f"missing {', '.join(missing)} (or use --na)")
        metrics: dict = {
            "coverage": coverage,
            "robustness": robustness,
            "input_diversity": input_diversity,
        }
        if facets:
            metrics["robustness_facets"] = {facet: True for facet in facets}
        payload["metrics"] = metrics
    try:
        if expected_revision is None:
            expected_revision = service.get(assessment_id).revision
        document, response, replayed = service.put_response(
            assessment_id, payload, system_id=system, expected_revision=expected_revision
        )
    except MaturityError as error:
        _fail(error)
    click.echo(f"score: {response.score}")
    click.echo(f"revision: {document.revision}")
    if replayed:
        click.echo("replayed: response was already recorded")


@main.command(name="import")
@_with_config_options
@click.argument("assessment_id")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
def import_(config_file, store_path, questionnaire_path, assessment_id, file):
    """Bulk-import responses (JSON/YAML array in the document's response format)."""
    service = _service(config_file, store_path, questionnaire_path)
    raw = Path(file).read_text(encoding="utf-8")
    items = yaml.safe_load(raw)
    if isinstance(items, dict) and "responses" in items:
        items = items["responses"]
    if not isinstance(items, list):
        raise click.UsageError("import file must hold a list of responses")
    try:
        expected = service.get(assessment_id).revision
        document = service.import_responses(assessment_id, items, expected_revision=expected)
    except MaturityError as error:
        _fail(error)
    click.echo(f"imported: {len(items)} responses")
    click.echo(f"revision: {document.revision}")


@main.command()
@_with_config_options
@click.argument("assessment_id")
def score(config_file, store_path, questionnaire_path, assessment_id):
    """Recompute and show per-target scores."""
    service = _service(config_file, store_path, questionnaire_path)
    try:
        rows = service.score_table(assessment_id)
    except MaturityError as error:
        _fail(error)
    for row in rows:
        where = f" @{row['system_id']}" if row["system_id"] else ""
        marker = "" if row["consistent"] else "  [STALE]"
        click.echo(f"{row['target']}{where}: {row['score']}{marker}")
    click.echo(f"targets scored: {len(rows)}")


@main.command()
@_with_config_options
@click.argument("assessment_id")
@click.option("--mode", type=click.Choice(["pillar", "dimension"]), default="pillar")
@click.option("--system", default=None)
def aggregate(config_file, store_path, questionnaire_path, assessment_id, mode, system):
    """Print aggregate scores by pillar or by dimension."""
    service = _service(config_file, store_path, questionnaire_path)
    try:
        _echo_json(service.aggregates(assessment_id, mode, system))
    except MaturityError as error:
        _fail(error)


@main.command()
@_with_config_options
@click.argument("assessment_id")
def diagnose(config_file, store_path, questionnaire_path, assessment_id):
    """Evaluate pattern diagnostics (ethics washing, ill-informed management)."""
    service = _service(config_file, store_path, questionnaire_path)
    try:
        _echo_json(service.diagnostics(assessment_id))
    except MaturityError as error:
        _fail(error)


@main.command()
@_with_config_options
@click.argument("assessment_id")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), required=True)
def report(config_file, store_path, questionnaire_path, assessment_id, out_dir):
    """Write report.md and chart-data.json to a directory."""
    service = _service(config_file, store_path, questionnaire_path)
    try:
        bundle = service.report(assessment_id)
    except MaturityError as error:
        _fail(error)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.md").write_text(bundle.markdown + "\n", encoding="utf-8")
    (out / "chart-data.json").write_text(canonical_json(bundle.chart_data), encoding="utf-8")
    click.echo(f"wrote {out / 'report.md'}")
    click.echo(f"wrote {out / 'chart-data.json'}")


@main.command()
@_with_config_options
@click.option("--org", "org_id", required=True)
def trajectory(config_file, store_path, questionnaire_path, org_id):
    """Print the organization's time-ordered aggregate trajectory."""
    service = _service(config_file, store_path, questionnaire_path)
    try:
        _echo_json({"org_id": org_id, "points": service.trajectory(org_id)})
    except MaturityError as error:
        _fail(error)


@main.command()
@_with_config_options
@click.argument("file", required=False, type=click.Path(exists=True, dir_okay=False))
def validate(config_file, store_path, questionnaire_path, file):
    """Validate a questionnaire or assessment file (default: bundled instrument)."""
    try:
        if file is None and questionnaire_path is None:
            service = _service(config_file, store_path, questionnaire_path)
            q = service.questionnaire
            click.echo(f"{len(q.topics)} topics, {len(q.statements)} statements (version {q.version})")
            return
        target = Path(file) if file is not None else Path(questionnaire_path)
        click.echo(validate_file(target))
    except MaturityError as error:
        _fail(error)


@main.command()
@_with_config_options
@click.option("--host", default=None)
@click.option("--port", type=int, default=None)
@click.option("--token", default=None, help="Require this bearer token on every request.")
@click.option("--ui-dir", default=None, type=click.Path(file_okay=False),
              help="Static UI bundle to serve at the root path.")
def serve(config_file, store_path, questionnaire_path, host, port, token, ui_dir):
    """Run the HTTP service."""
    from .api import serve as run_server

    config = load_config(
        config_file,
        store_path=store_path,
        questionnaire_path=questionnaire_path,
        host=host,
        port=port,
        api_token=token,
        ui_dir=ui_dir,
    )
    run_server(config)


if __name__ == "__main__":
    main()
