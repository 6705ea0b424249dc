"""File-backed assessment store: canonical JSON, checksums, revision history.

Layout under the store root: one directory per organization, one document
file per assessment (`<id>.json`) holding the latest envelope, plus an
append-only revision log (`<id>.revisions.jsonl`) with every prior envelope.
Writers serialize per assessment through a lock file and an optimistic
revision check; files are replaced atomically (write-temp-then-rename), so
readers always observe a complete document.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

from filelock import FileLock

from .errors import CorruptDocument, NotFound, RevisionConflict, ValidationError
from .session import Assessment, utc_now

DOCUMENT_FORMAT_VERSION = "1"


def canonical_json(data) -> str:
    """Canonical serialization: sorted keys, 2-space indent, trailing newline."""
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def body_checksum(body: dict) -> str:
    return hashlib.sha256(canonical_json(body).encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class RevisionEntry:
    revision: int
    checksum: str
    saved_at: str

    def to_dict(self) -> dict:
        return {"revision": self.revision, "checksum": self.checksum, "saved_at": self.saved_at}

    @classmethod
    def from_dict(cls, data: dict) -> "RevisionEntry":
        return cls(
            revision=int(data["revision"]),
            checksum=str(data["checksum"]),
            saved_at=str(data["saved_at"]),
        )


@dataclass(frozen=True)
class AssessmentDocument:
    """An assessment body wrapped in its storage envelope."""

    assessment: Assessment
    format_version: str = DOCUMENT_FORMAT_VERSION
    checksum: str = ""
    saved_at: str = ""
    history: tuple[RevisionEntry, ...] = field(default_factory=tuple)

    @property
    def revision(self) -> int:
        return self.assessment.revision

    def to_dict(self) -> dict:
        return {
            "format_version": self.format_version,
            "checksum": self.checksum,
            "saved_at": self.saved_at,
            "history": [entry.to_dict() for entry in self.history],
            "assessment": self.assessment.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AssessmentDocument":
        return cls(
            assessment=Assessment.from_dict(data["assessment"]),
            format_version=str(data.get("format_version", DOCUMENT_FORMAT_VERSION)),
            checksum=str(data.get("checksum", "")),
            saved_at=str(data.get("saved_at", "")),
            history=tuple(RevisionEntry.from_dict(e) for e in data.get("history", [])),
        )


@dataclass(frozen=True)
class AssessmentSummary:
    assessment_id: str
    org_id: str
    org_name: str
    scope: str
    granularity: str
    revision: int
    created_at: str
    updated_at: str
    as_of: str | None
    response_count: int

    def to_dict(self) -> dict:
        return self.__dict__.copy()


_SAFE_SEGMENT = re.compile(r"[^A-Za-z0-9._-]+")


def _segment(raw: str) -> str:
    """Filesystem-safe path segment for org/assessment ids."""
    cleaned = _SAFE_SEGMENT.sub("_", raw).strip("._")
    if not cleaned:
        raise ValidationError(f"identifier {raw!r} has no filesystem-safe characters")
    return cleaned


class AssessmentStore:
    """Durable storage with per-assessment optimistic concurrency."""

    def __init__(self, root: Path | str):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    # -- path helpers -------------------------------------------------------

    def _org_dir(self, org_id: str) -> Path:
        return self.root / _segment(org_id)

    def _doc_path(self, org_id: str, assessment_id: str) -> Path:
        return self._org_dir(org_id) / f"{_segment(assessment_id)}.json"

    def _log_path(self, org_id: str, assessment_id: str) -> Path:
        return self._org_dir(org_id) / f"{_segment(assessment_id)}.revisions.jsonl"

    def _lock(self, org_id: str, assessment_id: str) -> FileLock:
        return FileLock(str(self._doc_path(org_id, assessment_id)) + ".lock")

    def _find_doc_path(self, assessment_id: str) -> Path:
        name = f"{_segment(assessment_id)}.json"
        matches = sorted(self.root.glob(f"*/{name}"))
        if not matches:
            raise NotFound(f"assessment {assessment_id!r} not found", ids=(assessment_id,))
        return matches[0]

    # -- operations ---------------------------------------------------------

    def save(self, assessment: Assessment, *, expected_revision: int) -> AssessmentDocument:
        """Persist atomically; exactly one concurrent writer per revision wins.

        ``expected_revision`` is the revision the caller last observed (0 when
        creating). The assessment's own revision must already be bumped past it.
        """
        org_id = assessment.organization.org_id
        if assessment.revision <= expected_revision:
            raise ValidationError(
                f"assessment revision {assessment.revision} must exceed the expected "
                f"revision {expected_revision}"
            )
        self._org_dir(org_id).mkdir(parents=True, exist_ok=True)
        with self._lock(org_id, assessment.assessment_id):
            doc_path = self._doc_path(org_id, assessment.assessment_id)
            current: AssessmentDocument | None = None
            if doc_path.exists():
                current = self._read_document(doc_path)
            current_revision = current.revision if current is not None else 0
            if current_revision != expected_revision:
                raise RevisionConflict(
                    f"expected revision {expected_revision}, stored document is at "
                    f"{current_revision}",
                    ids=(assessment.assessment_id,),
                )
            body = assessment.to_dict()
            history = tuple(current.history) if current is not None else ()
            if current is not None:
                history = history + (
                    RevisionEntry(
                        revision=current.revision,
                        checksum=current.checksum,
                        saved_at=current.saved_at,
                    ),
                )
            document = AssessmentDocument(
                assessment=assessment,
                format_version=DOCUMENT_FORMAT_VERSION,
                checksum=body_checksum(body),
                saved_at=utc_now().isoformat(),
                history=history,
            )
            self._write_atomic(doc_path, canonical_json(document.to_dict()))
            with open(self._log_path(org_id, assessment.assessment_id), "a", encoding="utf-8") as log:
                log.write(json.dumps(document.to_dict(), sort_keys=True, ensure_ascii=False) + "\n")
            return document

    def load(self, assessment_id: str, *, revision: int | None = None) -> AssessmentDocument:
        """Latest revision by default; a specific one replays the revision log."""
        doc_path = self._find_doc_path(assessment_id)
        document = self._read_document(doc_path)
        if revision is None or revision == document.revision:
            return document
        log_path = doc_path.with_name(doc_path.name.replace(".json", ".revisions.jsonl"))
        if log_path.exists():
            with open(log_path, encoding="utf-8") as log:
                for line in log:
                    data = json.loads(line)
                    if int(data["assessment"]["revision"]) == revision:
                        return self._verify(AssessmentDocument.from_dict(data))
        raise NotFound(
            f"revision {revision} of assessment {assessment_id!r} not found",
            ids=(assessment_id,),
        )

    def list(self, org_id: str | None = None) -> list[AssessmentSummary]:
        """Summaries of stored assessments, optionally restricted to one org."""
        if org_id is not None:
            org_dirs = [self._org_dir(org_id)]
        else:
            org_dirs = sorted(p for p in self.root.iterdir() if p.is_dir())
        summaries: list[AssessmentSummary] = []
        for org_dir in org_dirs:
            if not org_dir.exists():
                continue
            for doc_path in sorted(org_dir.glob("*.json")):
                document = self._read_document(doc_path)
                a = document.assessment
                if org_id is not None and a.organization.org_id != org_id:
                    continue
                summaries.append(
                    AssessmentSummary(
                        assessment_id=a.assessment_id,
                        org_id=a.organization.org_id,
                        org_name=a.organization.name,
                        scope=a.scope.value,
                        granularity=a.granularity.value,
                        revision=a.revision,
                        created_at=a.created_at.isoformat(),
                        updated_at=a.updated_at.isoformat(),
                        as_of=a.as_of.isoformat() if a.as_of else None,
                        response_count=len(a.responses),
                    )
                )
        return summaries

    def organizations(self) -> list[str]:
        orgs = {s.org_id for s in self.list()}
        return sorted(orgs)

    # -- internals ----------------------------------------------------------

    def _read_document(self, doc_path: Path) -> AssessmentDocument:
        try:
            data = json.loads(doc_path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise CorruptDocument(f"unreadable document {doc_path.name}: {exc}") from None
        return self._verify(AssessmentDocument.from_dict(data))

    def _verify(self, document: AssessmentDocument) -> AssessmentDocument:
        actual = body_checksum(document.assessment.to_dict())
        if actual != document.checksum:
            raise CorruptDocument(
                f"checksum mismatch for assessment {document.assessment.assessment_id}: "
                f"stored {document.checksum[:12]}…, computed {actual[:12]}…",
                ids=(document.assessment.assessment_id,),
            )
        _check_history(document)
        return document

    @staticmethod
    def _write_atomic(path: Path, content: str) -> None:
        fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as tmp:
                tmp.write(content)
                tmp.flush()
                os.fsync(tmp.fileno())
            os.replace(tmp_name, path)
        except BaseException:
            if os.path.exists(tmp_name):
                os.unlink(tmp_name)
            raise


def _check_history(document: AssessmentDocument) -> None:
    revisions = [entry.revision for entry in document.history] + [document.revision]
    if any(b <= a for a, b in zip(revisions, revisions[1:])):
        raise CorruptDocument(
            f"revision history of {document.assessment.assessment_id} is not strictly increasing",
            ids=(document.assessment.assessment_id,),
        )
