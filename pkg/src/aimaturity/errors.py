"""Domain errors with stable machine codes.

Every error the engine can raise maps to exactly one machine code; the HTTP
API and the CLI surface these codes verbatim so scripts can branch on them.
"""

from __future__ import annotations


class MaturityError(Exception):
    """Base class for all engine errors."""

    code = "ERROR"

    def __init__(self, message: str, *, ids: tuple[str, ...] = ()):
        super().__init__(message)
        self.message = message
        self.ids = tuple(str(i) for i in ids)


class ParseError(MaturityError):
    """Input could not be parsed at all (malformed file or payload)."""

    code = "PARSE_ERROR"


class IntegrityError(MaturityError):
    """A questionnaire invariant is violated; message names it and the offending id."""

    code = "INTEGRITY_ERROR"


class DomainError(MaturityError):
    """Arguments outside an operation's domain (e.g. coverage counts)."""

    code = "DOMAIN_ERROR"


class ValidationError(MaturityError):
    """A response or request fails validation rules (evidence gate included)."""

    code = "VALIDATION_ERROR"


class InapplicableTarget(MaturityError):
    """Target is outside the applicable set for the effective lifecycle stage."""

    code = "INAPPLICABLE_TARGET"


class GranularityMismatch(MaturityError):
    """Target kind (topic vs statement) does not match the assessment's mode."""

    code = "GRANULARITY_MISMATCH"


class GranularityUnsupported(MaturityError):
    """Operation needs statement-level scores but the assessment is topic-level."""

    code = "GRANULARITY_UNSUPPORTED"


class ScopeUnsupported(MaturityError):
    """Operation does not apply to the assessment's scope mode."""

    code = "SCOPE_UNSUPPORTED"


class UnknownSystem(MaturityError):
    """Referenced system id does not exist in the assessment."""

    code = "UNKNOWN_SYSTEM"


class NoData(MaturityError):
    """Aggregation requested but no responses are recorded in scope."""

    code = "NO_DATA"


class MixedOrganizations(MaturityError):
    """Trajectory requested over assessments of different organizations."""

    code = "MIXED_ORGANIZATIONS"


class Unauthorized(MaturityError):
    """Bearer token required and missing or wrong."""

    code = "UNAUTHORIZED"


class RevisionConflict(MaturityError):
    """Optimistic concurrency check failed: expected revision is stale."""

    code = "REVISION_CONFLICT"


class NotFound(MaturityError):
    """Document or resource does not exist."""

    code = "NOT_FOUND"


class CorruptDocument(MaturityError):
    """Stored document failed its checksum verification."""

    code = "CORRUPT_DOCUMENT"
