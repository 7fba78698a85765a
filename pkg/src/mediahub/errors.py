"""Exception hierarchy shared by all mediahub stores and services."""


class MediaHubError(Exception):
    """Base class for all mediahub errors."""

    code = "error"


class SchemaViolationError(MediaHubError):
    """A statement or draft violates the property schema."""

    code = "schema-violation"


class EmptyLabelsError(SchemaViolationError):
    """An item draft carries no labels."""

    code = "empty-labels"


class UnknownItemError(MediaHubError):
    """Referenced item id does not exist."""

    code = "unknown-item"


class InvalidFilterError(MediaHubError):
    """A filter set references unknown properties or has bad bounds."""

    code = "invalid-filter"


class UnknownDocumentError(MediaHubError):
    """Referenced document id does not exist."""

    code = "unknown-doc"


class UnknownMediaError(MediaHubError):
    """Document refers to a media item that is not in the graph."""

    code = "unknown-media"


class ConsentMissingError(MediaHubError):
    """Transcript submitted without copyright-holder consent."""

    code = "consent-missing"


class EmptyDocumentError(MediaHubError):
    """Document has no non-empty text segments."""

    code = "empty-document"


class EmptyQueryError(MediaHubError):
    """Query has neither free text nor filters nor a browse-all flag."""

    code = "empty-query"


class SnapshotIOError(MediaHubError):
    """Snapshot file could not be read or written."""

    code = "io-failure"


class CorruptSnapshotError(MediaHubError):
    """Snapshot file is malformed or fails its checksum."""

    code = "corrupt-snapshot"


class UnknownFormatError(MediaHubError):
    """Dataset format is not one of the supported ones."""

    code = "unknown-format"


class MissingTitleError(MediaHubError):
    """Mapped record produced no title value."""

    code = "missing-title"


class StoresUnavailableError(MediaHubError):
    """Both backing stores failed while answering a federated query."""

    code = "stores-unavailable"
