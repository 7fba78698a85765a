"""Core property schema for media items.

The registry is open (new properties can be registered at runtime), but every
store starts from this fixed set of twenty core properties covering titles,
provenance, timing, classification, licensing and consent.
"""

from __future__ import annotations

DATATYPES = frozenset(
    {
        "text",
        "monolingual-text",
        "quantity",
        "date",
        "item-ref",
        "external-id",
        "boolean",
    }
)

# label, datatype, unit, multi_valued
CORE_PROPERTIES: tuple[tuple[str, str, str | None, bool], ...] = (
    ("title", "monolingual-text", None, False),
    ("media-type", "text", None, False),
    ("platform", "text", None, False),
    ("external-id", "external-id", None, False),
    ("url", "text", None, False),
    ("creator", "text", None, False),
    ("publisher-institution", "text", None, False),
    ("language", "text", None, False),
    ("duration", "quantity", "seconds", False),
    ("publication-date", "date", None, False),
    ("topic", "text", None, True),
    ("keyword", "text", None, True),
    ("license", "text", None, False),
    ("sponsor", "text", None, False),
    ("moderator", "text", None, False),
    ("source-provided", "text", None, False),
    ("series", "text", None, False),
    ("series-position", "quantity", None, False),
    ("captions-available", "boolean", None, False),
    ("consent", "boolean", None, False),
)

MEDIA_TYPES = frozenset({"video", "podcast"})

# Properties whose values are constrained to a fixed vocabulary.
VALUE_ENUMS: dict[str, frozenset[str]] = {"media-type": MEDIA_TYPES}

# Inclusive [low, high] second ranges; durations are whole seconds, so the
# buckets tile the axis without gaps.
DURATION_BUCKETS: tuple[tuple[str, int | None, int | None], ...] = (
    ("<10 min", None, 599),
    ("10–60 min", 600, 3600),
    (">60 min", 3601, None),
)

FACET_PROPERTIES = (
    "language",
    "topic",
    "media-type",
    "publication-year",
    "duration-bucket",
    "publisher-institution",
)


def duration_bucket(seconds: float) -> str:
    """Bucket label for a duration in seconds."""
    if seconds < 600:
        return DURATION_BUCKETS[0][0]
    if seconds <= 3600:
        return DURATION_BUCKETS[1][0]
    return DURATION_BUCKETS[2][0]


def duration_bucket_bounds(label: str) -> tuple[int | None, int | None]:
    for name, low, high in DURATION_BUCKETS:
        if name == label:
            return low, high
    raise KeyError(label)
