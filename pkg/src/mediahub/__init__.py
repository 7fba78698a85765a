"""mediahub: a self-contained federated digital library for science videos
and podcasts — metadata graph, transcript store, federated search, bulk
ingestion, and a JSON HTTP API."""

__version__ = "0.1.0"

from .federator import Facet, Federator, MediaQuery, SearchResponse, SearchResult
from .graph import (
    FilterAtom,
    Item,
    MediaGraph,
    PropertyDef,
    RevisionRecord,
    Statement,
    contains,
    date_range,
    equals,
    quantity_range,
)
from .textstore import Document, Segment, TextHit, TextStore

__all__ = [
    "Document",
    "Facet",
    "Federator",
    "FilterAtom",
    "Item",
    "MediaGraph",
    "MediaQuery",
    "PropertyDef",
    "RevisionRecord",
    "SearchResponse",
    "SearchResult",
    "Segment",
    "Statement",
    "TextHit",
    "TextStore",
    "contains",
    "date_range",
    "equals",
    "quantity_range",
    "__version__",
]
